"""SU(1,1) and Jacobi-group elements, their composition and the holomorphic
action on C x D1, together with the multiplier of the coherent-state action.

Conventions
-----------
A group element ``h = (g, alpha, t)`` stands for the operator
``exp(i t) S(g) D(alpha)``. With this reading ``compose`` is the group law and
``jacobi_act`` is a *left* action::

    jacobi_act(compose(h1, h2), x) == jacobi_act(h1, jacobi_act(h2, x))

and the multiplier obeys the cocycle identity::

    multiplier(compose(h1, h2), x) == multiplier(h1, h2 . x) * multiplier(h2, x)

(exact for integer 2k; for other weights the principal branch of the power
may differ by a phase).
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .config import BOUNDARY_EPS, LAMBDA_SERIES_CUTOFF, SERIES_CUTOFF, SU11_TOL
from .errors import BranchCutWarning, DomainError, WeightError

__all__ = [
    "Weight", "weight_value", "check_disk", "JacobiCSPoint", "SU11Matrix",
    "JacobiElement", "IDENTITY", "compose", "inverse", "mobius_act",
    "jacobi_act", "cocycle", "cocycle_alt", "multiplier", "branch_crossed",
    "su11_exp", "cs_si", "w_of_z", "z_of_w", "eta_of_w", "eta_of_z",
    "su11_product_with_phase",
]


# --------------------------------------------------------------------------
# weight
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Weight:
    """Lowest K0 eigenvalue k of the positive discrete series.

    ``strict`` mode demands 2k in {2, 3, ...}; ``relaxed`` accepts any real
    k > 3/4 (the range where the measure normalisation is finite).
    The boson/SU(1,1) split uses k' = k - 1/4, which is never a half-integer
    multiple in strict mode; ``flags`` records this.
    """

    value: Fraction | float
    mode: str = "strict"

    def __post_init__(self):
        if isinstance(self.value, int):
            object.__setattr__(self, "value", Fraction(self.value))
        if self.mode not in ("strict", "relaxed"):
            raise ValueError(f"unknown weight mode {self.mode!r}")
        k = self.value
        if not k > 0:
            raise WeightError(f"weight must be positive, got {k}")
        if self.mode == "strict":
            two_k = 2 * Fraction(k) if isinstance(k, Fraction) else 2 * k
            if two_k != int(two_k) or two_k < 2:
                raise WeightError(f"strict mode needs 2k in {{2,3,...}}, got 2k={two_k}")
        elif not k > Fraction(3, 4):
            raise WeightError(f"relaxed mode needs k > 3/4, got {k}")

    def __float__(self):
        return float(self.value)

    @property
    def exact(self) -> Fraction | None:
        return self.value if isinstance(self.value, Fraction) else None

    @property
    def k_prime(self) -> Fraction | float:
        return self.value - Fraction(1, 4) if self.exact is not None else self.value - 0.25

    @property
    def two_k_integer(self) -> bool:
        tk = 2 * self.value
        return tk == int(tk)

    @property
    def flags(self) -> list[str]:
        out = []
        if not self.two_k_integer:
            out.append("non-integer 2k: multiplier uses principal branch")
        kp = 2 * self.k_prime
        if kp != int(kp):
            out.append("boson/SU(1,1) split weight k' = k - 1/4 has non-integer 2k'")
        return out

    def __str__(self):
        return str(self.value)


def weight_value(k) -> float:
    return float(k)


# --------------------------------------------------------------------------
# points
# --------------------------------------------------------------------------

def check_disk(w, eps: float = BOUNDARY_EPS) -> complex:
    """Return ``w`` as complex, raising DomainError unless |w| < 1 - eps."""
    w = complex(w)
    if not abs(w) < 1.0 - eps:
        raise DomainError(f"|w| = {abs(w):.17g} is not inside the unit disk (eps={eps:g})")
    return w


@dataclass(frozen=True)
class JacobiCSPoint:
    """A point (z, w) of C x D1."""

    z: complex
    w: complex

    def __post_init__(self):
        object.__setattr__(self, "z", complex(self.z))
        object.__setattr__(self, "w", check_disk(self.w))

    def conj(self) -> "JacobiCSPoint":
        return JacobiCSPoint(self.z.conjugate(), self.w.conjugate())

    def __iter__(self):
        yield self.z
        yield self.w


def _point(x) -> JacobiCSPoint:
    return x if isinstance(x, JacobiCSPoint) else JacobiCSPoint(*x)


# --------------------------------------------------------------------------
# SU(1,1)
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SU11Matrix:
    """The matrix ``[[a, b], [conj(b), conj(a)]]`` with |a|^2 - |b|^2 = 1."""

    a: complex
    b: complex = 0j
    check: bool = True

    def __post_init__(self):
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "b", complex(self.b))
        if self.check:
            det = abs(self.a) ** 2 - abs(self.b) ** 2
            if abs(det - 1.0) > SU11_TOL * max(1.0, abs(self.a) ** 2):
                raise DomainError(f"|a|^2-|b|^2 = {det!r}, not 1")

    @classmethod
    def identity(cls) -> "SU11Matrix":
        return cls(1.0, 0.0)

    @classmethod
    def from_array(cls, m) -> "SU11Matrix":
        m = np.asarray(m)
        return cls(m[0, 0], m[0, 1])

    def as_array(self) -> np.ndarray:
        a, b = self.a, self.b
        return np.array([[a, b], [b.conjugate(), a.conjugate()]])

    @property
    def det(self) -> float:
        return abs(self.a) ** 2 - abs(self.b) ** 2

    def renormalized(self) -> "SU11Matrix":
        s = math.sqrt(abs(self.det))
        return SU11Matrix(self.a / s, self.b / s)

    def inverse(self) -> "SU11Matrix":
        return SU11Matrix(self.a.conjugate(), -self.b, check=False)

    def __matmul__(self, other: "SU11Matrix") -> "SU11Matrix":
        a1, b1, a2, b2 = self.a, self.b, other.a, other.b
        return SU11Matrix(a1 * a2 + b1 * b2.conjugate(), a1 * b2 + b1 * a2.conjugate(), check=False)

    def act_alpha(self, alpha) -> complex:
        """Natural linear action on C: ``a alpha + b conj(alpha)``."""
        alpha = complex(alpha)
        return self.a * alpha + self.b * alpha.conjugate()

    def isclose(self, other: "SU11Matrix", tol: float = 1e-12) -> bool:
        return abs(self.a - other.a) <= tol * max(1, abs(self.a)) and abs(self.b - other.b) <= tol * max(1, abs(self.b))


@dataclass(frozen=True)
class JacobiElement:
    """Group element (g, alpha, t) of the Jacobi group; ``t`` is the central phase."""

    g: SU11Matrix
    alpha: complex = 0j
    t: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "t", float(self.t))

    def isclose(self, other: "JacobiElement", tol: float = 1e-12) -> bool:
        return (self.g.isclose(other.g, tol)
                and abs(self.alpha - other.alpha) <= tol * max(1, abs(self.alpha))
                and abs(self.t - other.t) <= tol * max(1, abs(self.t)))


IDENTITY = JacobiElement(SU11Matrix.identity(), 0j, 0.0)


def compose(h1: JacobiElement, h2: JacobiElement) -> JacobiElement:
    """Group law ``(g1 g2, g2^-1 . alpha1 + alpha2, t1 + t2 + Im(g2^-1 . alpha1 conj(alpha2)))``."""
    moved = h2.g.inverse().act_alpha(h1.alpha)
    return JacobiElement(
        h1.g @ h2.g,
        moved + h2.alpha,
        h1.t + h2.t + (moved * h2.alpha.conjugate()).imag,
    )


def inverse(h: JacobiElement) -> JacobiElement:
    # alpha' = -g.alpha makes the displacement parts cancel; the central term
    # Im(-|alpha|^2) vanishes, so t' = -t.
    return JacobiElement(h.g.inverse(), -h.g.act_alpha(h.alpha), -h.t)


# --------------------------------------------------------------------------
# actions
# --------------------------------------------------------------------------

def mobius_act(g: SU11Matrix, w, eps: float = BOUNDARY_EPS) -> complex:
    """Linear-fractional action ``(a w + b) / (conj(b) w + conj(a))`` on the disk."""
    w = check_disk(w, eps)
    w1 = (g.a * w + g.b) / (g.b.conjugate() * w + g.a.conjugate())
    return check_disk(w1, eps)


def jacobi_act(h: JacobiElement, x, eps: float = BOUNDARY_EPS) -> JacobiCSPoint:
    """Holomorphic action of the Jacobi group on C x D1 (the t component does not enter)."""
    x = _point(x)
    g, al = h.g, h.alpha
    j = g.b.conjugate() * x.w + g.a.conjugate()
    z1 = (al - al.conjugate() * x.w + x.z) / j
    return JacobiCSPoint(z1, mobius_act(g, x.w, eps))


def _automorphy(g: SU11Matrix, w: complex) -> complex:
    return g.a.conjugate() + g.b.conjugate() * w


def branch_crossed(g: SU11Matrix, w) -> bool:
    """True when the path s -> conj(a) + s conj(b) w, s in [0, 1], meets the
    negative real axis (so the principal power is discontinuous along it)."""
    p0 = g.a.conjugate()
    d = g.b.conjugate() * complex(w)
    if p0.imag == 0 and p0.real < 0:
        return True
    if d.imag == 0:
        return False
    s = -p0.imag / d.imag
    return 0 < s <= 1 and (p0.real + s * d.real) < 0


def _power(g: SU11Matrix, w: complex, k) -> complex:
    j = _automorphy(g, w)
    kf = float(k)
    two_k = 2 * kf
    if abs(two_k - round(two_k)) < 1e-15:
        return j ** (-int(round(two_k)))
    if branch_crossed(g, w):
        warnings.warn(f"principal branch of (conj(a)+conj(b)w)^(-2k) crossed for 2k={two_k}",
                      BranchCutWarning, stacklevel=3)
    return cmath.exp(-two_k * cmath.log(j))


def cocycle(h: JacobiElement, x, k) -> complex:
    """Multiplier lambda with ``S(g) D(alpha) e_{z,w} = lambda e_{h.x}``.

    Evaluated through the auxiliary quantities alpha0 (the normalised label of
    e_{z,w}) and alpha2 (its image under g)::

        lambda = (conj(a)+conj(b)w)^(-2k) exp(z conj(alpha0)/2 - z1 conj(alpha2)/2)
                 exp(i Im(alpha conj(alpha0)))
    """
    x = _point(x)
    g, al = h.g, h.alpha
    z, w = x.z, x.w
    alpha0 = (z + z.conjugate() * w) / (1 - abs(w) ** 2)
    alpha2 = g.act_alpha(al + alpha0)
    z1 = jacobi_act(h, x).z
    expo = z * alpha0.conjugate() / 2 - z1 * alpha2.conjugate() / 2 + 1j * (al * alpha0.conjugate()).imag
    return _power(g, w, k) * cmath.exp(expo)


def cocycle_alt(h: JacobiElement, x, k, form: str = "expanded") -> complex:
    """Same multiplier written as ``(conj(a)+conj(b)w)^(-2k) exp(-lambda1)``.

    ``form='expanded'`` uses ``(conj(b) z^2 + (conj(a) conj(alpha) + conj(b) alpha)(2z+z0)) / (2 j)``;
    ``form='square'`` uses ``conj(b)(z+z0)^2/(2j) + conj(alpha)(z + z0/2)``, z0 = alpha - conj(alpha) w.
    """
    x = _point(x)
    g, al = h.g, h.alpha
    z, w = x.z, x.w
    ac, bc, alc = g.a.conjugate(), g.b.conjugate(), al.conjugate()
    j = ac + bc * w
    z0 = al - alc * w
    if form == "expanded":
        lam1 = (bc * z * z + (ac * alc + bc * al) * (2 * z + z0)) / (2 * j)
    elif form == "square":
        lam1 = bc * (z + z0) ** 2 / (2 * j) + alc * (z + z0 / 2)
    else:
        raise ValueError(form)
    return _power(g, w, k) * cmath.exp(-lam1)


def multiplier(h: JacobiElement, x, k) -> complex:
    """Cocycle including the central phase: the scalar in ``pi(h) e_x = m e_{h.x}``."""
    return cmath.exp(1j * h.t) * cocycle(h, x, k)


# --------------------------------------------------------------------------
# exponential map and rapidities
# --------------------------------------------------------------------------

def cs_si(lam: float) -> tuple[float, float]:
    """Return ``(cs(x), si(x)/x)`` for lam = |z|^2 - theta^2 (hyperbolic for
    lam > 0, circular for lam < 0, power series near 0)."""
    if abs(lam) < LAMBDA_SERIES_CUTOFF:
        cs = si = 0.0
        term_c, term_s = 1.0, 1.0
        for n in range(6):
            cs += term_c
            si += term_s
            term_c *= lam / ((2 * n + 1) * (2 * n + 2))
            term_s *= lam / ((2 * n + 2) * (2 * n + 3))
        return cs, si
    x = math.sqrt(abs(lam))
    if lam > 0:
        return math.cosh(x), math.sinh(x) / x
    return math.cos(x), math.sin(x) / x


def su11_exp(z, theta: float = 0.0) -> SU11Matrix:
    """exp of ``[[i theta, z], [conj(z), -i theta]]`` as an SU(1,1) element."""
    z = complex(z)
    cs, si = cs_si(abs(z) ** 2 - theta * theta)
    return SU11Matrix(cs + 1j * theta * si, z * si, check=False).renormalized()


_TANH_SERIES = (1.0, -1 / 3, 2 / 15, -17 / 315, 62 / 2835, -1382 / 155925)
_ATANH_SERIES = (1.0, 1 / 3, 1 / 5, 1 / 7, 1 / 9, 1 / 11)


def _series(coeffs, r2):
    return sum(c * r2 ** i for i, c in enumerate(coeffs))


def w_of_z(z) -> complex:
    """Disk point ``(z/|z|) tanh|z|``."""
    z = complex(z)
    r = abs(z)
    if r < SERIES_CUTOFF:
        return z * _series(_TANH_SERIES, r * r)
    return z / r * math.tanh(r)


def z_of_w(w) -> complex:
    """Rapidity ``(w/|w|) artanh|w|``, inverse of :func:`w_of_z`."""
    w = check_disk(w, 0.0)
    r = abs(w)
    if r < SERIES_CUTOFF:
        return w * _series(_ATANH_SERIES, r * r)
    return w / r * math.atanh(r)


def eta_of_w(w) -> float:
    """``log(1 - |w|^2)``."""
    w = check_disk(w, 0.0)
    return math.log1p(-abs(w) ** 2)


def eta_of_z(z) -> float:
    """``-2 log cosh|z|``, equal to ``eta_of_w(w_of_z(z))``."""
    r = abs(complex(z))
    # log cosh r = r + log1p(exp(-2r)) - log 2, stable for large r
    return -2.0 * (r + math.log1p(math.exp(-2 * r)) - math.log(2.0))


def su11_product_with_phase(z1, z2) -> tuple[complex, float]:
    """For ``S(z2) S(z1) = S(z3) exp(i theta_s K0)`` return ``(w3, theta_s)``.

    ``w3 = (w1 + w2)/(1 + conj(w2) w1)``, ``exp(i theta_s) = (1 + w2 conj(w1))/(1 + w1 conj(w2))``.
    """
    w1, w2 = w_of_z(z1), w_of_z(z2)
    w3 = (w1 + w2) / (1 + w2.conjugate() * w1)
    theta_s = cmath.phase((1 + w2 * w1.conjugate()) / (1 + w1 * w2.conjugate()))
    return w3, theta_s
