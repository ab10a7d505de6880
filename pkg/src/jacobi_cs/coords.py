"""Coordinate bridge between C x D1 and the upper-half-plane picture H1 x C.

Points of the upper picture are ``(v, u)`` with Im v > 0; the Cayley map is::

    w = (v - i) / (v + i),   z = 2i u / (v + i)
    v = i (1 + w) / (1 - w), u = z / (1 - w)

The real Jacobi group acts on (v, u) by ``(M, l1, l2)``:
``v -> (a v + b)/(c v + d)``, ``u -> (u + l1 v + l2)/(c v + d)``.
Under the Cayley map this element corresponds to the complex Jacobi element
``(C^-1 M C, l2 + i l1, 0)`` acting by :func:`jacobi_cs.algebra.jacobi_act`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import JacobiCSPoint, JacobiElement, SU11Matrix, _point
from .config import BOUNDARY_EPS
from .errors import DomainError
from .kernel import _kf, kahler_potential_and_metric

__all__ = [
    "UpperHalfPoint", "SL2Matrix", "EZCoords", "BerndtForm", "to_disk", "to_upper",
    "cayley_maps", "sl2_su11", "su11_sl2", "cayley_matrix", "iwasawa",
    "iwasawa_reassemble", "RealJacobiElement", "real_compose", "xj1_action",
    "jacobi_element_from_real", "berndt_form_at", "pullback_metric", "ez_from_point",
    "ez_to_point", "ez_metric", "ez_metric_pullback", "kb_potential", "fit_kb_parameters",
]


@dataclass(frozen=True)
class UpperHalfPoint:
    """``(v, u)`` with Im v > 0."""

    v: complex
    u: complex

    def __post_init__(self):
        object.__setattr__(self, "v", complex(self.v))
        object.__setattr__(self, "u", complex(self.u))
        if not self.v.imag > BOUNDARY_EPS:
            raise DomainError(f"Im v = {self.v.imag!r} is not positive")


@dataclass(frozen=True)
class SL2Matrix:
    """Real 2x2 matrix ``[[a, b], [c, d]]`` with determinant one."""

    a: float
    b: float
    c: float
    d: float
    check: bool = True

    def __post_init__(self):
        for n in "abcd":
            object.__setattr__(self, n, float(getattr(self, n)))
        if self.check and abs(self.det - 1.0) > 1e-12 * max(1.0, abs(self.a * self.d), abs(self.b * self.c)):
            raise DomainError(f"det = {self.det!r}, not 1")

    @property
    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    @classmethod
    def identity(cls) -> "SL2Matrix":
        return cls(1, 0, 0, 1)

    @classmethod
    def from_array(cls, m) -> "SL2Matrix":
        m = np.asarray(m, dtype=float)
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    def as_array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]])

    def __matmul__(self, other: "SL2Matrix") -> "SL2Matrix":
        return SL2Matrix.from_array(self.as_array() @ other.as_array())

    def inverse(self) -> "SL2Matrix":
        return SL2Matrix(self.d, -self.b, -self.c, self.a)


@dataclass(frozen=True)
class EZCoords:
    """``v = x + i y``, ``u = p v + q`` with real x, p, q and y > 0."""

    x: float
    y: float
    p: float
    q: float

    def __post_init__(self):
        if not self.y > 0:
            raise DomainError("EZ coordinate y must be positive")


# --------------------------------------------------------------------------
# Cayley maps
# --------------------------------------------------------------------------

def to_disk(pt: UpperHalfPoint) -> JacobiCSPoint:
    v, u = pt.v, pt.u
    return JacobiCSPoint(2j * u / (v + 1j), (v - 1j) / (v + 1j))


def to_upper(x) -> UpperHalfPoint:
    x = _point(x)
    return UpperHalfPoint(1j * (1 + x.w) / (1 - x.w), x.z / (1 - x.w))


def cayley_maps(direction: str, point):
    """``direction='to_disk'`` maps (v, u) to (z, w); ``'to_upper'`` inverts."""
    if direction == "to_disk":
        return to_disk(point if isinstance(point, UpperHalfPoint) else UpperHalfPoint(*point))
    if direction == "to_upper":
        return to_upper(point)
    raise ValueError(f"unknown direction {direction!r}")


def cayley_matrix() -> np.ndarray:
    """``C = [[i, i], [-1, 1]]`` with ``C^-1 SL2(R) C = SU(1,1)``."""
    return np.array([[1j, 1j], [-1, 1]])


def sl2_su11(M: SL2Matrix) -> SU11Matrix:
    """``C^-1 M C``: ``2 alpha = a + d + i(b - c)``, ``2 beta = a - d - i(b + c)``."""
    return SU11Matrix((M.a + M.d + 1j * (M.b - M.c)) / 2, (M.a - M.d - 1j * (M.b + M.c)) / 2)


def su11_sl2(g: SU11Matrix) -> SL2Matrix:
    """Inverse of :func:`sl2_su11`."""
    al, be = g.a, g.b
    return SL2Matrix(al.real + be.real, al.imag - be.imag, -al.imag - be.imag, al.real - be.real)


# --------------------------------------------------------------------------
# Iwasawa decomposition
# --------------------------------------------------------------------------

def iwasawa(M: SL2Matrix) -> tuple[float, float, float]:
    """``M = [[1, x], [0, 1]] diag(y^1/2, y^-1/2) [[cos t, sin t], [-sin t, cos t]]``.

    ``x = (ac + bd)/(c^2 + d^2)``, ``y = 1/(c^2 + d^2)``, ``t = atan2(-c, d)``.
    """
    r2 = M.c ** 2 + M.d ** 2
    return (M.a * M.c + M.b * M.d) / r2, 1.0 / r2, math.atan2(-M.c, M.d)


def iwasawa_reassemble(x: float, y: float, theta: float) -> SL2Matrix:
    n = np.array([[1.0, x], [0.0, 1.0]])
    a = np.diag([math.sqrt(y), 1 / math.sqrt(y)])
    k = np.array([[math.cos(theta), math.sin(theta)], [-math.sin(theta), math.cos(theta)]])
    return SL2Matrix.from_array(n @ a @ k)


# --------------------------------------------------------------------------
# real Jacobi group
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class RealJacobiElement:
    """``(M, (l1, l2), kappa)``; kappa is carried but does not act on points."""

    M: SL2Matrix
    l1: float = 0.0
    l2: float = 0.0
    kappa: float = 0.0


def real_compose(g: RealJacobiElement, h: RealJacobiElement) -> RealJacobiElement:
    """``g h = (M M', X M' + X', kappa + kappa' + det[X M'; X'])`` with X = (l1, l2)."""
    X = np.array([g.l1, g.l2]) @ h.M.as_array()
    Xp = np.array([h.l1, h.l2])
    return RealJacobiElement(g.M @ h.M, X[0] + Xp[0], X[1] + Xp[1],
                             g.kappa + h.kappa + X[0] * Xp[1] - X[1] * Xp[0])


def xj1_action(g: RealJacobiElement, pt: UpperHalfPoint) -> UpperHalfPoint:
    """``(v, u) -> ((a v + b)/(c v + d), (u + l1 v + l2)/(c v + d))``."""
    pt = pt if isinstance(pt, UpperHalfPoint) else UpperHalfPoint(*pt)
    M = g.M
    j = M.c * pt.v + M.d
    return UpperHalfPoint((M.a * pt.v + M.b) / j, (pt.u + g.l1 * pt.v + g.l2) / j)


def jacobi_element_from_real(g: RealJacobiElement) -> JacobiElement:
    """Complex Jacobi element whose action on C x D1 is conjugate, through the
    Cayley map, to the action of ``g`` on H1 x C: ``(C^-1 M C, l2 + i l1, 0)``."""
    return JacobiElement(sl2_su11(g.M), complex(g.l2, g.l1), 0.0)


# --------------------------------------------------------------------------
# Berndt two-form and EZ metric
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class BerndtForm:
    """Hermitian components of ``-i omega = sum h_{i j̄} dx^i ^ d(x^j)bar`` in (u, v)."""

    h_uubar: float
    h_uvbar: complex
    h_vvbar: float

    def as_matrix(self) -> np.ndarray:
        """Rows and columns ordered (u, v)."""
        return np.array([[self.h_uubar, self.h_uvbar], [self.h_uvbar.conjugate(), self.h_vvbar]])


def berndt_form_at(pt, k) -> BerndtForm:
    """Components of ``-2k/(conj(v)-v)^2 dv^dv̄ + 2/(i(conj(v)-v)) B^B̄``,
    ``B = du - (u - conj(u))/(v - conj(v)) dv``."""
    pt = pt if isinstance(pt, UpperHalfPoint) else UpperHalfPoint(*pt)
    v, u = pt.v, pt.u
    s = 2 / (1j * (v.conjugate() - v))  # = 1/Im v
    c = -(u - u.conjugate()) / (v - v.conjugate())
    vv = -2 * _kf(k) / (v.conjugate() - v) ** 2
    return BerndtForm(s.real, (s * c.conjugate()), (s * abs(c) ** 2 + vv).real)


def _holo_jacobian_fd(pt: UpperHalfPoint, h: float) -> np.ndarray:
    """``J[i, a] = d(z, w)_i / d(u, v)_a`` by central differences along the real axis."""
    J = np.empty((2, 2), dtype=complex)
    for a, (du, dv) in enumerate(((h, 0), (0, h))):
        p = to_disk(UpperHalfPoint(pt.v + dv, pt.u + du))
        m = to_disk(UpperHalfPoint(pt.v - dv, pt.u - du))
        J[:, a] = [(p.z - m.z) / (2 * h), (p.w - m.w) / (2 * h)]
    return J


def _holo_jacobian(pt: UpperHalfPoint) -> np.ndarray:
    v, u = pt.v, pt.u
    return np.array([[2j / (v + 1j), -2j * u / (v + 1j) ** 2], [0, 2j / (v + 1j) ** 2]])


def pullback_metric(pt, k, method: str = "fd", h: float = 1e-6) -> np.ndarray:
    """Hermitian metric of C x D1 pulled back to (u, v): ``J^T G conj(J)``."""
    pt = pt if isinstance(pt, UpperHalfPoint) else UpperHalfPoint(*pt)
    J = _holo_jacobian_fd(pt, h) if method == "fd" else _holo_jacobian(pt)
    G = kahler_potential_and_metric(to_disk(pt), k)[1].as_matrix()
    return J.T @ G @ J.conj()


def ez_from_point(pt: UpperHalfPoint) -> EZCoords:
    y = pt.v.imag
    p = pt.u.imag / y
    return EZCoords(pt.v.real, y, p, pt.u.real - p * pt.v.real)


def ez_to_point(c: EZCoords) -> UpperHalfPoint:
    v = complex(c.x, c.y)
    return UpperHalfPoint(v, c.p * v + c.q)


def ez_metric(c: EZCoords, k) -> np.ndarray:
    """Real metric in (x, y, p, q):
    ``k/(2y^2)(dx^2 + dy^2) + ((x^2 + y^2) dp^2 + dq^2 + 2x dp dq)/y``."""
    kf = _kf(k)
    g = np.zeros((4, 4))
    g[0, 0] = g[1, 1] = kf / (2 * c.y ** 2)
    g[2, 2] = (c.x ** 2 + c.y ** 2) / c.y
    g[3, 3] = 1 / c.y
    g[2, 3] = g[3, 2] = c.x / c.y
    return g


def ez_metric_pullback(c: EZCoords, k, h: float = 1e-6) -> np.ndarray:
    """Real metric in (x, y, p, q) obtained by pulling the C x D1 Hermitian
    metric back through EZ -> (v, u) -> (z, w), Jacobians by central differences."""
    base = np.array([c.x, c.y, c.p, c.q])
    G = kahler_potential_and_metric(to_disk(ez_to_point(c)), k)[1].as_matrix()
    cols = []
    for i in range(4):
        e = np.zeros(4)
        e[i] = h
        p = to_disk(ez_to_point(EZCoords(*(base + e))))
        m = to_disk(ez_to_point(EZCoords(*(base - e))))
        cols.append(np.array([(p.z - m.z) / (2 * h), (p.w - m.w) / (2 * h)]))
    X = np.array(cols)  # X[i] is the (z, w) tangent of the i-th real direction
    return np.real(X @ G @ X.conj().T)


def kb_potential(pt, lam: float, mu: float) -> float:
    """``-lam/2 log((v - conj v)/2i) - i pi mu (u - conj u)^2 / (v - conj v)`` (real)."""
    pt = pt if isinstance(pt, UpperHalfPoint) else UpperHalfPoint(*pt)
    y, eta = pt.v.imag, pt.u.imag
    return -lam / 2 * math.log(y) + 2 * math.pi * mu * eta ** 2 / y


def _mixed_hessian_fd(f, pt: UpperHalfPoint, h: float) -> np.ndarray:
    """``H[a, b] = d_a dbar_b f`` over (u, v) via real second differences."""
    base = np.array([pt.u.real, pt.u.imag, pt.v.real, pt.v.imag])

    def F(x):
        return f(UpperHalfPoint(complex(x[2], x[3]), complex(x[0], x[1])))

    R = np.empty((4, 4))
    e = np.eye(4) * h
    for i in range(4):
        for j in range(i, 4):
            R[i, j] = R[j, i] = (F(base + e[i] + e[j]) - F(base + e[i] - e[j])
                                 - F(base - e[i] + e[j]) + F(base - e[i] - e[j])) / (4 * h * h)
    H = np.empty((2, 2), dtype=complex)
    for a in range(2):
        for b in range(2):
            xa, ya, xb, yb = 2 * a, 2 * a + 1, 2 * b, 2 * b + 1
            H[a, b] = ((R[xa, xb] + R[ya, yb]) + 1j * (R[xa, yb] - R[ya, xb])) / 4
    return H


def fit_kb_parameters(pt, k, h: float = 1e-4) -> dict:
    """Fit ``(lam, mu)`` of :func:`kb_potential` so its Levi form matches the
    two-form at ``pt``; expected ``lam = 4k``, ``mu = 1/pi``."""
    pt = pt if isinstance(pt, UpperHalfPoint) else UpperHalfPoint(*pt)
    target = berndt_form_at(pt, k).as_matrix()
    H_lam = _mixed_hessian_fd(lambda p: kb_potential(p, 1.0, 0.0), pt, h)
    H_mu = _mixed_hessian_fd(lambda p: kb_potential(p, 0.0, 1.0), pt, h)
    A = np.stack([H_lam.ravel(), H_mu.ravel()], axis=1)
    A = np.concatenate([A.real, A.imag])
    b = np.concatenate([target.ravel().real, target.ravel().imag])
    (lam, mu), *_ = np.linalg.lstsq(A, b, rcond=None)
    resid = float(np.max(np.abs(A @ np.array([lam, mu]) - b)))
    return {"lam": float(lam), "mu": float(mu), "residual": resid}
