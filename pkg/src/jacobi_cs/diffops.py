"""Exact polynomial engine and the first-order differential realisation of the
Jacobi algebra on holomorphic functions of (z, w).

Polynomials live in ``Q(i)[z, w, k]``: the weight k may stay symbolic, so the
commutation table is verified as a polynomial identity rather than numerically.
The generators act as::

    a  = d/dz                 a+ = z + w d/dz
    K- = d/dw                 K0 = k + z/2 d/dz + w d/dw
    K+ = z^2/2 + 2k w + z w d/dz + w^2 d/dw
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

from .algebra import Weight, _point
from .kernel import _kf, basis_coefficient

__all__ = [
    "GaussianRational", "BivariatePoly", "DiffOp", "Z", "W", "K", "ONE",
    "make_generators", "op_commutator", "adjoint_pairs", "GENERATOR_TABLE",
    "check_commutation_table", "jacobi_identity_residuals", "unnormalized_basis",
    "expand_in_basis", "apply_to_basis", "adjoint_kernel_check",
]


# --------------------------------------------------------------------------
# Gaussian rationals
# --------------------------------------------------------------------------

def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x)  # exact binary value
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot make a rational from {type(x).__name__}")


@dataclass(frozen=True)
class GaussianRational:
    """Exact number ``re + i im`` with rational parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", _frac(self.re))
        object.__setattr__(self, "im", _frac(self.im))

    @classmethod
    def of(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, complex):
            return cls(Fraction(x.real), Fraction(x.imag))
        return cls(_frac(x))

    def __add__(self, other):
        o = GaussianRational.of(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-GaussianRational.of(other))

    def __rsub__(self, other):
        return GaussianRational.of(other) - self

    def __mul__(self, other):
        o = GaussianRational.of(other)
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = GaussianRational.of(other)
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by zero")
        return self * GaussianRational(o.re / d, -o.im / d)

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def __eq__(self, other):
        try:
            o = GaussianRational.of(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}i)"


I = GaussianRational(0, 1)


# --------------------------------------------------------------------------
# polynomials in z, w and the symbolic weight k
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class BivariatePoly:
    """Sparse polynomial ``sum c[p, q, r] z^p w^q k^r`` with Gaussian-rational coefficients.

    ``r`` is the power of the symbolic weight; it is zero everywhere once k
    has been substituted with :meth:`subs_k`. Zero coefficients are never stored.
    """

    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for key, c in self.terms.items():
            if len(key) == 2:
                key = (key[0], key[1], 0)
            c = GaussianRational.of(c)
            if c:
                clean[key] = clean.get(key, GaussianRational()) + c
        object.__setattr__(self, "terms", {k_: v for k_, v in clean.items() if v})

    @classmethod
    def const(cls, c) -> "BivariatePoly":
        return cls({(0, 0, 0): c})

    @classmethod
    def monomial(cls, p: int, q: int, c=1, r: int = 0) -> "BivariatePoly":
        return cls({(p, q, r): c})

    # ring operations
    def __add__(self, other):
        other = _poly(other)
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, GaussianRational()) + c
        return BivariatePoly(out)

    __radd__ = __add__

    def __neg__(self):
        return BivariatePoly({key: -c for key, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_poly(other))

    def __rsub__(self, other):
        return _poly(other) - self

    def __mul__(self, other):
        other = _poly(other)
        out: dict = {}
        for (p1, q1, r1), c1 in self.terms.items():
            for (p2, q2, r2), c2 in other.terms.items():
                key = (p1 + p2, q1 + q2, r1 + r2)
                out[key] = out.get(key, GaussianRational()) + c1 * c2
        return BivariatePoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = ONE
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        try:
            return self.terms == _poly(other).terms
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    # calculus
    def partial_z(self) -> "BivariatePoly":
        return BivariatePoly({(p - 1, q, r): c * p for (p, q, r), c in self.terms.items() if p})

    def partial_w(self) -> "BivariatePoly":
        return BivariatePoly({(p, q - 1, r): c * q for (p, q, r), c in self.terms.items() if q})

    # evaluation
    @property
    def degree(self) -> int:
        """Total degree in z and w (k does not count)."""
        return max((p + q for p, q, _ in self.terms), default=-1)

    @property
    def symbolic(self) -> bool:
        return any(r for _, _, r in self.terms)

    def subs_k(self, k) -> "BivariatePoly":
        """Substitute an exact value for the symbolic weight."""
        kv = GaussianRational.of(k.value if isinstance(k, Weight) else k)
        out: dict = {}
        for (p, q, r), c in self.terms.items():
            f = c
            for _ in range(r):
                f = f * kv
            out[(p, q, 0)] = out.get((p, q, 0), GaussianRational()) + f
        return BivariatePoly(out)

    def evaluate(self, z, w, k=None) -> complex:
        z, w = complex(z), complex(w)
        kf = None if k is None else _kf(k)
        total = 0j
        for (p, q, r), c in self.terms.items():
            if r and kf is None:
                raise ValueError("polynomial depends on k; pass a value")
            total += complex(c) * z ** p * w ** q * (kf ** r if r else 1.0)
        return total

    def coefficient(self, p: int, q: int, r: int = 0) -> GaussianRational:
        return self.terms.get((p, q, r), GaussianRational())

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (p, q, r), c in sorted(self.terms.items(), key=lambda t: (-(t[0][0] + t[0][1]), -t[0][0], -t[0][2])):
            mono = "".join(s for s in (_pw("k", r), _pw("z", p), _pw("w", q)) if s)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                cs = str(c)
                if "/" in cs and not cs.startswith("("):
                    cs = f"({cs})"
                parts.append(f"{cs}{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    __repr__ = __str__


def _pw(sym: str, n: int) -> str:
    return "" if n == 0 else sym if n == 1 else f"{sym}^{n}"


def _poly(x) -> BivariatePoly:
    if isinstance(x, BivariatePoly):
        return x
    return BivariatePoly.const(GaussianRational.of(x))


ONE = BivariatePoly.const(1)
Z = BivariatePoly.monomial(1, 0)
W = BivariatePoly.monomial(0, 1)
K = BivariatePoly.monomial(0, 0, 1, r=1)


# --------------------------------------------------------------------------
# first-order differential operators
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class DiffOp:
    """``P + Qz d/dz + Qw d/dw`` with polynomial coefficients."""

    P: BivariatePoly = field(default_factory=BivariatePoly)
    Qz: BivariatePoly = field(default_factory=BivariatePoly)
    Qw: BivariatePoly = field(default_factory=BivariatePoly)

    def __post_init__(self):
        for name in ("P", "Qz", "Qw"):
            object.__setattr__(self, name, _poly(getattr(self, name)))

    def derive(self, f: BivariatePoly) -> BivariatePoly:
        """Vector-field part only: ``Qz df/dz + Qw df/dw``."""
        return self.Qz * f.partial_z() + self.Qw * f.partial_w()

    def apply(self, f) -> BivariatePoly:
        f = _poly(f)
        return self.P * f + self.derive(f)

    __call__ = apply

    def __add__(self, other: "DiffOp") -> "DiffOp":
        return DiffOp(self.P + other.P, self.Qz + other.Qz, self.Qw + other.Qw)

    def __sub__(self, other: "DiffOp") -> "DiffOp":
        return DiffOp(self.P - other.P, self.Qz - other.Qz, self.Qw - other.Qw)

    def scale(self, c) -> "DiffOp":
        return DiffOp(self.P * c, self.Qz * c, self.Qw * c)

    def __rmul__(self, c) -> "DiffOp":
        return self.scale(c)

    def is_zero(self) -> bool:
        return self.P.is_zero() and self.Qz.is_zero() and self.Qw.is_zero()

    def subs_k(self, k) -> "DiffOp":
        return DiffOp(self.P.subs_k(k), self.Qz.subs_k(k), self.Qw.subs_k(k))

    @property
    def degree(self) -> int:
        return max(self.P.degree, self.Qz.degree, self.Qw.degree)

    def evaluate_on_log(self, z, w, dlog_z, dlog_w, k=None) -> complex:
        """``(X f)/f`` at a point, given the logarithmic derivatives of f."""
        return (self.P.evaluate(z, w, k) + self.Qz.evaluate(z, w, k) * dlog_z
                + self.Qw.evaluate(z, w, k) * dlog_w)

    def __str__(self):
        parts = []
        if not self.P.is_zero():
            parts.append(str(self.P))
        for q, d in ((self.Qz, "d/dz"), (self.Qw, "d/dw")):
            if q.is_zero():
                continue
            s = str(q)
            if s == "1":
                parts.append(d)
            else:
                parts.append(f"({s}) {d}" if len(q.terms) > 1 else f"{s} {d}")
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"

    __repr__ = __str__


def op_commutator(A: DiffOp, B: DiffOp) -> DiffOp:
    """``[A, B] = AB - BA``; the second-order parts cancel."""
    return DiffOp(
        A.derive(B.P) - B.derive(A.P),
        A.derive(B.Qz) - B.derive(A.Qz),
        A.derive(B.Qw) - B.derive(A.Qw),
    )


def make_generators(k=None) -> dict[str, DiffOp]:
    """The five generators and the identity.

    ``k=None`` keeps the weight symbolic; a rational k (int, Fraction, Weight
    with exact value, or a float taken at its exact binary value) substitutes it.
    """
    kk = K if k is None else _poly(GaussianRational.of(k.value if isinstance(k, Weight) else k))
    half = Fraction(1, 2)
    gens = {
        "1": DiffOp(ONE),
        "a": DiffOp(Qz=ONE),
        "a+": DiffOp(Z, W),
        "K-": DiffOp(Qw=ONE),
        "K0": DiffOp(kk, Z * half, W),
        "K+": DiffOp(Z * Z * half + kk * W * 2, Z * W, W * W),
    }
    return gens


# relation name, X, Y, right-hand side as {generator: coefficient}
GENERATOR_TABLE = (
    ("[a,a+]=1", "a", "a+", {"1": 1}),
    ("[K0,K+]=K+", "K0", "K+", {"K+": 1}),
    ("[K0,K-]=-K-", "K0", "K-", {"K-": -1}),
    ("[K-,K+]=2K0", "K-", "K+", {"K0": 2}),
    ("[a,K+]=a+", "a", "K+", {"a+": 1}),
    ("[K-,a+]=a", "K-", "a+", {"a": 1}),
    ("[K+,a+]=0", "K+", "a+", {}),
    ("[K-,a]=0", "K-", "a", {}),
    ("[K0,a+]=a+/2", "K0", "a+", {"a+": Fraction(1, 2)}),
    ("[K0,a]=-a/2", "K0", "a", {"a": Fraction(-1, 2)}),
)

adjoint_pairs = {"a": "a+", "a+": "a", "K0": "K0", "K+": "K-", "K-": "K+", "1": "1"}


def check_commutation_table(k=None) -> list[dict]:
    """Residual operator of every relation; all are exactly zero."""
    g = make_generators(k)
    out = []
    for name, x, y, rhs in GENERATOR_TABLE:
        R = op_commutator(g[x], g[y])
        for h, c in rhs.items():
            R = R - g[h].scale(c)
        out.append({"relation": name, "residual": str(R), "zero": R.is_zero()})
    return out


def jacobi_identity_residuals(k=None) -> list[tuple[str, str, str, bool]]:
    """``[A,[B,C]] + [B,[C,A]] + [C,[A,B]] == 0`` over all generator triples."""
    g = make_generators(k)
    names = list(g)
    out = []
    for i, a in enumerate(names):
        for j, b in enumerate(names[i + 1:], i + 1):
            for c in names[j + 1:]:
                A, B, C = g[a], g[b], g[c]
                R = (op_commutator(A, op_commutator(B, C)) + op_commutator(B, op_commutator(C, A))
                     + op_commutator(C, op_commutator(A, B)))
                out.append((a, b, c, R.is_zero()))
    return out


# --------------------------------------------------------------------------
# action on the basis f_{n,m}
# --------------------------------------------------------------------------

def _pn_exact(n: int) -> BivariatePoly:
    out = {}
    for j in range(n // 2 + 1):
        c = Fraction(math.factorial(n), math.factorial(j) * math.factorial(n - 2 * j) * 2 ** j)
        out[(n - 2 * j, j, 0)] = c
    return BivariatePoly(out)


def unnormalized_basis(n: int, m: int) -> BivariatePoly:
    """``w^m P_n(z, w)``, exact."""
    return _pn_exact(n) * BivariatePoly.monomial(0, m)


def expand_in_basis(f: BivariatePoly) -> dict[tuple[int, int], GaussianRational]:
    """Exact coefficients d[n, m] with ``f = sum d[n, m] w^m P_n``.

    ``w^m P_n`` equals ``z^n w^m`` plus terms of lower z-degree and the same
    weight ``n + 2m``, so peeling off the top z-power solves the triangular system.
    """
    if f.symbolic:
        raise ValueError("substitute k before expanding")
    rest = f
    out: dict = {}
    while not rest.is_zero():
        p, q, _ = max(rest.terms, key=lambda t: (t[0], -t[1]))
        c = rest.terms[(p, q, 0)]
        out[(p, q)] = out.get((p, q), GaussianRational()) + c
        rest = rest - unnormalized_basis(p, q) * c
    return out


def apply_to_basis(X: DiffOp, n: int, m: int, k, max_index: int | None = None) -> dict[tuple[int, int], complex]:
    """Coefficients c[n', m'] with ``X f_{n,m} = sum c[n', m'] f_{n', m'}``.

    The result equals the column ``<n', m'| X |n, m>`` of the Fock matrix of
    the same generator (no transpose or conjugation). ``max_index`` guards
    against results running beyond a cutoff grid.
    """
    Xk = X.subs_k(k) if (X.P.symbolic or X.Qz.symbolic or X.Qw.symbolic) else X
    image = Xk.apply(unnormalized_basis(n, m))
    d = expand_in_basis(image)
    cm = basis_coefficient(m, k) / math.sqrt(math.factorial(n))
    out = {}
    for (p, q), c in sorted(d.items()):
        if max_index is not None and max(p, q) > max_index:
            raise OverflowError(f"image term ({p}, {q}) beyond the grid {max_index}")
        out[(p, q)] = complex(c) * cm * math.sqrt(math.factorial(p)) / basis_coefficient(q, k)
    return out


# --------------------------------------------------------------------------
# kernel adjoint identity
# --------------------------------------------------------------------------

def _dlog_kernel(z, w, zeta, omega, k):
    """Logarithmic derivatives of ``K(z, w; zeta, omega)`` in all four slots."""
    kf = _kf(k)
    d = 1 - w * omega
    e = 2 * zeta * z + z * z * omega + zeta * zeta * w
    dz = (zeta + z * omega) / d
    dzeta = (z + zeta * w) / d
    dw = 2 * kf * omega / d + zeta * zeta / (2 * d) + e * omega / (2 * d * d)
    domega = 2 * kf * w / d + z * z / (2 * d) + e * w / (2 * d * d)
    return dz, dw, dzeta, domega


def _log_kernel_raw(z, w, zeta, omega, kf):
    d = 1 - w * omega
    return -2 * kf * cmath.log(d) + (2 * zeta * z + z * z * omega + zeta * zeta * w) / (2 * d)


def adjoint_kernel_check(X: str, x, y, k, method: str = "analytic", h: float = 1e-5) -> float:
    """Relative residual of ``D_X`` acting on the x-slot of ``K(x; conj(y))``
    versus ``D_{X+}`` acting on the conj(y)-slot.

    For X = a both sides equal ``(conj(z') + z conj(w')) / (1 - w conj(w')) K``.
    ``method='fd'`` replaces the analytic logarithmic derivatives by central
    differences of the kernel.
    """
    x, y = _point(x), _point(y)
    g = make_generators(None)
    D, Dd = g[X], g[adjoint_pairs[X]]
    z, w, zeta, omega = x.z, x.w, y.z.conjugate(), y.w.conjugate()
    if method == "analytic":
        dz, dw, dzeta, domega = _dlog_kernel(z, w, zeta, omega, k)
    elif method == "fd":
        kf = _kf(k)
        L = lambda *v: _log_kernel_raw(*v, kf)
        args = [z, w, zeta, omega]

        def dlog(i):
            up, dn = list(args), list(args)
            up[i] += h
            dn[i] -= h
            return (cmath.exp(L(*up) - L(*args)) - cmath.exp(L(*dn) - L(*args))) / (2 * h)

        dz, dw, dzeta, domega = (dlog(i) for i in range(4))
    else:
        raise ValueError(f"unknown method {method!r}")
    lhs = D.evaluate_on_log(z, w, dz, dw, k)
    rhs = Dd.evaluate_on_log(zeta, omega, dzeta, domega, k)
    return abs(lhs - rhs) / max(1.0, abs(lhs))
