"""Truncated matrix representation of the Jacobi algebra on boson x SU(1,1) states.

The carrier space is spanned by ``|n> (x) e_{k',k'+m}`` with 0 <= n <= N,
0 <= m <= M, flattened as ``n * (M + 1) + m``. The SU(1,1) generators split as::

    K+ = (a+)^2 / 2 + K'+ ,   K0 = (a+ a + 1/2) / 2 + K'0 ,   k' = k - 1/4

where the primed operators act on the second factor at weight k'. Ladder
operators that leave the grid are dropped, so identities hold exactly only on
an interior block; the helpers below check on that block.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply
from scipy.special import gammaln

from .algebra import JacobiCSPoint, JacobiElement, Weight, _point, _power, cocycle, jacobi_act, mobius_act, su11_exp
from .errors import ConvergenceWarning, CutoffError, WeightError
from .kernel import _kf

__all__ = [
    "FockRep", "StateVector", "build_rep", "commutator_table_check", "cs_vector",
    "overlap", "appendix_moments", "appendix_closed", "BogoliubovOracle",
    "bogoliubov_oracle", "squeeze_generator", "apply_squeeze", "apply_displacement",
    "r3_check", "action_oracle",
]


@dataclass(frozen=True)
class FockRep:
    """Sparse matrices of a, a+, K0, K+, K- (and the primed SU(1,1) factor)."""

    N: int
    M: int
    k: float
    a: sp.csr_matrix = field(repr=False)
    adag: sp.csr_matrix = field(repr=False)
    K0: sp.csr_matrix = field(repr=False)
    Kp: sp.csr_matrix = field(repr=False)
    Km: sp.csr_matrix = field(repr=False)
    K0p: sp.csr_matrix = field(repr=False)
    Kpp: sp.csr_matrix = field(repr=False)
    Kmp: sp.csr_matrix = field(repr=False)

    @property
    def dim(self) -> int:
        return (self.N + 1) * (self.M + 1)

    @property
    def k_prime(self) -> float:
        return self.k - 0.25

    def index(self, n: int, m: int) -> int:
        return n * (self.M + 1) + m

    def basis(self, n: int, m: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[self.index(n, m)] = 1.0
        return v

    def interior(self, depth: int = 2) -> np.ndarray:
        """Flat indices with n <= N - depth and m <= M - depth."""
        n, m = np.divmod(np.arange(self.dim), self.M + 1)
        return np.flatnonzero((n <= self.N - depth) & (m <= self.M - depth))

    def generators(self) -> dict[str, sp.csr_matrix]:
        return {"a": self.a, "a+": self.adag, "K0": self.K0, "K+": self.Kp, "K-": self.Km}


def build_rep(N: int, M: int, k, dtype=np.float64) -> FockRep:
    """Assemble the truncated representation at weight k (needs k' = k - 1/4 > 0).

    ``dtype=np.longdouble`` stores the square-root ladder entries in extended
    precision; squaring float64 entries of size ~40 already costs a few ulp of
    the ~1e3 diagonal of [K-, K+], which is what limits float64 commutator
    residuals to ~1e-12 at N = M = 40.
    """
    if N < 2 or M < 2:
        raise ValueError("cutoffs N and M must be >= 2")
    kf = _kf(k)
    kp = kf - 0.25
    if not kp > 0:
        raise WeightError(f"k' = k - 1/4 must be positive, got k = {kf}")
    n = np.arange(N + 1, dtype=dtype)
    m = np.arange(M + 1, dtype=dtype)
    # 2k' from the exact weight where possible, so longdouble builds are not limited by float(k)
    kv = k.value if isinstance(k, Weight) else k
    if isinstance(kv, (int, Fraction)):
        kv = Fraction(kv)
        two_kp = dtype(2) * (dtype(kv.numerator) / dtype(kv.denominator) - dtype(0.25))
    else:
        two_kp = dtype(2 * kp)
    b = sp.diags(np.sqrt(n[1:]), 1, format="csr")
    bd = b.T.tocsr()
    In, Im = sp.identity(N + 1, dtype=dtype, format="csr"), sp.identity(M + 1, dtype=dtype, format="csr")
    kpp = sp.diags(np.sqrt((m[:-1] + 1) * (m[:-1] + two_kp)), -1, format="csr")
    k0p = sp.diags(two_kp / 2 + m, 0, format="csr")
    kron = lambda x, y: sp.kron(x, y, format="csr")
    a, adag = kron(b, Im), kron(bd, Im)
    Kpp, Kmp, K0p = kron(In, kpp), kron(In, kpp.T), kron(In, k0p)
    Kp = (kron((bd @ bd) / 2, Im) + Kpp).tocsr()
    Km = Kp.T.tocsr()
    K0 = (kron((bd @ b) / 2 + In / 4, Im) + K0p).tocsr()
    return FockRep(N, M, kf, a, adag, K0, Kp, Km, K0p, Kpp, Kmp)


_TABLE = (
    ("[a,a+]=1", "a", "a+", {"1": 1.0}),
    ("[K0,K+]=K+", "K0", "K+", {"K+": 1.0}),
    ("[K0,K-]=-K-", "K0", "K-", {"K-": -1.0}),
    ("[K-,K+]=2K0", "K-", "K+", {"K0": 2.0}),
    ("[a,K+]=a+", "a", "K+", {"a+": 1.0}),
    ("[K-,a+]=a", "K-", "a+", {"a": 1.0}),
    ("[K+,a+]=0", "K+", "a+", {}),
    ("[K-,a]=0", "K-", "a", {}),
    ("[K0,a+]=a+/2", "K0", "a+", {"a+": 0.5}),
    ("[K0,a]=-a/2", "K0", "a", {"a": -0.5}),
)


def commutator_table_check(rep: FockRep) -> list[dict]:
    """Residual max-norm of every commutation relation, on columns with
    n <= N-2 and m <= M-2 (all rows)."""
    gens = rep.generators()
    gens["1"] = sp.identity(rep.dim, dtype=rep.a.dtype, format="csr")
    cols = rep.interior(2)
    out = []
    for name, x, y, rhs in _TABLE:
        A, B = gens[x], gens[y]
        R = A @ B - B @ A
        for g, c in rhs.items():
            R = R - c * gens[g]
        block = R[:, cols]
        res = float(abs(block).max()) if block.nnz else 0.0
        out.append({"relation": name, "max_residual": res, "block": f"n<={rep.N - 2},m<={rep.M - 2}"})
    return out


@dataclass(frozen=True)
class StateVector:
    """Coefficients ``c[n, m]`` of a vector in the truncated tensor basis."""

    coeffs: np.ndarray
    tail: float = 0.0

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def flat(self) -> np.ndarray:
        return self.coeffs.ravel()

    def block(self, n_max: int, m_max: int) -> np.ndarray:
        return self.coeffs[: n_max + 1, : m_max + 1]


def _tail(c: np.ndarray) -> float:
    top = np.zeros_like(c, dtype=bool)
    top[-2:, :] = True
    top[:, -2:] = True
    nrm = np.linalg.norm(c)
    return float(np.linalg.norm(c[top]) / nrm) if nrm else 0.0


def cs_vector(x, rep: FockRep, tail_tol: float = 1e-8) -> StateVector:
    """Coefficients of ``e_{z,w} = exp(z a+ + w K+) e_0``.

    The exponent only raises levels, so the power series terminates on the
    grid and equals the exact vector projected onto it. Warns with
    ConvergenceWarning when the top two levels carry more than ``tail_tol``
    of the norm.
    """
    x = _point(x)
    X = (x.z * rep.adag + x.w * rep.Kp).tocsr()
    v = np.zeros(rep.dim, dtype=complex)
    v[0] = 1.0
    term = v.copy()
    for j in range(1, rep.N + rep.M + 2):
        term = X @ term / j
        if not term.any():
            break
        v += term
    c = v.reshape(rep.N + 1, rep.M + 1)
    tail = _tail(c)
    if tail > tail_tol:
        warnings.warn(f"cs_vector tail {tail:.2e} above {tail_tol:.0e}; raise the cutoffs",
                      ConvergenceWarning, stacklevel=2)
    return StateVector(c, tail)


def overlap(u: StateVector, v: StateVector) -> complex:
    """Scalar product ``(u, v)``, antilinear in the first slot."""
    return complex(np.vdot(u.flat(), v.flat()))


def _moment_limit(rep: FockRep) -> int:
    return min(rep.N // 2, rep.M)


def appendix_moments(n: int, m: int, rep: FockRep) -> tuple[float, float]:
    """``(e0, a^n (a+)^m e0)`` and ``(e0, K-^n K+^m e0)`` from the matrices."""
    lim = _moment_limit(rep)
    if max(n, m) > lim:
        raise CutoffError(f"indices ({n}, {m}) exceed min(N/2, M) = {lim}; truncation would contaminate")
    e0 = rep.basis(0, 0)
    v = e0.copy()
    for _ in range(m):
        v = rep.adag @ v
    for _ in range(n):
        v = rep.a @ v
    lam = np.vdot(e0, v)
    v = e0.copy()
    for _ in range(m):
        v = rep.Kp @ v
    for _ in range(n):
        v = rep.Km @ v
    mu = np.vdot(e0, v)
    return float(lam.real), float(mu.real)


def appendix_closed(n: int, m: int, k) -> tuple[float, float]:
    """Closed forms ``n! delta_{nm}`` and ``n! Gamma(2k+n)/Gamma(2k) delta_{nm}``."""
    if n != m:
        return 0.0, 0.0
    kf = _kf(k)
    return float(math.factorial(n)), math.exp(math.lgamma(n + 1) + gammaln(2 * kf + n) - gammaln(2 * kf))


# --------------------------------------------------------------------------
# group operators by matrix exponential
# --------------------------------------------------------------------------

def squeeze_generator(rep: FockRep, z, theta: float = 0.0) -> sp.csr_matrix:
    """``2i theta K0 + z K+ - conj(z) K-``; its exponential is S(su11_exp(z, theta))."""
    z = complex(z)
    return (2j * theta * rep.K0 + z * rep.Kp - z.conjugate() * rep.Km).tocsr()


def apply_squeeze(rep: FockRep, v: np.ndarray, z, theta: float = 0.0, inverse: bool = False) -> np.ndarray:
    G = squeeze_generator(rep, z, theta)
    return expm_multiply(-G if inverse else G, v)


def apply_displacement(rep: FockRep, v: np.ndarray, alpha) -> np.ndarray:
    alpha = complex(alpha)
    G = (alpha * rep.adag - alpha.conjugate() * rep.a).tocsr()
    return expm_multiply(G, v)


def _boson_leak(rep: FockRep, v: np.ndarray) -> float:
    c = v.reshape(rep.N + 1, rep.M + 1)
    nrm = np.linalg.norm(c)
    return float(np.linalg.norm(c[-2:, :]) / nrm) if nrm else 0.0


@dataclass(frozen=True)
class BogoliubovOracle:
    """Fitted coefficients of ``S^-1 a S = A a + B a+`` and diagnostics."""

    A: complex
    B: complex
    residual: float
    leakage: float


def bogoliubov_oracle(z, theta: float = 0.0, k=1, N: int = 300, M: int = 2, n_test: int = 4) -> BogoliubovOracle:
    """Conjugate a by the truncated squeeze operator and read off A, B.

    Only the boson factor is involved (the primed factor cancels exactly
    because it commutes with a), so a long boson ladder and a short SU(1,1)
    ladder suffice. ``residual`` compares every test column with the analytic
    coefficients; ``leakage`` is the relative weight in the top two boson levels.
    """
    rep = build_rep(N, M, k)
    g = su11_exp(z, theta)
    resid, leak = 0.0, 0.0
    A = B = 0j
    for n in range(n_test + 1):
        e = rep.basis(n, 0)
        v = apply_squeeze(rep, e, z, theta)
        leak = max(leak, _boson_leak(rep, v))
        r = apply_squeeze(rep, rep.a @ v, z, theta, inverse=True)
        expect = g.a * (rep.a @ e) + g.b * (rep.adag @ e)
        resid = max(resid, float(np.max(np.abs(r - expect))))
        if n == 1:
            A = complex(r[rep.index(0, 0)])
            B = complex(r[rep.index(2, 0)] / math.sqrt(2))
    return BogoliubovOracle(A, B, resid, leak)


def r3_check(rep: FockRep, z, theta: float, w, n_max: int = 6, m_max: int = 6) -> float:
    """Max deviation, on the low block, between ``S(g) e_{0,w}`` and
    ``(conj(a) + conj(b) w)^(-2k) e_{0, g.w}`` for g = su11_exp(z, theta)."""
    g = su11_exp(z, theta)
    lhs = apply_squeeze(rep, cs_vector((0, w), rep, tail_tol=1.0).flat(), z, theta)
    rhs = _power(g, complex(w), rep.k) * cs_vector((0, mobius_act(g, w)), rep, tail_tol=1.0).flat()
    d = (lhs - rhs).reshape(rep.N + 1, rep.M + 1)[: n_max + 1, : m_max + 1]
    return float(np.max(np.abs(d)))


def action_oracle(rep: FockRep, z, theta: float, alpha, x, n_max: int = 6, m_max: int = 6) -> tuple[float, complex]:
    """Compare ``S(g) D(alpha) e_x`` with ``lambda(h, x) e_{h.x}`` on the low block.

    Returns ``(max deviation, lambda)``.
    """
    x = _point(x)
    h = JacobiElement(su11_exp(z, theta), alpha, 0.0)
    v = cs_vector(x, rep, tail_tol=1.0).flat()
    v = apply_squeeze(rep, apply_displacement(rep, v, alpha), z, theta)
    lam = cocycle(h, x, rep.k)
    rhs = lam * cs_vector(jacobi_act(h, x), rep, tail_tol=1.0).flat()
    d = (v - rhs).reshape(rep.N + 1, rep.M + 1)[: n_max + 1, : m_max + 1]
    return float(np.max(np.abs(d))), lam
