"""Reproducing kernel, orthonormal basis, Kähler geometry and quadrature on C x D1.

Notation: a point is ``x = (z, w)``. ``K(x; conj(y))`` is the kernel evaluated
at x and at the conjugate of a second point y, i.e.::

    K = (1 - w conj(w'))^(-2k) exp((2 conj(z') z + z^2 conj(w') + conj(z')^2 w) / (2 (1 - w conj(w'))))

for ``y = (z', w')``. The kernel is the sum over the orthonormal basis
``f_{n,m}(z, w) = c_m w^m P_n(z, w) / sqrt(n!)`` with ``c_m^2 = Gamma(m+2k')/(m! Gamma(2k'))``
and ``k' = k - 1/4``.
"""
from __future__ import annotations

import cmath
import json
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import gammaln

from ._util import thread_cap
from .algebra import JacobiCSPoint, JacobiElement, Weight, _point, cocycle, jacobi_act
from .errors import BudgetWarning, WeightError

__all__ = [
    "MetricComponents", "QuadratureResult", "hermite_poly", "hermite_sequence",
    "pn_poly", "pn_sequence", "basis_coefficient", "basis_function",
    "basis_function_hermite", "kernel_closed", "log_kernel", "kernel_truncated",
    "kernel_matrix", "kahler_potential", "kahler_potential_and_metric",
    "metric_finite_difference", "volume_and_measure_density",
    "normalization_constant", "sample_measure", "inner_product_quadrature",
    "mehler_sum", "mehler_closed", "action_jacobian_fd", "kahler_transform_residual",
]

LOG_DOMAIN_Z = 30.0


def _kf(k) -> float:
    return float(k.value) if isinstance(k, Weight) else float(k)


def _kprime(k) -> float:
    kp = _kf(k) - 0.25
    if not kp > 0:
        raise WeightError(f"the SU(1,1) factor needs k' = k - 1/4 > 0, got k = {_kf(k)}")
    return kp


# --------------------------------------------------------------------------
# Hermite polynomials and P_n
# --------------------------------------------------------------------------

def hermite_poly(n: int, x) -> complex:
    """Physicists' Hermite polynomial from the explicit finite sum.

    ``H_n(x) = n! sum_{m<=n/2} (-1)^m (2x)^(n-2m) / (m! (n-2m)!)``.
    Exact in exact arithmetic; for large n with |x| ~ 1 the alternating sum
    loses digits, so prefer :func:`hermite_sequence` there.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    x = complex(x)
    total = 0j
    for m in range(n // 2 + 1):
        total += (-1) ** m * (2 * x) ** (n - 2 * m) * (math.factorial(n) // (math.factorial(m) * math.factorial(n - 2 * m)))
    return total


def hermite_sequence(n_max: int, x) -> np.ndarray:
    """``[H_0(x), ..., H_{n_max}(x)]`` via ``H_{n+1} = 2x H_n - 2n H_{n-1}``."""
    x = complex(x)
    out = np.empty(n_max + 1, dtype=complex)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = 2 * x
    for n in range(1, n_max):
        out[n + 1] = 2 * x * out[n] - 2 * n * out[n - 1]
    return out


def pn_poly(n: int, z, w) -> complex:
    """``P_n(z, w) = n! sum_k (w/2)^k z^(n-2k) / (k! (n-2k)!)``, the coefficient
    of ``t^n/n!`` in ``exp(z t + w t^2 / 2)``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    z, w = complex(z), complex(w)
    total = 0j
    for j in range(n // 2 + 1):
        c = math.factorial(n) // (math.factorial(j) * math.factorial(n - 2 * j))
        total += c * (w / 2) ** j * z ** (n - 2 * j)
    return total


def pn_sequence(n_max: int, z, w, normalized: bool = True) -> np.ndarray:
    """``P_n(z, w)`` for n = 0..n_max by ``P_{n+1} = z P_n + n w P_{n-1}``.

    With ``normalized=True`` returns ``P_n / sqrt(n!)``, which stays finite for
    large n. ``z`` and ``w`` may be arrays of equal shape; n is the leading axis.
    """
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    out = np.empty((n_max + 1,) + np.broadcast(z, w).shape, dtype=complex)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = z
    for n in range(1, n_max):
        if normalized:
            out[n + 1] = (z * out[n] + math.sqrt(n) * w * out[n - 1]) / math.sqrt(n + 1)
        else:
            out[n + 1] = z * out[n] + n * w * out[n - 1]
    return out


# --------------------------------------------------------------------------
# basis functions
# --------------------------------------------------------------------------

def basis_coefficient(m: int, k) -> float:
    """``sqrt(Gamma(m + 2k') / (m! Gamma(2k')))``."""
    kp2 = 2 * _kprime(k)
    return math.exp(0.5 * (math.lgamma(m + kp2) - math.lgamma(m + 1) - math.lgamma(kp2)))


def basis_function(n: int, m: int, x, k) -> complex:
    """Orthonormal basis function ``f_{n,m}(z, w) = c_m w^m P_n(z, w) / sqrt(n!)``."""
    if n < 0 or m < 0:
        raise ValueError("basis indices must be non-negative")
    x = _point(x)
    pn = pn_sequence(n, x.z, x.w)[n]
    return complex(basis_coefficient(m, k) * x.w ** m * pn)


def basis_function_hermite(n: int, m: int, x, k) -> complex:
    """Same function written through Hermite polynomials,
    ``(n!)^(-1/2) (i/sqrt 2)^n c_m w^(m+n/2) H_n(-i z / sqrt(2w))``.

    Undefined at w = 0 (the polynomial form is its continuation).
    """
    x = _point(x)
    if x.w == 0:
        raise ValueError("the Hermite form needs w != 0")
    sw = cmath.sqrt(x.w)
    h = hermite_poly(n, -1j * x.z / (math.sqrt(2) * sw))
    pn = (1j / math.sqrt(2)) ** n * sw ** n * h
    return basis_coefficient(m, k) * x.w ** m * pn / math.sqrt(math.factorial(n))


# --------------------------------------------------------------------------
# kernel
# --------------------------------------------------------------------------

def log_kernel(x, y, k) -> complex:
    """Principal logarithm of ``K(x; conj(y))``; safe for any |z|."""
    x, y = _point(x), _point(y)
    z, w = x.z, x.w
    zc, wc = y.z.conjugate(), y.w.conjugate()
    d = 1 - w * wc
    return -2 * _kf(k) * cmath.log(d) + (2 * zc * z + z * z * wc + zc * zc * w) / (2 * d)


def kernel_closed(x, y, k) -> complex:
    """``K(x; conj(y))`` in closed form.

    For |z| or |z'| above 30 the value is assembled from :func:`log_kernel`;
    an OverflowError is raised if it does not fit in a double.
    """
    x, y = _point(x), _point(y)
    if max(abs(x.z), abs(y.z)) > LOG_DOMAIN_Z:
        lk = log_kernel(x, y, k)
        if lk.real > 709.0:
            raise OverflowError(f"log|K| = {lk.real:.6g} overflows; use log_kernel")
        return cmath.exp(lk)
    z, w = x.z, x.w
    zc, wc = y.z.conjugate(), y.w.conjugate()
    d = 1 - w * wc
    kf = _kf(k)
    two_k = 2 * kf
    pref = d ** (-int(round(two_k))) if abs(two_k - round(two_k)) < 1e-15 else cmath.exp(-two_k * cmath.log(d))
    return pref * cmath.exp((2 * zc * z + z * z * wc + zc * zc * w) / (2 * d))


def kernel_truncated(x, y, k, N: int = 60, M: int = 60) -> complex:
    """Partial sum ``sum_{n<=N, m<=M} f_{n,m}(x) conj(f_{n,m}(y))``.

    The sum factorises into a boson part over n and an SU(1,1) part over m.
    """
    if N < 0 or M < 0:
        raise ValueError("cutoffs must be non-negative")
    x, y = _point(x), _point(y)
    px = pn_sequence(N, x.z, x.w)
    py = pn_sequence(N, y.z, y.w)
    boson = np.sum(px * py.conj())
    m = np.arange(M + 1)
    kp2 = 2 * _kprime(k)
    c2 = np.exp(gammaln(m + kp2) - gammaln(m + 1) - gammaln(kp2))
    s = x.w * y.w.conjugate()
    su11 = np.sum(c2 * s ** m)
    return complex(boson * su11)


def kernel_matrix(points, k) -> np.ndarray:
    """Gram matrix ``G[i, j] = K(x_i; conj(x_j))``."""
    pts = [_point(p) for p in points]
    z = np.array([p.z for p in pts])
    w = np.array([p.w for p in pts])
    zc, wc = z.conj()[None, :], w.conj()[None, :]
    zi, wi = z[:, None], w[:, None]
    d = 1 - wi * wc
    expo = (2 * zc * zi + zi ** 2 * wc + zc ** 2 * wi) / (2 * d)
    return np.exp(-2 * _kf(k) * np.log(d) + expo)


# --------------------------------------------------------------------------
# Kähler geometry
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class MetricComponents:
    """Mixed second derivatives of the Kähler potential at a point."""

    f_zzbar: float
    f_zwbar: complex
    f_wwbar: float

    def as_matrix(self) -> np.ndarray:
        """Hermitian matrix ``[[f_zz̄, f_zw̄], [conj(f_zw̄), f_ww̄]]``."""
        return np.array([[self.f_zzbar, self.f_zwbar], [self.f_zwbar.conjugate(), self.f_wwbar]])

    @property
    def det(self) -> float:
        return self.f_zzbar * self.f_wwbar - abs(self.f_zwbar) ** 2

    def is_positive_definite(self) -> bool:
        return self.f_zzbar > 0 and self.det > 0


def kahler_potential(x, k) -> float:
    """``f = log K(x; conj(x)) = (2|z|^2 + z^2 conj(w) + conj(z)^2 w) / (2P) - 2k log P``, P = 1-|w|^2."""
    x = _point(x)
    z, w = x.z, x.w
    p = 1 - abs(w) ** 2
    return ((2 * abs(z) ** 2 + 2 * (z * z * w.conjugate()).real) / (2 * p)) - 2 * _kf(k) * math.log(p)


def kahler_potential_and_metric(x, k) -> tuple[float, MetricComponents]:
    """Potential and the analytic metric components at ``x``."""
    x = _point(x)
    z, w = x.z, x.w
    p = 1 - abs(w) ** 2
    g = MetricComponents(
        1 / p,
        (z + w * z.conjugate()) / p ** 2,
        abs(z.conjugate() + w.conjugate() * z) ** 2 / p ** 3 + 2 * _kf(k) / p ** 2,
    )
    return kahler_potential(x, k), g


def _hessian_fd(f, base: np.ndarray, h: float) -> np.ndarray:
    n = base.size
    H = np.empty((n, n))
    e = np.eye(n) * h
    for i in range(n):
        for j in range(i, n):
            H[i, j] = H[j, i] = (f(base + e[i] + e[j]) - f(base + e[i] - e[j])
                                 - f(base - e[i] + e[j]) + f(base - e[i] - e[j])) / (4 * h * h)
    return H


def metric_finite_difference(x, k, h: float = 1e-3) -> MetricComponents:
    """Central-difference Hessian of the potential in real coordinates,
    Richardson-extrapolated over steps h and h/2, then combined into the
    mixed Wirtinger derivatives, e.g. ``f_{z w̄} = ((f_xu + f_yv) + i (f_xv - f_yu)) / 4``.
    """
    x = _point(x)
    base = np.array([x.z.real, x.z.imag, x.w.real, x.w.imag])

    def f(v):
        return kahler_potential(JacobiCSPoint(complex(v[0], v[1]), complex(v[2], v[3])), k)

    H = (4 * _hessian_fd(f, base, h / 2) - _hessian_fd(f, base, h)) / 3
    return MetricComponents(
        (H[0, 0] + H[1, 1]) / 4,
        complex(H[0, 2] + H[1, 3], H[0, 3] - H[1, 2]) / 4,
        (H[2, 2] + H[3, 3]) / 4,
    )


def volume_and_measure_density(x, k) -> tuple[float, float, float]:
    """Return ``(vol, dnu, weight)`` at ``x`` with respect to ``dRe z dIm z dRe w dIm w``.

    vol
        Density of ``omega ^ omega``, ``16k / P^3`` (eight times det G).
    dnu
        Invariant measure density ``1 / P^3``.
    weight
        Integrand weight of the scalar product, equal to ``1 / K(x; conj(x))``.
    """
    x = _point(x)
    p = 1 - abs(x.w) ** 2
    kf = _kf(k)
    return 16 * kf / p ** 3, 1 / p ** 3, math.exp(-kahler_potential(x, k))


def action_jacobian_fd(h: JacobiElement, x, step: float = 1e-6) -> float:
    """Real 4x4 Jacobian determinant of ``x -> h.x`` by central differences."""
    x = _point(x)
    base = np.array([x.z.real, x.z.imag, x.w.real, x.w.imag])

    def img(v):
        y = jacobi_act(h, JacobiCSPoint(complex(v[0], v[1]), complex(v[2], v[3])))
        return np.array([y.z.real, y.z.imag, y.w.real, y.w.imag])

    J = np.empty((4, 4))
    for i in range(4):
        e = np.zeros(4)
        e[i] = step
        J[:, i] = (img(base + e) - img(base - e)) / (2 * step)
    return float(np.linalg.det(J))


def normalization_constant(k) -> float:
    """``Lambda = (4k - 3) / (2 pi^2)``; finite only for k > 3/4."""
    kf = _kf(k)
    if not kf > 0.75:
        raise WeightError(f"normalisation needs k > 3/4, got k = {kf}")
    return (4 * kf - 3) / (2 * math.pi ** 2)


# --------------------------------------------------------------------------
# Monte Carlo scalar product
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    stderr: float
    samples: int
    seed: int

    def to_json(self) -> str:
        return json.dumps({"value_re": self.value.real, "value_im": self.value.imag,
                           "stderr": self.stderr, "samples": self.samples, "seed": self.seed},
                          sort_keys=True)


def sample_measure(n: int, k, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Draw n points from the probability measure ``Lambda K(x; conj(x))^-1 dnu``.

    ``|w|^2 ~ Beta(1, 2k - 3/2)`` with uniform phase; given w, ``(Re z, Im z)``
    is Gaussian with covariance ``(P/2) A^-1``, ``A = [[1+Re w, Im w], [Im w, 1-Re w]]``.
    """
    kf = _kf(k)
    if not kf > 0.75:
        raise WeightError(f"the measure is normalisable only for k > 3/4, got k = {kf}")
    s = rng.beta(1.0, 2 * kf - 1.5, size=n)
    phi = rng.uniform(0.0, 2 * math.pi, size=n)
    w = np.sqrt(s) * np.exp(1j * phi)
    u, v = w.real, w.imag
    # A^-1 = [[1-u, -v], [-v, 1+u]] / P, so cov = [[1-u, -v], [-v, 1+u]] / 2
    # Cholesky of that 2x2 block, written out
    c11 = np.sqrt((1 - u) / 2)
    c21 = -v / 2 / c11
    c22 = np.sqrt(np.maximum((1 + u) / 2 - c21 ** 2, 0.0))
    g1, g2 = rng.standard_normal(n), rng.standard_normal(n)
    zr = c11 * g1
    zi = c21 * g1 + c22 * g2
    return zr + 1j * zi, w


def _batch_stats(fa, fb, k, n, seed_seq):
    rng = np.random.default_rng(seed_seq)
    z, w = sample_measure(n, k, rng)
    vals = np.conj(np.asarray(fa(z, w), dtype=complex)) * np.asarray(fb(z, w), dtype=complex)
    vals = np.broadcast_to(vals, z.shape)
    mean = vals.mean()
    m2 = float(np.sum(np.abs(vals - mean) ** 2))
    return n, mean, m2


def inner_product_quadrature(
    fa: Callable, fb: Callable, k, budget: int = 10 ** 6, seed: int = 0,
    tol: float | None = None, batch_size: int = 1 << 17, workers: int | None = None,
) -> QuadratureResult:
    """Monte Carlo estimate of ``(fa, fb) = Lambda int conj(fa) fb K^-1 dnu``.

    Samples are drawn exactly from the normalised weight, so the estimator is
    the plain mean of ``conj(fa) fb``. ``fa`` and ``fb`` take arrays ``(z, w)``.
    Batches get independent child seeds and are merged in order with the
    pairwise mean/variance update, so the result does not depend on ``workers``.
    """
    if budget < 2:
        raise ValueError("budget must be at least 2 samples")
    nb = -(-budget // batch_size)
    sizes = [batch_size] * (nb - 1) + [budget - batch_size * (nb - 1)]
    children = np.random.SeedSequence(seed).spawn(nb)
    workers = workers or thread_cap()
    if workers > 1 and nb > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            stats = list(ex.map(lambda a: _batch_stats(fa, fb, k, *a), zip(sizes, children)))
    else:
        stats = [_batch_stats(fa, fb, k, n, c) for n, c in zip(sizes, children)]
    n_tot, mean, m2 = 0, 0j, 0.0
    for n, mu, q in stats:
        delta = mu - mean
        tot = n_tot + n
        mean = mean + delta * n / tot
        m2 = m2 + q + abs(delta) ** 2 * n_tot * n / tot
        n_tot = tot
    stderr = math.sqrt(m2 / (n_tot - 1) / n_tot)
    if tol is not None and stderr > tol:
        warnings.warn(f"standard error {stderr:.3g} above requested {tol:.3g}; raise the budget",
                      BudgetWarning, stacklevel=2)
    return QuadratureResult(complex(mean), stderr, n_tot, seed)


# --------------------------------------------------------------------------
# Mehler formula
# --------------------------------------------------------------------------

def mehler_sum(x, y, s, cutoff: int = 80) -> complex:
    """Partial sum ``sum_{n<=cutoff} (s/2)^n / n! H_n(x) H_n(y)``.

    Uses the normalised recurrence for ``H_n / sqrt(2^n n!)`` to stay finite.
    """
    x, y, s = complex(x), complex(y), complex(s)
    hx0, hy0 = 1.0 + 0j, 1.0 + 0j
    hx1, hy1 = math.sqrt(2) * x, math.sqrt(2) * y
    total = hx0 * hy0
    if cutoff >= 1:
        total += s * hx1 * hy1
    sn = s
    for n in range(1, cutoff):
        a, b = math.sqrt(2 / (n + 1)), math.sqrt(n / (n + 1))
        hx0, hx1 = hx1, a * x * hx1 - b * hx0
        hy0, hy1 = hy1, a * y * hy1 - b * hy0
        sn *= s
        total += sn * hx1 * hy1
    return total


def mehler_closed(x, y, s) -> complex:
    """``(1 - s^2)^(-1/2) exp((2xys - (x^2 + y^2) s^2) / (1 - s^2))`` for |s| < 1."""
    x, y, s = complex(x), complex(y), complex(s)
    if not abs(s) < 1:
        raise ValueError("Mehler formula needs |s| < 1")
    d = 1 - s * s
    return cmath.exp((2 * x * y * s - (x * x + y * y) * s * s) / d) / cmath.sqrt(d)


def kahler_transform_residual(h: JacobiElement, x, k) -> float:
    """Relative residual of ``K(h.x; conj(h.x)) |lambda(h, x)|^2 = K(x; conj(x))``,
    evaluated in the log domain."""
    x = _point(x)
    hx = jacobi_act(h, x)
    lam = cocycle(h, x, k)
    lhs = kahler_potential(hx, k) + 2 * math.log(abs(lam))
    rhs = kahler_potential(x, k)
    return abs(math.expm1(lhs - rhs))
