"""Reordering displacement and squeeze operators.

Displacement ``D(alpha) = exp(alpha a+ - conj(alpha) a)`` and squeeze
``S(z, theta) = exp(2i theta K0 + z K+ - conj(z) K-)`` do not commute, but
because the Heisenberg algebra is an ideal every reordering only moves the
displacement label linearly and produces a phase. The functions here return
those labels and phases as plain complex numbers.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ._util import wrap_angle
from .algebra import (
    JacobiCSPoint,
    JacobiElement,
    SU11Matrix,
    _power,
    check_disk,
    cs_si,
    mobius_act,
    su11_product_with_phase,
    z_of_w,
)

__all__ = [
    "BogoliubovMatrix", "NormalizedCSLabel", "bogoliubov_matrix",
    "interchange_displacement", "interchange_displacement_inverse",
    "interchange_displacement_w", "su11_adjoint_alpha", "compose_DS_pair",
    "squeeze_shift", "psi_to_cs", "cs_to_psi", "heisenberg_phase",
    "cocycle_via_chain",
]


@dataclass(frozen=True)
class BogoliubovMatrix:
    """``[[M, N], [P, Q]]`` acting on the column ``(a, a+)``; P = conj(N), Q = M."""

    M: complex
    N: complex
    P: complex
    Q: complex

    def as_array(self) -> np.ndarray:
        return np.array([[self.M, self.N], [self.P, self.Q]])

    def apply(self, alpha) -> complex:
        """First component of ``D @ (alpha, conj(alpha))``."""
        alpha = complex(alpha)
        return self.M * alpha + self.N * alpha.conjugate()

    def is_valid(self, tol: float = 1e-12) -> bool:
        return (abs(self.P - self.N.conjugate()) <= tol * max(1, abs(self.N))
                and abs(self.Q - self.M) <= tol * max(1, abs(self.M))
                and abs(abs(self.M) ** 2 - abs(self.N) ** 2 - 1) <= tol * max(1, abs(self.M) ** 2))


def bogoliubov_matrix(z) -> BogoliubovMatrix:
    """``exp([[0, z], [conj(z), 0]]) = [[cosh|z|, (z/|z|) sinh|z|], [c.c., cosh|z|]]``."""
    z = complex(z)
    ch, sh_over_r = cs_si(abs(z) ** 2)
    n = z * sh_over_r
    return BogoliubovMatrix(complex(ch), n, n.conjugate(), complex(ch))


@dataclass(frozen=True)
class NormalizedCSLabel:
    """Label (alpha, w) of the normalised state ``D(alpha) S(w) e0``."""

    alpha: complex
    w: complex

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "w", check_disk(self.w))


def interchange_displacement(alpha, z, theta: float = 0.0) -> complex:
    """beta1 with ``D(alpha) S(z, theta) = S(z, theta) D(beta1)``."""
    alpha, z = complex(alpha), complex(z)
    cs, si = cs_si(abs(z) ** 2 - theta * theta)
    return alpha * cs - (1j * theta * alpha + z * alpha.conjugate()) * si


def interchange_displacement_inverse(beta, z, theta: float = 0.0) -> complex:
    """Recover alpha from beta1 (inverse of :func:`interchange_displacement`)."""
    beta, z = complex(beta), complex(z)
    cs, si = cs_si(abs(z) ** 2 - theta * theta)
    return beta * cs + (1j * theta * beta + z * beta.conjugate()) * si


def interchange_displacement_w(alpha, w) -> complex:
    """theta = 0 case written with the disk variable: ``(alpha - conj(alpha) w) / sqrt(1-|w|^2)``."""
    alpha, w = complex(alpha), check_disk(w)
    return (alpha - alpha.conjugate() * w) / math.sqrt(1 - abs(w) ** 2)


def su11_adjoint_alpha(g: SU11Matrix, alpha) -> complex:
    """alpha_g with ``S(g) D(alpha) S(g)^-1 = D(alpha_g)``."""
    return g.act_alpha(alpha)


def heisenberg_phase(alpha2, alpha1) -> float:
    """``Im(alpha2 conj(alpha1))``: D(alpha2) D(alpha1) = exp(i theta_h) D(alpha2 + alpha1)."""
    return (complex(alpha2) * complex(alpha1).conjugate()).imag


class DSComposition(NamedTuple):
    A: complex
    w: complex
    phase: float


def compose_DS_pair(alpha2, z2, alpha1, w1, k) -> DSComposition:
    """Label and phase of ``D(alpha2) S(z2) Psi_{alpha1,w1} = exp(i phase) Psi_{A,w}``."""
    alpha1, w1 = complex(alpha1), check_disk(w1)
    moved = bogoliubov_matrix(z2).apply(alpha1)
    w3, theta_s = su11_product_with_phase(z_of_w(w1), z2)
    phase = heisenberg_phase(alpha2, moved) + float(k) * theta_s
    return DSComposition(complex(alpha2) + moved, check_disk(w3), wrap_angle(phase))


class SqueezeShift(NamedTuple):
    gamma: complex
    eta: float
    alpha: complex


def squeeze_shift(beta, z, alpha=0j) -> SqueezeShift:
    """``D(beta) S(z) D(alpha) e0 = exp(i eta) S(z) D(alpha + gamma) e0``.

    Returns gamma, the phase eta = Im(gamma conj(alpha)) and the shifted label.
    """
    alpha = complex(alpha)
    gamma = bogoliubov_matrix(-complex(z)).apply(beta)
    return SqueezeShift(gamma, wrap_angle((gamma * alpha.conjugate()).imag), alpha + gamma)


def psi_to_cs(label: NormalizedCSLabel, k) -> tuple[complex, JacobiCSPoint]:
    """Write ``Psi_{alpha,w} = c e_{z,w}`` and return ``(c, (z, w))``, z = alpha - w conj(alpha)."""
    al, w = label.alpha, label.w
    z = al - w * al.conjugate()
    c = (1 - abs(w) ** 2) ** float(k) * cmath.exp(-al.conjugate() * z / 2)
    return c, JacobiCSPoint(z, w)


def cs_to_psi(x: JacobiCSPoint, k) -> tuple[complex, NormalizedCSLabel]:
    """Inverse of :func:`psi_to_cs`: ``e_{z,w} = c Psi_{alpha,w}`` with
    ``alpha = (z + conj(z) w)/(1 - |w|^2)``."""
    z, w = x.z, x.w
    alpha = (z + z.conjugate() * w) / (1 - abs(w) ** 2)
    c, _ = psi_to_cs(NormalizedCSLabel(alpha, w), k)
    return 1 / c, NormalizedCSLabel(alpha, w)


def cocycle_via_chain(h: JacobiElement, x, k) -> tuple[complex, JacobiCSPoint]:
    """Multiplier of ``S(g) D(alpha) e_{z,w}`` assembled step by step from the
    elementary reorderings, independently of the closed forms in
    :mod:`jacobi_cs.algebra`. Returns ``(lambda, image point)``.
    """
    x = x if isinstance(x, JacobiCSPoint) else JacobiCSPoint(*x)
    g, al = h.g, h.alpha
    # e_{z,w} = c0 Psi_{alpha0, w}
    c0, lab = cs_to_psi(x, k)
    # D(alpha) D(alpha0) = exp(i theta_h) D(alpha + alpha0)
    lam = c0 * cmath.exp(1j * heisenberg_phase(al, lab.alpha))
    alpha1 = al + lab.alpha
    # S(g) D(alpha1) = D(alpha_g) S(g)
    alpha2 = su11_adjoint_alpha(g, alpha1)
    # S(w) e0 = (1-|w|^2)^k e_{0,w};  S(g) e_{0,w} = j^(-2k) e_{0,g.w}
    lam *= (1 - abs(x.w) ** 2) ** float(k) * _power(g, x.w, k)
    w1 = mobius_act(g, x.w)
    # e_{0,w1} = (1-|w1|^2)^(-k) S(w1) e0, then Psi_{alpha2,w1} = c e_{z1,w1}
    lam *= (1 - abs(w1) ** 2) ** (-float(k))
    c2, point = psi_to_cs(NormalizedCSLabel(alpha2, w1), k)
    return lam * c2, point
