"""Equations of motion on C x D1: Riccati flows of linear Hamiltonians and
geodesics of the invariant Kähler metric.

For ``H = e_a a + e_a+ a+ + e0 K0 + e+ K+ + e- K-`` the velocity is read off the
vector-field parts of the differential generators, ``i dx/dt = sum_X e_X Q_X``::

    i dz/dt = e_a + e_a+ w + e0 z / 2 + e+ z w
    i dw/dt = e-  + e0 w  + e+ w^2

The w equation is a Möbius-type Riccati equation that keeps the disk
invariant when H is hermitian (e_a+ = conj(e_a), e- = conj(e+), e0 real).
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .algebra import JacobiCSPoint, _point
from .diffops import make_generators
from .kernel import _kf, kahler_potential_and_metric

__all__ = [
    "HamiltonianCoeffs", "Trajectory", "riccati_rhs", "riccati_rhs_printed",
    "riccati_rhs_from_generators", "integrate_flow", "geodesic_rhs",
    "christoffel_fd", "geodesic_rhs_fd", "metric_speed", "integrate_geodesic",
]


@dataclass(frozen=True)
class HamiltonianCoeffs:
    """Coefficients of a Hamiltonian linear in a, a+, K0, K+, K-.

    With ``hermitian=True`` the a+ and K- coefficients default to the
    conjugates of ``eps_a`` and ``eps_plus`` and ``eps_0`` must be real.
    """

    eps_a: complex = 0j
    eps_0: complex = 0.0
    eps_plus: complex = 0j
    eps_minus: complex | None = None
    eps_adag: complex | None = None
    hermitian: bool = True

    def __post_init__(self):
        for name in ("eps_a", "eps_0", "eps_plus"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        em, ead = self.eps_minus, self.eps_adag
        if self.hermitian:
            if abs(self.eps_0.imag) > 0:
                raise ValueError("hermitian Hamiltonian needs a real eps_0")
            if em is not None and abs(complex(em) - self.eps_plus.conjugate()) > 1e-14:
                raise ValueError("hermitian Hamiltonian needs eps_minus = conj(eps_plus)")
            if ead is not None and abs(complex(ead) - self.eps_a.conjugate()) > 1e-14:
                raise ValueError("hermitian Hamiltonian needs eps_adag = conj(eps_a)")
            em, ead = self.eps_plus.conjugate(), self.eps_a.conjugate()
        object.__setattr__(self, "eps_minus", complex(em or 0))
        object.__setattr__(self, "eps_adag", complex(ead or 0))

    def as_dict(self) -> dict:
        return {"a": self.eps_a, "a+": self.eps_adag, "K0": self.eps_0,
                "K+": self.eps_plus, "K-": self.eps_minus}

    def to_json(self) -> dict:
        return {k: {"re": v.real, "im": v.imag} for k, v in self.as_dict().items()} | {"hermitian": self.hermitian}


def _zw(x) -> tuple[complex, complex]:
    # no disk check: intermediate RK stages may sit outside
    z, w = x
    return complex(z), complex(w)


def riccati_rhs(x, H: HamiltonianCoeffs) -> tuple[complex, complex]:
    """Velocity ``(dz/dt, dw/dt)`` of the flow generated by H."""
    z, w = _zw(x)
    iz = H.eps_a + H.eps_adag * w + 0.5 * H.eps_0 * z + H.eps_plus * z * w
    iw = H.eps_minus + H.eps_0 * w + H.eps_plus * w * w
    return -1j * iz, -1j * iw


def riccati_rhs_printed(x, H: HamiltonianCoeffs) -> tuple[complex, complex]:
    """Alternative right-hand side with ``conj(e_a)`` multiplying w in the w
    equation and absent from the z equation. Kept for comparison only; it
    does not follow from the generators and does not preserve the disk."""
    z, w = _zw(x)
    iz = H.eps_a + 0.5 * H.eps_0 * z + H.eps_plus * z * w
    iw = H.eps_minus + (H.eps_a.conjugate() + H.eps_0) * w + H.eps_plus * w * w
    return -1j * iz, -1j * iw


def riccati_rhs_from_generators(x, H: HamiltonianCoeffs) -> tuple[complex, complex]:
    """Same velocity assembled from the ``Qz``, ``Qw`` polynomials of the
    differential generators (independent of :func:`riccati_rhs`)."""
    z, w = _zw(x)
    gens = make_generators(None)
    iz = iw = 0j
    for name, eps in H.as_dict().items():
        iz += eps * gens[name].Qz.evaluate(z, w)
        iw += eps * gens[name].Qw.evaluate(z, w)
    return -1j * iz, -1j * iw


# --------------------------------------------------------------------------
# integrator
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Trajectory:
    """Samples ``(t, z(t), w(t))`` plus integrator metadata."""

    t: np.ndarray
    z: np.ndarray
    w: np.ndarray
    dt: float
    method: str = "rk4-richardson"
    max_abs_w: float = 0.0
    error_estimate: float = 0.0
    event: str | None = None
    extra: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.t)

    @property
    def final(self) -> JacobiCSPoint:
        return JacobiCSPoint(self.z[-1], self.w[-1])

    def to_csv(self) -> str:
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["t", "re_z", "im_z", "re_w", "im_w"])
        for t, z, w in zip(self.t, self.z, self.w):
            wr.writerow([repr(float(v)) for v in (t, z.real, z.imag, w.real, w.imag)])
        return buf.getvalue()

    def manifest(self, **info) -> str:
        out = {"dt": self.dt, "method": self.method, "samples": len(self), "max_abs_w": self.max_abs_w,
               "error_estimate": self.error_estimate, "event": self.event}
        out.update(info)
        return json.dumps(out, sort_keys=True, default=str)


def _rk4_step(f, t, y, h):
    k1 = f(t, y)
    k2 = f(t + h / 2, y + h / 2 * k1)
    k3 = f(t + h / 2, y + h / 2 * k2)
    k4 = f(t + h, y + h * k3)
    return y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def _integrate(f: Callable, y0: np.ndarray, t_span, dt: float, sample_every: int,
               w_index: int = 1, eps: float = 0.0, monitor: Callable | None = None):
    """RK4 with one full step and two half steps per step; the Richardson
    combination is kept and ``|half - full| / 15`` is the local error estimate.

    The run stops with an event once ``|w| >= 1 - eps``. The default eps = 0
    flags only a genuine exit: hyperbolic flows approach the circle
    exponentially and may legitimately come closer than any fixed margin.
    """
    t0, t1 = map(float, t_span)
    if not dt > 0:
        raise ValueError("dt must be positive")
    n_steps = max(1, int(math.ceil((t1 - t0) / dt - 1e-9)))
    h = (t1 - t0) / n_steps
    y = np.asarray(y0, dtype=complex).copy()
    ts, ys, mon = [t0], [y.copy()], [monitor(y) if monitor else None]
    err, max_w, event = 0.0, abs(y[w_index]), None
    for i in range(n_steps):
        t = t0 + i * h
        full = _rk4_step(f, t, y, h)
        half = _rk4_step(f, t + h / 2, _rk4_step(f, t, y, h / 2), h / 2)
        y = half + (half - full) / 15
        err = max(err, float(np.max(np.abs(half - full))) / 15)
        aw = abs(y[w_index])
        max_w = max(max_w, aw)
        if not np.all(np.isfinite(y)) or aw >= 1 - eps:
            event = f"disk exit at t={t + h:.6g} (|w|={aw:.6g})"
            break
        if (i + 1) % sample_every == 0 or i + 1 == n_steps:
            ts.append(t + h)
            ys.append(y.copy())
            if monitor:
                mon.append(monitor(y))
    return np.array(ts), np.array(ys), h, err, max_w, event, mon


def integrate_flow(x0, H: HamiltonianCoeffs, t_span=(0.0, 10.0), dt: float = 1e-3,
                   sample_every: int = 10) -> Trajectory:
    """Integrate the Riccati flow from ``x0``; stops early on a disk-exit event."""
    x0 = _point(x0)

    def f(t, y):
        dz, dw = riccati_rhs((y[0], y[1]), H)
        return np.array([dz, dw])

    ts, ys, h, err, max_w, event, _ = _integrate(f, [x0.z, x0.w], t_span, dt, sample_every)
    return Trajectory(ts, ys[:, 0], ys[:, 1], h, max_abs_w=max_w, error_estimate=err, event=event)


# --------------------------------------------------------------------------
# geodesics
# --------------------------------------------------------------------------

def geodesic_rhs(x, v, k) -> tuple[complex, complex]:
    """Accelerations ``(z'', w'')`` of the Kähler geodesic through x with velocity v.

    With ``P = 1 - |w|^2`` and ``b = conj(alpha0) = (conj(z) + z conj(w)) / P``::

        2k z'' = b z'^2 - 2 (2k conj(w)/P - b^2) z' w' + b^3 w'^2
        2k w'' = -(z'^2 + 2 b z' w' + (4k conj(w)/P + b^2) w'^2)
    """
    x = _point(x)
    dz, dw = complex(v[0]), complex(v[1])
    kf = _kf(k)
    p = 1 - abs(x.w) ** 2
    wb = x.w.conjugate()
    b = (x.z.conjugate() + x.z * wb) / p
    ddz = (b * dz * dz - 2 * (2 * kf * wb / p - b * b) * dz * dw + b ** 3 * dw * dw) / (2 * kf)
    ddw = -(dz * dz + 2 * b * dz * dw + (4 * kf * wb / p + b * b) * dw * dw) / (2 * kf)
    return ddz, ddw


def _metric_matrix(z, w, k):
    return kahler_potential_and_metric(JacobiCSPoint(z, w), k)[1].as_matrix()


def christoffel_fd(x, k, h: float = 1e-5) -> np.ndarray:
    """``Gamma[i, j, l] = g^{i m̄} d_j g_{l m̄}`` with holomorphic derivatives
    ``d_j = (d/dRe - i d/dIm) / 2`` taken by central differences of the
    analytic metric."""
    x = _point(x)
    g = _metric_matrix(x.z, x.w, k)
    ginv = np.linalg.inv(g)
    dg = np.empty((2, 2, 2), dtype=complex)  # dg[j] = d_j g
    for j in range(2):
        e = np.zeros(2, dtype=complex)
        e[j] = h
        dre = (_metric_matrix(x.z + e[0], x.w + e[1], k) - _metric_matrix(x.z - e[0], x.w - e[1], k)) / (2 * h)
        e = e * 1j
        dim = (_metric_matrix(x.z + e[0], x.w + e[1], k) - _metric_matrix(x.z - e[0], x.w - e[1], k)) / (2 * h)
        dg[j] = (dre - 1j * dim) / 2
    # g[l, m] is g_{l m̄}; ginv[m, i] is g^{i m̄} up to the transpose of the Hermitian inverse
    return np.einsum("mi,jlm->ijl", ginv, dg)


def geodesic_rhs_fd(x, v, k, h: float = 1e-5) -> tuple[complex, complex]:
    """Accelerations from the finite-difference Christoffel symbols."""
    G = christoffel_fd(x, k, h)
    vv = np.array([complex(v[0]), complex(v[1])])
    acc = -np.einsum("ijl,j,l->i", G, vv, vv)
    return complex(acc[0]), complex(acc[1])


def metric_speed(x, v, k) -> float:
    """``g(v, v) = sum g_{i j̄} v^i conj(v^j)``."""
    g = kahler_potential_and_metric(_point(x), k)[1].as_matrix()
    vv = np.array([complex(v[0]), complex(v[1])])
    return float(np.real(vv @ g @ vv.conj()))


def integrate_geodesic(x0, v0, k, t_span=(0.0, 5.0), dt: float = 1e-3, sample_every: int = 10) -> Trajectory:
    """Integrate the geodesic equations; ``extra['speed']`` holds the metric
    speed at every sample and ``extra['speed_drift']`` its largest relative change."""
    x0 = _point(x0)

    def f(t, y):
        ddz, ddw = geodesic_rhs((y[0], y[1]), (y[2], y[3]), k)
        return np.array([y[2], y[3], ddz, ddw])

    def speed(y):
        return metric_speed((y[0], y[1]), (y[2], y[3]), k)

    ts, ys, h, err, max_w, event, sp = _integrate(
        f, [x0.z, x0.w, v0[0], v0[1]], t_span, dt, sample_every, monitor=speed)
    sp = np.array(sp)
    drift = float(np.max(np.abs(sp - sp[0])) / max(abs(sp[0]), 1e-300)) if sp[0] else float(np.max(np.abs(sp)))
    return Trajectory(ts, ys[:, 0], ys[:, 1], h, max_abs_w=max_w, error_estimate=err, event=event,
                      extra={"speed": sp, "speed_drift": drift, "dz": ys[:, 2], "dw": ys[:, 3]})
