import csv
import io
import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jacobi_cs.dynamics import (
    HamiltonianCoeffs,
    geodesic_rhs,
    geodesic_rhs_fd,
    integrate_flow,
    integrate_geodesic,
    metric_speed,
    riccati_rhs,
    riccati_rhs_from_generators,
    riccati_rhs_printed,
)
from jacobi_cs.verify import random_hamiltonian

from conftest import disk, points

reals = st.floats(-1, 1, allow_nan=False)


@st.composite
def hamiltonians(draw, hermitian=True):
    if hermitian:
        return HamiltonianCoeffs(draw(disk()), draw(reals), draw(disk()))
    return HamiltonianCoeffs(draw(disk()), draw(disk()), draw(disk()), draw(disk()), draw(disk()), hermitian=False)


# coefficients -----------------------------------------------------------------------------

def test_hermitian_defaults():
    H = HamiltonianCoeffs(1 + 2j, 0.5, 0.3j)
    assert H.eps_adag == 1 - 2j and H.eps_minus == -0.3j


def test_hermitian_validation():
    with pytest.raises(ValueError):
        HamiltonianCoeffs(eps_0=1j)
    with pytest.raises(ValueError):
        HamiltonianCoeffs(eps_plus=1, eps_minus=2)
    assert HamiltonianCoeffs(eps_0=1j, eps_minus=2, hermitian=False).eps_minus == 2


# right-hand side -------------------------------------------------------------------------------

def test_rhs_zero():
    assert riccati_rhs((0.3, 0.2j), HamiltonianCoeffs()) == (0, 0)


def test_rhs_rotation():
    z, w = 0.4 - 0.1j, 0.3 + 0.2j
    dz, dw = riccati_rhs((z, w), HamiltonianCoeffs(eps_0=1.3))
    assert dz == pytest.approx(-0.65j * z) and dw == pytest.approx(-1.3j * w)


@given(points(), hamiltonians(hermitian=False))
def test_rhs_matches_generator_assembly(x, H):
    assert riccati_rhs(x, H) == pytest.approx(riccati_rhs_from_generators(x, H), abs=1e-14)


def test_printed_rhs_differs():
    H = HamiltonianCoeffs(eps_a=0.5)
    assert riccati_rhs((0.1, 0.3), H) != pytest.approx(riccati_rhs_printed((0.1, 0.3), H))


@given(hamiltonians(), disk(1.0), st.floats(0, 2 * math.pi))
def test_boundary_vector_field_is_tangent(H, z, phi):
    # on |w| = 1 the w-velocity has no outward component
    w = complex(math.cos(phi), math.sin(phi))
    _, dw = riccati_rhs((z, w), H)
    assert (dw * w.conjugate()).real == pytest.approx(0, abs=1e-12)


# flows ----------------------------------------------------------------------------------

def test_zero_hamiltonian_constant():
    tr = integrate_flow((0.3, 0.2j), HamiltonianCoeffs(), (0, 1), dt=0.1)
    assert np.all(tr.z == 0.3) and np.all(tr.w == 0.2j)


def test_rotation_preserves_modulus():
    tr = integrate_flow((0.2, 0.5), HamiltonianCoeffs(eps_0=1.0), (0, 10), dt=1e-3)
    assert np.max(np.abs(np.abs(tr.w) - 0.5)) < 1e-8
    assert tr.final.w == pytest.approx(0.5 * np.exp(-10j), abs=1e-8)
    assert tr.final.z == pytest.approx(0.2 * np.exp(-5j), abs=1e-8)


@pytest.mark.parametrize("eps", [0.3, 1.0, 2.0])
def test_tanh_flow(eps):
    tr = integrate_flow((0, 0), HamiltonianCoeffs(eps_plus=eps), (0, 3), dt=1e-3)
    assert np.max(np.abs(tr.w + 1j * np.tanh(eps * tr.t))) < 1e-7


@settings(max_examples=15)
@given(hamiltonians(), points(wmax=0.9))
def test_hermitian_flow_stays_in_disk(H, x):
    tr = integrate_flow(x, H, (0, 5), dt=1e-2)
    assert tr.event is None and tr.max_abs_w < 1


def test_random_hamiltonian_runs_stay_in_disk():
    rng = np.random.default_rng(0)
    for _ in range(10):
        tr = integrate_flow((complex(*rng.uniform(-1, 1, 2)), 0.5 * complex(*rng.uniform(-1, 1, 2))),
                            random_hamiltonian(rng), (0, 10), dt=1e-2)
        assert tr.event is None


def test_non_hermitian_exit_event():
    H = HamiltonianCoeffs(eps_0=2j, hermitian=False)
    tr = integrate_flow((0, 0.5), H, (0, 5), dt=1e-2)
    assert tr.event is not None and "disk exit" in tr.event
    assert tr.t[-1] < 5


def test_trajectory_csv_and_manifest():
    tr = integrate_flow((0.1, 0.2), HamiltonianCoeffs(eps_0=1), (0, 0.1), dt=0.01, sample_every=5)
    rows = list(csv.reader(io.StringIO(tr.to_csv())))
    assert rows[0] == ["t", "re_z", "im_z", "re_w", "im_w"] and len(rows) == len(tr) + 1 == 4
    assert float(rows[-1][0]) == pytest.approx(0.1)
    man = json.loads(tr.manifest(seed=1))
    assert man["samples"] == 3 and man["event"] is None and man["seed"] == 1


def test_bad_step():
    with pytest.raises(ValueError):
        integrate_flow((0, 0), HamiltonianCoeffs(), dt=0)


# geodesics --------------------------------------------------------------------------------

def test_geodesic_rhs_trivial():
    assert geodesic_rhs((0.3, 0.1j), (0, 0), 1) == (0, 0)
    ddz, ddw = geodesic_rhs((0, 0), (0, 0.7), Fraction(3, 2))
    assert ddz == 0 and ddw == 0


@given(points(), disk(1.0), disk(1.0), st.sampled_from([1, Fraction(3, 2), 2]))
def test_geodesic_rhs_matches_christoffel(x, dz, dw, k):
    an = geodesic_rhs(x, (dz, dw), k)
    fd = geodesic_rhs_fd(x, (dz, dw), k)
    assert abs(an[0] - fd[0]) < 1e-5 * max(1, abs(an[0])) and abs(an[1] - fd[1]) < 1e-5 * max(1, abs(an[1]))


def test_geodesic_constant():
    tr = integrate_geodesic((0.2, 0.1), (0, 0), 1, (0, 1), dt=0.1)
    assert np.all(tr.z == 0.2) and tr.extra["speed_drift"] == 0


def test_pure_w_geodesic_stays_in_factor():
    tr = integrate_geodesic((0, 0), (0, 0.3), Fraction(3, 2), (0, 5), dt=1e-3)
    assert np.max(np.abs(tr.z)) == 0
    # radial geodesic of the disk factor
    assert np.max(np.abs(tr.w - np.tanh(0.3 * tr.t))) < 1e-10


@settings(max_examples=8)
@given(points(zmax=0.7, wmax=0.4), disk(0.4), disk(0.3))
def test_geodesic_speed_conserved(x, dz, dw):
    tr = integrate_geodesic(x, (dz, dw), Fraction(3, 2), (0, 5), dt=1e-3, sample_every=100)
    assert tr.event is None and tr.extra["speed_drift"] < 1e-6


def test_metric_speed_origin():
    assert metric_speed((0, 0), (1, 1), 2) == pytest.approx(1 + 4)
