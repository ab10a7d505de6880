from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from jacobi_cs.diffops import (
    GENERATOR_TABLE,
    K,
    ONE,
    W,
    Z,
    BivariatePoly,
    DiffOp,
    GaussianRational,
    adjoint_kernel_check,
    apply_to_basis,
    check_commutation_table,
    expand_in_basis,
    jacobi_identity_residuals,
    make_generators,
    op_commutator,
    unnormalized_basis,
)
from jacobi_cs.fock import build_rep
from jacobi_cs.kernel import kernel_closed

from conftest import points

half = Fraction(1, 2)
small = st.integers(-5, 5)


@st.composite
def polys(draw, max_terms=4, max_deg=3):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        key = (draw(st.integers(0, max_deg)), draw(st.integers(0, max_deg)), 0)
        terms[key] = GaussianRational(draw(small), draw(small))
    return BivariatePoly(terms)


# Gaussian rationals and polynomials ---------------------------------------------

def test_gaussian_rational_arithmetic():
    a, b = GaussianRational(1, 2), GaussianRational(Fraction(1, 3), -1)
    assert a * b == GaussianRational(Fraction(1, 3) + 2, Fraction(2, 3) - 1)
    assert (a / b) * b == a
    assert complex(a.conjugate()) == 1 - 2j


def test_partial_examples():
    assert (Z * Z * W).partial_z() == Z * W * 2
    assert (Z + W) * (Z - W) == Z * Z - W * W
    p3 = Z ** 3 + Z * W * 3
    assert p3.partial_w() == Z * 3


def test_zero_coefficients_dropped():
    p = Z + W - Z
    assert p == W and len(p.terms) == 1


@given(polys(), polys(), polys())
def test_ring_axioms(p, q, r):
    assert p * (q + r) == p * q + p * r
    assert (p * q) * r == p * (q * r)
    assert p + q == q + p and p * q == q * p


@given(polys(), polys())
def test_leibniz(p, q):
    assert (p * q).partial_z() == p.partial_z() * q + p * q.partial_z()
    assert (p * q).partial_w() == p.partial_w() * q + p * q.partial_w()


@given(polys(), st.complex_numbers(max_magnitude=2), st.complex_numbers(max_magnitude=2))
def test_evaluate_is_homomorphism(p, z, w):
    q = p * p + Z
    assert q.evaluate(z, w) == pytest.approx(p.evaluate(z, w) ** 2 + z, abs=1e-9, rel=1e-12)


def test_symbolic_weight_substitution():
    p = K * W * 2 + ONE
    assert p.symbolic and not p.subs_k(Fraction(3, 2)).symbolic
    assert p.subs_k(Fraction(3, 2)) == W * 3 + ONE


# generators ------------------------------------------------------------------------

def test_generator_actions():
    g = make_generators(None)
    assert g["a"](Z * Z) == Z * 2
    assert g["K+"](ONE) == Z * Z * half + K * W * 2
    assert g["K0"](ONE) == K
    assert g["a+"](ONE) == Z


def test_generator_str():
    assert str(make_generators(None)["K+"]) == "(1/2)z^2 + 2kw + zw d/dz + w^2 d/dw"
    assert str(make_generators(None)["a"]) == "d/dz"


@pytest.mark.parametrize("k", [None, 1, Fraction(3, 2), Fraction(7, 3)])
def test_commutation_table_exact(k):
    rows = check_commutation_table(k)
    assert len(rows) == len(GENERATOR_TABLE) == 10
    assert all(r["zero"] for r in rows), [r for r in rows if not r["zero"]]


def test_named_commutators():
    g = make_generators(None)
    assert op_commutator(g["a"], g["a+"]) == DiffOp(ONE)
    assert op_commutator(g["K-"], g["a+"]) == g["a"]
    assert op_commutator(g["K0"], g["a"]) == g["a"].scale(-half)


def test_jacobi_identity():
    res = jacobi_identity_residuals(None)
    assert len(res) == 20 and all(r[3] for r in res)


@given(st.sampled_from(list("ab")), st.sampled_from(["K0", "K+", "K-", "a", "a+"]))
def test_commutator_antisymmetric(x, y):
    g = make_generators(None)
    A, B = g["a" if x == "a" else "a+"], g[y]
    assert op_commutator(A, B) == op_commutator(B, A).scale(-1)


@given(polys(), polys())
def test_commutator_matches_composition(f, p):
    g = make_generators(Fraction(5, 4))
    A, B = g["K+"], g["a+"] + g["K-"].scale(3)
    lhs = A(B(f)) - B(A(f))
    assert op_commutator(A, B)(f) == lhs


# basis expansion ------------------------------------------------------------------------

@given(st.integers(0, 6), st.integers(0, 4))
def test_expand_basis_roundtrip(n, m):
    assert expand_in_basis(unnormalized_basis(n, m)) == {(n, m): GaussianRational(1)}


@given(polys(max_deg=4))
def test_expand_reconstructs(p):
    rebuilt = BivariatePoly()
    for (n, m), c in expand_in_basis(p).items():
        rebuilt = rebuilt + unnormalized_basis(n, m) * c
    assert rebuilt == p


def test_apply_to_basis_examples():
    g = make_generators(None)
    k = Fraction(3, 2)
    assert apply_to_basis(g["a"], 1, 0, k) == {(0, 0): pytest.approx(1)}
    assert apply_to_basis(g["a+"], 0, 0, k) == {(1, 0): pytest.approx(1)}
    (idx, c), = apply_to_basis(g["K-"], 0, 1, k).items()
    assert idx == (0, 0) and c == pytest.approx(np.sqrt(2 * (1.5 - 0.25)))


def test_apply_to_basis_overflow():
    with pytest.raises(OverflowError):
        apply_to_basis(make_generators(None)["K+"], 3, 3, 1, max_index=3)


@pytest.mark.parametrize("k", [1, Fraction(3, 2)])
@pytest.mark.parametrize("name", ["a", "a+", "K0", "K+", "K-"])
def test_basis_matrix_matches_fock(name, k):
    gen = make_generators(k)[name]
    rep = build_rep(10, 10, k)
    mat = rep.generators()[name].toarray()
    worst = 0.0
    for n in range(6):
        for m in range(6):
            col = apply_to_basis(gen, n, m, k, max_index=10)
            expect = np.zeros(rep.dim, dtype=complex)
            for (p, q), c in col.items():
                expect[rep.index(p, q)] = c
            worst = max(worst, np.max(np.abs(mat[:, rep.index(n, m)] - expect)))
    assert worst < 1e-10


# kernel adjoint ---------------------------------------------------------------------

def test_adjoint_origin():
    assert adjoint_kernel_check("a", (0, 0), (0, 0), 1) == 0


@given(points(), points())
def test_adjoint_a_closed_form(x, y):
    k = Fraction(3, 2)
    z, w, zb, wb = x.z, x.w, y.z.conjugate(), y.w.conjugate()
    h = 1e-6
    Kxy = kernel_closed(x, y, k)
    dK = (kernel_closed((z + h, w), y, k) - kernel_closed((z - h, w), y, k)) / (2 * h)
    assert dK == pytest.approx((zb + z * wb) / (1 - w * wb) * Kxy, rel=1e-7, abs=1e-9)
    assert adjoint_kernel_check("a", x, y, k) < 1e-13


@given(points(), points(), st.sampled_from(["a", "a+", "K0", "K+", "K-"]))
def test_adjoint_all_generators(x, y, name):
    assert adjoint_kernel_check(name, x, y, 2) < 1e-12
    assert adjoint_kernel_check(name, x, y, 2, method="fd") < 1e-8


def test_adjoint_bad_method():
    with pytest.raises(ValueError):
        adjoint_kernel_check("a", (0, 0), (0, 0), 1, method="spline")
