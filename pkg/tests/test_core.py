import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from antilinear.construct import TAU0, TAU1, TAU2, TAU3
from antilinear.core import (AntiLinearOp, DimensionError, LinearOp, adjoint, apply,
                             canonical_form, compose_aa, compose_al, compose_la, conjugation_k,
                             hermitian_part, inner, is_antiunitary, is_conjugation, is_hermitian,
                             is_skew, is_skew_conjugation, make_op, numerical_range_samples,
                             rank_one_c, scale, skew_part)

from conftest import random_matrix, random_op, random_vector

E1, E2 = np.array([1, 0], complex), np.array([0, 1], complex)
SIGMA3 = np.diag([1, -1])


def adjoint_oracle(op):
    """Matrix of the adjoint read off <e_j, adj e_k> = <e_k, op e_j>."""
    d = op.dim
    basis = np.eye(d)
    return np.array([[inner(basis[k], apply(op, basis[j])) for k in range(d)]
                     for j in range(d)])


def compose_oracle(theta2, theta1):
    basis = np.eye(theta1.dim)
    return np.stack([apply(theta2, apply(theta1, e)) for e in basis], axis=1)


seeds = st.integers(0, 2**32 - 1)
dims = st.integers(1, 16)


# -- construction and application -------------------------------------------

def test_make_op_scalar_conjugation():
    k = make_op(1, [[1]])
    assert apply(k, [2 + 3j])[0] == 2 - 3j


def test_make_op_identity_is_componentwise_conjugation():
    np.testing.assert_array_equal(apply(make_op(2, np.eye(2)), [1, 1j]), [1, -1j])


def test_make_op_tau0_columns_are_basis_images():
    # tau0(c1 e1 + c2 e2) = c1* e2 - c2* e1
    tau0 = make_op(2, [[0, -1], [1, 0]])
    np.testing.assert_array_equal(apply(tau0, E1), E2)
    np.testing.assert_array_equal(apply(tau0, E2), -E1)


@pytest.mark.parametrize("dim,mat", [(2, np.eye(3)), (2, np.ones((2, 3))), (0, np.zeros((0, 0)))])
def test_make_op_rejects_bad_shapes(dim, mat):
    with pytest.raises(DimensionError):
        make_op(dim, mat)


def test_make_op_rejects_nonfinite():
    with pytest.raises(ValueError):
        make_op(2, [[np.nan, 0], [0, 1]])


def test_representation_contract(rng):
    op = random_op(rng, 5)
    for k in range(5):
        np.testing.assert_array_equal(apply(op, np.eye(5)[k]), op.mat[:, k])


def test_apply_length_mismatch():
    with pytest.raises(DimensionError):
        apply(conjugation_k(3), [1, 2])


@settings(max_examples=60, deadline=None)
@given(seeds, dims)
def test_antilinearity(seed, d):
    rng = np.random.default_rng(seed)
    op = random_op(rng, d)
    p1, p2 = random_vector(rng, d), random_vector(rng, d)
    c1, c2 = complex(*rng.standard_normal(2)), complex(*rng.standard_normal(2))
    lhs = apply(op, c1 * p1 + c2 * p2)
    rhs = np.conj(c1) * apply(op, p1) + np.conj(c2) * apply(op, p2)
    assert np.max(np.abs(lhs - rhs)) < 1e-12 * max(1.0, np.max(np.abs(rhs)))


def test_matrix_is_readonly(rng):
    op = random_op(rng, 3)
    with pytest.raises(ValueError):
        op.mat[0, 0] = 1.0


# -- adjoint and scaling ------------------------------------------------------

def test_adjoint_of_k():
    np.testing.assert_array_equal(adjoint(conjugation_k(4)).mat, np.eye(4))


def test_adjoint_of_tau0_is_minus_tau0():
    tau0 = AntiLinearOp(TAU0)
    expected = np.array([[0, 1], [-1, 0]])
    np.testing.assert_array_equal(adjoint_oracle(tau0), expected)
    np.testing.assert_array_equal(adjoint(tau0).mat, expected)
    np.testing.assert_array_equal(adjoint(tau0).mat, -tau0.mat)


@pytest.mark.parametrize("d", [1, 2, 5, 8])
def test_adjoint_matches_definition_oracle(rng, d):
    op = random_op(rng, d)
    np.testing.assert_allclose(adjoint(op).mat, adjoint_oracle(op), atol=1e-13)


def test_adjoint_defining_identity(rng):
    worst = 0.0
    for _ in range(1000):
        d = int(rng.integers(1, 9))
        op = random_op(rng, d)
        p1, p2 = random_vector(rng, d), random_vector(rng, d)
        worst = max(worst, abs(inner(p1, apply(adjoint(op), p2)) - inner(p2, apply(op, p1))))
    assert worst < 1e-12


def test_adjoint_involution(rng):
    op = random_op(rng, 6)
    np.testing.assert_array_equal(adjoint(adjoint(op)).mat, op.mat)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(1, 8), st.integers(1, 5))
def test_adjoint_is_complex_linear(seed, d, n):
    rng = np.random.default_rng(seed)
    ops = [random_op(rng, d) for _ in range(n)]
    cs = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    total = sum((c * op for c, op in zip(cs, ops)), scale(0, ops[0]))
    expected = sum(c * adjoint(op).mat for c, op in zip(cs, ops))
    np.testing.assert_allclose(adjoint(total).mat, expected, rtol=0, atol=1e-12)


def test_scale_commutes_with_adjoint():
    np.testing.assert_array_equal(adjoint(scale(1j, conjugation_k(2))).mat, 1j * np.eye(2))
    np.testing.assert_array_equal(scale(0, conjugation_k(2)).mat, np.zeros((2, 2)))


def test_scale_commutes_with_adjoint_random(rng):
    op = random_op(rng, 5)
    c = complex(*rng.standard_normal(2))
    diff = adjoint(scale(c, op)).mat - scale(c, adjoint(op)).mat
    assert np.max(np.abs(diff)) < 1e-14


def test_numpy_scalar_times_op(rng):
    op = random_op(rng, 3)
    out = np.complex128(2j) * op
    assert isinstance(out, AntiLinearOp)
    np.testing.assert_array_equal(out.mat, 2j * op.mat)


# -- composition --------------------------------------------------------------

def test_compose_aa_tau1_tau2():
    out = compose_aa(AntiLinearOp(TAU1), AntiLinearOp(TAU2))
    assert isinstance(out, LinearOp)
    np.testing.assert_array_equal(out.mat, 1j * SIGMA3)


@pytest.mark.parametrize("m", [TAU1, TAU2, TAU3, np.eye(3)])
def test_conjugation_squares_to_identity(m):
    theta = AntiLinearOp(m)
    np.testing.assert_array_equal(compose_aa(theta, theta).mat, np.eye(theta.dim))


def test_compose_aa_matches_application(rng):
    a, b = random_op(rng, 6), random_op(rng, 6)
    np.testing.assert_allclose(compose_aa(a, b).mat, compose_oracle(a, b), atol=1e-13)


def test_compose_mixed():
    c = 0.3 - 1.2j
    k = conjugation_k(3)
    cI = LinearOp(c * np.eye(3))
    np.testing.assert_allclose(compose_al(k, cI).mat, scale(np.conj(c), k).mat)
    np.testing.assert_allclose(compose_la(cI, k).mat, scale(c, k).mat)


def test_compose_la_oracle():
    sigma1 = LinearOp([[0, 1], [1, 0]])
    tau0 = AntiLinearOp(TAU0)
    out = compose_la(sigma1, tau0)
    expected = np.stack([sigma1(apply(tau0, e)) for e in (E1, E2)], axis=1)
    np.testing.assert_array_equal(out.mat, expected)


def test_compose_identity(rng):
    op = random_op(rng, 4)
    one = LinearOp.identity(4)
    np.testing.assert_array_equal(compose_al(op, one).mat, op.mat)
    np.testing.assert_array_equal(compose_la(one, op).mat, op.mat)


def test_compose_dim_mismatch():
    with pytest.raises(DimensionError):
        compose_aa(conjugation_k(2), conjugation_k(3))
    with pytest.raises(DimensionError):
        compose_la(LinearOp.identity(2), conjugation_k(3))


# -- decomposition and rank one -------------------------------------------------

def test_parts_of_example():
    op = AntiLinearOp([[0, 2], [0, 0]])
    np.testing.assert_array_equal(hermitian_part(op).mat, [[0, 1], [1, 0]])
    np.testing.assert_array_equal(skew_part(op).mat, [[0, 1], [-1, 0]])


def test_hermitian_part_of_tau0_vanishes():
    np.testing.assert_array_equal(hermitian_part(AntiLinearOp(TAU0)).mat, np.zeros((2, 2)))


def test_parts_sum_and_symmetry(rng):
    op = random_op(rng, 7)
    p, m = hermitian_part(op), skew_part(op)
    # sum is exact up to rounding of the halved sums; symmetry is bit-exact
    np.testing.assert_allclose((p + m).mat, op.mat, rtol=0, atol=2 * np.spacing(np.abs(op.mat).max()))
    np.testing.assert_array_equal(p.mat, p.mat.T)
    np.testing.assert_array_equal(m.mat, -m.mat.T)
    assert is_hermitian(p) and is_skew(m)


def test_sign_structure(rng):
    for d in range(1, 9):
        op = random_op(rng, d)
        p, m = hermitian_part(op), skew_part(op)
        assert canonical_form(p, p).real >= -1e-12
        assert canonical_form(m, m).real <= 1e-12
        assert abs(canonical_form(p, m)) < 1e-12


def test_rank_one_conjugate_linear_in_argument():
    op = rank_one_c(E1, E1)
    np.testing.assert_array_equal(apply(op, E1), E1)
    np.testing.assert_array_equal(apply(op, 1j * E1), -1j * E1)


def test_rank_one_matches_definition(rng):
    a, b, phi = (random_vector(rng, 4) for _ in range(3))
    np.testing.assert_allclose(apply(rank_one_c(a, b), phi), inner(phi, b) * a, atol=1e-13)


def test_rank_one_adjoint_swaps(rng):
    a, b = random_vector(rng, 4), random_vector(rng, 4)
    np.testing.assert_allclose(adjoint_oracle(rank_one_c(a, b)), rank_one_c(b, a).mat, atol=1e-13)


def test_rank_one_single_entry():
    np.testing.assert_array_equal(rank_one_c(E1, E2).mat, [[0, 1], [0, 0]])


def test_rank_one_length_mismatch():
    with pytest.raises(DimensionError):
        rank_one_c([1, 0], [1, 0, 0])


# -- canonical form ---------------------------------------------------------------

def test_canonical_form_tau_values():
    t1, t2, t0 = AntiLinearOp(TAU1), AntiLinearOp(TAU2), AntiLinearOp(TAU0)
    assert canonical_form(t1, t2) == 0
    assert canonical_form(t1, t1) == 2
    assert canonical_form(t0, t0) == -2
    assert canonical_form(conjugation_k(5), conjugation_k(5)) == 5


def test_canonical_form_dim_one():
    a, b = 0.6 + 0.8j, -1.5 + 2j
    assert canonical_form(make_op(1, [[a]]), make_op(1, [[b]])) == pytest.approx(np.conj(a) * b)


def test_canonical_form_is_trace_of_product(rng):
    a, b = random_op(rng, 5), random_op(rng, 5)
    assert canonical_form(a, b) == pytest.approx(compose_aa(b, a).trace(), abs=1e-12)


@settings(max_examples=50, deadline=None)
@given(seeds, st.integers(1, 8))
def test_canonical_form_hermitian(seed, d):
    rng = np.random.default_rng(seed)
    a, b = random_op(rng, d), random_op(rng, d)
    assert abs(canonical_form(a, b) - np.conj(canonical_form(b, a))) < 1e-13 * (1 + d * d)


def test_canonical_form_dim_mismatch():
    with pytest.raises(DimensionError):
        canonical_form(conjugation_k(2), conjugation_k(3))


# -- predicates ---------------------------------------------------------------------

def test_tau_predicates():
    for m in (TAU1, TAU2, TAU3):
        assert is_conjugation(AntiLinearOp(m))
        assert not is_skew_conjugation(AntiLinearOp(m))
    assert is_skew_conjugation(AntiLinearOp(TAU0))
    assert not is_conjugation(AntiLinearOp(TAU0))


@pytest.mark.parametrize("d", [1, 2, 7, 16])
def test_k_is_conjugation(d):
    assert is_conjugation(conjugation_k(d))


def test_random_matrix_is_not_hermitian(rng):
    op = AntiLinearOp(random_matrix(rng, 4))
    assert not is_hermitian(op)
    assert not is_antiunitary(op)


def test_predicates_reject_nonpositive_tol():
    with pytest.raises(ValueError):
        is_hermitian(conjugation_k(2), 0)
    with pytest.raises(ValueError):
        is_conjugation(conjugation_k(2), -1e-3)


# -- numerical range ------------------------------------------------------------------

def test_range_of_zero_op():
    est = numerical_range_samples(scale(0, conjugation_k(3)), 50, seed=1)
    assert est.radius_estimate == 0
    assert np.all(est.samples == 0)


def test_range_of_scalar_conjugation_on_unit_circle():
    est = numerical_range_samples(conjugation_k(1), 200, seed=2)
    np.testing.assert_allclose(np.abs(est.samples), 1.0, atol=1e-15)
    assert est.radius_estimate == pytest.approx(1.0)


def test_range_of_tau3_against_dense_grid():
    # oracle: <phi, tau3 phi> = 2 conj(phi1 phi2); scan phi = (cos a, e^{ib} sin a)
    tau3 = AntiLinearOp(TAU3)
    a = np.linspace(0, np.pi / 2, 801)
    b = np.linspace(0, 2 * np.pi, 33)
    aa, bb = np.meshgrid(a, b)
    phis = np.stack([np.cos(aa).ravel() + 0j, np.exp(1j * bb.ravel()) * np.sin(aa).ravel()], 1)
    grid_max = max(abs(inner(p, apply(tau3, p))) for p in phis)
    assert grid_max == pytest.approx(1.0, abs=1e-12)

    est = numerical_range_samples(tau3, 10_000, seed=3)
    assert 1 - 1e-2 <= est.radius_estimate <= grid_max + 1e-12
    assert est.phase_residual < 1e-12


def test_range_is_reproducible(rng):
    op = random_op(rng, 4)
    a = numerical_range_samples(op, 100, seed=9)
    b = numerical_range_samples(op, 100, seed=9)
    np.testing.assert_array_equal(a.samples, b.samples)


def test_range_phase_covariance_random(rng):
    op = random_op(rng, 6)
    assert numerical_range_samples(op, 500, seed=4).phase_residual < 1e-12


def test_range_rejects_zero_samples():
    with pytest.raises(ValueError):
        numerical_range_samples(conjugation_k(2), 0)


def test_eigen_circle_covariance():
    # tau3 e = e for e = (1, 1)/sqrt(2): rotating the vector rotates the eigenvalue
    tau3 = AntiLinearOp(TAU3)
    phi = np.array([1, 1]) / np.sqrt(2)
    lam = 1.0
    assert np.allclose(apply(tau3, phi), lam * phi)
    for k in range(16):
        t = k * np.pi / 8
        rotated = np.exp(1j * t) * phi
        np.testing.assert_allclose(apply(tau3, rotated),
                                   np.exp(-2j * t) * lam * rotated, atol=1e-15)
