import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.polynomial import legendre

from hsguq.errors import ConvergenceError
from hsguq.gpc import (
    build_basis,
    build_quadrature,
    evaluate_expansion,
    mean_and_std,
    point_values,
    project_function,
    project_values,
)


def test_phi0_is_one():
    basis = build_basis(4)
    xi = np.linspace(-1, 1, 11)
    assert np.all(basis.evaluate(xi)[:, 0] == 1.0)


def test_phi1_at_one_is_sqrt3():
    # Gram-Schmidt of {1, x} with weight 1/2: phi_1 = x / sqrt(<x, x>) = sqrt(3) x
    assert build_basis(1).evaluate(1.0)[1] == pytest.approx(np.sqrt(3.0), abs=1e-14)


def test_basis_matches_gram_schmidt_on_monomials():
    # oracle: Gram-Schmidt on monomials with exact integrals against density 1/2
    K = 5

    def inner(p, q):
        r = np.polynomial.polynomial.polymul(p, q)
        integ = np.polynomial.polynomial.polyint(r)
        return 0.5 * (np.polynomial.polynomial.polyval(1, integ) - np.polynomial.polynomial.polyval(-1, integ))

    polys = []
    for k in range(K + 1):
        p = np.zeros(k + 1)
        p[k] = 1.0
        for q in polys:
            p = np.polynomial.polynomial.polysub(p, inner(p, q) * q)
        polys.append(p / np.sqrt(inner(p, p)))
    xi = np.linspace(-1, 1, 17)
    expected = np.stack([np.polynomial.polynomial.polyval(xi, p) for p in polys], axis=-1)
    np.testing.assert_allclose(build_basis(K).evaluate(xi), expected, atol=1e-12)


def test_phi3_norm_with_q10():
    basis, quad = build_basis(3), build_quadrature(10)
    V = basis.vandermonde(quad)
    assert quad.integrate(V[:, 3] ** 2) == pytest.approx(1.0, abs=1e-12)


def test_orthonormality_up_to_order_9():
    basis, quad = build_basis(9), build_quadrature(12)
    V = basis.vandermonde(quad)
    gram = V.T @ (quad.effective_weights[:, None] * V)
    assert np.max(np.abs(gram - np.eye(10))) < 1e-12


def test_quadrature_single_node():
    quad = build_quadrature(1)
    assert quad.nodes[0] == 0.0
    assert quad.weights[0] == pytest.approx(2.0, abs=1e-15)
    assert quad.effective_weights[0] == pytest.approx(1.0, abs=1e-15)


def test_quadrature_two_nodes():
    quad = build_quadrature(2)
    np.testing.assert_allclose(quad.nodes, [-1 / np.sqrt(3), 1 / np.sqrt(3)], atol=1e-15)
    assert quad.integrate(quad.nodes ** 2) == pytest.approx(1.0 / 3.0, abs=1e-14)


@pytest.mark.parametrize("Q", [1, 2, 3, 5, 10, 20, 50, 100])
def test_quadrature_matches_numpy_leggauss(Q):
    x, w = legendre.leggauss(Q)
    quad = build_quadrature(Q)
    np.testing.assert_allclose(quad.nodes, x, atol=1e-14)
    np.testing.assert_allclose(quad.weights, w, atol=1e-14)
    assert abs(quad.effective_weights.sum() - 1.0) < 1e-14
    assert np.all(quad.weights > 0)


@pytest.mark.parametrize("Q", [1, 2, 4, 7, 12])
def test_quadrature_exact_to_degree_2q_minus_1(Q):
    quad = build_quadrature(Q)
    for n in range(2 * Q):
        exact = 0.0 if n % 2 else 1.0 / (n + 1)  # mean of xi^n under U(-1, 1)
        assert quad.integrate(quad.nodes ** n) == pytest.approx(exact, abs=1e-12, rel=1e-12)


def test_quadrature_iteration_cap_is_enforced():
    with pytest.raises(ConvergenceError):
        build_quadrature(40, max_iter=1)


def test_quadrature_rejects_zero_nodes():
    with pytest.raises(ValueError):
        build_quadrature(0)


def test_constant_expansion_evaluates_to_mean():
    basis = build_basis(3)
    coeffs = np.zeros((4, 2))
    coeffs[0] = [1.5, -0.5]
    for xi in (-1.0, -0.3, 0.0, 0.8):
        np.testing.assert_array_equal(evaluate_expansion(coeffs, basis, xi), [1.5, -0.5])


def test_odd_term_vanishes_at_zero():
    basis = build_basis(1)
    assert evaluate_expansion(np.array([[1.0], [2.0]]), basis, 0.0)[0] == pytest.approx(1.0, abs=1e-15)


def test_evaluate_matches_naive_sum():
    rng = np.random.default_rng(3)
    basis, quad = build_basis(5), build_quadrature(8)
    coeffs = rng.normal(size=(6, 3))
    for xi in quad.nodes:
        naive = sum(coeffs[k] * np.sqrt(2 * k + 1) * legendre.legval(xi, np.eye(6)[k]) for k in range(6))
        np.testing.assert_allclose(evaluate_expansion(coeffs, basis, xi), naive, atol=1e-14, rtol=1e-14)


def test_project_constant():
    basis, quad = build_basis(3), build_quadrature(5)
    c = project_function(lambda xi: np.broadcast_to([2.0, -1.0], np.shape(xi) + (2,)), basis, quad)
    np.testing.assert_allclose(c[0], [2.0, -1.0], atol=1e-14)
    assert np.max(np.abs(c[1:])) < 1e-14


def test_project_phi2():
    basis, quad = build_basis(3), build_quadrature(10)
    c = project_function(lambda xi: basis.evaluate(xi)[..., 2:3], basis, quad)[:, 0]
    assert c[2] == pytest.approx(1.0, abs=1e-12)
    assert np.max(np.abs(np.delete(c, 2))) < 1e-12


@settings(max_examples=40, deadline=None)
@given(K=st.integers(0, 6), extra=st.integers(0, 4), seed=st.integers(0, 2**31 - 1))
def test_projection_reproduces_polynomials(K, extra, seed):
    rng = np.random.default_rng(seed)
    basis, quad = build_basis(K), build_quadrature(K + 1 + extra)
    poly = rng.normal(size=K + 1)  # monomial coefficients, degree <= K

    def g(xi):
        return np.polynomial.polynomial.polyval(xi, poly)[..., None]

    coeffs = project_function(g, basis, quad)
    np.testing.assert_allclose(point_values(coeffs, basis, quad), g(quad.nodes), atol=1e-12 * (1 + np.abs(poly).sum()))


def test_project_values_inverts_point_values():
    rng = np.random.default_rng(0)
    basis, quad = build_basis(4), build_quadrature(9)
    U = rng.normal(size=(7, 5, 2))
    np.testing.assert_allclose(project_values(point_values(U, basis, quad), basis, quad), U, atol=1e-13)


def test_mean_and_std_three_four_five():
    mean, std, meaningful = mean_and_std(np.array([[1.0], [3.0], [4.0]]))
    assert mean[0] == 1.0 and std[0] == pytest.approx(5.0) and meaningful


def test_mean_and_std_constant():
    mean, std, meaningful = mean_and_std(np.array([[2.0, 3.0]]))
    np.testing.assert_array_equal(mean, [2.0, 3.0])
    np.testing.assert_array_equal(std, [0.0, 0.0])
    assert not meaningful


@settings(max_examples=30, deadline=None)
@given(K=st.integers(1, 8), seed=st.integers(0, 2**31 - 1))
def test_std_matches_quadrature_variance(K, seed):
    rng = np.random.default_rng(seed)
    basis, quad = build_basis(K), build_quadrature(2 * K + 4)
    coeffs = rng.normal(size=(K + 1, 2))
    values = point_values(coeffs, basis, quad)
    mean_q = quad.integrate(values)
    var_q = quad.integrate((values - mean_q) ** 2)
    mean, std, _ = mean_and_std(coeffs)
    np.testing.assert_allclose(mean, mean_q, atol=1e-10)
    np.testing.assert_allclose(std ** 2, var_q, atol=1e-10)
