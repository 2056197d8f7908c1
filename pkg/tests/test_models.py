import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad as adaptive_quad
from scipy.optimize import brentq

from hsguq.errors import ClosureDomainError, ConvergenceError, InadmissibleStateError
from hsguq.models import (
    M1,
    Euler,
    LinearSystem,
    build_closure_table,
    closure_derivative,
    euler_admissible,
    euler_b,
    euler_eigenvalues,
    euler_entropy,
    euler_entropy_gradient,
    euler_entropy_gradient_inverse,
    euler_flux,
    euler_wavespeed_bound,
    invert_langevin,
    m1_admissible,
    m1_closure,
    m1_entropy_gradient,
    m1_entropy_inverse,
    m1_flux,
)
from hsguq.models.closure import closure_moments, langevin
from hsguq.models.euler import euler_jacobian, euler_entropy_inverse_jacobian
from hsguq.models.m1 import m1_jacobian


@pytest.fixture(scope="module")
def table():
    return build_closure_table(2001)


def euler_states(rng, n):
    rho = rng.uniform(0.05, 5.0, n)
    v = rng.uniform(-3.0, 3.0, n)
    p = rng.uniform(0.05, 5.0, n)
    return np.stack([rho, rho * v, p / 0.4 + 0.5 * rho * v * v], axis=-1)


# -- Euler -----------------------------------------------------------------------

def test_euler_flux_at_rest():
    np.testing.assert_allclose(euler_flux([1.0, 0.0, 2.5]), [0.0, 1.0, 0.0], atol=1e-15)


def test_euler_flux_moving():
    # rho=1, v=1, p=1 -> E = 1/0.4 + 1/2 = 3
    np.testing.assert_allclose(euler_flux([1.0, 1.0, 3.0]), [1.0, 2.0, 4.0], atol=1e-14)


def test_euler_flux_zero_density_raises():
    with pytest.raises(InadmissibleStateError):
        euler_flux([0.0, 1.0, 1.0])


def test_euler_admissible_cases():
    assert euler_admissible([1.0, 0.0, 2.5])
    assert not euler_admissible([1.0, 2.0, 1.0])
    assert not euler_admissible([0.0, 0.0, 1.0])
    assert not euler_admissible([-1.0, 0.0, 1.0])


def test_euler_eigenvalues_at_rest():
    np.testing.assert_allclose(euler_eigenvalues([1.0, 0.0, 2.5]), [-np.sqrt(1.4), 0.0, np.sqrt(1.4)], atol=1e-15)


def test_euler_wavespeed_at_rest():
    assert euler_wavespeed_bound([1.0, 0.0, 2.5]) == pytest.approx(np.sqrt(1.4), abs=1e-15)


def test_euler_eigenvalues_match_jacobian():
    rng = np.random.default_rng(1)
    u = euler_states(rng, 50)
    ev = np.sort(np.linalg.eigvals(euler_jacobian(u)).real, axis=-1)
    np.testing.assert_allclose(ev, euler_eigenvalues(u), atol=1e-10)


def test_euler_jacobian_matches_finite_differences():
    u = np.array([0.7, 0.3, 2.1])
    h = 1e-6
    fd = np.stack([(euler_flux(u + h * e) - euler_flux(u - h * e)) / (2 * h) for e in np.eye(3)], axis=-1)
    np.testing.assert_allclose(euler_jacobian(u), fd, atol=1e-7)


def _b_oracle(u, gamma=1.4):
    """Largest b with u +- b f(u) admissible, by bracketing on each sign."""
    f = euler_flux(u, gamma)
    out = np.inf
    for s in (1.0, -1.0):
        def g(b):
            w = u + s * b * f
            return min(w[0], (gamma - 1.0) * (w[2] - 0.5 * w[1] ** 2 / w[0]) if w[0] > 0 else -1.0)
        hi = 1.0
        while g(hi) > 0 and hi < 1e8:
            hi *= 2.0
        if g(hi) > 0:
            continue
        out = min(out, brentq(g, 0.0, hi, xtol=1e-15, rtol=1e-15))
    return out


def test_euler_b_at_rest_frozen_oracle():
    # frozen from the bracketing oracle above
    assert euler_b([1.0, 0.0, 2.5]) == pytest.approx(2.2360679774997902, rel=1e-12)


@pytest.mark.parametrize("u", [[1.0, 0.5, 2.0], [0.2, -0.4, 3.0], [2.0, 3.0, 2.26], [0.5, 2.0, 4.01]])
def test_euler_b_matches_bracketing_oracle(u):
    u = np.array(u)
    assert euler_b(u) == pytest.approx(_b_oracle(u), rel=1e-9)


@settings(max_examples=60, deadline=None)
@given(rho=st.floats(0.01, 10), v=st.floats(-5, 5), p=st.floats(0.01, 10))
def test_euler_b_is_sharp(rho, v, p):
    u = np.array([rho, rho * v, p / 0.4 + 0.5 * rho * v * v])
    b = float(euler_b(u))
    f = euler_flux(u)
    for s in (1.0, -1.0):
        assert euler_admissible(u + s * 0.999 * b * f)
    assert not (euler_admissible(u + 1.01 * b * f) and euler_admissible(u - 1.01 * b * f))


def test_euler_b_is_scale_invariant_in_density():
    u = np.array([1.0, 0.5, 2.0])
    # scaling rho, m, E by the same factor keeps v and p/rho, hence b
    assert euler_b(3.0 * u) == pytest.approx(euler_b(u), rel=1e-14)


def test_euler_entropy_gradient_roundtrip():
    rng = np.random.default_rng(7)
    u = euler_states(rng, 1000)
    lam = euler_entropy_gradient(u)
    assert np.all(lam[:, 2] < 0)
    np.testing.assert_allclose(euler_entropy_gradient_inverse(lam), u, rtol=1e-12, atol=1e-12)


def test_euler_entropy_gradient_matches_finite_differences():
    u = np.array([0.8, 0.4, 2.3])
    h = 1e-6
    fd = [(euler_entropy(u + h * e) - euler_entropy(u - h * e)) / (2 * h) for e in np.eye(3)]
    np.testing.assert_allclose(euler_entropy_gradient(u), fd, atol=1e-8)


def test_euler_inverse_jacobian_matches_finite_differences():
    lam = euler_entropy_gradient(np.array([0.8, 0.4, 2.3]))
    h = 1e-6
    fd = np.stack([(euler_entropy_gradient_inverse(lam + h * e) - euler_entropy_gradient_inverse(lam - h * e)) / (2 * h)
                   for e in np.eye(3)], axis=-1)
    np.testing.assert_allclose(euler_entropy_inverse_jacobian(lam), fd, rtol=1e-6, atol=1e-8)


def test_euler_inverse_rejects_nonnegative_lambda2():
    with pytest.raises(InadmissibleStateError):
        euler_entropy_gradient_inverse([0.0, 0.0, 0.5])


@settings(max_examples=50, deadline=None)
@given(l0=st.floats(-5, 5), l1=st.floats(-5, 5), l2=st.floats(-10, -0.05))
def test_euler_inverse_always_admissible(l0, l1, l2):
    u = euler_entropy_gradient_inverse([l0, l1, l2])
    assert euler_admissible(u)


def test_euler_model_rejects_gamma_at_most_one():
    with pytest.raises(ValueError):
        Euler(1.0)


# -- M1 closure ----------------------------------------------------------------

def test_langevin_series_and_closed_form_agree_at_cutoff():
    lam = np.array([0.4999999, 0.5000001])
    direct = 1.0 / np.tanh(lam) - 1.0 / lam
    np.testing.assert_allclose(langevin(lam), direct, atol=1e-14)


def test_closure_moments_match_quadrature():
    for lam in (-7.0, -0.3, 1e-4, 0.2, 1.3, 12.0):
        z = adaptive_quad(lambda v: np.exp(lam * v), -1, 1, epsabs=0, epsrel=1e-12)[0]
        moments = [adaptive_quad(lambda v, k=k: v ** k * np.exp(lam * v), -1, 1, epsabs=0, epsrel=1e-12)[0] / z
                   for k in (1, 2, 3)]
        np.testing.assert_allclose(closure_moments(np.array(lam)), moments, rtol=1e-11, atol=1e-13)


def test_invert_langevin_roundtrip():
    r = np.linspace(-0.999, 0.999, 401)
    np.testing.assert_allclose(langevin(invert_langevin(r)), r, atol=1e-14)


def test_invert_langevin_zero():
    assert invert_langevin(np.array([0.0]))[0] == 0.0


def test_invert_langevin_small_ratio():
    # regression: small ratios must give small multipliers, lambda ~ 3 r
    lam = invert_langevin(np.array([1e-9, -1e-6]))
    np.testing.assert_allclose(lam, [3e-9, -3e-6], rtol=1e-5)


def test_invert_langevin_rejects_ratio_one():
    with pytest.raises(ConvergenceError):
        invert_langevin(np.array([1.0]))


def test_closure_at_isotropy(table):
    chi, psi = m1_closure(table, np.array([0.0]))
    assert abs(chi[0] - 1.0 / 3.0) < 1e-10 and abs(psi[0]) < 1e-10


def test_closure_at_free_streaming(table):
    chi, psi = m1_closure(table, np.array([-1.0, 1.0]))
    assert list(chi) == [1.0, 1.0] and list(psi) == [-1.0, 1.0]


def test_closure_half_frozen_oracle(table):
    # frozen: bisection on the Langevin equation plus adaptive quadrature of v^2 e^{lam v}
    chi, psi = m1_closure(table, np.array([0.5]))
    assert chi[0] == pytest.approx(0.4434413974395251, abs=1e-8)
    assert psi[0] == pytest.approx(0.3161552291312565, abs=1e-8)
    assert invert_langevin(np.array([0.5]))[0] == pytest.approx(1.7967559847237144, abs=1e-12)


def test_closure_point_three_frozen_oracle(table):
    chi, _ = m1_closure(table, np.array([0.3]))
    assert chi[0] == pytest.approx(0.37050796639347056, abs=1e-6)


def test_closure_derivative_frozen_oracle(table):
    # frozen central difference of chi at r = 0.5
    assert closure_derivative(table, np.array([0.5]))[0] == pytest.approx(0.4881816035759434, abs=1e-4)


def test_closure_symmetry(table):
    r = np.linspace(0, 1, 37)
    chi_p, psi_p = m1_closure(table, r)
    chi_m, psi_m = m1_closure(table, -r)
    # the tables are mirrored exactly; interpolation differs only by roundoff
    np.testing.assert_allclose(chi_p, chi_m, rtol=0, atol=1e-15)
    np.testing.assert_allclose(psi_p, -psi_m, rtol=0, atol=1e-15)


def test_closure_realizability_bounds(table):
    r = np.linspace(-1, 1, 1001)
    chi, _ = m1_closure(table, r)
    assert np.all(chi >= r * r - 1e-12) and np.all(chi <= 1.0 + 1e-15)


def test_closure_rejects_ratio_outside(table):
    with pytest.raises(ClosureDomainError):
        m1_closure(table, np.array([1.0001]))


def test_closure_table_requires_odd_size():
    with pytest.raises(ValueError):
        build_closure_table(10)


def test_closure_table_csv_roundtrip(table, tmp_path):
    small = build_closure_table(21)
    small.to_csv(tmp_path / "t.csv")
    back = type(small).from_csv(tmp_path / "t.csv")
    for name in ("r", "lambda1", "chi", "psi"):
        np.testing.assert_array_equal(getattr(back, name), getattr(small, name))


# -- M1 model ------------------------------------------------------------------

def test_m1_flux_isotropic(table):
    np.testing.assert_allclose(m1_flux([2.0, 0.0], table), [0.0, 2.0 / 3.0], atol=1e-12)


def test_m1_flux_rejects_unrealizable(table):
    with pytest.raises(ClosureDomainError):
        m1_flux([1.0, 1.5], table)
    with pytest.raises(ClosureDomainError):
        m1_flux([-1.0, 0.0], table)


def test_m1_admissible_boundary():
    assert m1_admissible([1.0, 1.0]) and m1_admissible([1.0, -1.0])
    assert not m1_admissible([0.0, 0.0]) and not m1_admissible([1.0, 1.0 + 1e-12])


def test_m1_jacobian_eigenvalues_within_unit_interval(table):
    r = np.linspace(-0.99, 0.99, 51)
    u = np.stack([np.ones_like(r), r], axis=-1)
    ev = np.linalg.eigvals(m1_jacobian(u, table))
    assert np.all(np.abs(ev.imag) < 1e-12) and np.all(np.abs(ev.real) <= 1.0 + 1e-9)


def test_m1_entropy_roundtrip():
    rng = np.random.default_rng(5)
    m0 = rng.uniform(1e-3, 10, 500)
    u = np.stack([m0, m0 * rng.uniform(-0.99, 0.99, 500)], axis=-1)
    np.testing.assert_allclose(m1_entropy_inverse(m1_entropy_gradient(u)), u, rtol=1e-12, atol=1e-14)


def test_m1_entropy_inverse_matches_adaptive_quadrature():
    rng = np.random.default_rng(11)
    for l0, l1 in rng.uniform([-3, -8], [3, 8], size=(50, 2)):
        exact = [adaptive_quad(lambda v, k=k: v ** k * np.exp(l0 + l1 * v), -1, 1, epsabs=0, epsrel=1e-12)[0]
                 for k in (0, 1)]
        np.testing.assert_allclose(m1_entropy_inverse([l0, l1]), exact, rtol=1e-10)


def test_m1_dual_flux_agrees_with_table_flux(table):
    model = M1(table=table)
    u = np.array([[1.0, 0.3], [0.5, -0.45]])
    lam = model.entropy_gradient(u)
    u2, f = model.dual_flux(lam)
    np.testing.assert_allclose(u2, u, rtol=1e-12)
    np.testing.assert_allclose(f, model.flux(u), atol=1e-8)


def test_m1_source():
    model = M1(sigma_a=0.5, sigma_s=2.0, table=build_closure_table(21))
    np.testing.assert_allclose(model.source([2.0, 1.0]), [-1.0, -2.5])
    assert model.source_rate == 2.5


@settings(max_examples=100, deadline=None)
@given(m0=st.floats(1e-6, 1e3), r=st.floats(-1, 1), b=st.floats(0, 1, exclude_max=True))
def test_m1_b_equals_one_property(m0, r, b):
    table = _shared_table()
    u = np.array([m0, r * m0])
    f = m1_flux(u, table)
    for s in (1.0, -1.0):
        assert m1_admissible(u + s * b * f)


_TABLE = []


def _shared_table():
    if not _TABLE:
        _TABLE.append(build_closure_table(2001))
    return _TABLE[0]


# -- linear --------------------------------------------------------------------

def test_linear_system():
    A = np.array([[0.0, 1.0], [1.0, 0.0]])
    model = LinearSystem(A)
    np.testing.assert_allclose(model.flux([1.0, 2.0]), [2.0, 1.0])
    assert np.all(model.admissible(np.zeros((3, 2))))
    assert model.wavespeed(np.zeros((3, 2)))[0] == pytest.approx(1.0)
