import math

import mpmath
import numpy as np
import pytest
from numpy.polynomial.laguerre import lagval
from hypothesis import given, strategies as st

from tvhp.errors import DomainError
from tvhp.hermite import SqueezeParam, hermite_eval, legendre_eval
from tvhp.fock import psv_norm_squared
from tvhp.quadrature import (
    GaussianIntegralSpec,
    complex_plane_rule,
    gaussian_integral_analytic,
    gaussian_integral_numeric,
    hermite_rule,
    hermite_rule_mp,
    integral_laguerre_product,
    integral_tvhp_forward,
    integral_tvhp_reciprocal,
    laguerre_product_form,
    mutual_transform,
    tvhp_reciprocal_closed_form,
)

radius = st.floats(0, 2)
angle = st.floats(0, 2 * math.pi)
alphas = st.builds(lambda r, t: r * complex(math.cos(t), math.sin(t)), radius, angle)


# rules


@pytest.mark.parametrize("q", [1, 4, 8, 24])
def test_weights_sum_to_sqrt_pi(q):
    assert hermite_rule(q).weights.sum() == pytest.approx(math.sqrt(math.pi), rel=1e-14)


@pytest.mark.parametrize("q", [3, 8, 16, 24])
def test_monomial_exactness(q):
    rule = hermite_rule(q)
    for k in range(2 * q):
        got = rule.integrate(lambda x: x**k)
        exact = 0.0 if k % 2 else math.gamma((k + 1) / 2)
        # odd moments cancel to zero; measure them against the sum of |terms|
        scale = exact if exact else rule.integrate(lambda x: np.abs(x) ** k)
        assert abs(got - exact) <= 1e-13 * scale


def test_mp_rule_matches_double_and_is_exact():
    nodes, weights = hermite_rule_mp(10, 40)
    rule = hermite_rule(10)
    assert np.allclose([float(x) for x in nodes], rule.nodes, atol=1e-14)
    with mpmath.workdps(40):
        for k in (0, 6, 18):
            got = sum(w * x**k for x, w in zip(nodes, weights))
            assert abs(got - mpmath.gamma(mpmath.mpf(k + 1) / 2)) < mpmath.mpf(10) ** -35


def test_complex_plane_rule_normalized():
    nodes, weights = complex_plane_rule(12)
    assert weights.sum() == pytest.approx(1)
    assert np.sum(weights * np.abs(nodes) ** 2) == pytest.approx(1)


# basic Gaussian integral


@pytest.mark.parametrize("eta,f,g,expected", [
    (-1, 0, 0, 1),
    (-2, 0, 0, 0.5),
    (-1, 1, 1, math.e),
])
def test_gaussian_analytic_examples(eta, f, g, expected):
    assert gaussian_integral_analytic(GaussianIntegralSpec(eta, f, g)) == pytest.approx(expected, rel=1e-12)


def test_gaussian_numeric_examples():
    assert abs(gaussian_integral_numeric(GaussianIntegralSpec(-1, 0, 0), 8) - 1) < 1e-14
    assert abs(gaussian_integral_numeric(GaussianIntegralSpec(-1, 1, 1), 24) - math.e) < 1e-10
    spec = GaussianIntegralSpec(-1, 0.3j, -0.3j)
    assert abs(gaussian_integral_numeric(spec) - gaussian_integral_analytic(spec)) < 1e-10


def test_gaussian_domain():
    with pytest.raises(DomainError):
        GaussianIntegralSpec(0.5, 1, 1)
    with pytest.raises(ValueError):
        gaussian_integral_numeric(GaussianIntegralSpec(-1), q=4)


@given(st.floats(-1.5, 1.5), st.floats(-1.5, 1.5), st.floats(-1.5, 1.5), st.floats(-1.5, 1.5))
def test_gaussian_numeric_matches_analytic(fr, fi, gr, gi):
    spec = GaussianIntegralSpec(-1, complex(fr, fi), complex(gr, gi))
    exact = gaussian_integral_analytic(spec)
    assert abs(gaussian_integral_numeric(spec, 24) - exact) < 1e-10 * max(1, abs(exact))


# TVHP integrals


def test_forward_examples():
    assert integral_tvhp_forward(0, 0, 0.7 - 2j) == pytest.approx(1)
    assert integral_tvhp_forward(1, 1, 0) == pytest.approx(0, abs=1e-15)
    assert integral_tvhp_forward(1, 0, 2) == pytest.approx(2)


def test_reciprocal_examples():
    a = 1.2 - 0.3j
    assert integral_tvhp_reciprocal(0, 0, a) == pytest.approx(1)
    assert integral_tvhp_reciprocal(1, 1, a) == pytest.approx(abs(a) ** 2 + 1)
    assert integral_tvhp_reciprocal(1, 0, 1 + 1j) == pytest.approx(1 + 1j)


def test_reciprocal_closed_form_by_hand():
    # i^2 H_{1,1}(-i a, -i a*) = |a|^2 + 1
    a = 0.4 + 1.1j
    assert tvhp_reciprocal_closed_form(1, 1, a) == pytest.approx(abs(a) ** 2 + 1)
    assert tvhp_reciprocal_closed_form(2, 1, a) == pytest.approx(1j**3 * hermite_eval(2, 1, -1j * a, -1j * a.conjugate()))


def test_insufficient_order_rejected():
    with pytest.raises(ValueError):
        integral_tvhp_forward(6, 6, 1, q=3)


@given(st.integers(0, 6), st.integers(0, 6), alphas)
def test_forward_property(m, n, alpha):
    expected = alpha**m * alpha.conjugate() ** n
    got = integral_tvhp_forward(m, n, alpha)
    # at alpha = 0 the target is 0; the extended-precision sum leaves ~1e-31
    assert abs(got - expected) <= 1e-12 * abs(expected) + 1e-25


@given(st.integers(0, 5), st.integers(0, 5), alphas)
def test_mutual_transform_property(m, n, alpha):
    expected = tvhp_reciprocal_closed_form(m, n, alpha)
    assert abs(mutual_transform(m, n, alpha) - expected) <= 1e-10 * abs(expected) + 1e-25


def test_double_precision_path_agrees_at_moderate_alpha():
    got = integral_tvhp_forward(3, 2, 1.5 + 0.5j, dps=None)
    assert got == pytest.approx((1.5 + 0.5j) ** 3 * (1.5 - 0.5j) ** 2, rel=1e-12)


# 4D Laguerre-product integral


@pytest.mark.parametrize("tau", [0.0, 0.3, 0.5, -0.7])
def test_quadratic_form_eigenvalues(tau):
    form = laguerre_product_form(tau)
    assert np.allclose(np.sort(np.linalg.eigvalsh(form.matrix)), np.sort(form.eigenvalues))
    assert form.is_negative_definite()
    # the analytic rotation diagonalizes the form
    rot = form.rotation
    assert np.allclose(rot @ rot.T, np.eye(4))
    assert np.allclose(rot @ form.matrix @ rot.T, np.diag(form.eigenvalues))


def laguerre_product_eigh(m, tau, q=12):
    """Same integral through a numeric eigendecomposition, independent of the analytic rotation."""
    a = laguerre_product_form(tau).matrix
    evals, evecs = np.linalg.eigh(a)
    rule = hermite_rule(q)
    grids = np.meshgrid(*(rule.nodes,) * 4, indexing="ij")
    wts = np.ones_like(grids[0])
    for g in np.meshgrid(*(rule.weights,) * 4, indexing="ij"):
        wts = wts * g
    y = np.stack([g.ravel() for g in grids]) / np.sqrt(-evals)[:, None]
    x = evecs @ y
    alpha = x[0] + 1j * x[1]
    beta = x[2] + 1j * x[3]
    basis = [0] * m + [1]
    f = lagval(-alpha * beta * tau, basis) * lagval(-np.conj(alpha * beta) * tau, basis)
    jac = 1 / np.prod(np.sqrt(-evals))
    return float(np.real(np.sum(wts.ravel() * f)) * jac / math.pi**2)


def test_laguerre_product_m0():
    res = integral_laguerre_product(0, SqueezeParam.from_tau(0.5))
    assert res.numeric == pytest.approx(4 / 3, rel=1e-13)
    assert res.published_value == pytest.approx(1)
    assert integral_laguerre_product(0, SqueezeParam.from_tau(1e-8)).numeric == pytest.approx(1)


@pytest.mark.parametrize("m", range(4))
@pytest.mark.parametrize("tau", [0.3, 0.5])
def test_laguerre_product_values(m, tau):
    sq = SqueezeParam.from_tau(tau)
    res = integral_laguerre_product(m, sq)
    c2 = math.cosh(sq.lam) ** 2
    published = c2**m * legendre_eval(m, math.cosh(2 * sq.lam)).real
    assert res.published_value == pytest.approx(published, rel=1e-13)
    assert res.corrected_value == pytest.approx(c2 * published, rel=1e-13)
    assert res.numeric == pytest.approx(res.corrected_value, rel=1e-10)
    assert res.numeric == pytest.approx(laguerre_product_eigh(m, tau), rel=1e-10)
    # invariant under raising the order past exactness
    assert integral_laguerre_product(m, sq, q=2 * m + 12).numeric == pytest.approx(res.numeric, rel=1e-10)


def test_laguerre_product_matches_state_norm():
    sq = SqueezeParam.from_tau(0.3)
    norm = psv_norm_squared(1, sq).numeric
    assert integral_laguerre_product(1, sq).numeric == pytest.approx(norm / 0.3**2, rel=1e-8)


def test_laguerre_product_rejects_low_order():
    with pytest.raises(ValueError):
        integral_laguerre_product(3, SqueezeParam.from_tau(0.3), q=4)
