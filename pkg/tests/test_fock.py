import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tvhp.boson import OperatorPoly, normal_order
from tvhp.errors import CutoffViolation, DomainError, TailTooLarge
from tvhp.fock import (
    TwoModeState,
    apply_operator_poly,
    build_entangled_state,
    completeness_gram,
    eigen_residual,
    fock_state,
    guard_mask,
    ladder_ops,
    overlap_fock,
    psv_norm_closed_sum,
    psv_norm_squared,
    psv_state_residual,
    squeezed_vacuum_series,
)
from tvhp.hermite import SqueezeParam

coords = st.floats(-1.0, 1.0, allow_nan=False)
points = st.builds(complex, coords, coords)


def test_state_validation():
    with pytest.raises(ValueError):
        TwoModeState(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        TwoModeState(np.full((2, 2), np.nan))


def test_commutator_on_interior_block():
    N = 8
    ops = ladder_ops(N)
    comm = (ops["a"] @ ops["a+"] - ops["a+"] @ ops["a"]).dense()
    idx = np.arange(N + 1)
    interior = np.repeat(idx < N, N + 1)
    assert np.allclose(comm[np.ix_(interior, interior)], np.eye(interior.sum()))
    # truncation breaks it on the n_a = N boundary
    assert comm[-1, -1] == pytest.approx(-N)


def test_entangled_state_at_origin():
    s = build_entangled_state(0, 10)
    expected = np.diag([(-1) ** n for n in range(11)]).astype(complex)
    assert np.allclose(s.amps, expected)
    assert s.amps[1, 1] == -1


@given(points)
def test_vacuum_amplitude(xi):
    assert build_entangled_state(xi, 4).amps[0, 0] == pytest.approx(math.exp(-abs(xi) ** 2 / 2))


def test_tail_check_is_opt_in():
    build_entangled_state(1.5, 10)
    with pytest.raises(TailTooLarge):
        build_entangled_state(1.5, 10, tail_tol=1e-14)


@given(points)
def test_amplitude_recurrence(xi):
    # xi amps(m,n) = sqrt(m+1) amps(m+1,n) + sqrt(n) amps(m,n-1)
    N = 20
    a = build_entangled_state(xi, N).amps
    for m in range(N - 1):
        for n in range(N - 1 - m):
            rhs = math.sqrt(m + 1) * a[m + 1, n] + (math.sqrt(n) * a[m, n - 1] if n else 0)
            assert abs(xi * a[m, n] - rhs) < 1e-12


def test_eigen_residual_at_origin_is_zero():
    assert eigen_residual(0, 12, relative=False) == (0.0, 0.0)


@pytest.mark.parametrize("xi,N", [(1, 30), (1 + 1j, 40), (1.5j, 40)])
def test_eigen_residual_examples(xi, N):
    r1, r2 = eigen_residual(xi, N)
    assert r1 < 1e-8 and r2 < 1e-8


def test_overlap_examples():
    xi = 0.4 - 0.9j
    assert overlap_fock(xi, 0, 0) == pytest.approx(math.exp(-abs(xi) ** 2 / 2))
    assert overlap_fock(0, 2, 2) == pytest.approx(1)
    assert overlap_fock(1, 1, 1) == pytest.approx(0, abs=1e-15)


@given(st.builds(complex, st.floats(-1.4, 1.4), st.floats(-1.4, 1.4)))
def test_overlap_matches_inner_product(xi):
    N = 10
    state = build_entangled_state(xi, N)
    for m in range(N + 1):
        for n in range(N + 1):
            assert abs(state.inner(fock_state(m, n, N)) - overlap_fock(xi, m, n)) < 1e-12


def test_apply_operator_poly_examples():
    N = 5
    s = fock_state(1, 0, N)
    assert np.allclose(apply_operator_poly(OperatorPoly.identity(), s).amps, s.amps)
    number = OperatorPoly(terms={(1, 0, 1, 0): 1})
    assert np.allclose(apply_operator_poly(number, s).amps, s.amps)
    vac = fock_state(0, 0, N)
    assert np.allclose(apply_operator_poly(normal_order("a a+"), vac).amps, vac.amps)


def test_apply_operator_poly_cutoff_violation():
    with pytest.raises(CutoffViolation):
        apply_operator_poly(normal_order("a^3 a+^3"), fock_state(0, 0, 2))


def test_guard_mask():
    mask = guard_mask(3, 2)
    assert mask.sum() == 3  # (0,0), (0,1), (1,0)


def test_psv_state_examples():
    assert psv_state_residual(0, SqueezeParam.from_tau(0.5)) == 0
    assert psv_state_residual(1, SqueezeParam.from_tau(0.5)) < 1e-12
    assert psv_state_residual(3, SqueezeParam.from_tau(0.3)) < 1e-10


def test_psv_state_tail_and_domain():
    with pytest.raises(TailTooLarge):
        psv_state_residual(1, SqueezeParam.from_tau(0.9), cutoff=20)
    with pytest.raises(DomainError):
        SqueezeParam.from_tau(-1.2)


def test_psv_norm_examples():
    sq = SqueezeParam.from_tau(0.5)
    r0 = psv_norm_squared(0, sq)
    assert r0.numeric == pytest.approx(4 / 3, rel=1e-12)
    assert r0.published_value == pytest.approx(1)
    assert r0.ratio == pytest.approx(4 / 3)
    r1 = psv_norm_squared(1, sq)
    assert r1.numeric == pytest.approx(20 / 27, rel=1e-12)
    assert r1.published_value == pytest.approx(5 / 9, rel=1e-12)
    assert r1.ratio == pytest.approx(4 / 3, rel=1e-12)
    r_small = psv_norm_squared(0, SqueezeParam.from_tau(1e-6))
    assert r_small.numeric == pytest.approx(1) and r_small.ratio == pytest.approx(1)


def test_psv_norm_closed_sums():
    # sum n^2 x^n = x(1+x)/(1-x)^3 at x = 1/4
    assert psv_norm_closed_sum(1, 0.5) == pytest.approx(20 / 27, rel=1e-14)
    assert psv_norm_closed_sum(0, 0.5) == pytest.approx(4 / 3, rel=1e-14)


def test_psv_norm_monotone_in_cutoff():
    sq = SqueezeParam.from_tau(0.5)
    values = [psv_norm_squared(2, sq, cutoff=N, tail_tol=None).numeric for N in (5, 10, 15, 20, 25)]
    assert all(b > a for a, b in zip(values, values[1:]))
    gaps = [psv_norm_closed_sum(2, 0.5) - v for v in values]
    # the gap is dominated by the first omitted term [(N+1)!/(N-1)!]^2 tau^(2N+2)
    for N, gap in zip((5, 10, 15, 20, 25), gaps):
        lead = ((N + 1) * N) ** 2 * 0.25 ** (N + 1)
        assert lead < gap < 2 * lead


def test_completeness_examples():
    assert completeness_gram(0, 8) < 1e-14
    assert completeness_gram(4, 24) < 1e-12
    with pytest.raises(ValueError):
        completeness_gram(4, 8)


def test_squeezed_vacuum_series():
    s = squeezed_vacuum_series(0.5, 6)
    assert s.amps[3, 3] == pytest.approx(0.125)
    assert s.amps[1, 2] == 0
