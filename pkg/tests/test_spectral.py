"""Closed-form and numeric eigensystems.

Frozen reference values were produced by the tridiagonal numeric
solver and independent bisection runs, then cross-checked against the
closed forms before being committed.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from altchain import (
    ChainSpec,
    PROVENANCE_ANALYTIC_EVEN,
    PROVENANCE_ANALYTIC_ODD,
    PROVENANCE_NUMERIC,
    RegimeError,
    build_coupling_matrix,
    eigensystem_even,
    eigensystem_for,
    eigensystem_numeric,
    eigensystem_odd,
    solve_even_roots,
)

# four sites, ratio 2.272: trig root, hyperbolic root, spectrum
X1_4 = 1.3809385445889233
Y_4 = 0.7855249486790681
LAMBDAS_4 = (2.649438469182015, 0.37743846918201573)


def test_even_roots_frozen():
    roots = solve_even_roots(ChainSpec(4, 2.272))
    assert roots.x_roots.shape == (1,)
    assert roots.x_roots[0] == pytest.approx(X1_4, abs=1e-14)
    assert roots.y_root == pytest.approx(Y_4, abs=1e-14)


def test_hyperbolic_root_closed_form_n4():
    # for four sites cosh y has an explicit radical expression
    delta = 2.272
    y = solve_even_roots(ChainSpec(4, delta)).y_root
    cosh_expected = (delta + math.sqrt(delta * delta + 4.0)) / 4.0
    assert math.cosh(y) == pytest.approx(cosh_expected, abs=1e-14)


def test_root_count_grows_with_n():
    for n in range(4, 17, 2):
        roots = solve_even_roots(ChainSpec(n, 2.38))
        assert roots.x_roots.shape == (n // 2 - 1,)
        assert roots.y_root > 0.0


def test_y_root_below_log_delta():
    for n in range(4, 13, 2):
        for delta in (1.8, 2.38, 4.0):
            if delta <= (n + 2) / n:
                continue
            roots = solve_even_roots(ChainSpec(n, delta))
            assert roots.y_root < math.log(delta)


def test_even_spectrum_frozen():
    eig = eigensystem_even(ChainSpec(4, 2.272))
    assert eig.provenance == PROVENANCE_ANALYTIC_EVEN
    expected = [LAMBDAS_4[0], LAMBDAS_4[1], -LAMBDAS_4[1], -LAMBDAS_4[0]]
    assert np.allclose(eig.eigenvalues, expected, atol=1e-13, rtol=0.0)


@pytest.mark.parametrize(
    "n,delta,positive",
    [
        (6, 2.373, (3.060145933103244, 2.2081358331404055, 0.14798990003716084)),
        (8, 2.557, (3.3661742746836065, 2.828029344468093, 2.0696114535800345,
                    0.050756383795552557)),
    ],
)
def test_larger_chains_frozen(n, delta, positive):
    eig = eigensystem_even(ChainSpec(n, delta))
    assert np.allclose(eig.eigenvalues[: n // 2], positive, atol=1e-12, rtol=0.0)


def test_below_threshold_raises():
    with pytest.raises(RegimeError):
        solve_even_roots(ChainSpec(4, 1.5))
    with pytest.raises(RegimeError):
        eigensystem_even(ChainSpec(6, 4.0 / 3.0))


def test_odd_spectrum_uniform_five():
    eig = eigensystem_odd(ChainSpec(5, 1.0))
    assert eig.provenance == PROVENANCE_ANALYTIC_ODD
    expected = [math.sqrt(3.0), 1.0, 0.0, -1.0, -math.sqrt(3.0)]
    assert np.allclose(eig.eigenvalues, expected, atol=1e-12, rtol=0.0)


def test_odd_spectrum_five_delta_two():
    eig = eigensystem_odd(ChainSpec(5, 2.0))
    expected = [math.sqrt(7.0), math.sqrt(3.0), 0.0, -math.sqrt(3.0), -math.sqrt(7.0)]
    assert np.allclose(eig.eigenvalues, expected, atol=1e-12, rtol=0.0)


def test_zero_mode_lives_on_odd_sites():
    eig = eigensystem_odd(ChainSpec(7, 1.6))
    zero_col = eig.vectors[:, 3]
    assert abs(eig.eigenvalues[3]) < 1e-14
    # sites 2, 4, 6 (0-based 1, 3, 5) carry nothing
    assert np.all(np.abs(zero_col[1::2]) < 1e-14)
    weights = zero_col[0::2]
    # geometric decay with ratio -delta toward the far end
    ratios = weights[:-1] / weights[1:]
    assert np.allclose(ratios, -1.6, atol=1e-12, rtol=0.0)


def test_two_sites_trivial():
    eig = eigensystem_numeric(build_coupling_matrix(ChainSpec(2, 1.0)))
    assert np.allclose(eig.eigenvalues, [1.0, -1.0], atol=1e-15, rtol=0.0)


def test_numeric_matches_even_analytic():
    for delta in (2.0, 2.38, 3.0):
        for n in range(4, 17, 2):
            spec = ChainSpec(n, delta)
            if delta <= spec.even_regime_threshold() * (1.0 + 1e-5):
                continue
            ana = eigensystem_even(spec)
            num = eigensystem_numeric(build_coupling_matrix(spec))
            assert np.max(np.abs(ana.eigenvalues - num.eigenvalues)) < 1e-9
            for col in range(n):
                u, v = ana.vectors[:, col], num.vectors[:, col]
                assert min(np.max(np.abs(u - v)), np.max(np.abs(u + v))) < 1e-8


def test_numeric_matches_odd_analytic():
    for delta in (1.0, 1.5, 2.0):
        for n in range(3, 16, 2):
            spec = ChainSpec(n, delta)
            ana = eigensystem_odd(spec)
            num = eigensystem_numeric(build_coupling_matrix(spec))
            assert np.max(np.abs(ana.eigenvalues - num.eigenvalues)) < 1e-9
            for col in range(n):
                u, v = ana.vectors[:, col], num.vectors[:, col]
                assert min(np.max(np.abs(u - v)), np.max(np.abs(u + v))) < 1e-8


def test_dispatch_by_parity_and_regime():
    assert eigensystem_for(ChainSpec(5, 1.3)).provenance == PROVENANCE_ANALYTIC_ODD
    assert eigensystem_for(ChainSpec(6, 2.0)).provenance == PROVENANCE_ANALYTIC_EVEN
    # below the closed-form threshold the even chain falls back
    assert eigensystem_for(ChainSpec(6, 1.2)).provenance == PROVENANCE_NUMERIC
    # long chains route numeric regardless of regime
    assert eigensystem_for(ChainSpec(14, 2.38)).provenance == PROVENANCE_NUMERIC
    assert eigensystem_for(ChainSpec(12, 2.38)).provenance == PROVENANCE_ANALYTIC_EVEN
    # dressed chains have no closed form
    dressed = ChainSpec(5, 1.0, larmor=(0.4, 0.0, 0.0, 0.0, -0.4))
    assert eigensystem_for(dressed).provenance == PROVENANCE_NUMERIC


@settings(deadline=None, max_examples=60)
@given(
    n_half=st.integers(min_value=2, max_value=8),
    delta=st.floats(min_value=1.9, max_value=4.5),
)
def test_even_eigensystem_properties(n_half, delta):
    """Orthonormality, residual, pairing for arbitrary valid even chains."""
    n = 2 * n_half
    spec = ChainSpec(n, delta)
    eig = eigensystem_even(spec)
    dense = build_coupling_matrix(spec).to_dense()
    gram = eig.vectors.T @ eig.vectors
    assert np.max(np.abs(gram - np.eye(n))) < 1e-10
    residual = np.max(np.abs(dense @ eig.vectors - eig.vectors * eig.eigenvalues))
    assert residual < 1e-9 * np.max(np.abs(dense))
    lam = np.sort(eig.eigenvalues)
    assert np.max(np.abs(lam + lam[::-1])) < 1e-10


@settings(deadline=None, max_examples=60)
@given(
    n_half=st.integers(min_value=1, max_value=7),
    delta=st.floats(min_value=0.2, max_value=4.0),
)
def test_odd_eigensystem_properties(n_half, delta):
    n = 2 * n_half + 1
    spec = ChainSpec(n, delta)
    eig = eigensystem_odd(spec)
    gram = eig.vectors.T @ eig.vectors
    assert np.max(np.abs(gram - np.eye(n))) < 1e-10
    dense = build_coupling_matrix(spec).to_dense()
    residual = np.max(np.abs(dense @ eig.vectors - eig.vectors * eig.eigenvalues))
    assert residual < 1e-9 * np.max(np.abs(dense))
    # descending order
    assert np.all(np.diff(eig.eigenvalues) <= 1e-14)


def test_smallest_positive():
    eig = eigensystem_odd(ChainSpec(5, 2.0))
    assert eig.smallest_positive() == pytest.approx(math.sqrt(3.0), abs=1e-12)
