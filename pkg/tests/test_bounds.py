import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from aoilab.bounds import (
    BETA,
    DomainError,
    adversarial_sum_lower_bound,
    aoi_lower_bound,
    aoi_lower_bound_agnostic,
    bounds_report,
    g_exact,
    g_uniform,
    g_uniform_sandwich,
    mmw_upper_bound,
    mobility_advantage,
    uniform_psi,
    yao_competitive_lower_bound,
    yao_renewal_quantities,
)
from aoilab.core import ConfigurationError

from .oracles import g_by_enumeration


def test_g_exact_examples():
    assert g_exact([[1, 0], [1, 0]]) == 1.0
    assert g_exact(uniform_psi(2, 2)) == 1.5
    assert g_exact([[0.5, 0.5]]) == 1.0


def test_g_exact_matches_enumeration():
    psi = [[Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)], [Fraction(1, 3), Fraction(2, 3), 0]]
    assert g_exact(np.array(psi, dtype=float)) == pytest.approx(float(g_by_enumeration(psi)), rel=1e-12)
    assert g_by_enumeration([[Fraction(1, 2)] * 2] * 2) == Fraction(3, 2)


def test_g_exact_rejects_bad_rows():
    with pytest.raises(ConfigurationError):
        g_exact([[0.5, 0.4]])


def test_g_uniform_examples():
    assert g_uniform(1, 17) == 1.0
    assert g_uniform(2, 2) == 1.5
    assert g_uniform(4, 1) == pytest.approx(1.0, rel=1e-12)


def test_sandwich_examples():
    lo, hi = g_uniform_sandwich(2, 2)
    assert lo == pytest.approx(2 * (1 - math.exp(-1)), rel=1e-9)
    # with beta = ln 4 the upper value is exactly 2 * (1 - 1/4)
    assert hi == pytest.approx(1.5, rel=1e-12)
    assert hi == pytest.approx(1.5004, abs=1e-3)
    assert lo == pytest.approx(1.2642, abs=1e-4)
    assert lo <= 1.5 <= hi
    lo, hi = g_uniform_sandwich(10, 10)
    assert (lo, g_uniform(10, 10), hi) == pytest.approx((6.3212, 6.5132, 7.5000), abs=1e-4)
    lo, hi = g_uniform_sandwich(2, 1)
    assert lo == pytest.approx(0.7869, abs=1e-4)
    assert hi == pytest.approx(1.0, rel=1e-12)
    with pytest.raises(DomainError):
        g_uniform_sandwich(1, 3)


def test_beta_is_ln4():
    assert BETA == math.log(4)
    assert 1.386 < BETA < 1.387


@pytest.mark.parametrize(
    "p, g, expected",
    [([1.0], 1, 1.0), ([0.5, 0.5], 1, 2.5), ([1 / 3] * 3, 1, 5.0)],
)
def test_aoi_lower_bound(p, g, expected):
    assert aoi_lower_bound(p, g) == pytest.approx(expected, rel=1e-12)


def test_aoi_lower_bound_zero_p():
    with pytest.raises(DomainError):
        aoi_lower_bound([0.0, 1.0], 1)


def test_agnostic_bound():
    assert aoi_lower_bound_agnostic([1, 1], 5) == 1.0
    assert aoi_lower_bound_agnostic([1], 1) == 1.0
    assert aoi_lower_bound_agnostic([0.5] * 4, 2) == pytest.approx(2.5, rel=1e-12)


def test_mmw_upper_bound():
    assert mmw_upper_bound(1, 1, 1.0) == 1.0
    assert mmw_upper_bound(4, 2, 0.5) == pytest.approx(64 / 15, rel=1e-12)
    assert mmw_upper_bound(2, 1, 0.5) == 4.0
    assert 4.0 <= 2 * aoi_lower_bound([0.5, 0.5], 1)
    with pytest.raises(DomainError):
        mmw_upper_bound(2, 2, 0.0)


def test_adversarial_constants():
    b = adversarial_sum_lower_bound(2)
    assert (b.general, b.improved, b.best) == (5, 6, 6)
    assert adversarial_sum_lower_bound(1).general == 1
    assert adversarial_sum_lower_bound(4).general == 34
    assert yao_competitive_lower_bound(2) == Fraction(3, 2)
    assert yao_competitive_lower_bound(4) == Fraction(17, 8)
    assert yao_competitive_lower_bound(10) == Fraction(505, 100)
    with pytest.raises(DomainError):
        yao_competitive_lower_bound(1)


def test_yao_renewal():
    r = yao_renewal_quantities(2)
    assert (r.cycle_cost, r.cycle_length, r.per_ue_cost, r.total_cost) == (8, 4, 2, 4)
    assert yao_renewal_quantities(3).total_cost == 9
    assert adversarial_sum_lower_bound(2).improved / r.total_cost == Fraction(3, 2)


@pytest.mark.parametrize("N", range(2, 20))
def test_renewal_ratio_is_N(N):
    r = yao_renewal_quantities(N)
    assert r.cycle_cost / r.cycle_length == N
    assert r.total_cost == N * N


def test_mobility_advantage():
    assert mobility_advantage(1, 9).alpha == 1.0
    m = mobility_advantage(100, 5)
    assert m.regime == "under-loaded" and m.alpha == pytest.approx(4.90099501, rel=1e-8)
    m = mobility_advantage(2, 100)
    assert m.regime == "over-loaded" and m.alpha == pytest.approx(2.0, rel=1e-12)
    assert mobility_advantage(4, 8).regime == "constant-density"
    assert mobility_advantage(4, 8).c_bracket == (1.0, BETA)


@pytest.mark.parametrize("M", range(2, 9))
def test_g_consistency_small(M):
    for N in range(1, 9):
        assert abs(g_exact(uniform_psi(M, N)) - g_uniform(M, N)) <= 1e-12


@given(st.integers(1, 5), st.integers(1, 5), st.data())
def test_g_exact_at_most_min(N, M, data):
    raw = np.array(data.draw(st.lists(st.lists(st.floats(0.01, 1), min_size=M, max_size=M), min_size=N, max_size=N)))
    psi = raw / raw.sum(axis=1, keepdims=True)
    assert g_exact(psi) <= min(M, N) + 1e-12


@given(st.integers(1, 12))
def test_specialisation_to_adversarial_floor(N):
    assert aoi_lower_bound([1 / N] * N, 1) == pytest.approx(float(adversarial_sum_lower_bound(N).general) / N, rel=1e-9)


def test_upper_within_twice_lower_grid():
    for N in range(1, 65):
        for M in range(1, 17):
            g = g_uniform(M, N)
            for k in range(1, 11):
                p = k / 10
                assert mmw_upper_bound(N, M, p) <= 2 * aoi_lower_bound([p] * N, g) * (1 + 1e-12)


def test_bounds_report_flags_regime():
    rep = bounds_report([0.5, 0.5], 1)
    assert rep.aoi_lower == 2.5 and rep.mmw_upper == 4.0 and rep.adversarial_sum_lower.improved == 6
    rep = bounds_report([0.5, 0.4], 3)
    assert rep.mmw_upper is None and rep.notes
    assert rep.g_value <= min(rep.M, rep.N)
