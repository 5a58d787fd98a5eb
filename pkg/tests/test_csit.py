from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import extended_ps_grid, oracle_T_alpha, ps_grid
from overcache import (
    EtaOutOfRange,
    NotPsEligible,
    OvercacheError,
    SystemConfig,
    Unachievable,
    csit_threshold_eta,
    delivery_time_with_csit,
    man_delivery_time,
    min_csit_for_delivery_time,
    optimal_delivery_time_with_csit,
    optimal_delivery_time_with_csit_oracle,
    optimize_eta_brute_force,
    os_csit_threshold,
    os_delivery_time,
    partition_analysis,
    ps_csit_threshold,
)
from overcache.csit import CSIT_LIMITED, MAN_SUFFICIENT, PERFECT_EQUIVALENT, min_csit

ALPHAS = [Fr(i, 20) for i in range(21)]


def test_threshold_eta(toy_cfg, anchor_cfg):
    assert csit_threshold_eta(toy_cfg, 2) == Fr(3, 4)
    assert csit_threshold_eta(toy_cfg, 1) == 0
    assert csit_threshold_eta(anchor_cfg, 10) == Fr(33, 34)
    with pytest.raises(EtaOutOfRange):
        csit_threshold_eta(toy_cfg, 5)


@pytest.mark.parametrize("cfg", list(ps_grid()), ids=str)
def test_threshold_at_gamma_is_zero(cfg):
    assert csit_threshold_eta(cfg, cfg.Gamma) == 0


def test_delivery_time_with_csit_examples(toy_cfg):
    assert delivery_time_with_csit(toy_cfg, 2, Fr(1, 2)) == Fr(14, 9)
    assert delivery_time_with_csit(toy_cfg, 2, Fr(3, 4)) == Fr(4, 3)
    assert delivery_time_with_csit(toy_cfg, 1, 0) == Fr(3, 2) == man_delivery_time(toy_cfg)
    assert [delivery_time_with_csit(toy_cfg, e, Fr(1, 2)) for e in range(1, 5)] == [
        Fr(3, 2), Fr(14, 9), Fr(11, 6), Fr(2)
    ]


def test_alpha_validation(toy_cfg):
    with pytest.raises(OvercacheError):
        delivery_time_with_csit(toy_cfg, 2, Fr(3, 2))
    with pytest.raises(OvercacheError):
        delivery_time_with_csit(toy_cfg, 2, -1)
    assert delivery_time_with_csit(toy_cfg, 2, "0.5") == Fr(14, 9)


@pytest.mark.parametrize("cfg", list(ps_grid())[::3], ids=str)
def test_delivery_time_matches_rate_oracle(cfg):
    for eta in range(cfg.Gamma, cfg.K_t + 1):
        for a in ALPHAS:
            assert delivery_time_with_csit(cfg, eta, a) == oracle_T_alpha(cfg, eta, a)


def test_optimal_toy(toy_cfg):
    pt = optimal_delivery_time_with_csit(toy_cfg, Fr(1, 2))
    assert (pt.delivery_time, pt.eta_used, pt.regime) == (Fr(3, 2), 1, CSIT_LIMITED)
    pt = optimal_delivery_time_with_csit(toy_cfg, Fr(9, 10))
    assert (pt.delivery_time, pt.eta_used, pt.regime) == (Fr(4, 3), 2, PERFECT_EQUIVALENT)
    assert optimal_delivery_time_with_csit_oracle(toy_cfg, Fr(1, 2)).delivery_time == Fr(3, 2)
    assert optimal_delivery_time_with_csit_oracle(toy_cfg, 0).delivery_time == Fr(3, 2)


def test_optimal_anchor(anchor_cfg):
    pt = optimal_delivery_time_with_csit(anchor_cfg, 1)
    assert pt.delivery_time == Fr(102, 55)
    ratio = man_delivery_time(anchor_cfg) / pt.delivery_time
    assert 4.0 <= ratio <= 4.1


def test_optimal_requires_ps():
    with pytest.raises(NotPsEligible):
        optimal_delivery_time_with_csit(SystemConfig(2, 2, 4, 2), Fr(1, 2))


@pytest.mark.parametrize("cfg", list(extended_ps_grid())[::4], ids=str)
def test_closed_form_equals_oracle(cfg):
    for a in ALPHAS:
        c = optimal_delivery_time_with_csit(cfg, a)
        o = optimal_delivery_time_with_csit_oracle(cfg, a)
        assert c.delivery_time == o.delivery_time
        assert c.delivery_time >= optimize_eta_brute_force(cfg).delivery_time
        assert cfg.Gamma <= c.eta_used <= optimize_eta_brute_force(cfg).eta_star


@pytest.mark.parametrize("cfg", list(extended_ps_grid()), ids=str)
def test_appendix_b_monotonicity(cfg):
    parts = [partition_analysis(cfg, e) for e in range(cfg.Gamma, cfg.K_t + 1)]
    for a, b in zip(parts, parts[1:]):
        assert b.Q_c < a.Q_c
        assert b.Q_p > a.Q_p
        assert b.beta_star >= a.beta_star
        if a.Q_c > 0 and a.Q_p > 0 and b.Q_c > 0:
            assert b.beta_star > a.beta_star
        assert b.total_load > a.total_load
    K_t, r = cfg.K_t, Fr(cfg.M, cfg.N_f)
    for p in parts:
        assert p.total_load == K_t - r * Fr(K_t * K_t + K_t, p.eta + 1)
        assert p.total_load == p.T_star * (1 + (cfg.K - 1) * p.beta_star)


@pytest.mark.parametrize("cfg", list(extended_ps_grid()), ids=str)
def test_T_star_valley_around_eta_star(cfg):
    eta_star = optimize_eta_brute_force(cfg).eta_star
    T = {e: partition_analysis(cfg, e).T_star for e in range(cfg.Gamma, cfg.K_t + 1)}
    assert all(T[e] > T[e + 1] for e in range(cfg.Gamma, eta_star))
    assert all(T[e] <= T[e + 1] for e in range(eta_star, cfg.K_t))


@pytest.mark.parametrize("cfg", list(ps_grid())[::2], ids=str)
def test_curve_shape(cfg):
    curve = [optimal_delivery_time_with_csit(cfg, a) for a in ALPHAS]
    T = [p.delivery_time for p in curve]
    assert all(x >= y for x, y in zip(T, T[1:]))
    assert T[0] == man_delivery_time(cfg)
    best = optimize_eta_brute_force(cfg)
    a_star = csit_threshold_eta(cfg, best.eta_star)
    for a, t in zip(ALPHAS, T):
        if a >= a_star:
            assert t == best.delivery_time


def grid_search_min_alpha(cfg, T, den):
    """Smallest alpha = i/den whose best time over all eta meets T."""
    for i in range(den + 1):
        a = Fr(i, den)
        if min(oracle_T_alpha(cfg, e, a) for e in range(cfg.Gamma, cfg.K_t + 1)) <= T:
            return a
    return None


def test_min_csit_toy(toy_cfg):
    assert grid_search_min_alpha(toy_cfg, Fr(7, 5), 600) == Fr(2, 3)
    res = min_csit(toy_cfg, Fr(7, 5))
    assert (res.alpha, res.eta) == (Fr(2, 3), 2)
    assert delivery_time_with_csit(toy_cfg, 2, Fr(2, 3)) == Fr(7, 5)
    assert min_csit_for_delivery_time(toy_cfg, Fr(3, 2)) == 0
    assert min_csit(toy_cfg, Fr(3, 2)).regime == MAN_SUFFICIENT
    assert min_csit_for_delivery_time(toy_cfg, Fr(4, 3)) == Fr(3, 4)
    assert min_csit_for_delivery_time(toy_cfg, 5) == 0
    with pytest.raises(Unachievable):
        min_csit_for_delivery_time(toy_cfg, Fr(13, 10))


@pytest.mark.parametrize("cfg", [SystemConfig(2, 2, 4, 1), SystemConfig(3, 2, 6, 1), SystemConfig(4, 2, 8, 2)], ids=str)
def test_min_csit_against_grid_search(cfg):
    best = optimize_eta_brute_force(cfg).delivery_time
    top = man_delivery_time(cfg)
    den = 240
    for i in range(1, 8):
        T = best + (top - best) * Fr(i, 8)
        a = min_csit_for_delivery_time(cfg, T)
        g = grid_search_min_alpha(cfg, T, den)
        # grid answer is the exact minimum rounded up to the grid
        assert a <= g < a + Fr(1, den) or g == a


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(list(ps_grid())), st.fractions(0, 1))
def test_min_csit_roundtrip_property(cfg, u):
    best = optimize_eta_brute_force(cfg).delivery_time
    T = best + (man_delivery_time(cfg) - best) * u
    a = min_csit_for_delivery_time(cfg, T)
    assert 0 <= a <= 1
    assert optimal_delivery_time_with_csit(cfg, a).delivery_time <= T


def test_os_threshold_examples():
    assert os_csit_threshold(SystemConfig(4, 2, 8, 2)) == Fr(8, 9)
    assert os_csit_threshold(SystemConfig(2, 2, 4, 1)) == Fr(2, 3)
    g1 = SystemConfig(4, 1, 4, 2)
    assert os_csit_threshold(g1) == ps_csit_threshold(g1)


def test_ps_threshold_examples():
    assert ps_csit_threshold(SystemConfig(4, 2, 8, 2)) == Fr(4, 9)
    assert ps_csit_threshold(SystemConfig(2, 2, 4, 1)) == 0
    with pytest.raises(NotPsEligible):
        ps_csit_threshold(SystemConfig(2, 2, 4, 2))


@pytest.mark.parametrize("cfg", list(extended_ps_grid()), ids=str)
def test_ps_threshold_via_min_csit(cfg):
    # OS time coincides with the PS time at eta = K-1
    assert partition_analysis(cfg, cfg.K - 1).T_star == os_delivery_time(cfg)
    assert ps_csit_threshold(cfg) == min_csit_for_delivery_time(cfg, os_delivery_time(cfg))
    if cfg.G >= 2:
        assert ps_csit_threshold(cfg) < os_csit_threshold(cfg)
    else:
        assert ps_csit_threshold(cfg) == os_csit_threshold(cfg)
