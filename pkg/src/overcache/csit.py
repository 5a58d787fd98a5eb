"""Delivery time under partial CSIT.

The CSIT quality ``alpha`` in [0, 1] is the decay exponent of the channel
estimation error. Private streams keep their perfect-CSIT rate as long as
``alpha`` is at least the power split ``beta*``; below it the uncached part
goes through rate-splitting with total rate ``beta + (K-1) min(alpha, beta)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .model import (
    OvercacheError,
    SystemConfig,
    Unachievable,
    as_rational,
    rational_json,
)
from .schemes import _partition, man_delivery_time, optimize_eta_brute_force, optimize_eta_closed_form

__all__ = [
    "PERFECT_EQUIVALENT",
    "CSIT_LIMITED",
    "MAN_SUFFICIENT",
    "CsitTradeoffPoint",
    "MinCsit",
    "csit_quality",
    "csit_threshold_eta",
    "delivery_time_with_csit",
    "optimal_delivery_time_with_csit",
    "optimal_delivery_time_with_csit_oracle",
    "min_csit",
    "min_csit_for_delivery_time",
    "os_csit_threshold",
    "ps_csit_threshold",
]

PERFECT_EQUIVALENT = "perfect-equivalent"
CSIT_LIMITED = "csit-limited"
MAN_SUFFICIENT = "MAN-sufficient"


def csit_quality(alpha) -> Fraction:
    """Coerce ``alpha`` to an exact rational and check it lies in [0, 1]."""
    a = as_rational(alpha)
    if not 0 <= a <= 1:
        raise OvercacheError(f"CSIT quality must lie in [0, 1], got {a}")
    return a


@dataclass(frozen=True)
class CsitTradeoffPoint:
    alpha: Fraction
    delivery_time: Fraction
    eta_used: int
    regime: str

    def to_json(self) -> dict:
        return {
            "alpha": rational_json(self.alpha),
            "T": rational_json(self.delivery_time),
            "eta": self.eta_used,
            "regime": self.regime,
        }


@dataclass(frozen=True)
class MinCsit:
    """Minimum CSIT quality for a target time, with the partition achieving it."""

    alpha: Fraction
    eta: int
    target: Fraction
    regime: str

    def to_json(self) -> dict:
        return {
            "alpha": rational_json(self.alpha),
            "T": rational_json(self.target),
            "eta": self.eta,
            "regime": self.regime,
        }


def csit_threshold_eta(cfg: SystemConfig, eta: int) -> Fraction:
    """Smallest ``alpha`` keeping the perfect-CSIT delivery time at ``eta``."""
    return _partition(cfg, eta).beta_star


def _rate_split_time(total_load: Fraction, K: int, alpha: Fraction) -> Fraction:
    return total_load / (1 + (K - 1) * alpha)


def delivery_time_with_csit(cfg: SystemConfig, eta: int, alpha) -> Fraction:
    alpha = csit_quality(alpha)
    part = _partition(cfg, eta)
    if alpha >= part.beta_star:
        return part.T_star
    return _rate_split_time(part.total_load, cfg.K, alpha)


def optimal_delivery_time_with_csit(cfg: SystemConfig, alpha) -> CsitTradeoffPoint:
    """Best delivery time at quality ``alpha`` from the two-candidate rule.

    Below the threshold ``alpha*`` of the optimal partition, take the
    largest ``eta < eta*`` whose own threshold is met and compare its
    perfect-CSIT time with the rate-split time of ``eta + 1``.
    """
    alpha = csit_quality(alpha)
    best = optimize_eta_closed_form(cfg)
    eta_star = best.eta_star
    if alpha >= csit_threshold_eta(cfg, eta_star):
        return CsitTradeoffPoint(alpha, best.delivery_time, eta_star, PERFECT_EQUIVALENT)

    feasible = [e for e in range(cfg.Gamma, eta_star) if csit_threshold_eta(cfg, e) <= alpha]
    # threshold at Gamma is 0, so this list is never empty
    assert feasible, (cfg, alpha)
    eta = feasible[-1]
    here = _partition(cfg, eta).T_star
    nxt = _partition(cfg, eta + 1)
    split = nxt.T_star * (1 + (cfg.K - 1) * nxt.beta_star) / (1 + (cfg.K - 1) * alpha)
    if here <= split:
        return CsitTradeoffPoint(alpha, here, eta, CSIT_LIMITED)
    return CsitTradeoffPoint(alpha, split, eta + 1, CSIT_LIMITED)


def optimal_delivery_time_with_csit_oracle(cfg: SystemConfig, alpha) -> CsitTradeoffPoint:
    """Exhaustive minimum of :func:`delivery_time_with_csit` over ``eta``."""
    alpha = csit_quality(alpha)
    cfg.require_ps()
    T, eta = min((delivery_time_with_csit(cfg, e, alpha), e) for e in range(cfg.Gamma, cfg.K_t + 1))
    regime = PERFECT_EQUIVALENT if alpha >= csit_threshold_eta(cfg, eta) else CSIT_LIMITED
    return CsitTradeoffPoint(alpha, T, eta, regime)


def min_csit(cfg: SystemConfig, T) -> MinCsit:
    """Minimum CSIT quality achieving delivery time ``T``.

    Uses the smallest partition ``eta <= eta*`` whose perfect-CSIT time
    already meets ``T``. Targets at or above the MAN time need no CSIT.

    Raises
    ------
    Unachievable
        If ``T`` is below the perfect-CSIT optimum.
    """
    T = as_rational(T)
    best = optimize_eta_brute_force(cfg)
    if T < best.delivery_time:
        raise Unachievable(f"T={T} is below the perfect-CSIT optimum {best.delivery_time}")
    if T >= man_delivery_time(cfg):
        return MinCsit(Fraction(0), cfg.Gamma, T, MAN_SUFFICIENT)
    eta = next(e for e in range(cfg.Gamma, best.eta_star + 1) if _partition(cfg, e).T_star <= T)
    part = _partition(cfg, eta)
    alpha = (part.T_star * (1 + (cfg.K - 1) * part.beta_star) - T) / ((cfg.K - 1) * T)
    # alpha <= threshold at eta, with equality iff T hits T_star exactly
    assert alpha <= part.beta_star
    return MinCsit(max(alpha, Fraction(0)), eta, T, CSIT_LIMITED)


def min_csit_for_delivery_time(cfg: SystemConfig, T) -> Fraction:
    return min_csit(cfg, T).alpha


def _threshold_den(cfg: SystemConfig) -> Fraction:
    K, N_f, M = cfg.K, cfg.N_f, cfg.M
    return Fraction(M, K) + N_f - Fraction(N_f, K) - M


def os_csit_threshold(cfg: SystemConfig) -> Fraction:
    """CSIT quality at which per-group coded caching reaches the OS time.

    Negative values (only possible when ``Gamma >= K``) clamp to 0.
    """
    num = cfg.N_f - Fraction(cfg.N_f, cfg.K) - cfg.M
    return max(num / _threshold_den(cfg), Fraction(0))


def ps_csit_threshold(cfg: SystemConfig) -> Fraction:
    """CSIT quality at which the partitioned scheme reaches the OS time."""
    cfg.require_ps()
    num = cfg.N_f - Fraction(cfg.N_f, cfg.K) - cfg.M * cfg.G
    return max(num / _threshold_den(cfg), Fraction(0))
