"""Perfect-CSIT delivery times: orthogonal (OS), Maddah-Ali-Niesen (MAN)
and the partitioned scheme (PS) with its partition parameter ``eta``.

All quantities are exact :class:`fractions.Fraction` values. A delivery time
is measured in slots per file, one slot being the time needed to send a
whole file to a single user without caching or interference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .model import SystemConfig, rational_json

__all__ = [
    "PartitionAnalysis",
    "SchemeReport",
    "os_delivery_time",
    "man_delivery_time",
    "partition_analysis",
    "ps_delivery_time_eta",
    "stationary_point",
    "optimize_eta_closed_form",
    "optimize_eta_brute_force",
    "analyze",
]

# guard band around the real stationary point before taking floor/ceil
X_GUARD = 1e-9


@dataclass(frozen=True)
class PartitionAnalysis:
    """Loads and delivery time of the partitioned scheme at one ``eta``.

    Attributes
    ----------
    eta : int
        Replication factor of the cached part of the library.
    p : Fraction
        Cached fraction of every file, ``K_t M / (eta N_f)``.
    Q_c : Fraction
        Files delivered by coded multicast (cached part).
    Q_p : Fraction
        Files delivered by zero-forcing (uncached part).
    T_star : Fraction
        Delivery time ``Q_p / K + Q_c``.
    beta_star : Fraction
        Power split sending both parts in ``T_star`` slots; equal to the
        CSIT threshold at this ``eta``.
    """

    eta: int
    p: Fraction
    Q_c: Fraction
    Q_p: Fraction
    T_star: Fraction
    beta_star: Fraction

    @property
    def total_load(self) -> Fraction:
        return self.Q_c + self.Q_p


@dataclass(frozen=True)
class SchemeReport:
    scheme: str
    delivery_time: Fraction
    eta_star: Optional[int] = None
    x_continuous: Optional[float] = None

    def to_json(self) -> dict:
        out = {"scheme": self.scheme, "delivery_time": rational_json(self.delivery_time)}
        if self.eta_star is not None:
            out["eta_star"] = self.eta_star
        if self.x_continuous is not None:
            out["x"] = self.x_continuous
        return out

    def summary(self) -> str:
        t = self.delivery_time
        line = f"{self.scheme}: T = {t} ({float(t):.6g})"
        if self.eta_star is not None:
            line += f", eta* = {self.eta_star}"
        if self.x_continuous is not None:
            line += f", x = {self.x_continuous:.6f}"
        return line


def os_delivery_time(cfg: SystemConfig) -> Fraction:
    """Groups of ``K`` users served one after another by zero-forcing."""
    return cfg.G * (1 - cfg.cache_fraction)


def man_delivery_time(cfg: SystemConfig) -> Fraction:
    """Single-antenna coded caching over all ``K_t`` users."""
    return cfg.K_t * (1 - cfg.cache_fraction) / (1 + cfg.Gamma)


def _partition(cfg: SystemConfig, eta: int) -> PartitionAnalysis:
    # no eligibility check: the CSIT layer also needs this for Gamma >= K
    cfg.require_eta(eta)
    K_t, K = cfg.K_t, cfg.K
    p = Fraction(K_t * cfg.M, eta * cfg.N_f)
    Q_c = K_t * (p - cfg.cache_fraction) / (1 + eta)
    Q_p = K_t * (1 - p)
    zf = Q_p / K
    T = zf + Q_c
    # T > 0 always since M < N_f rules out Q_c = Q_p = 0
    return PartitionAnalysis(eta=eta, p=p, Q_c=Q_c, Q_p=Q_p, T_star=T, beta_star=zf / T)


def partition_analysis(cfg: SystemConfig, eta: int) -> PartitionAnalysis:
    """Exact loads, delivery time and power split for partition ``eta``.

    Raises
    ------
    NotPsEligible
        If ``Gamma > K - 1``.
    EtaOutOfRange
        If ``eta`` is not an integer in ``[Gamma, K_t]``.
    """
    cfg.require_ps()
    return _partition(cfg, eta)


def ps_delivery_time_eta(cfg: SystemConfig, eta: int) -> Fraction:
    """Expanded closed form of the PS delivery time at ``eta``.

    Written independently of the load decomposition so the two can be
    checked against each other.
    """
    cfg.require_eta(eta)
    K_t, M, N_f = cfg.K_t, cfg.M, cfg.N_f
    cached = Fraction(M * K_t, eta * N_f)
    return cfg.G * (1 - cached) + Fraction(K_t, eta + 1) * (cached - Fraction(M, N_f))


def stationary_point(cfg: SystemConfig) -> float:
    """Real minimiser of the relaxed delivery time over ``eta``."""
    G, K = cfg.G, cfg.K
    return (G * (K - 1) + math.sqrt(G * G * (K - 1) ** 2 + G * (G + 1) * (K - 1))) / (G + 1)


def _best(cfg: SystemConfig, etas) -> tuple[int, Fraction]:
    # min over (T, eta) breaks ties toward the smaller eta
    return min(((_partition(cfg, e).T_star, e) for e in etas))[::-1]


def optimize_eta_closed_form(cfg: SystemConfig) -> SchemeReport:
    """Optimal partition from the two integers around the stationary point."""
    cfg.require_ps()
    x = stationary_point(cfg)
    assert cfg.K - 1 - X_GUARD <= x <= cfg.K_t + X_GUARD, x
    candidates = {
        min(max(c, cfg.Gamma), cfg.K_t)
        for c in (
            math.floor(x - X_GUARD),
            math.floor(x + X_GUARD),
            math.ceil(x - X_GUARD),
            math.ceil(x + X_GUARD),
        )
    }
    eta, T = _best(cfg, sorted(candidates))
    return SchemeReport("PS", T, eta_star=eta, x_continuous=x)


def optimize_eta_brute_force(cfg: SystemConfig) -> SchemeReport:
    """Exhaustive minimum over every admissible ``eta``."""
    cfg.require_ps()
    eta, T = _best(cfg, range(cfg.Gamma, cfg.K_t + 1))
    return SchemeReport("PS", T, eta_star=eta)


def analyze(cfg: SystemConfig) -> list[SchemeReport]:
    """OS, MAN and PS reports for one configuration.

    Outside the PS regime (``Gamma >= K``) the PS report falls back to the
    MAN delivery time at ``eta = Gamma``.
    """
    reports = [
        SchemeReport("OS", os_delivery_time(cfg)),
        SchemeReport("MAN", man_delivery_time(cfg)),
    ]
    if cfg.ps_eligible:
        reports.append(optimize_eta_closed_form(cfg))
    else:
        reports.append(SchemeReport("PS", man_delivery_time(cfg), eta_star=cfg.Gamma))
    return reports
