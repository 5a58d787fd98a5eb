"""Coded caching for the overloaded MISO broadcast channel.

Exact delivery-time analysis of the orthogonal, Maddah-Ali-Niesen and
partitioned schemes, their CSIT requirements, and a byte-level simulator
of the partitioned scheme's placement and XOR multicast delivery.
"""

from .model import (
    BadDemand,
    CacheTooLarge,
    DecodeFailure,
    EtaOutOfRange,
    LibraryTooSmall,
    NonIntegerGamma,
    NotPsEligible,
    OvercacheError,
    SubsetOverflow,
    SystemConfig,
    Unachievable,
    UserSet,
    enumerate_subsets,
    rank_subset,
    unrank_subset,
    validate_config,
)
from .schemes import (
    PartitionAnalysis,
    SchemeReport,
    man_delivery_time,
    optimize_eta_brute_force,
    optimize_eta_closed_form,
    os_delivery_time,
    partition_analysis,
)
from .csit import (
    CsitTradeoffPoint,
    csit_threshold_eta,
    delivery_time_with_csit,
    min_csit_for_delivery_time,
    optimal_delivery_time_with_csit,
    optimal_delivery_time_with_csit_oracle,
    os_csit_threshold,
    ps_csit_threshold,
)
from .cachesim import simulate
from .sweep import sweep_alpha, sweep_G, sweep_M

__version__ = "0.1.0"
