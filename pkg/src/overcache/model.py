"""System configuration, exact rationals and user-subset combinatorics.

Users are 1-indexed everywhere a human sees them and 0-indexed inside
bitmasks: bit ``k`` of a mask stands for user ``k + 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Iterator, Mapping

__all__ = [
    "OvercacheError",
    "NonIntegerGamma",
    "LibraryTooSmall",
    "CacheTooLarge",
    "NotPsEligible",
    "EtaOutOfRange",
    "Unachievable",
    "BadDemand",
    "DecodeFailure",
    "SubsetOverflow",
    "SystemConfig",
    "UserSet",
    "validate_config",
    "config_from_json",
    "enumerate_subsets",
    "rank_subset",
    "unrank_subset",
    "as_rational",
    "rational_json",
    "rational_from_json",
    "MAX_USERS",
]

MAX_USERS = 62


class OvercacheError(ValueError):
    """Base class for every validation error raised by this package."""


class NonIntegerGamma(OvercacheError):
    pass


class LibraryTooSmall(OvercacheError):
    pass


class CacheTooLarge(OvercacheError):
    pass


class NotPsEligible(OvercacheError):
    pass


class EtaOutOfRange(OvercacheError):
    pass


class Unachievable(OvercacheError):
    pass


class BadDemand(OvercacheError):
    pass


class SubsetOverflow(OvercacheError):
    pass


class DecodeFailure(AssertionError):
    """A user could not rebuild its file. Always an implementation bug."""


def as_rational(value) -> Fraction:
    """Convert ``value`` to a Fraction without passing through binary floats.

    Accepts ints, Fractions, Decimals and strings such as ``"7/5"`` or
    ``"0.75"``. Python floats are rejected because their binary expansion
    would leak into threshold comparisons.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, float):
        raise TypeError(f"refusing inexact float {value!r}; pass a string or Fraction")
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise OvercacheError(f"not a rational number: {value!r}") from exc
    return Fraction(value)


def rational_json(q: Fraction) -> dict:
    return {"num": q.numerator, "den": q.denominator}


def rational_from_json(obj: Mapping) -> Fraction:
    return Fraction(int(obj["num"]), int(obj["den"]))


@dataclass(frozen=True)
class SystemConfig:
    """Overloaded cache-aided MISO broadcast setting.

    Parameters
    ----------
    K : int
        Number of transmit antennas.
    G : int
        Overloading factor; there are ``G * K`` users.
    N_f : int
        Library size in files.
    M : int
        Cache size of each user, in files.

    Construction validates the tuple, so every instance in circulation is
    consistent: ``N_f >= K_t``, ``0 < M < N_f`` and ``K_t * M / N_f`` is an
    integer.
    """

    K: int
    G: int
    N_f: int
    M: int

    def __post_init__(self):
        for name in ("K", "G", "N_f", "M"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int) or v < 1:
                raise OvercacheError(f"{name} must be a positive integer, got {v!r}")
        if self.N_f < self.K_t:
            raise LibraryTooSmall(f"N_f={self.N_f} is smaller than K_t={self.K_t}")
        if self.M >= self.N_f:
            raise CacheTooLarge(f"M={self.M} must be below N_f={self.N_f}")
        if (self.K_t * self.M) % self.N_f:
            raise NonIntegerGamma(
                f"K_t*M/N_f = {self.K_t}*{self.M}/{self.N_f} is not an integer"
            )

    @property
    def K_t(self) -> int:
        return self.G * self.K

    @property
    def Gamma(self) -> int:
        return self.K_t * self.M // self.N_f

    @property
    def ps_eligible(self) -> bool:
        """True when the partitioned scheme analysis applies (Gamma <= K-1)."""
        return self.Gamma <= self.K - 1

    @property
    def cache_fraction(self) -> Fraction:
        return Fraction(self.M, self.N_f)

    def require_ps(self) -> None:
        if not self.ps_eligible:
            raise NotPsEligible(
                f"Gamma={self.Gamma} exceeds K-1={self.K - 1}; the partitioned "
                "scheme coincides with MAN in this regime"
            )

    def require_eta(self, eta: int) -> None:
        if isinstance(eta, bool) or not isinstance(eta, int):
            raise EtaOutOfRange(f"eta must be an integer, got {eta!r}")
        if not self.Gamma <= eta <= self.K_t:
            raise EtaOutOfRange(f"eta={eta} outside [{self.Gamma}, {self.K_t}]")

    def to_json(self) -> dict:
        return {"K": self.K, "G": self.G, "N_f": self.N_f, "M": self.M}

    def __str__(self):
        return f"K={self.K} G={self.G} N_f={self.N_f} M={self.M} (K_t={self.K_t}, Gamma={self.Gamma})"


def validate_config(raw: Mapping) -> SystemConfig:
    """Build a :class:`SystemConfig` from a mapping with keys K, G, N_f, M."""
    missing = [k for k in ("K", "G", "N_f", "M") if k not in raw]
    if missing:
        raise OvercacheError(f"missing config keys: {', '.join(missing)}")
    extra = set(raw) - {"K", "G", "N_f", "M"}
    if extra:
        raise OvercacheError(f"unknown config keys: {', '.join(sorted(extra))}")
    return SystemConfig(K=raw["K"], G=raw["G"], N_f=raw["N_f"], M=raw["M"])


def config_from_json(text: str) -> SystemConfig:
    import json

    return validate_config(json.loads(text))


class UserSet(int):
    """A set of users stored as a bitmask (bit k <-> user k+1).

    Subclassing ``int`` keeps hashing, equality and ordering (by mask) at C
    speed, which matters in the simulator's inner loops.
    """

    __slots__ = ()

    def __new__(cls, mask: int = 0):
        if mask < 0:
            raise ValueError("negative mask")
        return super().__new__(cls, mask)

    @classmethod
    def of(cls, users: Iterable[int]) -> "UserSet":
        """Build from 1-indexed user numbers."""
        mask = 0
        for u in users:
            if u < 1 or u > MAX_USERS:
                raise ValueError(f"user index {u} out of range")
            mask |= 1 << (u - 1)
        return cls(mask)

    @property
    def mask(self) -> int:
        return int(self)

    @property
    def size(self) -> int:
        return self.bit_count()

    def __contains__(self, user: int) -> bool:
        return user >= 1 and bool(self >> (user - 1) & 1)

    def __iter__(self) -> Iterator[int]:
        m, k = int(self), 1
        while m:
            if m & 1:
                yield k
            m >>= 1
            k += 1

    def __len__(self):
        return self.bit_count()

    def add(self, user: int) -> "UserSet":
        return UserSet(self | 1 << (user - 1))

    def remove(self, user: int) -> "UserSet":
        return UserSet(self & ~(1 << (user - 1)))

    def users(self) -> tuple[int, ...]:
        return tuple(self)

    def __repr__(self):
        return "{" + ",".join(map(str, self)) + "}"

    __str__ = __repr__


def _check_range(K_t: int, r: int) -> None:
    if K_t > MAX_USERS:
        raise SubsetOverflow(f"K_t={K_t} exceeds the {MAX_USERS}-user limit")
    if not 0 <= r <= K_t:
        raise ValueError(f"subset size {r} outside [0, {K_t}]")


@lru_cache(maxsize=1024)
def _subsets(K_t: int, r: int) -> tuple:
    if r == 0:
        return (UserSet(0),)
    out = []
    v = (1 << r) - 1
    limit = 1 << K_t
    while v < limit:
        out.append(UserSet(v))
        # next integer with the same popcount
        c = v & -v
        n = v + c
        v = (((n ^ v) >> 2) // c) | n
    return tuple(out)


def enumerate_subsets(K_t: int, r: int) -> list[UserSet]:
    """All ``r``-subsets of ``K_t`` users in strictly increasing mask order.

    The list position is the canonical rank used by every byte layout.
    """
    _check_range(K_t, r)
    return list(_subsets(K_t, r))


def rank_subset(s: UserSet) -> int:
    """Position of ``s`` among subsets of equal size, in mask order (colex rank)."""
    rank = 0
    for i, user in enumerate(s):
        rank += comb(user - 1, i + 1)
    return rank


def unrank_subset(rank: int, K_t: int, r: int) -> UserSet:
    _check_range(K_t, r)
    if not 0 <= rank < comb(K_t, r):
        raise ValueError(f"rank {rank} outside [0, C({K_t},{r}))")
    mask = 0
    for i in range(r, 0, -1):
        # largest position c with C(c, i) <= rank
        c = i - 1
        while comb(c + 1, i) <= rank:
            c += 1
        rank -= comb(c, i)
        mask |= 1 << c
    return UserSet(mask)
