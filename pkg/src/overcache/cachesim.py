"""Byte-level simulation of the partitioned scheme under perfect CSIT.

Every file is laid out as ``C(K_t, eta)`` equally sized cached subfiles in
canonical subset order, followed by the uncached tail. Users cache the
subfiles whose index set contains them; the server multicasts one XOR per
``(eta+1)``-subset and sends each user's uncached tail privately in the
sub-phase of its antenna group. The physical layer is replaced by
error-free logical channels running at the accounted rates.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .model import (
    BadDemand,
    DecodeFailure,
    SystemConfig,
    UserSet,
    enumerate_subsets,
    rational_json,
)
from .schemes import PartitionAnalysis, _partition

__all__ = [
    "Library",
    "SubfileId",
    "CachePlacement",
    "MulticastMessage",
    "PrivatePayload",
    "DeliveryTranscript",
    "SimulationResult",
    "synthesize_library",
    "place_caches",
    "build_multicast_messages",
    "schedule_delivery",
    "decode_user",
    "simulate",
    "check_demands",
    "dump_transcript",
    "load_transcript_dump",
    "transcript_sidecar",
]

HEADER = struct.Struct("<7Q")


class SubfileId(NamedTuple):
    file: int  # 1-indexed
    tau: UserSet


@dataclass
class Library:
    """Synthetic library of ``N_f`` equal-length random files.

    Attributes
    ----------
    files : ndarray of uint8, shape (N_f, f_bytes)
    subfile_size : int
        Effective bytes per cached subfile.
    subsets : list of UserSet
        The ``eta``-subsets in canonical order; subfile ``i`` of a file sits
        at ``[i * subfile_size, (i + 1) * subfile_size)``.
    """

    cfg: SystemConfig
    eta: int
    seed: int
    requested_subfile_bytes: int
    subfile_size: int
    subsets: list
    files: np.ndarray

    @property
    def f_bytes(self) -> int:
        return self.files.shape[1]

    @property
    def cached_bytes(self) -> int:
        return len(self.subsets) * self.subfile_size

    @property
    def uncached_bytes(self) -> int:
        return self.f_bytes - self.cached_bytes

    def __post_init__(self):
        self._rank = {tau: i for i, tau in enumerate(self.subsets)}

    def subfile(self, n: int, tau: UserSet) -> np.ndarray:
        i = self._rank[tau] * self.subfile_size
        return self.files[n - 1, i:i + self.subfile_size]

    def uncached(self, n: int) -> np.ndarray:
        return self.files[n - 1, self.cached_bytes:]


@dataclass
class CachePlacement:
    """Cache contents ``Z_k`` of every user.

    ``caches[k]`` maps :class:`SubfileId` to the bytes held by user ``k``.
    ``library`` is the server-side copy used to build transmissions.
    """

    eta: int
    caches: dict
    library: Library = field(repr=False)

    def cache_bytes(self, k: int) -> int:
        return sum(len(b) for b in self.caches[k].values())


@dataclass(frozen=True)
class MulticastMessage:
    S: UserSet
    payload: bytes


@dataclass(frozen=True)
class PrivatePayload:
    user: int
    subphase: int
    payload: bytes


@dataclass
class DeliveryTranscript:
    """What the server sends, plus rate accounting in exact rationals.

    ``common_bits_per_slot`` and ``private_bits_per_slot`` are expressed
    per file bit ``f``; multiply by ``f_bits`` for absolute values.
    """

    cfg: SystemConfig
    eta: int
    demands: tuple
    messages: list
    private: list
    analysis: PartitionAnalysis
    f_bytes: int
    subfile_size: int

    @property
    def beta_star(self) -> Fraction:
        return self.analysis.beta_star

    @property
    def T(self) -> Fraction:
        return self.analysis.T_star

    @property
    def slots_per_subphase(self) -> Fraction:
        return self.T / self.cfg.G

    @property
    def common_bits_per_slot(self) -> Fraction:
        return 1 - self.beta_star

    @property
    def private_bits_per_slot(self) -> Fraction:
        return self.beta_star

    @property
    def f_bits(self) -> int:
        return 8 * self.f_bytes

    @property
    def common_bits(self) -> int:
        return 8 * sum(len(m.payload) for m in self.messages)

    @property
    def private_bits(self) -> int:
        return 8 * sum(len(p.payload) for p in self.private)

    def group(self, g: int) -> list[int]:
        K = self.cfg.K
        return list(range((g - 1) * K + 1, g * K + 1))

    def message_for(self, S: UserSet) -> Optional[MulticastMessage]:
        return self._by_set.get(S)

    def __post_init__(self):
        self._by_set = {m.S: m for m in self.messages}

    def check_accounting(self) -> None:
        """Assert that payload sizes match the rate budget exactly."""
        a, K, f = self.analysis, self.cfg.K, self.f_bits
        assert K * self.beta_star * self.T == a.Q_p, "private budget"
        assert (1 - self.beta_star) * self.T == a.Q_c, "common budget"
        assert self.common_bits == a.Q_c * f, "common payload size"
        assert self.private_bits == a.Q_p * f, "private payload size"
        # private rate K*beta per slot across G sub-phases of T/G slots each
        for g in range(1, self.cfg.G + 1):
            bits = 8 * sum(len(p.payload) for p in self.private if p.subphase == g)
            assert bits == K * self.beta_star * f * self.slots_per_subphase, g


def _effective_subfile_size(cfg: SystemConfig, eta: int, subfile_bytes: int) -> int:
    n_sub = comb(cfg.K_t, eta)
    ratio = Fraction(eta * cfg.N_f - cfg.K_t * cfg.M, cfg.K_t * cfg.M) * n_sub
    return subfile_bytes * (ratio * subfile_bytes).denominator


def synthesize_library(cfg: SystemConfig, eta: int, subfile_bytes: int = 1, seed: int = 0) -> Library:
    """Random library laid out for partition ``eta``.

    The cached subfile size is the smallest multiple of ``subfile_bytes``
    for which the uncached tail is a whole number of bytes.
    """
    cfg.require_eta(eta)
    if subfile_bytes < 1:
        raise ValueError("subfile_bytes must be at least 1")
    size = _effective_subfile_size(cfg, eta, subfile_bytes)
    subsets = enumerate_subsets(cfg.K_t, eta)
    p = Fraction(cfg.K_t * cfg.M, eta * cfg.N_f)
    f_bytes = len(subsets) * size / p
    assert f_bytes.denominator == 1
    rng = np.random.default_rng(seed)
    files = rng.integers(0, 256, size=(cfg.N_f, int(f_bytes)), dtype=np.uint8)
    files.setflags(write=False)
    return Library(cfg, eta, seed, subfile_bytes, size, subsets, files)


def place_caches(lib: Library, cfg: SystemConfig, eta: int) -> CachePlacement:
    """Fill every cache before any demand is known."""
    if lib.cfg != cfg or lib.eta != eta:
        raise ValueError("library was synthesized for a different configuration")
    caches = {}
    for k in range(1, cfg.K_t + 1):
        caches[k] = {
            SubfileId(n, tau): lib.subfile(n, tau).tobytes()
            for n in range(1, cfg.N_f + 1)
            for tau in lib.subsets
            if k in tau
        }
    return CachePlacement(eta, caches, lib)


def check_demands(cfg: SystemConfig, demands: Sequence[int]) -> tuple:
    demands = tuple(demands)
    if len(demands) != cfg.K_t:
        raise BadDemand(f"expected {cfg.K_t} demands, got {len(demands)}")
    for k, d in enumerate(demands, 1):
        if isinstance(d, bool) or not isinstance(d, (int, np.integer)) or not 1 <= d <= cfg.N_f:
            raise BadDemand(f"user {k} requests file {d!r}, outside [1, {cfg.N_f}]")
    return tuple(int(d) for d in demands)


@lru_cache(maxsize=256)
def _xor_plan(K_t: int, eta: int) -> tuple:
    """For each (eta+1)-subset S: (S, ((k, S minus k), ...)). Demand-independent."""
    return tuple(
        (S, tuple((k, S.remove(k)) for k in S))
        for S in enumerate_subsets(K_t, eta + 1)
    )


def build_multicast_messages(placement: CachePlacement, demands: Sequence[int]) -> list[MulticastMessage]:
    """One XOR per ``(eta+1)``-subset, in canonical order."""
    lib = placement.library
    cfg, eta = lib.cfg, placement.eta
    demands = check_demands(cfg, demands)
    if eta == cfg.K_t:
        return []
    size = lib.subfile_size
    out = []
    for S, terms in _xor_plan(cfg.K_t, eta):
        acc = 0
        for k, rest in terms:
            acc ^= int.from_bytes(lib.subfile(demands[k - 1], rest), "little")
        out.append(MulticastMessage(S, acc.to_bytes(size, "little")))
    return out


def schedule_delivery(cfg, eta, messages, lib, demands) -> DeliveryTranscript:
    """Common layer carries every message; sub-phase ``g`` serves group ``g``."""
    demands = check_demands(cfg, demands)
    analysis = _partition(cfg, eta)
    private = [
        PrivatePayload(k, (k - 1) // cfg.K + 1, lib.uncached(demands[k - 1]).tobytes())
        for k in range(1, cfg.K_t + 1)
    ]
    return DeliveryTranscript(
        cfg=cfg,
        eta=eta,
        demands=demands,
        messages=list(messages),
        private=private,
        analysis=analysis,
        f_bytes=lib.f_bytes,
        subfile_size=lib.subfile_size,
    )


@lru_cache(maxsize=1024)
def _decode_plan(K_t: int, eta: int, k: int) -> tuple:
    """Layout-ordered recipe for user ``k``.

    Entries are ``(tau, None, ())`` for subfiles user ``k`` holds, else
    ``(tau, S, ((i, S minus i), ...))`` naming the message and the side
    information that cancel to subfile ``tau``.
    """
    plan = []
    for tau in enumerate_subsets(K_t, eta):
        if k in tau:
            plan.append((tau, None, ()))
        else:
            S = tau.add(k)
            plan.append((tau, S, tuple((i, S.remove(i)) for i in S if i != k)))
    return tuple(plan)


def decode_user(k: int, placement: CachePlacement, transcript: DeliveryTranscript) -> bytes:
    """Rebuild the file requested by user ``k`` from its cache and the transcript.

    Only ``placement.caches[k]`` and the transcript are read; the server's
    library is never consulted.
    """
    cfg, eta = transcript.cfg, transcript.eta
    cache = placement.caches[k]
    demands = transcript.demands
    want = demands[k - 1]
    parts = []
    for tau, S, side in _decode_plan(cfg.K_t, eta, k):
        if S is None:
            sid = SubfileId(want, tau)
            if sid not in cache:
                raise DecodeFailure(f"user {k} lacks own subfile {sid}")
            parts.append(cache[sid])
            continue
        msg = transcript.message_for(S)
        if msg is None:
            raise DecodeFailure(f"no multicast message for S={S}")
        acc = int.from_bytes(msg.payload, "little")
        for i, rest in side:
            sid = SubfileId(demands[i - 1], rest)
            if sid not in cache:
                raise DecodeFailure(f"user {k} lacks side information {sid}")
            acc ^= int.from_bytes(cache[sid], "little")
        parts.append(acc.to_bytes(len(msg.payload), "little"))
    own = [p for p in transcript.private if p.user == k]
    if len(own) != 1:
        raise DecodeFailure(f"user {k} has {len(own)} private payloads")
    parts.append(own[0].payload)
    return b"".join(parts)


@dataclass
class SimulationResult:
    library: Library
    placement: CachePlacement
    transcript: DeliveryTranscript
    decoded_ok: dict

    @property
    def all_ok(self) -> bool:
        return all(self.decoded_ok.values())


def simulate(cfg: SystemConfig, eta: int, demands=None, *, seed: int = 0, subfile_bytes: int = 1) -> SimulationResult:
    """Run placement, delivery and decoding end to end.

    ``demands`` defaults to the worst case, user ``k`` asking for file ``k``.
    """
    if demands is None:
        demands = tuple(range(1, cfg.K_t + 1))
    lib = synthesize_library(cfg, eta, subfile_bytes, seed)
    placement = place_caches(lib, cfg, eta)
    messages = build_multicast_messages(placement, demands)
    transcript = schedule_delivery(cfg, eta, messages, lib, demands)
    ok = {}
    for k in range(1, cfg.K_t + 1):
        got = decode_user(k, placement, transcript)
        ok[k] = got == lib.files[transcript.demands[k - 1] - 1].tobytes()
    return SimulationResult(lib, placement, transcript, ok)


def dump_transcript(transcript: DeliveryTranscript, seed: int) -> bytes:
    """Deterministic binary transcript.

    Header of seven little-endian u64 (K, G, N_f, M, eta, subfile size,
    seed), then message payloads in rank order, then private payloads in
    user order. The header carries the effective subfile size so the dump
    can be parsed without re-deriving it.
    """
    cfg = transcript.cfg
    head = HEADER.pack(cfg.K, cfg.G, cfg.N_f, cfg.M, transcript.eta, transcript.subfile_size, seed)
    body = b"".join(m.payload for m in transcript.messages)
    tail = b"".join(p.payload for p in sorted(transcript.private, key=lambda p: p.user))
    return head + body + tail


def load_transcript_dump(blob: bytes) -> dict:
    K, G, N_f, M, eta, size, seed = HEADER.unpack_from(blob)
    cfg = SystemConfig(K, G, N_f, M)
    pos = HEADER.size
    n_msgs = comb(cfg.K_t, eta + 1) if eta < cfg.K_t else 0
    messages = []
    for S in enumerate_subsets(cfg.K_t, eta + 1) if n_msgs else []:
        messages.append((S, blob[pos:pos + size]))
        pos += size
    rest = blob[pos:]
    if len(rest) % cfg.K_t:
        raise ValueError("private section is not a whole number of per-user payloads")
    step = len(rest) // cfg.K_t
    private = [rest[i * step:(i + 1) * step] for i in range(cfg.K_t)]
    return {"cfg": cfg, "eta": eta, "subfile_size": size, "seed": seed, "messages": messages, "private": private}


def transcript_sidecar(transcript: DeliveryTranscript, seed: int, requested_subfile_bytes: int) -> str:
    a = transcript.analysis
    doc = {
        "config": transcript.cfg.to_json(),
        "eta": transcript.eta,
        "seed": seed,
        "subfile_bytes": requested_subfile_bytes,
        "effective_subfile_bytes": transcript.subfile_size,
        "f_bytes": transcript.f_bytes,
        "demands": list(transcript.demands),
        "messages": len(transcript.messages),
        "beta_star": rational_json(a.beta_star),
        "T": rational_json(a.T_star),
        "slots_per_subphase": rational_json(transcript.slots_per_subphase),
        "common_bits_per_slot_per_f": rational_json(transcript.common_bits_per_slot),
        "private_bits_per_slot_per_f": rational_json(transcript.private_bits_per_slot),
        "Q_c": rational_json(a.Q_c),
        "Q_p": rational_json(a.Q_p),
        "common_bits": transcript.common_bits,
        "private_bits": transcript.private_bits,
        "groups": {str(g): transcript.group(g) for g in range(1, transcript.cfg.G + 1)},
    }
    return json.dumps(doc, indent=2, sort_keys=True)
