"""Parameter sweeps producing plot-ready CSV.

Three sweeps are provided: delivery time against CSIT quality, and the
OS/PS CSIT thresholds against the overloading factor or the cache size.
Threshold sweeps use a library of ``N_f = K_t`` files.
"""

from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional

from .csit import csit_quality, optimal_delivery_time_with_csit, os_csit_threshold, ps_csit_threshold
from .model import OvercacheError, SystemConfig
from .schemes import man_delivery_time

__all__ = [
    "SweepRow",
    "Sweep",
    "default_alpha_grid",
    "default_M_grid",
    "sweep_alpha",
    "sweep_G",
    "sweep_M",
    "to_csv",
    "thread_count",
]


@dataclass(frozen=True)
class SweepRow:
    """One point of a sweep.

    ``x`` is the swept value, ``series`` the computed quantities keyed by
    column stem, ``extra`` any non-rational columns (partition used, regime).
    """

    kind: str
    x: Fraction
    series: dict
    cfg: SystemConfig
    extra: dict = field(default_factory=dict)


@dataclass
class Sweep:
    kind: str
    rows: list
    skipped: list = field(default_factory=list)  # (x, reason)

    def __iter__(self):
        return iter(self.rows)

    def __len__(self):
        return len(self.rows)

    def __getitem__(self, i):
        return self.rows[i]

    def series(self, name: str) -> list:
        return [r.series[name] for r in self.rows]

    def to_csv(self) -> str:
        return to_csv(self)


def thread_count() -> int:
    raw = os.environ.get("OVERCACHE_THREADS")
    if not raw:
        return 1
    try:
        n = int(raw)
    except ValueError:
        raise OvercacheError(f"OVERCACHE_THREADS must be an integer, got {raw!r}") from None
    return max(n, 1)


def _run(kind: str, grid: Iterable, row_fn: Callable) -> Sweep:
    grid = list(grid)

    def attempt(x):
        try:
            return row_fn(x), None
        except OvercacheError as exc:
            return None, str(exc)

    n = thread_count()
    if n > 1:
        with ThreadPoolExecutor(max_workers=n) as pool:
            results = list(pool.map(attempt, grid))
    else:
        results = [attempt(x) for x in grid]
    out = Sweep(kind, [])
    for x, (row, err) in zip(grid, results):
        if row is None:
            out.skipped.append((x, err))
        else:
            out.rows.append(row)
    return out


def default_alpha_grid(points: int = 101) -> list[Fraction]:
    n = points - 1
    return [Fraction(i, n) for i in range(points)]


def default_M_grid(K: int, G: int) -> list[int]:
    """Cache sizes with integral Gamma <= K-1 for ``N_f = G K``."""
    N_f = G * K
    return [M for M in range(1, N_f) if (G * K * M) % N_f == 0 and G * K * M // N_f <= K - 1]


def sweep_alpha(cfg: SystemConfig, grid: Optional[Iterable] = None) -> Sweep:
    """Optimal PS delivery time across CSIT qualities, next to the MAN time."""
    cfg.require_ps()
    grid = default_alpha_grid() if grid is None else [csit_quality(a) for a in grid]
    t_man = man_delivery_time(cfg)

    def row(alpha):
        pt = optimal_delivery_time_with_csit(cfg, alpha)
        return SweepRow(
            "alpha",
            alpha,
            {"T_ps": pt.delivery_time, "T_man": t_man},
            cfg,
            {"eta": pt.eta_used, "regime": pt.regime},
        )

    return _run("alpha", grid, row)


def _threshold_row(kind: str, x, cfg: SystemConfig) -> SweepRow:
    return SweepRow(
        kind,
        Fraction(x),
        {"alpha_ps": ps_csit_threshold(cfg), "alpha_os": os_csit_threshold(cfg)},
        cfg,
    )


def sweep_G(K: int, M: int, G_grid: Iterable[int]) -> Sweep:
    """CSIT thresholds of PS and OS as the overloading factor grows."""
    return _run("G", G_grid, lambda G: _threshold_row("G", G, SystemConfig(K, G, G * K, M)))


def sweep_M(K: int, G: int, M_grid: Optional[Iterable[int]] = None) -> Sweep:
    """CSIT thresholds of PS and OS as the cache size grows."""
    if M_grid is None:
        M_grid = default_M_grid(K, G)
    return _run("M", M_grid, lambda M: _threshold_row("M", M, SystemConfig(K, G, G * K, M)))


def _fmt(q: Fraction) -> str:
    return format(float(q), ".12g")


def to_csv(sweep: Sweep) -> str:
    """Render a sweep with exact numerator/denominator columns per series.

    Each series contributes ``name_num,name_den,name``; the swept variable
    leads, config echo columns close the row. Decimal columns carry 12
    significant digits.
    """
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if not sweep.rows:
        w.writerow([sweep.kind])
        return buf.getvalue()
    first = sweep.rows[0]
    names = list(first.series)
    extras = list(first.extra)
    header = [sweep.kind]
    for name in names:
        header += [f"{name}_num", f"{name}_den", name]
    echo = [c for c in ("K", "G", "N_f", "M") if c != sweep.kind]
    exact_x = sweep.kind == "alpha"
    header += extras + ([f"{sweep.kind}_num", f"{sweep.kind}_den"] if exact_x else []) + echo
    w.writerow(header)
    for r in sweep.rows:
        line = [_fmt(r.x) if exact_x else r.x.numerator]
        for name in names:
            q = r.series[name]
            line += [q.numerator, q.denominator, _fmt(q)]
        line += [r.extra[e] for e in extras]
        if exact_x:
            line += [r.x.numerator, r.x.denominator]
        line += [getattr(r.cfg, c) for c in echo]
        w.writerow(line)
    return buf.getvalue()
