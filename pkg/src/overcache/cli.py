"""Command-line entry point: ``overcache <subcommand> [flags]``.

Exit codes: 0 success, 1 validation error, 2 usage error, 70 internal
assertion.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import csit, schemes, sweep
from .cachesim import dump_transcript, simulate, transcript_sidecar
from .model import OvercacheError, SystemConfig, as_rational, rational_json, validate_config

EXIT_VALIDATION = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 70


def _rational(text: str):
    try:
        return as_rational(text)
    except OvercacheError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _config_flags(p: argparse.ArgumentParser, *, need=("K", "G", "Nf", "M")) -> None:
    g = p.add_argument_group("system configuration")
    g.add_argument("--K", type=int, help="transmit antennas")
    g.add_argument("--G", type=int, help="overloading factor")
    g.add_argument("--Nf", type=int, help="library size in files")
    g.add_argument("--M", type=int, help="cache size per user in files")
    g.add_argument("--config", type=Path, help='JSON file with keys "K","G","N_f","M"')


def _output_flags(p: argparse.ArgumentParser, default: str = "human") -> None:
    p.add_argument("--format", choices=("human", "json", "csv"), default=default)
    p.add_argument("--out", type=Path, help="write output here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="overcache", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="OS, MAN and PS delivery times")
    _config_flags(p)
    _output_flags(p)

    p = sub.add_parser("optimize", help="optimal partition: closed form vs exhaustive")
    _config_flags(p)
    p.add_argument("--eta", type=int, help="also report the analysis at this partition")
    _output_flags(p)

    p = sub.add_parser("csit", help="delivery time at a given CSIT quality")
    _config_flags(p)
    p.add_argument("--alpha", type=_rational, required=True, help="CSIT quality, e.g. 1/2 or 0.5")
    p.add_argument("--eta", type=int, help="evaluate this partition instead of optimizing")
    _output_flags(p)

    p = sub.add_parser("min-csit", help="minimum CSIT quality for a target delivery time")
    _config_flags(p)
    p.add_argument("--T", type=_rational, required=True, help="target delivery time, e.g. 7/5")
    _output_flags(p)

    p = sub.add_parser("simulate", help="byte-level placement, delivery and decoding")
    _config_flags(p)
    p.add_argument("--eta", type=int, help="partition (default: optimal)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--subfile-bytes", type=int, default=1)
    p.add_argument("--demands", type=_int_list, help="comma-separated file per user (default k -> k)")
    p.add_argument("--verify", action="store_true", help="fail unless every user decodes")
    p.add_argument("--dump", type=Path, help="write the binary transcript here (plus a .json sidecar)")
    _output_flags(p)

    p = sub.add_parser("sweep", help="CSV data for the delivery-time and threshold curves")
    p.add_argument("kind", choices=("alpha", "G", "M"))
    _config_flags(p)
    p.add_argument("--alpha-points", type=int, default=101)
    p.add_argument("--G-grid", type=_int_list, default=None, help="e.g. 1,2,3,4")
    p.add_argument("--M-grid", type=_int_list, default=None)
    _output_flags(p, default="csv")
    return parser


def _load_config(args, parser) -> SystemConfig:
    raw = {}
    if args.config is not None:
        try:
            raw.update(json.loads(args.config.read_text()))
        except (OSError, json.JSONDecodeError) as exc:
            raise OvercacheError(f"cannot read config {args.config}: {exc}") from None
    for flag, key in (("K", "K"), ("G", "G"), ("Nf", "N_f"), ("M", "M")):
        v = getattr(args, flag)
        if v is not None:
            raw[key] = v
    missing = [k for k in ("K", "G", "N_f", "M") if k not in raw]
    if missing:
        parser.error("missing configuration: " + ", ".join("--Nf" if k == "N_f" else f"--{k}" for k in missing))
    return validate_config(raw)


def _fmt(q) -> str:
    return f"{q} ({float(q):.6g})" if q.denominator != 1 else str(q)


def cmd_analyze(cfg, args):
    reports = schemes.analyze(cfg)
    if args.format == "json":
        return json.dumps({"config": cfg.to_json(), "reports": [r.to_json() for r in reports]}, indent=2)
    if args.format == "csv":
        lines = ["scheme,T_num,T_den,T,eta_star"]
        for r in reports:
            t = r.delivery_time
            lines.append(f"{r.scheme},{t.numerator},{t.denominator},{float(t):.12g},{r.eta_star if r.eta_star is not None else ''}")
        return "\n".join(lines)
    by = {r.scheme: r for r in reports}
    out = [str(cfg)]
    out.append(f"T_OS  = {_fmt(by['OS'].delivery_time)}")
    out.append(f"T_MAN = {_fmt(by['MAN'].delivery_time)}")
    out.append(f"T_PS  = {_fmt(by['PS'].delivery_time)}   eta* = {by['PS'].eta_star}")
    return "\n".join(out)


def _analysis_json(a):
    return {
        "eta": a.eta,
        "p": rational_json(a.p),
        "Q_c": rational_json(a.Q_c),
        "Q_p": rational_json(a.Q_p),
        "T_star": rational_json(a.T_star),
        "beta_star": rational_json(a.beta_star),
    }


def cmd_optimize(cfg, args):
    closed = schemes.optimize_eta_closed_form(cfg)
    brute = schemes.optimize_eta_brute_force(cfg)
    assert (closed.eta_star, closed.delivery_time) == (brute.eta_star, brute.delivery_time)
    detail = schemes.partition_analysis(cfg, args.eta) if args.eta is not None else None
    if args.format == "json":
        doc = {"closed_form": closed.to_json(), "brute_force": brute.to_json()}
        if detail is not None:
            doc["partition"] = _analysis_json(detail)
        return json.dumps(doc, indent=2)
    out = [str(cfg), closed.summary(), f"exhaustive search agrees: eta* = {brute.eta_star}"]
    if detail is not None:
        out.append(
            f"eta={detail.eta}: p={detail.p} Q_c={detail.Q_c} Q_p={detail.Q_p} "
            f"T={_fmt(detail.T_star)} beta*={detail.beta_star}"
        )
    return "\n".join(out)


def cmd_csit(cfg, args):
    if args.eta is not None:
        T = csit.delivery_time_with_csit(cfg, args.eta, args.alpha)
        thr = csit.csit_threshold_eta(cfg, args.eta)
        regime = csit.PERFECT_EQUIVALENT if args.alpha >= thr else csit.CSIT_LIMITED
        pt = csit.CsitTradeoffPoint(args.alpha, T, args.eta, regime)
    else:
        pt = csit.optimal_delivery_time_with_csit(cfg, args.alpha)
    if args.format == "json":
        return json.dumps(pt.to_json(), indent=2)
    return (
        f"alpha = {pt.alpha}: T = {_fmt(pt.delivery_time)} at eta = {pt.eta_used} "
        f"[{pt.regime}]; T_MAN = {_fmt(schemes.man_delivery_time(cfg))}"
    )


def cmd_min_csit(cfg, args):
    res = csit.min_csit(cfg, args.T)
    if args.format == "json":
        return json.dumps(res.to_json(), indent=2)
    return f"alpha = {_fmt(res.alpha)} achieves T = {res.target} with eta = {res.eta} [{res.regime}]"


def cmd_simulate(cfg, args):
    eta = args.eta
    if eta is None:
        eta = schemes.optimize_eta_closed_form(cfg).eta_star if cfg.ps_eligible else cfg.Gamma
    res = simulate(cfg, eta, args.demands, seed=args.seed, subfile_bytes=args.subfile_bytes)
    tr = res.transcript
    tr.check_accounting()
    if args.dump is not None:
        args.dump.write_bytes(dump_transcript(tr, args.seed))
        args.dump.with_suffix(args.dump.suffix + ".json").write_text(
            transcript_sidecar(tr, args.seed, args.subfile_bytes) + "\n"
        )
    if args.verify and not res.all_ok:
        bad = [k for k, ok in res.decoded_ok.items() if not ok]
        raise AssertionError(f"users {bad} failed to decode")
    if args.format == "json":
        doc = json.loads(transcript_sidecar(tr, args.seed, args.subfile_bytes))
        doc["decoded_ok"] = res.all_ok
        return json.dumps(doc, indent=2, sort_keys=True)
    n_ok = sum(res.decoded_ok.values())
    status = f"all {cfg.K_t} users decoded OK" if res.all_ok else f"{n_ok}/{cfg.K_t} users decoded"
    groups = " then ".join("{" + ",".join(map(str, tr.group(g))) + "}" for g in range(1, cfg.G + 1))
    return "\n".join([
        f"{cfg}, eta={eta}, seed={args.seed}",
        f"file size {res.library.f_bytes} bytes, subfile {res.library.subfile_size} bytes, "
        f"{len(tr.messages)} multicast messages",
        f"beta* = {tr.beta_star}, T = {_fmt(tr.T)}, {_fmt(tr.slots_per_subphase)} slots per sub-phase, groups {groups}",
        status,
    ])


def cmd_sweep(cfg_args, args, parser):
    if args.kind == "alpha":
        cfg = _load_config(args, parser)
        result = sweep.sweep_alpha(cfg, sweep.default_alpha_grid(args.alpha_points))
    elif args.kind == "G":
        if args.K is None or args.M is None:
            parser.error("sweep G needs --K and --M")
        result = sweep.sweep_G(args.K, args.M, args.G_grid or range(1, 9))
    else:
        if args.K is None or args.G is None:
            parser.error("sweep M needs --K and --G")
        result = sweep.sweep_M(args.K, args.G, args.M_grid)
    for x, reason in result.skipped:
        print(f"skipped {args.kind}={x}: {reason}", file=sys.stderr)
    if args.format == "json":
        rows = [
            {args.kind: rational_json(r.x), **{k: rational_json(v) for k, v in r.series.items()}, **r.extra}
            for r in result
        ]
        return json.dumps(rows, indent=2)
    if args.format == "human":
        lines = []
        for r in result:
            cols = "  ".join(f"{k}={v} ({float(v):.6g})" for k, v in r.series.items())
            lines.append(f"{args.kind}={r.x}: {cols}")
        return "\n".join(lines)
    return result.to_csv().rstrip("\n")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "sweep":
            text = cmd_sweep(None, args, parser)
        else:
            cfg = _load_config(args, parser)
            handler = {
                "analyze": cmd_analyze,
                "optimize": cmd_optimize,
                "csit": cmd_csit,
                "min-csit": cmd_min_csit,
                "simulate": cmd_simulate,
            }[args.command]
            text = handler(cfg, args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except OvercacheError as exc:
        print(f"overcache: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except AssertionError as exc:
        print(f"overcache: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    if args.out is not None:
        args.out.write_text(text + "\n")
    else:
        print(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
