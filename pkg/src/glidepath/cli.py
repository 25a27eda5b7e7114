"""Command-line entry point: ``glidepath {tables,plan,rank,estimate,replay}``.

Exit status: 0 success, 2 no reachable runway, 1 runtime error, 64 usage.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path

from . import formats
from .estimation import EstimatorConfig, estimate_series
from .loop import LoopConfig, replay
from .metrics import rank
from .planner import generate_all

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_UNREACHABLE = 2
EXIT_USAGE = 64

log = logging.getLogger("glidepath")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(f"{self.prog}: error: {message}")


def _jobs(p):
    p.add_argument("-j", "--jobs", type=int, default=1,
                   help="planner worker threads (output does not depend on it)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="glidepath", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("tables", help="glide ratio and turn radius per bank angle")
    p.add_argument("profile", help="profile file or packaged name (a320, c172)")
    p.add_argument("--g0", type=float, help="override the baseline glide ratio")

    for name, text in (("plan", "plan and rank every runway x bank pair"),
                       ("rank", "rank candidates; print only the report table")):
        p = sub.add_parser(name, help=text)
        p.add_argument("scenario")
        _jobs(p)
        p.add_argument("--raw", action="store_true", help="print raw metrics instead")
        if name == "plan":
            p.add_argument("-o", "--out", type=Path,
                           help="directory for per-candidate trajectory exports")
            p.add_argument("--format", choices=("csv", "geojson"), default="csv")

    p = sub.add_parser("estimate", help="glide ratio per stable window of an FDR file")
    p.add_argument("fdr")
    _estimator_args(p)

    p = sub.add_parser("replay", help="sense / refine / replan timeline over an FDR file")
    p.add_argument("fdr")
    p.add_argument("scenario")
    p.add_argument("--threshold", type=float, default=0.05,
                   help="relative baseline change that triggers a refine")
    _estimator_args(p)
    _jobs(p)
    return parser


def _estimator_args(p):
    p.add_argument("--epoch", type=float, default=0.0, help="seconds assigned to 't'")
    p.add_argument("--eta", type=int, default=4)
    p.add_argument("--omega", type=int, default=10)
    p.add_argument("--sigma", type=float, default=5.0)


def _estimator(args) -> EstimatorConfig:
    return EstimatorConfig(args.eta, args.omega, args.sigma)


def _truncate(x: float, places: int) -> float:
    # reference tables truncate; the epsilon absorbs 8.625000000000002-style noise
    scale = 10 ** places
    return math.floor(x * scale + 1e-6) / scale


def _fmt_radius(r: float) -> str:
    return "∞" if math.isinf(r) else f"{_truncate(r, 0):.0f}"


def cmd_tables(args, out) -> int:
    model = formats.load_profile(args.profile)
    if args.g0 is not None:
        model = model.with_g0(args.g0)
    out.write(f"# {model.name}: g0={model.g0:g}, best glide {model.best_glide_speed:g} kn\n")
    out.write("# bank glide_ratio radius_ft\n")
    for bank, g, r in formats.heading_table(model):
        out.write(f"{bank:g}° {_truncate(g, 2):.2f} {_fmt_radius(r)}\n")
    return EXIT_OK


def _plan(args):
    scn = formats.load_scenario(args.scenario)
    results = generate_all(scn.start, scn.runways, scn.banks, scn.model,
                           search_step=scn.search_step, step=scn.step, workers=args.jobs)
    return scn, rank(results)


def _print_candidates(args, cs, out):
    out.write(formats.format_raw_report(cs) if args.raw else formats.format_report(cs))


def cmd_rank(args, out) -> int:
    _, cs = _plan(args)
    _print_candidates(args, cs, out)
    return EXIT_OK if len(cs) else EXIT_UNREACHABLE


def cmd_plan(args, out) -> int:
    scn, cs = _plan(args)
    _print_candidates(args, cs, out)
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        for res, rep in cs:
            name = f"{rep.rank:02d}_{rep.runway_id}_{rep.bank:g}.{args.format}"
            formats.export_trajectory(
                res.trajectory, res.runway.frame, args.format, args.out / name,
                {"runway": rep.runway_id, "bank_deg": rep.bank, "word": res.word,
                 "spirals": res.spirals, "utility": rep.utility, "rank": rep.rank})
    if not len(cs):
        log.warning("no runway reachable from %s", scn.name)
        return EXIT_UNREACHABLE
    return EXIT_OK


def cmd_estimate(args, out) -> int:
    samples = formats.parse_fdr(args.fdr, args.epoch)
    estimates = estimate_series(samples, _estimator(args))
    out.write("t\tg_hat\tstd\tbank_deg\tdrag\twindow_start\n")
    for e in estimates:
        out.write(f"{e.window[1]:g}\t{e.g_hat:.3f}\t{e.std:.3f}\t{e.bank:.1f}"
                  f"\t{e.drag.name}\t{e.window[0]:g}\n")
    if not estimates:
        log.warning("no stable window in %s", args.fdr)
    return EXIT_OK


def cmd_replay(args, out) -> int:
    scn = formats.load_scenario(args.scenario)
    samples = formats.parse_fdr(args.fdr, args.epoch)
    cfg = LoopConfig(scn.runways, scn.banks, _estimator(args), args.threshold,
                     scn.search_step, args.jobs)
    out.write(formats.format_timeline(replay(samples, scn.model, cfg)))
    return EXIT_OK


COMMANDS = {"tables": cmd_tables, "plan": cmd_plan, "rank": cmd_rank,
            "estimate": cmd_estimate, "replay": cmd_replay}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    if getattr(args, "jobs", 1) is not None and getattr(args, "jobs", 1) < 1:
        print("glidepath: error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args, out)
    except (OSError, ValueError, KeyError) as exc:
        print(f"glidepath: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
