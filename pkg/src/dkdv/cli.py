"""Command-line front end: ``dkdv {simulate,predict,crosscheck,sweep,smoke1d}``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import replace
from pathlib import Path

from .classify import classify
from .errors import DivisionBySeriesZero, PrecisionExhausted, ScenarioError, SeedConflict
from .harness import (
    REFERENCE_SCENARIOS,
    Scenario,
    reference_scenario,
    run_crosscheck,
    smoke_1d,
    strip_diagonal_scenario,
    summary_table,
    sweep,
)
from .render import render_ascii, render_svg
from .rules import WeightVector, interaction_trace

EXIT_OK = 0
EXIT_DISAGREE = 1
EXIT_PRECISION = 2
EXIT_INCONCLUSIVE = 2
EXIT_MALFORMED = 3

_U64 = (1 << 64) - 1


def _u64(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v <= _U64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _out_dir(args, default: str) -> Path:
    out = os.environ.get("DKDV_OUT") or args.out or default
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _load(args) -> Scenario:
    if getattr(args, "preset", None):
        sc = reference_scenario(args.preset)
    else:
        path = args.scenario or args.scenario_pos
        if path is None:
            raise ScenarioError("scenario", "no scenario file given (use --scenario PATH)")
        sc = Scenario.load(path)
    params = sc.params
    if args.seed is not None:
        params = params.with_seed(args.seed)
    if args.truncation is not None:
        params = params.with_budget(args.truncation)
    return replace(sc, params=params)


def _err(msg: str) -> None:
    print(f"dkdv: {msg}", file=sys.stderr)


def cmd_simulate(args) -> int:
    try:
        sc = _load(args)
        for attempt in range(2):
            try:
                report = classify(sc.grid(), margin=sc.margin)
                break
            except (PrecisionExhausted, DivisionBySeriesZero) as exc:
                if attempt:
                    _err(f"precision exhausted after retry with K={sc.params.truncation_budget}: {exc}")
                    return EXIT_PRECISION
                sc = replace(sc, params=sc.params.with_budget(2 * sc.params.truncation_budget))
    except (ScenarioError, SeedConflict) as exc:
        _err(f"malformed scenario: {exc}")
        return EXIT_MALFORMED
    out = _out_dir(args, "dkdv_out")
    (out / "valuations.tsv").write_text(report.vmap.to_tsv())
    doc = report.to_json("valuations.tsv")
    doc["truncation_budget"] = sc.params.truncation_budget
    doc["prng_seed"] = sc.params.prng_seed
    (out / "classification.json").write_text(json.dumps(doc, indent=2) + "\n")
    picture = render_ascii(report.vmap, report.all_strips())
    (out / "map.txt").write_text(picture)
    if args.svg:
        (out / "map.svg").write_text(render_svg(report.vmap, report.all_strips()))
    print(picture, end="")
    for name, profiles in report.strips.items():
        print(f"{name}: " + (" ".join(str(p.as_vector()) for p in profiles) or "-"))
    for name, msg in report.errors.items():
        print(f"{name}: {msg}")
    print(f"diagonals: {len(report.diagonals)}  clusters: {len(report.clusters)}")
    return EXIT_OK


def cmd_predict(args) -> int:
    try:
        wv = WeightVector.parse(args.weights)
    except ValueError as exc:
        _err(f"weights: {exc}")
        return EXIT_MALFORMED
    if args.q < 1:
        _err("q: must be >= 1")
        return EXIT_MALFORMED
    for i, v in enumerate(interaction_trace(wv, args.q)):
        mark = "*" if i % 2 == 0 else " "
        shown = ",".join(map(str, v.top_down())) if args.top_down else str(v)
        print(f"{i:3d}{mark} {shown}")
    return EXIT_OK


def _verdict_code(verdicts) -> int:
    if any(v == "Disagree" for v in verdicts):
        return EXIT_DISAGREE
    if any(v == "Inconclusive" for v in verdicts):
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def cmd_crosscheck(args) -> int:
    try:
        sc = _load(args)
        report = run_crosscheck(sc)
    except (ScenarioError, SeedConflict) as exc:
        _err(f"malformed scenario: {exc}")
        return EXIT_MALFORMED
    print(summary_table([report]), end="")
    for d in report.details:
        print(f"  {d}")
    if args.out or os.environ.get("DKDV_OUT"):
        out = _out_dir(args, ".")
        (out / "crosscheck.json").write_text(json.dumps(report.to_json(), indent=2) + "\n")
    return _verdict_code([report.verdict])


def _sweep_scenarios(args) -> list[Scenario]:
    if args.dir:
        paths = sorted(Path(args.dir).glob("*.json"))
        if not paths:
            raise ScenarioError("dir", f"no *.json scenarios in {args.dir}")
        scs = []
        for p in paths:
            sc = Scenario.load(p)
            scs.append(sc if sc.name else replace(sc, name=p.stem))
        return scs
    if args.reference:
        return [reference_scenario(name) for name in REFERENCE_SCENARIOS]
    return [
        strip_diagonal_scenario((p,), q, name=f"p={p},q={q}") for p in range(1, 7) for q in range(1, 7)
    ]


def cmd_sweep(args) -> int:
    try:
        scs = _sweep_scenarios(args)
        if args.seed is not None or args.truncation is not None:
            scs = [
                replace(
                    sc,
                    params=sc.params.with_seed(args.seed if args.seed is not None else sc.params.prng_seed).with_budget(
                        args.truncation or sc.params.truncation_budget
                    ),
                )
                for sc in scs
            ]
        reports = sweep(scs, jobs=args.jobs)
    except (ScenarioError, SeedConflict) as exc:
        _err(f"malformed scenario: {exc}")
        return EXIT_MALFORMED
    print(summary_table(reports), end="")
    if args.out or os.environ.get("DKDV_OUT"):
        out = _out_dir(args, ".")
        (out / "sweep.json").write_text(json.dumps([r.to_json() for r in reports], indent=2) + "\n")
    return _verdict_code([r.verdict for r in reports])


def cmd_smoke1d(args) -> int:
    rep = smoke_1d()
    for key in ("Eq2", "Eq1", "Eq2_generic"):
        print(f"{key:12s}" + " ".join(f"{v:3d}" for v in rep.to_json()[key]))
    print("confined (Eq2):", rep.eq2_confined)
    print("persistent (Eq1):", rep.eq1_persistent)
    return EXIT_OK if rep.passed else EXIT_DISAGREE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dkdv", description="Exact singularity patterns of the discrete KdV equation.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log retries and timings to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def scenario_args(p, preset=True):
        p.add_argument("scenario_pos", nargs="?", metavar="SCENARIO", help="scenario JSON (same as --scenario)")
        p.add_argument("--scenario", metavar="PATH")
        if preset:
            p.add_argument("--preset", choices=sorted(REFERENCE_SCENARIOS), help="built-in reference configuration")
        p.add_argument("--out", metavar="DIR", help="output directory (DKDV_OUT overrides)")
        p.add_argument("--seed", type=_u64, metavar="U64", help="override the scenario's PRNG seed")
        p.add_argument("--truncation", type=_positive, metavar="K", help="override the truncation budget")

    p = sub.add_parser("simulate", help="evolve a scenario, write valuations, classification and a picture")
    scenario_args(p)
    p.add_argument("--svg", action="store_true", help="also write map.svg")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("predict", help="print the elementary-step trace of a weight vector")
    p.add_argument("weights", help='ascending weights, e.g. "1,3,0,9@0"')
    p.add_argument("q", type=int, help="diagonal weight")
    p.add_argument("--top-down", action="store_true", help="print vectors top row first")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("crosscheck", help="compare lattice, symbolic dynamics and closed forms")
    scenario_args(p)
    p.set_defaults(func=cmd_crosscheck)

    p = sub.add_parser("sweep", help="crosscheck a directory of scenarios (default: single strips p,q in 1..6)")
    p.add_argument("--dir", metavar="DIR", help="directory of scenario JSON files")
    p.add_argument("--reference", action="store_true", help="sweep the built-in reference configurations")
    p.add_argument("--jobs", type=_positive, default=1, metavar="N")
    p.add_argument("--out", metavar="DIR")
    p.add_argument("--seed", type=_u64, metavar="U64")
    p.add_argument("--truncation", type=_positive, metavar="K")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("smoke1d", help="singularity patterns of the two one-dimensional mappings")
    p.set_defaults(func=cmd_smoke1d)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
