"""Command-line front end.

Exit codes: 0 success, 1 infeasible or unsatisfiable input (or, for
``validate``, a plan with violations), 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from . import bench
from .constraints import validate_layout
from .errors import AllocationFailure, CapacityError, GenerationFailure, YardError
from .fitness import FitnessMode, layout_fitness
from .ga import GAConfig, run
from .instances import (
    DEFAULT_DATE_RANGE,
    GenSpec,
    comparison_preset,
    generate_instance,
    load_instance,
    load_plan,
    save_instance,
    save_plan,
)
from .lifo import lifo_allocate
from .yard import YardConfig

EXIT_OK, EXIT_INFEASIBLE, EXIT_USAGE = 0, 1, 2

log = logging.getLogger("yardga")


def _counts(text: str) -> dict[int, int]:
    try:
        pairs = (item.split("=") for item in text.split(",") if item.strip())
        return {int(t): int(n) for t, n in pairs}
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected TYPE=COUNT[,TYPE=COUNT...], got {text!r}") from None


def _write_json(path: str | None, doc: dict) -> None:
    text = json.dumps(doc, indent=2) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def cmd_generate(args) -> int:
    dates = (args.date_min, args.date_max)
    if args.preset is not None:
        instance = comparison_preset(args.preset, dates, args.seed)
    else:
        if args.counts is None:
            raise YardError("either --preset or --counts is required")
        cfg = YardConfig(args.n1, args.n2, args.n3, n_stock_refrig=args.refrig, n_stock_reg=args.reg)
        instance = generate_instance(GenSpec(cfg, args.counts, dates, args.seed))
    save_instance(instance, args.output)
    print(f"wrote {len(instance)} containers to {args.output}")
    return EXIT_OK


def cmd_solve(args) -> int:
    instance = load_instance(args.instance)
    config = GAConfig(
        pop_size=args.pop_size,
        stall_window=args.stall,
        max_generations=args.max_generations,
        p_cross=args.p_cross,
        p_mut=args.p_mut,
        seed=args.seed,
        mode=args.mode,
    )
    result = run(instance, config)
    save_plan(result.best.layout, args.output)
    report = {
        "instance": str(args.instance),
        "plan": str(args.output),
        "seed": config.seed,
        "pop_size": config.pop_size,
        "stall_window": config.stall_window,
        "max_generations": config.max_generations,
        "p_cross": config.p_cross,
        "p_mut": config.p_mut,
        "mode": config.mode.value,
        "F_i": result.initial_fitness,
        "F_f": result.final_fitness,
        "generations": result.generations_run,
        "elapsed_ms": round(result.elapsed * 1000),
        "history": result.history,
    }
    if args.report:
        _write_json(args.report, report)
    print(
        f"F_i={result.initial_fitness:.6g} F_f={result.final_fitness:.6g} "
        f"generations={result.generations_run} elapsed_ms={report['elapsed_ms']}"
    )
    return EXIT_OK


def cmd_baseline(args) -> int:
    instance = load_instance(args.instance)
    layout = lifo_allocate(instance)
    save_plan(layout, args.output)
    report = {
        "instance": str(args.instance),
        "plan": str(args.output),
        "fitness_blocking": layout_fitness(layout, instance, FitnessMode.BLOCKING),
        "fitness_above": layout_fitness(layout, instance, FitnessMode.ABOVE),
    }
    if args.report:
        _write_json(args.report, report)
    print(f"fitness blocking={report['fitness_blocking']:.6g} above={report['fitness_above']:.6g}")
    return EXIT_OK


def cmd_validate(args) -> int:
    instance = load_instance(args.instance)
    layout = load_plan(args.plan, instance)
    violations = validate_layout(layout, instance)
    if args.json:
        _write_json(None, {"violations": [v.to_dict() for v in violations]})
    else:
        for v in violations:
            where = "-" if v.coord is None else ",".join(map(str, v.coord))
            print(f"{v.constraint_id.value}\t{where}\t{v.detail}")
        print(f"{len(violations)} violation(s)")
    return EXIT_OK if not violations else EXIT_INFEASIBLE


def cmd_bench(args) -> int:
    rows, meta = bench.run_suite(
        args.suite,
        args.reps,
        args.seed,
        jobs=args.jobs,
        date_range=(args.date_min, args.date_max),
        max_generations=args.max_generations,
    )
    if args.output is None:
        bench.write_csv(rows, sys.stdout)
    else:
        with open(args.output, "w", newline="", encoding="utf-8") as f:
            bench.write_csv(rows, f)
        Path(str(args.output) + ".meta.json").write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")
        log.info("wrote %d rows to %s", len(rows), args.output)
    return EXIT_OK


def cmd_summarize(args) -> int:
    with open(args.csv, newline="", encoding="utf-8") as f:
        rows = list(csv.DictReader(f))
    summary = bench.summarize(rows)
    fields = [
        "suite", "instance", "runs", "mean_F_i", "mean_F_f", "best_F_f",
        "mean_generations", "mean_elapsed_ms", "baseline_fitness",
    ]  # fmt: skip
    w = csv.DictWriter(sys.stdout, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    w.writerows(summary)
    return EXIT_OK


def _add_ga_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--pop-size", type=int, default=30, help="population size N")
    p.add_argument("--stall", type=int, default=20, help="stop after this many generations without improvement (N_iter)")
    p.add_argument("--max-generations", type=int, default=None, help="hard generation cap (default 10*stall*N)")
    p.add_argument("--p-cross", type=float, default=0.70)
    p.add_argument("--p-mut", type=float, default=0.20)
    p.add_argument("--mode", choices=[m.value for m in FitnessMode], default=FitnessMode.BLOCKING.value)
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="yardga", description="Container yard storage allocation with a genetic algorithm.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a random instance file")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--preset", type=int, choices=range(1, 6), help="one of the five GA-vs-LIFO comparison cases")
    p.add_argument("--counts", type=_counts, help="per-type counts, e.g. 1=10,2=10")
    p.add_argument("--n1", type=int, default=3)
    p.add_argument("--n2", type=int, default=3)
    p.add_argument("--n3", type=int, default=3)
    p.add_argument("--refrig", type=int, default=2, help="number of powered blocks")
    p.add_argument("--reg", type=int, default=3, help="number of regular blocks")
    p.add_argument("--date-min", type=int, default=DEFAULT_DATE_RANGE[0])
    p.add_argument("--date-max", type=int, default=DEFAULT_DATE_RANGE[1])
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("solve", help="run the genetic algorithm on an instance")
    p.add_argument("instance")
    p.add_argument("-o", "--output", required=True, help="plan file to write")
    p.add_argument("--report", help="JSON run report ('-' for stdout)")
    _add_ga_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("baseline", help="run the LIFO stacking baseline")
    p.add_argument("instance")
    p.add_argument("-o", "--output", required=True, help="plan file to write")
    p.add_argument("--report", help="JSON fitness report ('-' for stdout)")
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("validate", help="list every rule violation of a plan")
    p.add_argument("instance")
    p.add_argument("plan")
    p.add_argument("--json", action="store_true", help="print violations as JSON")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("bench", help="run one of the experiment sweeps and write CSV")
    p.add_argument("suite", choices=bench.SUITES)
    p.add_argument("--reps", type=int, default=None, help="repetitions (default: 15 for lifo-comparison, else 1)")
    p.add_argument("--seed", type=int, default=0, help="master seed; repetition r uses seed + r")
    p.add_argument("-o", "--output", help="CSV path (default stdout)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--max-generations", type=int, default=None)
    p.add_argument("--date-min", type=int, default=DEFAULT_DATE_RANGE[0])
    p.add_argument("--date-max", type=int, default=DEFAULT_DATE_RANGE[1])
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("summarize", help="aggregate a bench CSV per instance")
    p.add_argument("csv")
    p.set_defaults(func=cmd_summarize)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (CapacityError, GenerationFailure, AllocationFailure) as e:
        print(f"yardga: unsatisfiable: {e}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (YardError, ValueError, OSError) as e:
        print(f"yardga: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
