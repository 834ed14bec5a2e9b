"""Parameter sweeps mirroring the published experiments, emitted as CSV rows."""

from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from statistics import mean
from typing import Iterable

from .fitness import layout_fitness
from .ga import GAConfig, run
from .instances import (
    COMPARISON_COUNTS,
    COMPARISON_YARD,
    DEFAULT_DATE_RANGE,
    POP_SWEEP_COUNTS,
    POP_SWEEP_YARD,
    STALL_SWEEP_COUNTS,
    STALL_SWEEP_YARD,
    TYPE_SWEEP_COUNTS,
    TYPE_SWEEP_YARD,
    GenSpec,
    generate_instance,
)
from .lifo import lifo_allocate
from .yard import Instance

COLUMNS = ["suite", "instance", "seed", "rep", "F_i", "F_f", "generations", "elapsed_ms", "baseline_fitness"]
SUITES = ("type-influence", "stall-influence", "popsize-influence", "lifo-comparison")
DEFAULT_REPS = {"type-influence": 1, "stall-influence": 1, "popsize-influence": 1, "lifo-comparison": 15}


@dataclass
class Case:
    label: str
    instance: Instance
    ga: GAConfig
    with_baseline: bool = False


def _counts_label(counts) -> str:
    return " ".join(f"Nc({int(t)})={n}" for t, n in sorted(counts.items()))


def suite_cases(suite: str, seed: int = 0, date_range=DEFAULT_DATE_RANGE) -> tuple[list[Case], dict]:
    """Instances and GA settings of one sweep, plus metadata describing the choices made."""

    def inst(cfg, counts):
        return generate_instance(GenSpec(cfg, counts, date_range, seed))

    if suite == "type-influence":
        cases = [
            Case(f"NT={nt}", inst(TYPE_SWEEP_YARD, TYPE_SWEEP_COUNTS[nt]), GAConfig(pop_size=50, stall_window=20))
            for nt in sorted(TYPE_SWEEP_COUNTS)
        ]
        meta = {"yard": TYPE_SWEEP_YARD, "counts": {f"NT={nt}": _counts_label(c) for nt, c in TYPE_SWEEP_COUNTS.items()}}
    elif suite == "stall-influence":
        instance = inst(STALL_SWEEP_YARD, STALL_SWEEP_COUNTS)
        cases = [Case(f"Niter={s}", instance, GAConfig(pop_size=30, stall_window=s)) for s in (25, 50, 100, 150)]
        meta = {
            "yard": STALL_SWEEP_YARD,
            "counts": _counts_label(STALL_SWEEP_COUNTS),
            "note": "four container types with the type-influence sweep's counts for NT=4",
        }
    elif suite == "popsize-influence":
        instance = inst(POP_SWEEP_YARD, POP_SWEEP_COUNTS)
        cases = [Case(f"N={n}", instance, GAConfig(pop_size=n, stall_window=50)) for n in (20, 40, 50, 70, 100)]
        meta = {"yard": POP_SWEEP_YARD, "counts": _counts_label(POP_SWEEP_COUNTS)}
    elif suite == "lifo-comparison":
        cases = [
            Case(f"case{n}", inst(COMPARISON_YARD, COMPARISON_COUNTS[n]), GAConfig(pop_size=30, stall_window=20), True)
            for n in sorted(COMPARISON_COUNTS)
        ]
        meta = {"yard": COMPARISON_YARD, "counts": {f"case{n}": _counts_label(c) for n, c in COMPARISON_COUNTS.items()}}
    else:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    meta = {"suite": suite, "instance_seed": seed, "date_range": list(date_range), **meta}
    if "yard" in meta:
        cfg = meta["yard"]
        meta["yard"] = dict(n1=cfg.n1, n2=cfg.n2, n3=cfg.n3, n_stock_refrig=cfg.n_stock_refrig, n_stock_reg=cfg.n_stock_reg)
    return cases, meta


def _ga_row(task) -> dict:
    suite, case, rep, seed = task
    result = run(case.instance, replace(case.ga, seed=seed))
    return {
        "suite": suite,
        "instance": case.label,
        "seed": seed,
        "rep": rep,
        "F_i": result.initial_fitness,
        "F_f": result.final_fitness,
        "generations": result.generations_run,
        "elapsed_ms": round(result.elapsed * 1000),
        "baseline_fitness": "",
    }


def _baseline_row(suite: str, case: Case, seed: int) -> dict:
    start = time.perf_counter()
    layout = lifo_allocate(case.instance)
    fitness = layout_fitness(layout, case.instance, case.ga.mode)
    return {
        "suite": suite,
        "instance": case.label,
        "seed": seed,
        "rep": "lifo",
        "F_i": "",
        "F_f": "",
        "generations": "",
        "elapsed_ms": round((time.perf_counter() - start) * 1000),
        "baseline_fitness": fitness,
    }


def run_suite(
    suite: str,
    repetitions: int | None = None,
    seed: int = 0,
    *,
    jobs: int = 1,
    date_range=DEFAULT_DATE_RANGE,
    max_generations: int | None = None,
) -> tuple[list[dict], dict]:
    """Run a sweep. Repetition ``r`` uses GA seed ``seed + r``; rows come back in a fixed order."""
    if repetitions is None:
        repetitions = DEFAULT_REPS[suite]
    if repetitions < 0:
        raise ValueError("repetitions must be >= 0")
    cases, meta = suite_cases(suite, seed, date_range)
    if max_generations is not None:
        for case in cases:
            case.ga = replace(case.ga, max_generations=max_generations)
    meta["repetitions"] = repetitions
    meta["ga"] = {c.label: {"pop_size": c.ga.pop_size, "stall_window": c.ga.stall_window} for c in cases}

    tasks = [(suite, case, rep, seed + rep) for case in cases for rep in range(repetitions)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            ga_rows = list(pool.map(_ga_row, tasks))
    else:
        ga_rows = [_ga_row(t) for t in tasks]

    rows = []
    it = iter(ga_rows)
    for case in cases:
        if case.with_baseline and repetitions > 0:
            rows.append(_baseline_row(suite, case, seed))
        rows.extend(next(it) for _ in range(repetitions))
    return rows, meta


def write_csv(rows: Iterable[dict], stream) -> None:
    w = csv.DictWriter(stream, fieldnames=COLUMNS, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow(row)


def rows_to_csv(rows: Iterable[dict]) -> str:
    buf = io.StringIO()
    write_csv(rows, buf)
    return buf.getvalue()


def summarize(rows: Iterable[dict]) -> list[dict]:
    """Mean F_i / F_f / generations / elapsed per (suite, instance), with the baseline alongside."""
    groups: dict[tuple[str, str], dict] = {}
    for row in rows:
        g = groups.setdefault((row["suite"], row["instance"]), {"ga": [], "baseline": None})
        if row["rep"] == "lifo":
            g["baseline"] = float(row["baseline_fitness"])
        else:
            g["ga"].append(row)
    out = []
    for (suite, label), g in groups.items():
        runs = g["ga"]
        out.append(
            {
                "suite": suite,
                "instance": label,
                "runs": len(runs),
                "mean_F_i": mean(float(r["F_i"]) for r in runs) if runs else "",
                "mean_F_f": mean(float(r["F_f"]) for r in runs) if runs else "",
                "best_F_f": min(float(r["F_f"]) for r in runs) if runs else "",
                "mean_generations": mean(int(r["generations"]) for r in runs) if runs else "",
                "mean_elapsed_ms": mean(float(r["elapsed_ms"]) for r in runs) if runs else "",
                "baseline_fitness": "" if g["baseline"] is None else g["baseline"],
            }
        )
    return out
