"""Instance generation, experiment presets, and JSON file formats.

File layouts are documented in ``docs/formats.md``.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from .constraints import check_integrity
from .errors import FormatError, InstanceError, YardError
from .yard import Container, ContainerType, Coord, Instance, Layout, YardConfig

FORMAT_VERSION = 1
DEFAULT_DATE_RANGE = (1, 30)

T = ContainerType

# yard set-ups used by the experiments
TYPE_SWEEP_YARD = YardConfig(3, 3, 3, n_stock_refrig=4, n_stock_reg=4)
STALL_SWEEP_YARD = YardConfig(3, 3, 3, n_stock_refrig=3, n_stock_reg=3)
POP_SWEEP_YARD = STALL_SWEEP_YARD
COMPARISON_YARD = YardConfig(3, 3, 3, n_stock_refrig=2, n_stock_reg=3)

# container-type influence sweep, keyed by number of types
TYPE_SWEEP_COUNTS = {
    2: {T.DRY: 10, T.EMPTY: 10},
    3: {T.DRY: 10, T.EMPTY: 10, T.OPEN_TOP: 8},
    4: {T.DRY: 10, T.EMPTY: 10, T.OPEN_TOP: 8, T.OPEN_SIDE: 8},
    5: {T.DRY: 10, T.EMPTY: 10, T.OPEN_TOP: 8, T.OPEN_SIDE: 8, T.TANK: 15},
    6: {T.DRY: 10, T.EMPTY: 10, T.OPEN_TOP: 8, T.OPEN_SIDE: 8, T.TANK: 15, T.REEFER: 10},
}
STALL_SWEEP_COUNTS = TYPE_SWEEP_COUNTS[4]
POP_SWEEP_COUNTS = {T.DRY: 20, T.OPEN_SIDE: 15, T.TANK: 10, T.REEFER: 30}

# GA-vs-LIFO comparison cases
COMPARISON_COUNTS = {
    1: {T.DRY: 50, T.OPEN_TOP: 15},
    2: {T.DRY: 25, T.EMPTY: 25, T.OPEN_TOP: 10},
    3: {T.OPEN_TOP: 8, T.OPEN_SIDE: 5, T.TANK: 7, T.REEFER: 15},
    4: {T.EMPTY: 14, T.OPEN_TOP: 8, T.OPEN_SIDE: 5, T.TANK: 7, T.REEFER: 15},
    5: {T.DRY: 25, T.EMPTY: 14, T.OPEN_TOP: 9, T.OPEN_SIDE: 8, T.TANK: 7, T.REEFER: 12},
}


@dataclass(frozen=True)
class GenSpec:
    config: YardConfig
    counts: Mapping[ContainerType, int]
    date_range: tuple[int, int] = DEFAULT_DATE_RANGE
    seed: int = 0


def generate_instance(spec: GenSpec) -> Instance:
    """Containers get ids ``1..n`` in ascending type order and uniform random dates."""
    d_min, d_max = spec.date_range
    if d_min < 1 or d_max < d_min:
        raise InstanceError(f"invalid date range {spec.date_range}")
    counts = {ContainerType(t): n for t, n in spec.counts.items()}
    if any(n < 0 for n in counts.values()):
        raise InstanceError("container counts must be non-negative")
    rng = random.Random(spec.seed)
    containers = []
    for t in sorted(counts):
        for _ in range(counts[t]):
            containers.append(Container(len(containers) + 1, t, rng.randint(d_min, d_max)))
    instance = Instance(spec.config, containers)
    instance.check_capacity()
    return instance


def comparison_preset(n: int, date_range: tuple[int, int] = DEFAULT_DATE_RANGE, seed: int = 0) -> Instance:
    if n not in COMPARISON_COUNTS:
        raise ValueError(f"comparison case must be 1..5, got {n}")
    return generate_instance(GenSpec(COMPARISON_YARD, COMPARISON_COUNTS[n], date_range, seed))


# -- serialization -------------------------------------------------------


def _config_to_dict(cfg: YardConfig) -> dict:
    return {
        "n1": cfg.n1,
        "n2": cfg.n2,
        "n3": cfg.n3,
        "n_stock_refrig": cfg.n_stock_refrig,
        "n_stock_reg": cfg.n_stock_reg,
    }


def _field(obj, name: str, where: str):
    if not isinstance(obj, dict):
        raise FormatError(f"{where}: expected an object, got {type(obj).__name__}")
    if name not in obj:
        raise FormatError(f"{where}: missing field '{name}'")
    return obj[name]


def _int_field(obj, name: str, where: str) -> int:
    v = _field(obj, name, where)
    if isinstance(v, bool) or not isinstance(v, int):
        raise FormatError(f"{where}.{name}: expected an integer, got {v!r}")
    return v


def _config_from_dict(d, where: str = "config") -> YardConfig:
    vals = {k: _int_field(d, k, where) for k in ("n1", "n2", "n3", "n_stock_refrig", "n_stock_reg")}
    return YardConfig(**vals)


def _read_json(path: Path, kind: str) -> dict:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}:{e.lineno}:{e.colno}: invalid JSON in {kind} file: {e.msg}") from None
    version = _field(doc, "format_version", str(path))
    if version != FORMAT_VERSION:
        raise FormatError(f"{path}: unsupported format_version {version!r} (expected {FORMAT_VERSION})")
    return doc


def _write_json(path: Path, doc: dict) -> None:
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def instance_to_dict(instance: Instance) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "config": _config_to_dict(instance.config),
        "containers": [
            {"id": c.id, "type": int(c.ctype), "delivery_date": c.delivery_date} for c in instance.containers
        ],
    }


def instance_from_dict(doc: dict, where: str = "instance") -> Instance:
    try:
        cfg = _config_from_dict(_field(doc, "config", where), f"{where}.config")
        raw = _field(doc, "containers", where)
        if not isinstance(raw, list):
            raise FormatError(f"{where}.containers: expected a list")
        containers = []
        for n, item in enumerate(raw):
            at = f"{where}.containers[{n}]"
            fields = [_int_field(item, k, at) for k in ("id", "type", "delivery_date")]
            try:
                containers.append(Container(*fields))
            except InstanceError as e:
                raise InstanceError(f"{at}: {e}") from None
        instance = Instance(cfg, containers)
    except FormatError:
        raise
    except YardError as e:
        raise InstanceError(f"{where}: {e}") from None
    instance.check_capacity()
    return instance


def save_instance(instance: Instance, path) -> None:
    _write_json(path, instance_to_dict(instance))


def load_instance(path) -> Instance:
    """Read and validate an instance file.

    Raises :class:`FormatError` for malformed files, :class:`InstanceError`
    for invalid values and :class:`CapacityError` when the population cannot fit.
    """
    return instance_from_dict(_read_json(path, "instance"), str(path))


def plan_to_dict(layout: Layout) -> dict:
    placements = sorted(((c.id, coord) for coord, c in layout.placed()), key=lambda p: p[0])
    return {
        "format_version": FORMAT_VERSION,
        "config": _config_to_dict(layout.config),
        "placements": [{"id": cid, "x": p.x, "y": p.y, "z": p.z, "j": p.j} for cid, p in placements],
    }


def plan_from_dict(doc: dict, instance: Instance, where: str = "plan") -> Layout:
    cfg = _config_from_dict(_field(doc, "config", where), f"{where}.config")
    if cfg != instance.config:
        raise InstanceError(f"{where}: yard config {cfg} does not match the instance's {instance.config}")
    raw = _field(doc, "placements", where)
    if not isinstance(raw, list):
        raise FormatError(f"{where}.placements: expected a list")
    layout = Layout(cfg)
    for n, item in enumerate(raw):
        at = f"{where}.placements[{n}]"
        cid = _int_field(item, "id", at)
        coord = Coord(*(_int_field(item, k, at) for k in ("x", "y", "z", "j")))
        if cid not in instance:
            raise InstanceError(f"{at}: unknown container id {cid}")
        if not cfg.contains(coord):
            raise InstanceError(f"{at}: coordinate {tuple(coord)} is outside the yard")
        try:
            layout.place(instance.get(cid), coord)
        except YardError as e:
            raise InstanceError(f"{at}: {e}") from None
    check_integrity(layout, instance)
    return layout


def save_plan(layout: Layout, path) -> None:
    _write_json(path, plan_to_dict(layout))


def load_plan(path, instance: Instance) -> Layout:
    """Read a plan and bind it to ``instance`` (ids, bounds and cells are checked).

    Stacking rules are not enforced here; run ``validate_layout`` for that.
    """
    return plan_from_dict(_read_json(path, "plan"), instance, str(path))

