"""Stacking and block rules for yard layouts.

Each ``check_*`` function inspects one rule and returns the list of
violations it finds. ``validate_layout`` runs all of them plus a
completeness check, and ``feasible_positions`` enumerates the empty cells a
container can go to without introducing a new violation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .errors import DuplicatePlacement, IntegrityError
from .yard import Container, ContainerType, Coord, Instance, Layout

DRY = ContainerType.DRY
EMPTY = ContainerType.EMPTY
OPEN_TOP = ContainerType.OPEN_TOP
OPEN_SIDE = ContainerType.OPEN_SIDE
TANK = ContainerType.TANK
REEFER = ContainerType.REEFER


class ConstraintId(Enum):
    FLOOR_MONOTONE = "FloorMonotone"
    SUPPORT = "Support"
    OPEN_TOP = "OpenTop"
    OPEN_SIDE = "OpenSide"
    EMPTY_UNDER_FULL = "EmptyUnderFull"
    TANK_STACK = "TankStack"
    REEFER_BLOCK = "ReeferBlock"
    PLACEMENT_INCOMPLETE = "PlacementIncomplete"



@dataclass(frozen=True)
class Violation:
    """One broken rule. Identity is ``(constraint_id, coord)``; ``detail`` is prose.

    FloorMonotone violations carry the coordinate ``(1, 1, k, j)`` of the
    lower tier ``k``; PlacementIncomplete violations carry no coordinate.
    """

    constraint_id: ConstraintId
    coord: Coord | None
    detail: str = field(default="", compare=False)

    @property
    def key(self) -> tuple[ConstraintId, Coord | None]:
        return self.constraint_id, self.coord

    def to_dict(self) -> dict:
        return {
            "constraint_id": self.constraint_id.value,
            "coord": list(self.coord) if self.coord is not None else None,
            "detail": self.detail,
        }


def check_support(layout: Layout) -> list[Violation]:
    g, cells = layout._g, layout.cells
    out = []
    for i, c in enumerate(cells):
        if c is not None and g.zi[i] > 0 and cells[i - 1] is None:
            out.append(Violation(ConstraintId.SUPPORT, g.coords[i], f"container {c.id} has no container below it"))
    return out


def check_floor_monotone(layout: Layout) -> list[Violation]:
    out = []
    n3 = layout.config.n3
    for b, row in enumerate(layout._fc):
        for k in range(n3 - 1):
            if row[k] < row[k + 1]:
                out.append(
                    Violation(
                        ConstraintId.FLOOR_MONOTONE,
                        Coord(1, 1, k + 1, b + 1),
                        f"block {b + 1}: tier {k + 1} holds {row[k]} containers, tier {k + 2} holds {row[k + 1]}",
                    )
                )
    return out


def _above(layout: Layout, i: int) -> Container | None:
    if layout._g.zi[i] == layout._g.n3 - 1:
        return None
    return layout.cells[i + 1]


def check_open_top(layout: Layout) -> list[Violation]:
    g = layout._g
    out = []
    for i, c in enumerate(layout.cells):
        if c is not None and c.ctype is OPEN_TOP:
            a = _above(layout, i)
            if a is not None:
                out.append(Violation(ConstraintId.OPEN_TOP, g.coords[i], f"open-top {c.id} has {a.id} on top"))
    return out


def _open_side_blocker(layout: Layout, i: int) -> Container | None:
    """First occupant above cell ``i`` or further along +x in its row, if any."""
    g, cells = layout._g, layout.cells
    for c in cells[i + 1 : g.stack_base[i] + g.n3]:
        if c is not None:
            return c
    for m in range(1, g.n1 - g.xi[i]):
        c = cells[i + m * g.stride_x]
        if c is not None:
            return c
    return None


def check_open_side(layout: Layout) -> list[Violation]:
    g = layout._g
    out = []
    for i, c in enumerate(layout.cells):
        if c is not None and c.ctype is OPEN_SIDE:
            b = _open_side_blocker(layout, i)
            if b is not None:
                out.append(
                    Violation(ConstraintId.OPEN_SIDE, g.coords[i], f"open-side {c.id} obstructed by {b.id}")
                )
    return out


def check_empty_stacking(layout: Layout) -> list[Violation]:
    g = layout._g
    out = []
    for i, c in enumerate(layout.cells):
        if c is not None and c.ctype is EMPTY:
            a = _above(layout, i)
            if a is not None and a.ctype is not EMPTY:
                out.append(
                    Violation(ConstraintId.EMPTY_UNDER_FULL, g.coords[i], f"empty {c.id} under full {a.id}")
                )
    return out


def check_tank_stacking(layout: Layout) -> list[Violation]:
    g = layout._g
    out = []
    for i, c in enumerate(layout.cells):
        if c is not None and c.ctype is TANK:
            a = _above(layout, i)
            if a is not None and a.ctype is not TANK:
                out.append(Violation(ConstraintId.TANK_STACK, g.coords[i], f"tank {c.id} under non-tank {a.id}"))
    return out


def check_reefer_block(layout: Layout) -> list[Violation]:
    g = layout._g
    out = []
    for i, c in enumerate(layout.cells):
        if c is not None and c.ctype is REEFER and not g.refrig[i]:
            out.append(
                Violation(ConstraintId.REEFER_BLOCK, g.coords[i], f"reefer {c.id} in unpowered block {g.coords[i].j}")
            )
    return out


CHECKS = (
    check_floor_monotone,
    check_support,
    check_open_top,
    check_open_side,
    check_empty_stacking,
    check_tank_stacking,
    check_reefer_block,
)


def check_integrity(layout: Layout, instance: Instance) -> None:
    for c in layout.cells:
        if c is None:
            continue
        if c.id not in instance:
            raise IntegrityError(f"layout holds container {c.id} which is not in the instance")
        if instance.get(c.id) != c:
            raise IntegrityError(f"layout record for container {c.id} differs from the instance record")


def validate_layout(layout: Layout, instance: Instance, *, complete: bool = True) -> list[Violation]:
    """All rule violations of ``layout``; with ``complete`` also every unplaced container."""
    check_integrity(layout, instance)
    out: list[Violation] = []
    for check in CHECKS:
        out.extend(check(layout))
    if complete:
        for c in instance.containers:
            if not layout.is_placed(c.id):
                out.append(Violation(ConstraintId.PLACEMENT_INCOMPLETE, None, f"container {c.id} is not placed"))
    return out


def is_feasible(layout: Layout, instance: Instance) -> bool:
    return not validate_layout(layout, instance)


# -- placement enumeration ----------------------------------------------


def can_place(layout: Layout, container: Container, i: int) -> bool:
    """Whether putting ``container`` into empty cell ``i`` adds no new violation.

    Local reasoning only: a placement can break the rules of the new cell
    itself, of the cell directly below, of the lower tier's count, and of
    open-side containers whose clearance zone contains the cell.
    """
    g, cells = layout._g, layout.cells
    t = container.ctype
    if t is REEFER and not g.refrig[i]:
        return False
    z = g.zi[i]
    if z > 0:
        below = cells[i - 1]
        if below is None:
            return False
        fc = layout._fc[g.bi[i]]
        if fc[z - 1] == fc[z]:
            return False
        bt = below.ctype
        if bt is OPEN_TOP or (bt is EMPTY and t is not EMPTY) or (bt is TANK and t is not TANK):
            return False
    if z < g.n3 - 1:
        above = cells[i + 1]
        if above is not None:
            at = above.ctype
            if t is OPEN_TOP or (t is EMPTY and at is not EMPTY) or (t is TANK and at is not TANK):
                return False
    if t is OPEN_SIDE and _open_side_blocker(layout, i) is not None:
        return False
    base = g.stack_base[i]
    for k in range(base, i):
        o = cells[k]
        if o is not None and o.ctype is OPEN_SIDE and _open_side_blocker(layout, k) is None:
            return False
    sx = g.stride_x
    for m in range(1, g.xi[i] + 1):
        k = i - m * sx
        o = cells[k]
        if o is not None and o.ctype is OPEN_SIDE and _open_side_blocker(layout, k) is None:
            return False
    return True


def _candidate_cells(layout: Layout, container: Container) -> list[int]:
    """Empty cells that are on the ground or directly on an occupied cell."""
    g, cells = layout._g, layout.cells
    n3 = g.n3
    bases = g.stack_bases
    if container.ctype is REEFER:
        bases = bases[: g.n_refrig * g.stride_j // n3]
    out = []
    for base in bases:
        prev = True
        for i in range(base, base + n3):
            c = cells[i]
            if c is None:
                if prev:
                    out.append(i)
                prev = False
            else:
                prev = True
    return out


def _check_placeable(layout: Layout, container: Container, instance: Instance) -> None:
    if container.id not in instance or instance.get(container.id) != container:
        raise IntegrityError(f"container {container.id} is not part of the instance")
    if layout.is_placed(container.id):
        raise DuplicatePlacement(f"container {container.id} is already placed")


def feasible_indices(layout: Layout, container: Container) -> list[int]:
    """Flat cell indices accepted by :func:`can_place` (no argument checks)."""
    return [i for i in _candidate_cells(layout, container) if can_place(layout, container, i)]


def feasible_positions(layout: Layout, container: Container, instance: Instance) -> list[Coord]:
    _check_placeable(layout, container, instance)
    coords = layout._g.coords
    return [coords[i] for i in feasible_indices(layout, container)]


def feasible_positions_simulated(layout: Layout, container: Container, instance: Instance) -> list[Coord]:
    """Reference enumeration: try every empty cell and re-run the full validator.

    Slow; kept as the ground truth that ``feasible_positions`` is tested against.
    """
    _check_placeable(layout, container, instance)
    before = {v.key for v in validate_layout(layout, instance, complete=False)}
    out = []
    for coord, i in zip(layout._g.coords, range(len(layout.cells))):
        if layout.cells[i] is not None:
            continue
        layout._put(container, i)
        try:
            after = {v.key for v in validate_layout(layout, instance, complete=False)}
        finally:
            layout._take(i)
        if after <= before:
            out.append(coord)
    return out


def cell_ok(layout: Layout, i: int) -> bool:
    """Type rules owned by the occupant of cell ``i`` hold (trivially true if empty)."""
    c = layout.cells[i]
    if c is None:
        return True
    t = c.ctype
    if t is DRY:
        return True
    g = layout._g
    if t is REEFER:
        return g.refrig[i]
    if t is OPEN_SIDE:
        return _open_side_blocker(layout, i) is None
    above = layout.cells[i + 1] if g.zi[i] < g.n3 - 1 else None
    if above is None:
        return True
    if t is OPEN_TOP:
        return False
    return above.ctype is t  # EMPTY and TANK only accept their own kind on top


def swap_keeps_feasible(layout: Layout, ia: int, ib: int) -> bool:
    """After swapping cells ``ia`` and ``ib`` of a previously feasible layout, check it still is.

    The occupied-cell pattern is unchanged, so support, tier counts and
    open-side clearance of third parties cannot change; only the two moved
    containers and the containers directly beneath them need re-checking.
    """
    g = layout._g
    for i in (ia, ib):
        if not cell_ok(layout, i):
            return False
        if g.zi[i] > 0 and not cell_ok(layout, i - 1):
            return False
    return True
