"""Delivery-weighted rehandle objective.

Each container contributes ``(1 / delivery_date) * rehandles`` where the
rehandle count is the number of containers that must be moved off it when it
is retrieved. Lower is better; zero means no rehandles are predicted.
"""

from __future__ import annotations

from enum import Enum

from .constraints import validate_layout
from .errors import DomainError, IncompleteLayoutError, InfeasibleLayoutError
from .yard import Container, Instance, Layout


class FitnessMode(str, Enum):
    #: count only containers above with a strictly later delivery date
    BLOCKING = "blocking"
    #: count every container above
    ABOVE = "above"


def priority(d: int) -> float:
    if d < 1:
        raise DomainError(f"delivery date must be >= 1, got {d}")
    return 1.0 / d


def rehandle_count(layout: Layout, container: Container, mode: FitnessMode = FitnessMode.BLOCKING) -> int:
    above = layout.stack_above(layout.position(container.id))
    if mode is FitnessMode.ABOVE:
        return len(above)
    d = container.delivery_date
    return sum(1 for c in above if c.delivery_date > d)


def layout_fitness(layout: Layout, instance: Instance, mode: FitnessMode = FitnessMode.BLOCKING) -> float:
    pos = layout._pos
    if len(pos) != len(instance.containers) or any(c.id not in pos for c in instance.containers):
        missing = sum(1 for c in instance.containers if c.id not in pos)
        raise IncompleteLayoutError(f"{missing} instance containers are not placed")
    g, cells = layout._g, layout.cells
    n3 = g.n3
    blocking = mode is FitnessMode.BLOCKING
    total = 0.0
    # ascending id keeps the float sum order fixed
    for c in instance.id_order:
        i = pos[c.id]
        top = g.stack_base[i] + n3
        d = c.delivery_date
        m = 0
        for k in range(i + 1, top):
            o = cells[k]
            if o is not None and (not blocking or o.delivery_date > d):
                m += 1
        if m:
            total += (1.0 / d) * m
    return total


def retrieval_oracle(layout: Layout, instance: Instance, *, restack: bool = True) -> dict[int, int]:
    """Simulate emptying the yard and count the moves charged to each container.

    Containers leave in increasing delivery date; equal dates in one stack
    leave top-down. Retrieving a container moves everything above it (one
    move each, charged to it). With ``restack`` the moved containers go back
    onto the same stack in the same order; otherwise they wait off-yard and
    leave for free later.
    """
    if validate_layout(layout, instance):
        raise InfeasibleLayoutError("retrieval simulation needs a complete feasible layout")
    stacks: dict[tuple[int, int, int], list[Container]] = {}
    where: dict[int, tuple[int, int, int]] = {}
    height: dict[int, int] = {}
    for coord, c in layout.placed():
        key = (coord.x, coord.y, coord.j)
        stacks.setdefault(key, []).append(c)
        where[c.id] = key
        height[c.id] = coord.z
    # placed() walks z upward within a stack, so each list is bottom-to-top
    order = sorted(instance.containers, key=lambda c: (c.delivery_date, -height[c.id]))
    moves = {c.id: 0 for c in instance.containers}
    off_yard: set[int] = set()
    for c in order:
        if c.id in off_yard:
            continue
        stack = stacks[where[c.id]]
        level = next(n for n, o in enumerate(stack) if o.id == c.id)
        lifted = stack[level + 1 :]
        moves[c.id] = len(lifted)
        del stack[level:]
        if restack:
            stack.extend(lifted)
        else:
            off_yard.update(o.id for o in lifted)
    return moves
