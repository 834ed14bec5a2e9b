"""Stack-filling baseline that mimics manual yard planning.

Containers are taken in arrival (input) order. A cursor walks the stacks
block by block, then by y, then by x; ordinary containers are pushed onto
the cursor's stack until a push would break a rule or the stack is full,
then the cursor moves on (wrapping around once). The walk starts at the
first regular block and reaches the powered blocks last.

Two container types are routed instead of following the cursor:

* reefers go to the first powered stack that accepts them;
* open-side containers go to the first stack that accepts them when rows
  are scanned from the far end (x descending), because their side
  clearance faces +x and would otherwise shut off the rest of the row.
"""

from __future__ import annotations

from .constraints import can_place
from .errors import AllocationFailure
from .yard import Container, ContainerType, Instance, Layout


def _stacks(layout: Layout, blocks, reverse_x: bool = False) -> list[int]:
    """Stack base indices for ``blocks`` (0-based), ordered by block, y, x."""
    g = layout._g
    xs = range(g.n1 - 1, -1, -1) if reverse_x else range(g.n1)
    return [j * g.stride_j + x * g.stride_x + y * g.n3 for j in blocks for y in range(g.n2) for x in xs]


def _push_target(layout: Layout, base: int) -> int | None:
    """Lowest empty tier of the stack at ``base``, or None when full."""
    cells = layout.cells
    for i in range(base, base + layout._g.n3):
        if cells[i] is None:
            return i
    return None


def _try_push(layout: Layout, container: Container, base: int) -> bool:
    i = _push_target(layout, base)
    if i is None or not can_place(layout, container, i):
        return False
    layout._put(container, i)
    return True


def lifo_allocate(instance: Instance) -> Layout:
    cfg = instance.config
    layout = Layout(cfg)
    powered_blocks = range(cfg.n_stock_refrig)
    walk_blocks = [*range(cfg.n_stock_refrig, cfg.n_blocks), *powered_blocks]
    walk = _stacks(layout, walk_blocks)
    far_end_walk = _stacks(layout, walk_blocks, reverse_x=True)
    powered = _stacks(layout, powered_blocks)
    n = len(walk)
    cursor = 0
    for c in instance.containers:
        if c.ctype is ContainerType.REEFER:
            if not any(_try_push(layout, c, base) for base in powered):
                raise AllocationFailure(f"no powered stack accepts reefer container {c.id}")
            continue
        if c.ctype is ContainerType.OPEN_SIDE:
            if not any(_try_push(layout, c, base) for base in far_end_walk):
                raise AllocationFailure(f"no stack accepts open-side container {c.id}")
            continue
        for step in range(n):
            k = (cursor + step) % n
            if _try_push(layout, c, walk[k]):
                cursor = k
                break
        else:
            raise AllocationFailure(f"no stack accepts container {c.id}")
    return layout
