"""Yard domain types and the 4D occupancy structure.

Coordinates are 1-based ``(x, y, z, j)``: ``z = 1`` is the ground tier and
blocks ``1..n_stock_refrig`` are the powered (refrigerated) ones.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import IntEnum
from functools import lru_cache
from typing import Iterator, NamedTuple

from .errors import (
    BoundsError,
    CapacityError,
    ConfigurationError,
    DuplicatePlacement,
    InstanceError,
    NoOccupant,
    OccupancyConflict,
    UnplacedContainer,
)


class ContainerType(IntEnum):
    DRY = 1
    EMPTY = 2
    OPEN_TOP = 3
    OPEN_SIDE = 4
    TANK = 5
    REEFER = 6


@dataclass(frozen=True)
class Container:
    id: int
    ctype: ContainerType
    delivery_date: int

    def __post_init__(self):
        if isinstance(self.id, bool) or not isinstance(self.id, int) or self.id < 0:
            raise InstanceError(f"container id must be a non-negative integer, got {self.id!r}")
        try:
            ctype = ContainerType(self.ctype)
        except ValueError:
            raise InstanceError(f"container {self.id}: unknown type code {self.ctype!r}") from None
        object.__setattr__(self, "ctype", ctype)
        d = self.delivery_date
        if isinstance(d, bool) or not isinstance(d, int) or d < 1:
            raise InstanceError(f"container {self.id}: delivery_date must be an integer >= 1, got {d!r}")


class Coord(NamedTuple):
    x: int
    y: int
    z: int
    j: int


@dataclass(frozen=True)
class YardConfig:
    n1: int
    n2: int
    n3: int
    n_stock_refrig: int = 0
    n_stock_reg: int = 1

    def __post_init__(self):
        for name in ("n1", "n2", "n3", "n_stock_refrig", "n_stock_reg"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int):
                raise ConfigurationError(f"{name} must be an integer, got {v!r}")
        if min(self.n1, self.n2, self.n3) < 1:
            raise ConfigurationError("grid dimensions n1, n2, n3 must all be >= 1")
        if self.n_stock_refrig < 0 or self.n_stock_reg < 0:
            raise ConfigurationError("block counts must be >= 0")
        if self.n_blocks < 1:
            raise ConfigurationError("the yard needs at least one block")

    @property
    def n_blocks(self) -> int:
        return self.n_stock_refrig + self.n_stock_reg

    @property
    def floor_size(self) -> int:
        """Cells per tier of one block (n1 * n2)."""
        return self.n1 * self.n2

    @property
    def block_size(self) -> int:
        return self.n1 * self.n2 * self.n3

    @property
    def capacity(self) -> int:
        """Total cell count, ``Nc_max``."""
        return self.n_blocks * self.block_size

    @property
    def refrigerated_capacity(self) -> int:
        return self.n_stock_refrig * self.block_size

    def is_refrigerated(self, j: int) -> bool:
        if not 1 <= j <= self.n_blocks:
            raise BoundsError(f"block {j} outside 1..{self.n_blocks}")
        return j <= self.n_stock_refrig

    def contains(self, c: Coord) -> bool:
        x, y, z, j = c
        return 1 <= x <= self.n1 and 1 <= y <= self.n2 and 1 <= z <= self.n3 and 1 <= j <= self.n_blocks

    def coords(self) -> Iterator[Coord]:
        """All coordinates in storage order (block, x, y, then z fastest)."""
        return iter(_geometry(self).coords)


def is_refrigerated_block(config: YardConfig, j: int) -> bool:
    return config.is_refrigerated(j)


class _Geometry:
    """Flat-index lookup tables for one config; shared by all its layouts."""

    def __init__(self, cfg: YardConfig):
        self.n1, self.n2, self.n3 = cfg.n1, cfg.n2, cfg.n3
        self.n_blocks = cfg.n_blocks
        self.n_refrig = cfg.n_stock_refrig
        self.stride_x = cfg.n2 * cfg.n3
        self.stride_j = cfg.block_size
        self.size = cfg.capacity
        coords = []
        for j in range(1, cfg.n_blocks + 1):
            for x in range(1, cfg.n1 + 1):
                for y in range(1, cfg.n2 + 1):
                    for z in range(1, cfg.n3 + 1):
                        coords.append(Coord(x, y, z, j))
        self.coords = coords
        # 0-based helpers for the hot loops
        self.zi = [c.z - 1 for c in coords]
        self.xi = [c.x - 1 for c in coords]
        self.bi = [c.j - 1 for c in coords]
        self.stack_base = [i - (c.z - 1) for i, c in enumerate(coords)]
        self.refrig = [c.j <= cfg.n_stock_refrig for c in coords]
        self.stack_bases = list(range(0, self.size, cfg.n3))

    def index(self, c: Coord) -> int:
        x, y, z, j = c
        if not (1 <= x <= self.n1 and 1 <= y <= self.n2 and 1 <= z <= self.n3 and 1 <= j <= self.n_blocks):
            raise BoundsError(f"coordinate {tuple(c)} outside the yard")
        return (j - 1) * self.stride_j + (x - 1) * self.stride_x + (y - 1) * self.n3 + (z - 1)


@lru_cache(maxsize=64)
def _geometry(cfg: YardConfig) -> _Geometry:
    return _Geometry(cfg)


class Layout:
    """Mutable occupancy map of the whole yard.

    ``place`` and ``remove`` mutate in place and return the layout itself so
    calls can be chained; use :meth:`copy` for value semantics. Placement is
    deliberately unchecked against stacking rules (see ``constraints``).
    """

    __slots__ = ("config", "_g", "cells", "_pos", "_fc")

    def __init__(self, config: YardConfig):
        self.config = config
        self._g = _geometry(config)
        self.cells: list[Container | None] = [None] * self._g.size
        self._pos: dict[int, int] = {}
        # occupied-cell count per (block, tier), 0-based
        self._fc = [[0] * config.n3 for _ in range(config.n_blocks)]

    def copy(self) -> Layout:
        new = Layout.__new__(Layout)
        new.config = self.config
        new._g = self._g
        new.cells = self.cells.copy()
        new._pos = self._pos.copy()
        new._fc = [row.copy() for row in self._fc]
        return new

    def __len__(self) -> int:
        return len(self._pos)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Layout):
            return NotImplemented
        if self.config != other.config:
            return False
        return all(
            (a is None and b is None) or (a is not None and b is not None and a.id == b.id)
            for a, b in zip(self.cells, other.cells)
        )

    def __repr__(self) -> str:
        return f"Layout({self.config}, placed={len(self._pos)})"

    # -- internal fast path (no checks) ---------------------------------

    def _put(self, container: Container, idx: int) -> None:
        self.cells[idx] = container
        self._pos[container.id] = idx
        g = self._g
        self._fc[g.bi[idx]][g.zi[idx]] += 1

    def _take(self, idx: int) -> Container:
        c = self.cells[idx]
        self.cells[idx] = None
        del self._pos[c.id]
        g = self._g
        self._fc[g.bi[idx]][g.zi[idx]] -= 1
        return c

    def _swap(self, ia: int, ib: int) -> None:
        cells = self.cells
        a, b = cells[ia], cells[ib]
        cells[ia], cells[ib] = b, a
        self._pos[a.id] = ib
        self._pos[b.id] = ia

    # -- public API -----------------------------------------------------

    def index(self, coord: Coord) -> int:
        return self._g.index(coord)

    def place(self, container: Container, coord: Coord) -> Layout:
        idx = self._g.index(coord)
        if self.cells[idx] is not None:
            raise OccupancyConflict(f"cell {tuple(coord)} already holds container {self.cells[idx].id}")
        if container.id in self._pos:
            raise DuplicatePlacement(f"container {container.id} is already placed")
        self._put(container, idx)
        return self

    def remove(self, coord: Coord) -> Layout:
        idx = self._g.index(coord)
        if self.cells[idx] is None:
            raise NoOccupant(f"cell {tuple(coord)} is empty")
        self._take(idx)
        return self

    def occupant(self, coord: Coord) -> Container | None:
        return self.cells[self._g.index(coord)]

    def is_placed(self, container_id: int) -> bool:
        return container_id in self._pos

    def position(self, container_id: int) -> Coord:
        try:
            return self._g.coords[self._pos[container_id]]
        except KeyError:
            raise UnplacedContainer(f"container {container_id} is not placed") from None

    def placed(self) -> Iterator[tuple[Coord, Container]]:
        """Occupied cells in storage order."""
        coords = self._g.coords
        for i, c in enumerate(self.cells):
            if c is not None:
                yield coords[i], c

    def placed_ids(self) -> set[int]:
        return set(self._pos)

    def stack_above(self, coord: Coord) -> list[Container]:
        """Occupants strictly above ``coord`` in its stack, bottom to top."""
        idx = self._g.index(coord)
        top = self._g.stack_base[idx] + self._g.n3
        return [c for c in self.cells[idx + 1 : top] if c is not None]

    def floor_count(self, j: int, k: int) -> int:
        if not 1 <= j <= self.config.n_blocks:
            raise BoundsError(f"block {j} outside 1..{self.config.n_blocks}")
        if not 1 <= k <= self.config.n3:
            raise BoundsError(f"tier {k} outside 1..{self.config.n3}")
        return self._fc[j - 1][k - 1]


def new_layout(config: YardConfig) -> Layout:
    return Layout(config)


@dataclass
class Instance:
    config: YardConfig
    containers: list[Container] = field(default_factory=list)

    def __post_init__(self):
        self.containers = list(self.containers)
        self._by_id: dict[int, Container] = {}
        for c in self.containers:
            if c.id in self._by_id:
                raise InstanceError(f"duplicate container id {c.id}")
            self._by_id[c.id] = c
        self.id_order: tuple[Container, ...] = tuple(sorted(self.containers, key=lambda c: c.id))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Instance):
            return NotImplemented
        return self.config == other.config and self.containers == other.containers

    def __len__(self) -> int:
        return len(self.containers)

    def get(self, container_id: int) -> Container:
        return self._by_id[container_id]

    def __contains__(self, container_id: int) -> bool:
        return container_id in self._by_id

    def counts(self) -> dict[ContainerType, int]:
        """Per-type population ``Nc(T)``; absent types are omitted."""
        cnt = Counter(c.ctype for c in self.containers)
        return {t: cnt[t] for t in ContainerType if cnt[t]}

    @property
    def n_types(self) -> int:
        return len(self.counts())

    def check_capacity(self) -> None:
        """Raise :class:`CapacityError` if the population cannot fit."""
        cfg = self.config
        if len(self.containers) > cfg.capacity:
            raise CapacityError(f"{len(self.containers)} containers exceed yard capacity {cfg.capacity}")
        reefers = sum(1 for c in self.containers if c.ctype is ContainerType.REEFER)
        if reefers > cfg.refrigerated_capacity:
            raise CapacityError(
                f"{reefers} reefer containers exceed refrigerated capacity {cfg.refrigerated_capacity}"
            )
