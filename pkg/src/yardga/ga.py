"""Genetic algorithm over complete feasible yard layouts.

Every individual is feasible at all times: initial layouts are built by
random feasible construction, crossover rebuilds a child from a region of
one parent plus the compatible placements of the other, and mutation swaps
two containers only when the swap keeps the layout feasible. Replacement is
elitist: parents and offspring are merged and the best ``pop_size`` survive.
"""

from __future__ import annotations

import logging
import random
import time
from dataclasses import dataclass
from itertools import accumulate
from typing import Iterable, Sequence

from .constraints import can_place, feasible_indices, swap_keeps_feasible, validate_layout
from .errors import GenerationFailure, InfeasibleLayoutError
from .fitness import FitnessMode, layout_fitness
from .yard import Container, ContainerType, Instance, Layout

log = logging.getLogger(__name__)

# placement order for randomized construction: most constrained types first
HARDNESS = {
    ContainerType.REEFER: 0,
    ContainerType.OPEN_SIDE: 1,
    ContainerType.TANK: 2,
    ContainerType.OPEN_TOP: 3,
    ContainerType.EMPTY: 4,
    ContainerType.DRY: 5,
}

MAX_RESTARTS = 1000
MUTATION_ATTEMPTS = 50


@dataclass
class GAConfig:
    pop_size: int = 30
    stall_window: int = 20
    max_generations: int | None = None  # None -> 10 * stall_window * pop_size
    p_cross: float = 0.70
    p_mut: float = 0.20
    seed: int = 0
    mode: FitnessMode = FitnessMode.BLOCKING
    debug: bool = False  # re-validate the whole population every generation

    def __post_init__(self):
        self.mode = FitnessMode(self.mode)
        if self.pop_size < 2:
            raise ValueError("pop_size must be >= 2")
        if self.stall_window < 1:
            raise ValueError("stall_window must be >= 1")
        if self.max_generations is None:
            self.max_generations = 10 * self.stall_window * self.pop_size
        if self.max_generations < 1:
            raise ValueError("max_generations must be >= 1")
        for name in ("p_cross", "p_mut"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {p}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(eq=False)
class Individual:
    """A layout with its cached fitness.

    Layouts held by individuals are never mutated afterwards, so individuals
    may share them freely.
    """

    layout: Layout
    fitness: float
    born: int = 0  # generation of creation; lower is older
    serial: int = 0  # construction order within that generation

    @property
    def sort_key(self) -> tuple[float, int, int]:
        return self.fitness, self.born, self.serial


@dataclass
class RunResult:
    best: Individual
    generations_run: int
    history: list[float]
    elapsed: float  # seconds

    @property
    def initial_fitness(self) -> float:
        return self.history[0]

    @property
    def final_fitness(self) -> float:
        return self.history[-1]


def substream(*key) -> random.Random:
    """Independent deterministic stream for a key such as ``(seed, gen, trial)``."""
    return random.Random(":".join(str(k) for k in key))


def hardest_first(containers: Iterable[Container], rng: random.Random) -> list[Container]:
    order = list(containers)
    rng.shuffle(order)
    order.sort(key=lambda c: HARDNESS[c.ctype])
    return order


def _fill(layout: Layout, containers: Sequence[Container], rng: random.Random) -> bool:
    for c in containers:
        options = feasible_indices(layout, c)
        if not options:
            return False
        layout._put(c, options[rng.randrange(len(options))])
    return True


def random_feasible_layout(instance: Instance, rng: random.Random, max_restarts: int = MAX_RESTARTS) -> Layout:
    for _ in range(max_restarts + 1):
        layout = Layout(instance.config)
        if _fill(layout, hardest_first(instance.containers, rng), rng):
            return layout
    raise GenerationFailure(
        f"no feasible layout found after {max_restarts} restarts; the instance is probably unsatisfiable"
    )


def _fitness(layout: Layout, instance: Instance, config: GAConfig) -> float:
    return layout_fitness(layout, instance, config.mode)


def roulette_select(
    population: Sequence[Individual], rng: random.Random, cum_weights: Sequence[float] | None = None
) -> Individual:
    """Draw one individual with probability proportional to ``1 / (1 + fitness)``."""
    if cum_weights is None:
        cum_weights = list(accumulate(1.0 / (1.0 + ind.fitness) for ind in population))
    return rng.choices(population, cum_weights=cum_weights)[0]


def crossover(
    parent1: Individual,
    parent2: Individual,
    instance: Instance,
    rng: random.Random,
    config: GAConfig,
) -> Individual:
    if rng.random() >= config.p_cross:
        return Individual(parent1.layout, parent1.fitness)
    cfg = instance.config
    px, py, pz = rng.randint(1, cfg.n1), rng.randint(1, cfg.n2), rng.randint(1, cfg.n3)
    child = Layout(cfg)
    coords = child._g.coords

    def inside(i: int) -> bool:
        x, y, z, _ = coords[i]
        return x <= px and y <= py and z <= pz

    for i, c in enumerate(parent1.layout.cells):
        if c is not None and inside(i):
            child._put(c, i)
    placed = child._pos
    cells = child.cells
    for i, c in enumerate(parent2.layout.cells):
        if c is None or c.id in placed or cells[i] is not None or inside(i):
            continue
        if can_place(child, c, i):
            child._put(c, i)
    rest = [c for c in instance.containers if c.id not in placed]
    if not _fill(child, hardest_first(rest, rng), rng):
        fitter = parent2 if parent2.fitness < parent1.fitness else parent1
        return Individual(fitter.layout, fitter.fitness)
    return Individual(child, _fitness(child, instance, config))


def mutate(individual: Individual, instance: Instance, rng: random.Random, config: GAConfig) -> Individual:
    """Swap two random containers, retrying pairs until the swap is feasible."""
    if rng.random() >= config.p_mut or len(instance.containers) < 2:
        return individual
    ids = [c.id for c in instance.id_order]
    layout = individual.layout.copy()
    pos = layout._pos
    for _ in range(MUTATION_ATTEMPTS):
        a, b = rng.sample(ids, 2)
        ia, ib = pos[a], pos[b]
        layout._swap(ia, ib)
        if swap_keeps_feasible(layout, ia, ib):
            return Individual(layout, _fitness(layout, instance, config))
        layout._swap(ia, ib)
    return individual


def evolve_generation(
    population: Sequence[Individual], instance: Instance, rng: random.Random, config: GAConfig
) -> list[Individual]:
    """One generation: N offspring, then keep the best N of parents + offspring.

    Each offspring trial draws from its own substream keyed by trial index,
    so the result does not depend on the order trials are evaluated in.
    """
    n = len(population)
    generation = max(ind.born for ind in population) + 1
    base = rng.getrandbits(64)
    cum = list(accumulate(1.0 / (1.0 + ind.fitness) for ind in population))
    offspring = []
    for t in range(n):
        r = substream(base, t)
        p1 = roulette_select(population, r, cum)
        p2 = roulette_select(population, r, cum)
        child = crossover(p1, p2, instance, r, config)
        child = mutate(child, instance, r, config)
        offspring.append(Individual(child.layout, child.fitness, generation, t))
    merged = sorted([*population, *offspring], key=lambda ind: ind.sort_key)
    return merged[:n]


def _assert_feasible(population: Sequence[Individual], instance: Instance) -> None:
    for ind in population:
        bad = validate_layout(ind.layout, instance)
        if bad:
            raise InfeasibleLayoutError(f"infeasible individual in population: {bad[0]}")


def initial_population(instance: Instance, config: GAConfig) -> list[Individual]:
    return [
        Individual(layout, _fitness(layout, instance, config), 0, i)
        for i, layout in enumerate(
            random_feasible_layout(instance, substream(config.seed, "init", i)) for i in range(config.pop_size)
        )
    ]


def run(instance: Instance, config: GAConfig, initial: Sequence[Layout] | None = None) -> RunResult:
    """Evolve until the best fitness stalls for ``stall_window`` generations.

    ``initial`` optionally seeds the first population (it must hold exactly
    ``pop_size`` feasible layouts); otherwise it is generated at random.
    """
    start = time.perf_counter()
    instance.check_capacity()
    if initial is None:
        population = initial_population(instance, config)
    else:
        if len(initial) != config.pop_size:
            raise ValueError(f"expected {config.pop_size} initial layouts, got {len(initial)}")
        population = [Individual(lay, _fitness(lay, instance, config), 0, i) for i, lay in enumerate(initial)]
        _assert_feasible(population, instance)
    if config.debug:
        _assert_feasible(population, instance)
    rng = substream(config.seed, "evolve")
    best = min(population, key=lambda ind: ind.sort_key)
    history = [best.fitness]
    stall = generations = 0
    while stall < config.stall_window and generations < config.max_generations:
        population = evolve_generation(population, instance, rng, config)
        generations += 1
        if config.debug:
            _assert_feasible(population, instance)
        leader = population[0]
        if leader.fitness < best.fitness:
            best, stall = leader, 0
        else:
            stall += 1
        history.append(best.fitness)
        log.debug("generation %d best %.6f stall %d", generations, best.fitness, stall)
    return RunResult(best, generations, history, time.perf_counter() - start)
