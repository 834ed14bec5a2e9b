import random
from collections import Counter

import pytest
from conftest import build
from scipy.stats import binomtest, chisquare

from yardga.constraints import swap_keeps_feasible, validate_layout
from yardga.errors import GenerationFailure, InfeasibleLayoutError
from yardga.fitness import FitnessMode, layout_fitness
from yardga.ga import (
    GAConfig,
    Individual,
    crossover,
    evolve_generation,
    initial_population,
    mutate,
    random_feasible_layout,
    roulette_select,
    run,
)
from yardga.instances import TYPE_SWEEP_COUNTS, TYPE_SWEEP_YARD, GenSpec, comparison_preset, generate_instance
from yardga.yard import Container, ContainerType, Coord, Instance, Layout, YardConfig

T = ContainerType
C333 = YardConfig(3, 3, 3, n_stock_refrig=2, n_stock_reg=3)


def individual(layout, inst, born=0, serial=0):
    return Individual(layout, layout_fitness(layout, inst), born, serial)


def complete_and_feasible(layout, inst):
    return validate_layout(layout, inst) == [] and layout.placed_ids() == {c.id for c in inst.containers}


@pytest.fixture(scope="module")
def preset5():
    return comparison_preset(5)


@pytest.fixture(scope="module")
def preset5_population(preset5):
    return initial_population(preset5, GAConfig(pop_size=6, seed=3))


class TestRandomFeasibleLayout:
    def test_single_dry_lands_on_ground(self):
        c = Container(1, T.DRY, 4)
        inst = Instance(C333, [c])
        hits = Counter()
        rng = random.Random(1)
        for _ in range(4500):
            coord = random_feasible_layout(inst, rng).position(1)
            assert coord.z == 1
            hits[coord] += 1
        assert len(hits) == 45
        assert chisquare(list(hits.values())).pvalue > 0.001

    def test_reefers_without_power(self):
        cfg = YardConfig(2, 2, 2, n_stock_refrig=0, n_stock_reg=1)
        inst = Instance(cfg, [Container(1, T.REEFER, 1)])
        with pytest.raises(GenerationFailure):
            random_feasible_layout(inst, random.Random(0), max_restarts=10)

    def test_empty_instance(self):
        layout = random_feasible_layout(Instance(C333, []), random.Random(0))
        assert len(layout) == 0

    def test_preset3_layouts_are_feasible(self):
        inst = comparison_preset(3)
        rng = random.Random(2)
        for _ in range(10_000):
            assert complete_and_feasible(random_feasible_layout(inst, rng), inst)


class TestRoulette:
    def test_uniform_for_equal_fitness(self):
        pop = [Individual(Layout(C333), 1.5, 0, i) for i in range(10)]
        rng = random.Random(3)
        draws = Counter(roulette_select(pop, rng).serial for _ in range(10_000))
        assert chisquare([draws[i] for i in range(10)]).pvalue > 0.001

    def test_two_to_one(self):
        good, bad = Individual(Layout(C333), 0.0), Individual(Layout(C333), 1.0)
        rng = random.Random(4)
        n = 12_000
        k = sum(roulette_select([good, bad], rng) is good for _ in range(n))
        assert binomtest(k, n, 2 / 3).pvalue > 0.001

    def test_single(self):
        only = Individual(Layout(C333), 3.0)
        rng = random.Random(5)
        assert all(roulette_select([only], rng) is only for _ in range(100))


class TestCrossover:
    def test_identical_parents(self, preset5, preset5_population):
        p = preset5_population[0]
        cfg = GAConfig(p_cross=1.0)
        rng = random.Random(6)
        for _ in range(30):
            child = crossover(p, p, preset5, rng, cfg)
            assert child.layout == p.layout
            assert child.fitness == p.fitness

    def test_no_crossover(self, preset5, preset5_population):
        p1, p2 = preset5_population[:2]
        cfg = GAConfig(p_cross=0.0)
        rng = random.Random(7)
        for _ in range(30):
            child = crossover(p1, p2, preset5, rng, cfg)
            assert child.layout == p1.layout

    def test_children_are_feasible(self, preset5, preset5_population):
        cfg = GAConfig(p_cross=1.0)
        rng = random.Random(8)
        for _ in range(300):
            p1, p2 = rng.sample(preset5_population, 2)
            child = crossover(p1, p2, preset5, rng, cfg)
            assert complete_and_feasible(child.layout, preset5)
            assert child.fitness == layout_fitness(child.layout, preset5)

    def test_parents_untouched(self, preset5, preset5_population):
        p1, p2 = preset5_population[:2]
        snap1, snap2 = p1.layout.copy(), p2.layout.copy()
        rng = random.Random(9)
        for _ in range(20):
            crossover(p1, p2, preset5, rng, GAConfig(p_cross=1.0))
        assert p1.layout == snap1 and p2.layout == snap2


class TestMutate:
    def test_single_container(self):
        inst = Instance(C333, [Container(1, T.DRY, 1)])
        ind = individual(random_feasible_layout(inst, random.Random(0)), inst)
        rng = random.Random(10)
        assert all(mutate(ind, inst, rng, GAConfig(p_mut=1.0)) is ind for _ in range(20))

    def test_same_type_same_tier_swap(self):
        layout, inst = build(
            YardConfig(2, 1, 2),
            {(1, 1, 1): [(T.DRY, 1), (T.DRY, 3)], (2, 1, 1): [(T.DRY, 2), (T.DRY, 5)]},
        )
        a, b = layout.index(Coord(1, 1, 1, 1)), layout.index(Coord(2, 1, 1, 1))
        before_above = {c.id: len(layout.stack_above(k)) for k, c in layout.placed()}
        layout._swap(a, b)
        assert swap_keeps_feasible(layout, a, b)
        # heights did not change, so the Above objective only moves through the dates
        after_above = {c.id: len(layout.stack_above(k)) for k, c in layout.placed()}
        assert before_above == after_above
        assert layout_fitness(layout, inst, FitnessMode.ABOVE) == pytest.approx(1 / 2 + 1 / 1)

    def test_mutants_are_feasible(self, preset5, preset5_population):
        cfg = GAConfig(p_mut=1.0)
        rng = random.Random(11)
        changed = 0
        for _ in range(1000):
            parent = rng.choice(preset5_population)
            snap = parent.layout.copy()
            child = mutate(parent, preset5, rng, cfg)
            assert parent.layout == snap
            assert complete_and_feasible(child.layout, preset5)
            assert child.fitness == layout_fitness(child.layout, preset5)
            changed += child.layout != parent.layout
        assert changed > 500

    def test_no_mutation(self, preset5, preset5_population):
        ind = preset5_population[0]
        rng = random.Random(12)
        assert all(mutate(ind, preset5, rng, GAConfig(p_mut=0.0)) is ind for _ in range(20))


class TestEvolveGeneration:
    def test_elitism_and_size(self, preset5, preset5_population):
        cfg = GAConfig(pop_size=6)
        rng = random.Random(13)
        pop = preset5_population
        for _ in range(5):
            nxt = evolve_generation(pop, preset5, rng, cfg)
            assert len(nxt) == len(pop)
            assert min(i.fitness for i in nxt) <= min(i.fitness for i in pop)
            assert all(complete_and_feasible(i.layout, preset5) for i in nxt)
            assert [i.fitness for i in nxt] == sorted(i.fitness for i in nxt)
            pop = nxt

    def test_no_operators_only_copies(self, preset5, preset5_population):
        cfg = GAConfig(pop_size=6, p_cross=0.0, p_mut=0.0)
        pop = sorted(preset5_population, key=lambda i: i.sort_key)
        nxt = evolve_generation(pop, preset5, random.Random(14), cfg)
        # offspring are copies of roulette picks, so nothing new appears
        assert all(any(i.layout is p.layout for p in pop) for i in nxt)
        assert nxt[0] is pop[0]
        # rank by rank the survivors are at least as fit as the parents
        assert all(a.fitness <= b.fitness for a, b in zip(nxt, pop))


class TestRun:
    def test_deterministic(self):
        inst = comparison_preset(3)
        cfg = GAConfig(pop_size=8, stall_window=5, seed=42)
        r1, r2 = run(inst, cfg), run(inst, cfg)
        assert r1.history == r2.history
        assert r1.best.layout == r2.best.layout
        assert r1.generations_run == r2.generations_run

    def test_stops_after_one_stalled_generation(self):
        inst = Instance(C333, [Container(i, T.DRY, i) for i in range(1, 10)])
        layouts = []
        for shift in range(4):
            layout = Layout(C333)
            for n, c in enumerate(inst.containers):
                layout.place(c, Coord(1 + (n + shift) % 3, 1 + n // 3, 1, 1))
            layouts.append(layout)
        result = run(inst, GAConfig(pop_size=4, stall_window=1, seed=0), initial=layouts)
        assert result.generations_run == 1
        assert result.history == [0.0, 0.0]

    def test_rejects_bad_seed_population(self):
        layout, inst = build(C333, {(1, 1, 1): [None, (T.DRY, 1)]})
        with pytest.raises(InfeasibleLayoutError):
            run(inst, GAConfig(pop_size=2), initial=[layout, layout])
        with pytest.raises(ValueError):
            run(inst, GAConfig(pop_size=3), initial=[layout])

    def test_history_and_feasibility(self):
        inst = comparison_preset(4, seed=1)
        result = run(inst, GAConfig(pop_size=10, stall_window=5, seed=1, debug=True))
        h = result.history
        assert all(a >= b for a, b in zip(h, h[1:]))
        assert len(h) == result.generations_run + 1
        assert result.final_fitness == result.best.fitness == layout_fitness(result.best.layout, inst)
        assert complete_and_feasible(result.best.layout, inst)

    def test_generation_cap(self):
        inst = comparison_preset(1)
        result = run(inst, GAConfig(pop_size=4, stall_window=50, max_generations=3))
        assert result.generations_run <= 3

    def test_two_type_sweep_row_reaches_zero(self):
        inst = generate_instance(GenSpec(TYPE_SWEEP_YARD, TYPE_SWEEP_COUNTS[2], seed=0))
        result = run(inst, GAConfig(pop_size=50, stall_window=20, seed=0))
        assert result.final_fitness == 0.0


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(pop_size=1),
        dict(stall_window=0),
        dict(max_generations=0),
        dict(p_cross=1.5),
        dict(p_mut=-0.1),
        dict(seed=-1),
        dict(mode="sideways"),
    ],
)
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        GAConfig(**kwargs)


def test_config_defaults():
    cfg = GAConfig(pop_size=30, stall_window=20)
    assert cfg.max_generations == 6000
    assert cfg.mode is FitnessMode.BLOCKING
    assert GAConfig(mode="above").mode is FitnessMode.ABOVE
