import random

import pytest

from yardga.ga import random_feasible_layout
from yardga.yard import Container, ContainerType, Coord, Instance, Layout, YardConfig

T = ContainerType


def build(config, stacks):
    """Layout + instance from ``{(x, y, j): [(type, date), ...bottom-to-top]}``.

    A ``None`` entry leaves a gap (for deliberately floating containers).
    Ids are assigned 1, 2, ... in the order given.
    """
    layout = Layout(config)
    containers = []
    for (x, y, j), column in stacks.items():
        for z, spec in enumerate(column, start=1):
            if spec is None:
                continue
            t, d = spec
            c = Container(len(containers) + 1, t, d)
            containers.append(c)
            layout.place(c, Coord(x, y, z, j))
    return layout, Instance(config, containers)


def random_instance(rng, config, n, types=tuple(T), dates=(1, 5)):
    """Random container population that respects the reefer capacity."""
    containers = []
    reefers = 0
    for i in range(1, n + 1):
        t = rng.choice(types)
        if t is T.REEFER:
            if reefers >= config.refrigerated_capacity:
                t = T.DRY
            else:
                reefers += 1
        containers.append(Container(i, t, rng.randint(*dates)))
    return Instance(config, containers)


def random_feasible_sample(rng, config, max_fill=None, types=tuple(T), dates=(1, 5)):
    """A random instance together with a random feasible layout of it."""
    cap = config.capacity if max_fill is None else max_fill
    while True:
        instance = random_instance(rng, config, rng.randint(0, cap), types, dates)
        try:
            return random_feasible_layout(instance, rng, max_restarts=20), instance
        except Exception:
            continue


def random_arbitrary_layout(rng, config, fill=0.5):
    """Any occupancy at all, stacking rules ignored."""
    layout = Layout(config)
    containers = []
    for coord in config.coords():
        if rng.random() < fill:
            c = Container(len(containers) + 1, rng.choice(list(T)), rng.randint(1, 5))
            containers.append(c)
            layout.place(c, coord)
    return layout, Instance(config, containers)


@pytest.fixture
def rng():
    return random.Random(12345)


SMALL = YardConfig(2, 2, 2, n_stock_refrig=1, n_stock_reg=1)
TINY = YardConfig(2, 2, 3, n_stock_refrig=1, n_stock_reg=1)


# acceptance criteria report: (number, title, passed, detail)
ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {number}. {title}: {detail}")
