"""Container yard storage allocation: genetic algorithm, LIFO baseline, and benchmarks."""

from .constraints import ConstraintId, Violation, feasible_positions, validate_layout
from .errors import YardError
from .fitness import FitnessMode, layout_fitness, priority, rehandle_count, retrieval_oracle
from .ga import GAConfig, Individual, RunResult, run
from .instances import GenSpec, comparison_preset, generate_instance, load_instance, load_plan, save_instance, save_plan
from .lifo import lifo_allocate
from .yard import Container, ContainerType, Coord, Instance, Layout, YardConfig, new_layout

__all__ = [
    "ConstraintId",
    "Container",
    "ContainerType",
    "Coord",
    "FitnessMode",
    "GAConfig",
    "GenSpec",
    "Individual",
    "Instance",
    "Layout",
    "RunResult",
    "Violation",
    "YardConfig",
    "YardError",
    "comparison_preset",
    "feasible_positions",
    "generate_instance",
    "layout_fitness",
    "lifo_allocate",
    "load_instance",
    "load_plan",
    "new_layout",
    "priority",
    "rehandle_count",
    "retrieval_oracle",
    "run",
    "save_instance",
    "save_plan",
    "validate_layout",
]

__version__ = "0.1.0"
