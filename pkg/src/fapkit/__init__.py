"""Forest augmentation toolkit: the two-step reverse-delete algorithm, an exact oracle and dual certificates."""

from .connectivity import EdgeView, Mode, articulation_points, bridges, is_feasible
from .graph import Block, Instance, Solution, blocks, parse_instance, serialize_instance
from .oracle import OptResult, opt_bnb, opt_exhaustive
from .solver import RunReport, replay, reverse_delete, solve, step1, step2

__all__ = [
    "Block",
    "EdgeView",
    "Instance",
    "Mode",
    "OptResult",
    "RunReport",
    "Solution",
    "articulation_points",
    "blocks",
    "bridges",
    "is_feasible",
    "opt_bnb",
    "opt_exhaustive",
    "parse_instance",
    "replay",
    "reverse_delete",
    "serialize_instance",
    "solve",
    "step1",
    "step2",
]
