"""Finite-quotient models for descending twists of modular curves to Q."""

from .descent import DescentVerdict, cross_validate, decide
from .errors import DescentError
from .problem_io import parse_problem
from .reps import DescentProblem, LinRep, ProjRep

__all__ = ["DescentProblem", "DescentVerdict", "DescentError", "LinRep", "ProjRep",
           "cross_validate", "decide", "parse_problem"]
__version__ = "0.1.0"
