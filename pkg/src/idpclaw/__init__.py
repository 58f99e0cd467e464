"""Induced disjoint paths on claw-free graphs."""

from .graph import Graph, GraphFormatError, SizeLimitError
from .instance import Instance, Solution, TerminalPair, verify_solution

__version__ = "0.1.0"
