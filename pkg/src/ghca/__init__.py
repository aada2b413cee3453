"""Exact simulation and analysis of the one-dimensional Greenberg-Hastings
cellular automaton with e excited and r refractory states."""
from .core import Configuration, Params, evolve, iterate, step

__all__ = ["Configuration", "Params", "evolve", "iterate", "step"]
__version__ = "0.1.0"
