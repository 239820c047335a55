"""Planning knowledge toolkit: PDDL parsing, a planning knowledge graph,
planner selection, macro mining, and an instrumented forward-search planner."""

__version__ = "0.1.0"

__all__ = ["__version__"]
