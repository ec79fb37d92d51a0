"""Hybrid ILP: reasoning and rule induction over ontologies combined with disjunctive Datalog."""

__version__ = "0.1.0"
