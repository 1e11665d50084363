"""
State-machine orchestration of the comparison pipeline.
"""

from .graph import GraphRunner, Node, StateGraph, build_compare_graph
from .state import CompareState, SimulatedFields, Status

__all__ = [
    # State
    "Status",
    "CompareState",
    "SimulatedFields",
    # Graph
    "Node",
    "StateGraph",
    "GraphRunner",
    "build_compare_graph",
]
