"""
State machine graph for orchestrating the comparison pipeline.

1. Define nodes (stage functions)
2. Map statuses to nodes
3. Router picks the node for the current status
4. Runner executes until a terminal state, retrying a failed node
"""

import logging
from dataclasses import dataclass
from datetime import datetime
from typing import Callable, Dict, Optional

from .state import CompareState, Status

logger = logging.getLogger(__name__)


@dataclass
class Node:
    name: str
    func: Callable[[CompareState], CompareState]
    next_status: Status  # status after this node completes


class StateGraph:
    """
    Usage:
        graph = StateGraph()
        graph.add_node("simulate", simulate, Status.SOLVING)
        graph.set_entry_point(Status.PENDING, "simulate")
        ...
        final_state = GraphRunner(graph).run(CompareState(sides=[32, 64]))
    """

    def __init__(self):
        self.nodes: Dict[str, Node] = {}
        self.status_to_node: Dict[Status, str] = {}

    def add_node(self, name: str, func: Callable[[CompareState], CompareState], next_status: Status):
        self.nodes[name] = Node(name=name, func=func, next_status=next_status)

    def set_entry_point(self, status: Status, node_name: str):
        """Map a status to the node that should handle it."""
        self.status_to_node[status] = node_name

    def get_next_node(self, state: CompareState) -> Optional[str]:
        return self.status_to_node.get(state.status)


class GraphRunner:
    """
    Executes a state graph until COMPLETE, or ERROR after max_retries.
    A retry resumes at the node that failed; earlier results are kept.
    """

    def __init__(self, graph: StateGraph, max_retries: int = 2):
        self.graph = graph
        self.max_retries = max_retries

    def run(self, initial_state: CompareState) -> CompareState:
        state = initial_state
        state.started_at = datetime.now()
        logger.info("[COMPARE] pipeline start, sides=%s", state.sides)

        while True:
            if state.status == Status.COMPLETE:
                state.completed_at = datetime.now()
                logger.info("[COMPARE] pipeline complete")
                break

            if state.status == Status.ERROR:
                if state.retry_count >= self.max_retries or state.failed_status is None:
                    logger.error("[COMPARE] failed after %d retries: %s", state.retry_count, state.error)
                    break
                state.retry_count += 1
                state.status = state.failed_status
                logger.warning("[COMPARE] retrying %s (attempt %d)", state.error_step, state.retry_count)
                continue

            node_name = self.graph.get_next_node(state)
            node = self.graph.nodes.get(node_name) if node_name else None
            if node is None:
                state.mark_error("router", f"no handler for status {state.status.value}")
                state.failed_status = None
                continue

            logger.info("[COMPARE] running %s", node_name)
            state.current_step = node_name
            try:
                state = node.func(state)
                state.mark_step_complete(node_name)
                state.status = node.next_status
            except Exception as e:
                message = f"{type(e).__name__}: {e}"
                logger.exception("[COMPARE] %s failed: %s", node_name, message)
                state.mark_error(node_name, message)

        return state


# ============================================================================
# CONVENIENCE: the comparison graph
# ============================================================================


def build_compare_graph(
    simulate_func: Callable,
    solve_func: Callable,
    compare_func: Callable,
) -> StateGraph:
    """
    PENDING → SIMULATING → SOLVING → COMPARING → COMPLETE
    """
    graph = StateGraph()

    graph.add_node("simulate", simulate_func, Status.SOLVING)
    graph.add_node("solve", solve_func, Status.COMPARING)
    graph.add_node("compare", compare_func, Status.COMPLETE)

    graph.set_entry_point(Status.PENDING, "simulate")
    graph.set_entry_point(Status.SIMULATING, "simulate")
    graph.set_entry_point(Status.SOLVING, "solve")
    graph.set_entry_point(Status.COMPARING, "compare")

    return graph
