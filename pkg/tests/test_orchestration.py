from src.orchestration import CompareState, GraphRunner, StateGraph, Status, build_compare_graph


class FlakySolver:
    """Fails the first `failures` calls."""

    def __init__(self, failures: int):
        self.failures = failures
        self.calls = 0

    def __call__(self, state: CompareState) -> CompareState:
        self.calls += 1
        if self.calls <= self.failures:
            raise RuntimeError("solver diverged")
        state.pde_fields = {8: None}
        return state


def _counting(name, calls):
    def node(state: CompareState) -> CompareState:
        calls.append(name)
        return state

    return node


def test_pipeline_runs_in_order():
    calls = []
    graph = build_compare_graph(_counting("simulate", calls), _counting("solve", calls), _counting("compare", calls))
    state = GraphRunner(graph).run(CompareState(sides=[8, 16]))
    assert state.status == Status.COMPLETE
    assert calls == ["simulate", "solve", "compare"]
    assert state.steps_completed == calls
    assert state.completed_at is not None


def test_retry_resumes_at_the_failed_node():
    calls = []
    solver = FlakySolver(failures=1)
    graph = build_compare_graph(_counting("simulate", calls), solver, _counting("compare", calls))
    state = GraphRunner(graph, max_retries=2).run(CompareState(sides=[8]))
    assert state.status == Status.COMPLETE
    assert state.retry_count == 1
    assert solver.calls == 2
    # the simulation is not repeated
    assert calls == ["simulate", "compare"]


def test_gives_up_after_max_retries():
    solver = FlakySolver(failures=10)
    graph = build_compare_graph(_counting("simulate", []), solver, _counting("compare", []))
    state = GraphRunner(graph, max_retries=2).run(CompareState(sides=[8]))
    assert state.status == Status.ERROR
    assert state.error_step == "solve"
    assert "solver diverged" in state.error
    assert solver.calls == 3
    assert not state.passed


def test_missing_handler_is_an_error():
    state = GraphRunner(StateGraph()).run(CompareState(sides=[8]))
    assert state.status == Status.ERROR
    assert state.error_step == "router"
    assert state.retry_count == 0


def test_passed_needs_every_assertion():
    state = CompareState(sides=[8], status=Status.COMPLETE, assertions={"decreasing": True, "slope": False})
    assert not state.passed
    state.assertions["slope"] = True
    assert state.passed
    assert state.to_dict()["status"] == "complete"
