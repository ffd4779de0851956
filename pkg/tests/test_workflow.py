from typing import List, Tuple

import pytest

from src.agents.base_checker import BaseChecker, CheckFn, Measurement
from src.models import CheckerType, ExperimentConfig, ValidationState
from src.workflow import DEFAULT_ORDER, ValidationWorkflow, create_validation_graph


def test_default_suite_passes():
    state = ValidationWorkflow().run(ExperimentConfig(K=4))
    assert state.checks
    assert [c.name for c in state.failed] == []
    assert state.completed_checkers == DEFAULT_ORDER
    assert state.current_step == "normal_form_done"


def test_subset_runs_in_dependency_order():
    workflow = ValidationWorkflow([CheckerType.SOLVER, CheckerType.EIGENBASIS])
    assert workflow.order == [CheckerType.EIGENBASIS, CheckerType.SOLVER]
    state = workflow.run(ExperimentConfig(K=4))
    assert state.completed_checkers == [CheckerType.EIGENBASIS, CheckerType.SOLVER]
    assert {c.checker for c in state.checks} == {CheckerType.EIGENBASIS, CheckerType.SOLVER}
    assert all(c.passed for c in state.checks)
    assert len(state.messages) == 2


def test_empty_selection_rejected():
    with pytest.raises(ValueError):
        ValidationWorkflow([])


def test_router_ends_after_last_checker():
    workflow = ValidationWorkflow([CheckerType.EIGENBASIS])
    state = ValidationState(completed_checkers=[CheckerType.EIGENBASIS])
    assert workflow._route_next(state) == "end"
    assert workflow._route_next(ValidationState()) == "eigenbasis"


class _ExplodingChecker(BaseChecker):
    checker_type = CheckerType.SOLVER

    def checks(self) -> List[Tuple[str, CheckFn]]:
        def boom(config: ExperimentConfig) -> Measurement:
            raise RuntimeError("kaput")
        return [("boom", boom), ("fine", lambda config: Measurement(0.0, 1.0))]


def test_checker_turns_exceptions_into_failed_checks():
    update = _ExplodingChecker().process(ValidationState())
    boom, fine = update["checks"]
    assert not boom.passed
    assert boom.detail == "RuntimeError: kaput"
    assert fine.passed
    assert update["completed_checkers"] == [CheckerType.SOLVER]


def test_measurement_verdict():
    assert Measurement(1e-12, 1e-10).verdict()
    assert not Measurement(1e-8, 1e-10).verdict()
    assert not Measurement(None, 1e-10).verdict()
    assert Measurement(5.0, 1.0, passed=True).verdict()


def test_graph_factory_compiles():
    assert create_validation_graph() is not None
