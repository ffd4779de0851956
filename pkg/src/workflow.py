"""LangGraph workflow running the validation suite checker by checker."""
import logging
from typing import Dict, Iterable, List, Optional

from langgraph.graph import END, StateGraph

from src.agents.base_checker import BaseChecker
from src.agents.diagnostics_checker import DiagnosticsChecker
from src.agents.eigenbasis_checker import EigenbasisChecker
from src.agents.multiplier_checker import MultiplierChecker
from src.agents.normal_form_checker import NormalFormChecker
from src.agents.solver_checker import SolverChecker
from src.agents.transform_checker import TransformChecker
from src.models import CheckerType, ExperimentConfig, ValidationCheck, ValidationState

logger = logging.getLogger(__name__)

# Bottom-up: each module is checked after the ones it builds on.
DEFAULT_ORDER = [
    CheckerType.EIGENBASIS,
    CheckerType.TRANSFORMS,
    CheckerType.MULTIPLIERS,
    CheckerType.DIAGNOSTICS,
    CheckerType.SOLVER,
    CheckerType.NORMAL_FORM,
]


class ValidationWorkflow:
    """
    StateGraph over the checker nodes.

    Every node appends its ValidationCheck records to the shared state; the
    router sends control to the next checker that has not run yet and ends
    the graph once all selected checkers completed.
    """

    def __init__(self, checkers: Optional[Iterable[CheckerType]] = None):
        registry: Dict[CheckerType, BaseChecker] = {
            CheckerType.EIGENBASIS: EigenbasisChecker(),
            CheckerType.TRANSFORMS: TransformChecker(),
            CheckerType.MULTIPLIERS: MultiplierChecker(),
            CheckerType.DIAGNOSTICS: DiagnosticsChecker(),
            CheckerType.SOLVER: SolverChecker(),
            CheckerType.NORMAL_FORM: NormalFormChecker(),
        }
        selected = [CheckerType(c) for c in checkers] if checkers is not None else list(DEFAULT_ORDER)
        if not selected:
            raise ValueError("at least one checker must be selected")
        self.order: List[CheckerType] = [c for c in DEFAULT_ORDER if c in selected]
        self.checkers = {c: registry[c] for c in self.order}

        self.workflow = self._build_workflow()
        self.app = None

    def _build_workflow(self) -> StateGraph:
        workflow = StateGraph(ValidationState)

        for checker_type, checker in self.checkers.items():
            workflow.add_node(checker_type.value, checker.process)

        workflow.set_entry_point(self.order[0].value)

        targets = {c.value: c.value for c in self.order}
        targets["end"] = END
        for checker_type in self.order:
            workflow.add_conditional_edges(checker_type.value, self._route_next, targets)

        return workflow

    def _route_next(self, state: ValidationState) -> str:
        done = set(state.completed_checkers)
        for checker_type in self.order:
            if checker_type not in done:
                logger.info(f"🔀 Routing to {checker_type.value}")
                return checker_type.value
        logger.info("🔀 All checkers completed")
        return "end"

    def compile(self):
        """Compile the workflow."""
        self.app = self.workflow.compile()
        return self.app

    def run(self, config: Optional[ExperimentConfig] = None) -> ValidationState:
        """Run all selected checkers and return the final state."""
        if not self.app:
            self.compile()

        initial_state = ValidationState(config=config or ExperimentConfig())
        try:
            final_state = self.app.invoke(initial_state)
            if isinstance(final_state, ValidationState):
                return final_state
            return ValidationState(**dict(final_state))
        except Exception as e:
            logger.error(f"❌ Workflow error: {e}")
            initial_state.checks.append(ValidationCheck(
                name="workflow", checker=self.order[0], passed=False, detail=f"{type(e).__name__}: {e}",
            ))
            initial_state.current_step = "failed"
            return initial_state


def create_validation_graph():
    """
    Create and return the compiled validation graph for LangGraph tooling.

    Nodes run, in order, the eigenbasis, transform, multiplier, diagnostics,
    solver and normal-form checkers against the default experiment config.
    """
    return ValidationWorkflow().compile()
