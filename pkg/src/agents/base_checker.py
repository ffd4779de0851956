"""Common plumbing for validation checkers."""
import logging
import traceback
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Tuple

from src.models import CheckerType, ExperimentConfig, ValidationCheck, ValidationState

logger = logging.getLogger(__name__)


@dataclass
class Measurement:
    """Outcome of one check; passed defaults to measured ≤ tolerance."""
    measured: Optional[float] = None
    tolerance: Optional[float] = None
    passed: Optional[bool] = None
    detail: Optional[str] = None

    def verdict(self) -> bool:
        if self.passed is not None:
            return self.passed
        if self.measured is None or self.tolerance is None:
            return False
        return self.measured <= self.tolerance


CheckFn = Callable[[ExperimentConfig], Measurement]


class BaseChecker:
    """A workflow node running a fixed list of named checks against the experiment config."""

    checker_type: CheckerType

    def checks(self) -> List[Tuple[str, CheckFn]]:
        raise NotImplementedError

    def process(self, state: ValidationState) -> Dict[str, Any]:
        """Run every check; exceptions become failed checks instead of aborting the suite."""
        logger.info(f"🔍 {self.checker_type.value} checker processing")
        results = [self._run(name, fn, state.config) for name, fn in self.checks()]
        failed = [r.name for r in results if not r.passed]
        if failed:
            logger.info(f"⚠️ {self.checker_type.value}: {len(failed)} of {len(results)} checks failed: {', '.join(failed)}")
        else:
            logger.info(f"✅ {self.checker_type.value}: {len(results)} checks passed")
        return {
            "checks": results,
            "completed_checkers": [self.checker_type],
            "current_checker": self.checker_type,
            "current_step": f"{self.checker_type.value}_done",
            "messages": [{
                "role": "checker",
                "checker": self.checker_type.value,
                "content": f"{len(results) - len(failed)}/{len(results)} passed",
            }],
        }

    def _run(self, name: str, fn: CheckFn, config: ExperimentConfig) -> ValidationCheck:
        try:
            m = fn(config)
        except Exception as e:
            logger.debug(traceback.format_exc())
            logger.error(f"❌ {name}: {type(e).__name__}: {e}")
            return ValidationCheck(name=name, checker=self.checker_type, passed=False,
                                   detail=f"{type(e).__name__}: {e}")
        passed = m.verdict()
        logger.debug(f"{'✅' if passed else '❌'} {name}: measured={m.measured} tol={m.tolerance}")
        return ValidationCheck(name=name, checker=self.checker_type, measured=m.measured,
                               tolerance=m.tolerance, passed=passed, detail=m.detail)
