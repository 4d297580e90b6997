"""
Pass/fail reports produced by the property checkers.

Checkers in the metric, coreset, euclid and hardness packages all emit a
CheckReport so the CLI can serialize them the same way.
"""

from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel, Field

MAX_STORED_FAILURES = 20


def to_plain(value: Any) -> Any:
    """Convert numpy scalars and arrays (possibly nested) into JSON-ready values."""
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, dict):
        return {str(k): to_plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_plain(v) for v in value]
    return value


class CheckFailure(BaseModel):
    """One violated assertion together with what is needed to reproduce it."""

    message: str
    seed: Optional[int] = None
    detail: Dict[str, Any] = Field(default_factory=dict)


class CheckReport(BaseModel):
    """Outcome of one property check run."""

    kind: str
    passed: bool = True
    assertions: int = 0
    failure_count: int = 0
    failures: List[CheckFailure] = Field(default_factory=list)
    metrics: Dict[str, Any] = Field(default_factory=dict)
    params: Dict[str, Any] = Field(default_factory=dict)

    def record(self, ok: bool, message: str, seed: Optional[int] = None, **detail: Any) -> bool:
        """Count one assertion; store the failure (up to a cap) when it does not hold."""
        self.assertions += 1
        if not ok:
            self.passed = False
            self.failure_count += 1
            if len(self.failures) < MAX_STORED_FAILURES:
                self.failures.append(
                    CheckFailure(message=message, seed=seed, detail=to_plain(detail))
                )
        return ok

    def merge(self, other: "CheckReport") -> None:
        """Fold another report of the same kind into this one."""
        self.assertions += other.assertions
        self.failure_count += other.failure_count
        self.passed = self.passed and other.passed
        room = MAX_STORED_FAILURES - len(self.failures)
        if room > 0:
            self.failures.extend(other.failures[:room])
