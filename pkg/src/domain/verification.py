"""
Verification records.
VerificationCase and ReportDocument are the report schema; VerificationLog
keeps the run's trail the way a case keeps its audit entries, minus the
timestamps, so two runs with the same seed serialise identically.
"""

import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.numerics.core import Comparison

REPORT_SCHEMA = 1

ComplexPair = Tuple[float, float]


def complex_pair(value: complex) -> ComplexPair:
    value = complex(value)
    return (float(value.real), float(value.imag))


class VerificationCase(BaseModel):
    """One identity checked at one parameter set."""

    model_config = ConfigDict(populate_by_name=True, frozen=True)

    id: str
    params: Dict[str, Any] = Field(default_factory=dict)
    lhs: ComplexPair = (0.0, 0.0)
    rhs: ComplexPair = (0.0, 0.0)
    abs_err: float = 0.0
    rel_err: float = 0.0
    tol: float
    passed: bool = Field(alias="pass")
    error: Optional[str] = None

    @classmethod
    def from_comparison(
        cls, case_id: str, params: Dict[str, Any], comparison: Comparison, tol: float
    ) -> "VerificationCase":
        # NaN compares false, so a NaN residual fails
        return cls(
            id=case_id,
            params=params,
            lhs=complex_pair(comparison.lhs),
            rhs=complex_pair(comparison.rhs),
            abs_err=comparison.abs_err,
            rel_err=comparison.rel_err,
            tol=tol,
            passed=bool(comparison.residual < tol),
        )

    @classmethod
    def from_exact(cls, case_id: str, params: Dict[str, Any], identical: bool) -> "VerificationCase":
        """A termwise q-expansion comparison: no tolerance applies."""
        return cls(id=case_id, params=params, tol=0.0, passed=identical)

    @classmethod
    def from_error(cls, case_id: str, params: Dict[str, Any], error: Exception, tol: float) -> "VerificationCase":
        return cls(id=case_id, params=params, tol=tol, passed=False, error=f"{type(error).__name__}: {error}")

    @property
    def residual(self) -> float:
        """The error the pass rule reads: relative when |rhs| > 1."""
        return self.rel_err if abs(complex(*self.rhs)) > 1.0 else self.abs_err

    def sort_key(self) -> Tuple[str, str]:
        return (self.id, json.dumps(self.params, sort_keys=True))


class ReportSummary(BaseModel):
    total: int = 0
    passed: int = 0
    failed: int = 0


class ReportDocument(BaseModel):
    """A suite run: cases in (id, params) order plus tallies."""

    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(REPORT_SCHEMA, alias="schema")
    suite: str
    version: str
    seed: int
    levels: List[str] = Field(default_factory=list)
    tolerances: Dict[str, float] = Field(default_factory=dict)
    cases: List[VerificationCase] = Field(default_factory=list)
    summary: ReportSummary = Field(default_factory=ReportSummary)

    @model_validator(mode="after")
    def _tally(self) -> "ReportDocument":
        passed = sum(1 for c in self.cases if c.passed)
        expected = ReportSummary(total=len(self.cases), passed=passed, failed=len(self.cases) - passed)
        if self.summary != expected and self.summary != ReportSummary():
            raise ValueError(f"summary {self.summary} does not match case tallies {expected}")
        self.summary = expected
        return self

    @classmethod
    def build(
        cls,
        suite: str,
        version: str,
        seed: int,
        levels: List[str],
        tolerances: Dict[str, float],
        cases: List[VerificationCase],
    ) -> "ReportDocument":
        return cls(
            suite=suite,
            version=version,
            seed=seed,
            levels=levels,
            tolerances=dict(sorted(tolerances.items())),
            cases=sorted(cases, key=VerificationCase.sort_key),
        )

    @property
    def all_passed(self) -> bool:
        return self.summary.failed == 0

    def failures(self) -> List[VerificationCase]:
        return [c for c in self.cases if not c.passed]

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump(mode="json", by_alias=True)


# =============================================================================
# RUN LOG
# =============================================================================


@dataclass
class LogEntry:
    action: str
    component: str
    detail: str = ""
    case_id: Optional[str] = None


@dataclass
class VerificationLog:
    """Ordered trail of what a pipeline run did."""

    suite: str
    entries: List[LogEntry] = field(default_factory=list)

    def log(self, action: str, component: str, detail: str = "", case_id: Optional[str] = None) -> LogEntry:
        entry = LogEntry(action=action, component=component, detail=detail, case_id=case_id)
        self.entries.append(entry)
        return entry

    def count(self, action: str) -> int:
        return sum(1 for e in self.entries if e.action == action)

    def summary(self) -> str:
        """Human-readable trail."""
        lines = [f"Verification log for suite '{self.suite}':"]
        lines.append("=" * 50)
        for entry in self.entries:
            head = f"{entry.component}: {entry.action}"
            if entry.case_id:
                head += f" [{entry.case_id}]"
            lines.append(head)
            if entry.detail:
                lines.append(f"   {entry.detail}")
        return "\n".join(lines)
