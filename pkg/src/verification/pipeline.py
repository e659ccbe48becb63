"""
Verification Pipeline.
Flow per suite:
1. Expand the suite into cases for the requested levels
2. Draw seeded sample points (redrawing near poles)
3. Evaluate both sides and compare against the case tolerance
4. Tabulate, then assemble an order-stable ReportDocument
"""

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from rich.console import Console
from rich.table import Table

from src import __version__
from src.domain.errors import MockThetaError, PoleProximityError
from src.domain.indices import DEFAULT_BUDGET, TruncationBudget, format_half
from src.domain.verification import ReportDocument, VerificationCase, VerificationLog
from src.verification.sampling import PointSampler, SamplePoint, sample_until_clear
from src.verification.suites import CASE_TOLERANCES, DEFAULT_ORDER, CaseKind, CaseSpec, Suite, resolve_suites

console = Console()


@dataclass
class RunOptions:
    levels: List[int]
    points: int = 10
    seed: int = 42
    tol: Optional[float] = None
    order: Fraction = DEFAULT_ORDER
    budget: TruncationBudget = DEFAULT_BUDGET
    fallback_tol: float = 1e-7

    def tolerance(self, case_id: str) -> float:
        if self.tol is not None:
            return self.tol
        return CASE_TOLERANCES.get(case_id, self.fallback_tol)


@dataclass
class SuiteOutcome:
    suite: str
    cases: List[VerificationCase] = field(default_factory=list)

    @property
    def passed(self) -> int:
        return sum(1 for c in self.cases if c.passed)

    @property
    def failed(self) -> int:
        return len(self.cases) - self.passed


class VerificationPipeline:
    """
    Runs one or more suites and assembles the report.

    Library errors inside a case become failing cases; the run itself only
    fails on bad options.
    """

    def __init__(self, options: RunOptions, out: Optional[Console] = None):
        self.options = options
        self.console = out or console

    def run(self, suite_name: str) -> Tuple[ReportDocument, VerificationLog]:
        suites = resolve_suites(suite_name)
        log = VerificationLog(suite=suite_name)
        levels = ", ".join(format_half(m2) for m2 in self.options.levels)

        self.console.print()
        self.console.rule("[bold cyan]MOCK THETA VERIFICATION[/bold cyan]", style="cyan")
        self.console.print(f"  [bold]Suite:[/bold] {suite_name}")
        self.console.print(f"  [bold]Levels m:[/bold] {levels or '-'}")
        self.console.print(f"  [bold]Points:[/bold] {self.options.points}   [bold]Seed:[/bold] {self.options.seed}")
        log.log("RUN_STARTED", "VerificationPipeline", f"levels={levels} points={self.options.points} seed={self.options.seed}")

        outcomes = []
        for step, suite in enumerate(suites, start=1):
            self.console.print()
            self.console.rule(f"STEP {step}: {suite.name.upper()} ({suite.description})")
            outcome = self._run_suite(suite, log)
            self._print_table(outcome)
            outcomes.append(outcome)

        cases = [c for o in outcomes for c in o.cases]
        used = sorted({c.id for c in cases})
        report = ReportDocument.build(
            suite=suite_name,
            version=__version__,
            seed=self.options.seed,
            levels=[format_half(m2) for m2 in self.options.levels],
            tolerances={case_id: self.options.tolerance(case_id) for case_id in used},
            cases=cases,
        )
        log.log(
            "RUN_COMPLETED",
            "VerificationPipeline",
            f"{report.summary.passed}/{report.summary.total} passed",
        )

        self.console.print()
        style = "green" if report.all_passed else "red"
        verdict = "PASS" if report.all_passed else "FAIL"
        self.console.rule(
            f"[bold {style}]{verdict}: {report.summary.passed}/{report.summary.total} cases[/bold {style}]",
            style=style,
        )
        return report, log

    # ------------------------------------------------------------------ cases

    def _run_suite(self, suite: Suite, log: VerificationLog) -> SuiteOutcome:
        outcome = SuiteOutcome(suite.name)
        specs = suite.cases(self.options.levels, self.options.order)
        log.log("SUITE_EXPANDED", suite.name, f"{len(specs)} case specs")
        for spec in specs:
            if spec.kind is CaseKind.EXACT:
                outcome.cases.append(self._run_exact(spec, log))
            elif spec.kind is CaseKind.FIXED:
                outcome.cases.append(self._run_fixed(spec, log))
            else:
                sampler = PointSampler(self.options.seed, suite.index, f"{spec.case_id}:{sorted(spec.params.items())}")
                for _ in range(self.options.points):
                    outcome.cases.append(self._run_sampled(spec, sampler, log))
        return outcome

    def _run_exact(self, spec: CaseSpec, log: VerificationLog) -> VerificationCase:
        try:
            case = VerificationCase.from_exact(spec.case_id, spec.params, bool(spec.run()))
        except (MockThetaError, ArithmeticError) as e:
            case = VerificationCase.from_error(spec.case_id, spec.params, e, 0.0)
        self._record(case, log)
        return case

    def _run_fixed(self, spec: CaseSpec, log: VerificationLog) -> VerificationCase:
        tol = self.options.tolerance(spec.case_id)
        try:
            comparison = spec.evaluate(None, self.options.budget)
            case = VerificationCase.from_comparison(spec.case_id, spec.params, comparison, tol)
        except (MockThetaError, ArithmeticError) as e:
            case = VerificationCase.from_error(spec.case_id, spec.params, e, tol)
        self._record(case, log)
        return case

    def _run_sampled(self, spec: CaseSpec, sampler: PointSampler, log: VerificationLog) -> VerificationCase:
        tol = self.options.tolerance(spec.case_id)
        budget = self.options.budget

        def redrawn(point: SamplePoint, error: PoleProximityError) -> None:
            log.log("POINT_REDRAWN", "PointSampler", str(error), case_id=spec.case_id)

        try:
            point, comparison = sample_until_clear(sampler, lambda p: spec.evaluate(p, budget), on_redraw=redrawn)
            params = {**spec.params, **point.to_params()}
            case = VerificationCase.from_comparison(spec.case_id, params, comparison, tol)
        except (MockThetaError, ArithmeticError) as e:
            params = {**spec.params, "draw": sampler.draws - 1}
            case = VerificationCase.from_error(spec.case_id, params, e, tol)
        self._record(case, log)
        return case

    def _record(self, case: VerificationCase, log: VerificationLog) -> None:
        if case.error:
            log.log("CASE_ERROR", "VerificationPipeline", case.error, case_id=case.id)
        elif not case.passed:
            log.log("CASE_FAILED", "VerificationPipeline", f"abs_err={case.abs_err:.3e} tol={case.tol:.0e}", case_id=case.id)

    # ------------------------------------------------------------------ output

    def _print_table(self, outcome: SuiteOutcome) -> None:
        if not outcome.cases:
            self.console.print("  [dim]no cases[/dim]")
            return
        totals: Dict[str, Counter] = {}
        worst: Dict[str, float] = {}
        for case in outcome.cases:
            totals.setdefault(case.id, Counter())["pass" if case.passed else "fail"] += 1
            worst[case.id] = max(worst.get(case.id, 0.0), case.residual)

        table = Table(show_header=True, box=None, padding=(0, 2))
        table.add_column("Case", style="bold")
        table.add_column("Runs", justify="right")
        table.add_column("Worst residual", justify="right")
        table.add_column("Tol", justify="right")
        table.add_column("Status")
        for case_id in sorted(totals):
            count = totals[case_id]
            status = "[green]PASS[/green]" if count["fail"] == 0 else f"[red]FAIL ({count['fail']})[/red]"
            table.add_row(
                case_id,
                str(count["pass"] + count["fail"]),
                f"{worst[case_id]:.2e}",
                f"{self.options.tolerance(case_id):.0e}",
                status,
            )
        self.console.print(table)
        self.console.print(f"  [bold]Passed:[/bold] {outcome.passed}   [bold]Failed:[/bold] {outcome.failed}")


def run_verification(
    suite: str,
    levels: Sequence[int],
    points: int = 10,
    seed: int = 42,
    tol: Optional[float] = None,
    order: Fraction = DEFAULT_ORDER,
    budget: TruncationBudget = DEFAULT_BUDGET,
    out: Optional[Console] = None,
) -> Tuple[ReportDocument, VerificationLog]:
    options = RunOptions(list(levels), points, seed, tol, order, budget)
    return VerificationPipeline(options, out).run(suite)
