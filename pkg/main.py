#!/usr/bin/env python3
"""
Mock theta verification CLI.
Evaluate the theta, Φ_1 and indefinite families, print exact q-expansions,
run the verification suites and export the S/T matrices.
"""

from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Optional

import typer
from rich.console import Console

from src.domain.errors import DomainError, MockThetaError
from src.domain.indices import (
    FamilyIndex,
    ModularPoint,
    PhiParams,
    Sign,
    ThetaIndex,
    ThetaKind,
    TorsorShift,
    TruncationBudget,
    parse_half_integer,
)
from src.families import indefinite, mock_phi, modular_action
from src.infrastructure.config import Settings, get_settings
from src.infrastructure.export import canonical_json, render_matrix, write_matrix, write_report
from src.numerics import qseries, theta
from src.verification.pipeline import RunOptions, VerificationPipeline
from src.verification.suites import DEFAULT_ORDER, SUITE_CHOICES

app = typer.Typer(help="Theta, mock theta and indefinite family toolkit", add_completion=False)
console = Console()
err_console = Console(stderr=True)

M_OPTION = typer.Option("1", "--m", help="level m as an integer or p/2")
N_OPTION = typer.Option("0", "--n", help="characteristic n (p/2 allowed for theta)")
NU_OPTION = typer.Option(0, "--nu")
A_OPTION = typer.Option(0, "--a")
B_OPTION = typer.Option(0, "--b")
S_OPTION = typer.Option("1/2", "--s", help="s as p/2")
TAU_OPTION = typer.Option("0,1", "--tau", help="tau as re,im")
Z_OPTION = typer.Option("0,0", "--z", help="z as re,im")
Z2_OPTION = typer.Option("0,0", "--z2", help="second elliptic variable as re,im")
SIGN_OPTION = typer.Option("+", "--sign")
KIND_OPTION = typer.Option("00", "--kind", help="Mumford theta kind: 00, 01, 10 or 11")
ORDER_OPTION = typer.Option(str(DEFAULT_ORDER), "--order", help="q-expansion order (rational)")
J_OPTION = typer.Option(None, "--j", help="summation cutoff j_max")


# =============================================================================
# PARSING
# =============================================================================


def parse_complex(text: str) -> complex:
    """ "re,im" -> complex."""
    parts = [p.strip() for p in str(text).split(",")]
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise DomainError(f"complex input must be 're,im', got {text!r}")


def parse_levels(text: str) -> List[int]:
    levels = [parse_half_integer(part) for part in str(text).split(",") if part.strip()]
    for m2 in levels:
        if m2 < 1:
            raise DomainError(f"level m must be positive, got {m2}/2")
    return levels


def parse_order(text: str) -> Fraction:
    try:
        order = Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise DomainError(f"order must be rational, got {text!r}")
    if order <= 0:
        raise DomainError(f"order must be positive, got {order}")
    return order


def parse_integer(text: str, name: str) -> int:
    try:
        return int(str(text).strip())
    except ValueError:
        raise DomainError(f"--{name} must be an integer here, got {text!r}")


def format_value(value: complex) -> str:
    """15 significant digits."""
    value = complex(value)
    sign = "-" if value.imag < 0 else "+"
    return f"{value.real:.15g}{sign}{abs(value.imag):.15g}i"


def budget_for(settings: Settings, j_max: Optional[int]) -> TruncationBudget:
    budget = settings.budget()
    return budget if j_max is None else budget.with_j_max(j_max)


def fail(error: MockThetaError) -> None:
    err_console.print(f"[bold red]{type(error).__name__}:[/bold red] {error.message}")
    raise typer.Exit(code=error.exit_code)


# =============================================================================
# eval
# =============================================================================


def _family(m2: int, n: str, nu: int) -> FamilyIndex:
    return FamilyIndex(m2, parse_integer(n, "n"), nu)


@app.command("eval")
def cmd_eval(
    function: str = typer.Argument(..., help="theta, mumford, eta, phi, g, h, G, G_quotient, F, quotient, a_series"),
    m: str = M_OPTION,
    n: str = N_OPTION,
    nu: int = NU_OPTION,
    a: int = A_OPTION,
    b: int = B_OPTION,
    s: str = S_OPTION,
    tau: str = TAU_OPTION,
    z: str = Z_OPTION,
    z2: str = Z2_OPTION,
    sign: str = SIGN_OPTION,
    kind: str = KIND_OPTION,
    j: Optional[int] = J_OPTION,
) -> None:
    """Evaluate one function at a point."""
    try:
        budget = budget_for(get_settings(), j)
        m2 = parse_half_integer(m)
        point = ModularPoint(parse_complex(tau), parse_complex(z), parse_complex(z2))
        t, w = point.tau, point.z
        evaluators: Dict[str, Callable[[], complex]] = {
            "theta": lambda: theta.theta_eval(ThetaIndex(parse_half_integer(n), m2, Sign.parse(sign)), t, w, budget),
            "mumford": lambda: theta.mumford_eval(ThetaKind(kind), t, w, budget),
            "eta": lambda: theta.eta_eval(t, budget),
            "phi": lambda: mock_phi.phi1_eval(
                PhiParams(m2, parse_half_integer(s), Sign.parse(sign)), t, w, point.z2, budget
            ),
            "g": lambda: indefinite.g_eval(_family(m2, n, nu), t, budget),
            "h": lambda: indefinite.h_eval(_family(m2, n, nu), t, w, budget),
            "G": lambda: indefinite.G_eval(_family(m2, n, nu), t, w, budget),
            "G_quotient": lambda: indefinite.G_quotient_eval(_family(m2, n, nu), t, w, budget),
            "F": lambda: indefinite.F_eval(_family(m2, n, nu), TorsorShift(a, b, m2), t, w, budget),
            "quotient": lambda: indefinite.theta_quotient(m2, nu, t, w, budget),
            "a_series": lambda: mock_phi.a_series_check(m2, parse_half_integer(s), t, w, point.z2, budget).via_closed,
        }
        if function not in evaluators:
            raise DomainError(f"unknown function {function!r}; choose from {', '.join(evaluators)}")
        value = evaluators[function]()
    except MockThetaError as e:
        fail(e)
    except ValueError as e:
        fail(DomainError(str(e)))
    typer.echo(format_value(value))


# =============================================================================
# qexp
# =============================================================================


def _qexp_document(
    function: str,
    m2: int,
    n: str,
    nu: int,
    a: int,
    sign: str,
    kind: str,
    order: Fraction,
    max_conductor: int = qseries.MAX_CONDUCTOR,
) -> dict:
    if function == "eta":
        series = qseries.eta_qexp(Fraction(m2, 2), order, max_conductor)
        return {"function": "eta", "series": series.to_document()}
    if function == "theta":
        idx = ThetaIndex(parse_half_integer(n), m2, Sign.parse(sign))
        return {"function": "theta", "series": qseries.theta_qexp(idx, order, max_conductor).to_document()}
    if function == "mumford":
        series = qseries.mumford_qexp(ThetaKind(kind), m2, Fraction(0), order, max_conductor)
        return {"function": "mumford", "series": series.to_document()}
    if function == "gauss":
        lhs, rhs = qseries.gauss_quotient_check(m2, order, max_conductor)
        return {"function": "gauss", "identical": lhs == rhs, "lhs": lhs.to_document(), "rhs": rhs.to_document()}
    if function == "g":
        return {"function": "g", "series": qseries.g_qexp(_family(m2, n, nu), order, max_conductor=max_conductor).to_document()}
    if function == "h":
        idx = _family(m2, n, nu)
        if 0 < a < m2:
            direct, region = qseries.h_spec_qexp(idx, a, order, max_conductor=max_conductor)
            return {
                "function": "h",
                "identical": direct.same_terms(region),
                "direct": direct.to_document(),
                "region": region.to_document(),
            }
        return {"function": "h", "direct": qseries.h_direct_qexp(idx, a, order, max_conductor).to_document()}
    if function == "F0":
        return {"function": "F0", "series": qseries.f_zero_qexp(_family(m2, n, nu), a, order, max_conductor).to_document()}
    raise DomainError(f"{function!r} has no exact q-expansion; choose from eta, theta, mumford, gauss, g, h, F0")


@app.command("qexp")
def cmd_qexp(
    function: str = typer.Argument(..., help="eta, theta, mumford, gauss, g, h, F0"),
    m: str = M_OPTION,
    n: str = N_OPTION,
    nu: int = NU_OPTION,
    a: int = A_OPTION,
    sign: str = SIGN_OPTION,
    kind: str = KIND_OPTION,
    order: str = ORDER_OPTION,
    json_path: Optional[Path] = typer.Option(None, "--json", help="also write the document here"),
) -> None:
    """Print an exact q-expansion as [[exponent], [coefficient]] pairs."""
    try:
        settings = get_settings()
        document = _qexp_document(
            function, parse_half_integer(m), n, nu, a, sign, kind, parse_order(order), settings.max_conductor
        )
    except MockThetaError as e:
        fail(e)
    except ValueError as e:
        fail(DomainError(str(e)))
    if "identical" in document:
        typer.echo(f"identical: {str(document['identical']).lower()}")
    text = canonical_json(document)
    typer.echo(text, nl=False)
    if json_path is not None:
        json_path.parent.mkdir(parents=True, exist_ok=True)
        json_path.write_text(text, encoding="utf-8")


# =============================================================================
# verify
# =============================================================================


@app.command("verify")
def cmd_verify(
    suite: str = typer.Option("all", "--suite", help=f"one of {', '.join(SUITE_CHOICES)}"),
    m: str = typer.Option("1", "--m", help="comma separated levels, e.g. 1/2,1"),
    points: Optional[int] = typer.Option(None, "--points"),
    seed: Optional[int] = typer.Option(None, "--seed"),
    tol: Optional[float] = typer.Option(None, "--tol", help="override every case tolerance"),
    order: str = ORDER_OPTION,
    json_path: Optional[Path] = typer.Option(None, "--json", help="write the report here"),
    show_log: bool = typer.Option(False, "--log", help="print the verification log"),
    quiet: bool = typer.Option(False, "--quiet"),
    j: Optional[int] = J_OPTION,
) -> None:
    """Run a verification suite; exit 0 iff every case passes."""
    out = Console(quiet=quiet)
    try:
        settings = get_settings()
        if tol is not None and not tol > 0:
            raise DomainError(f"--tol must be positive, got {tol}")
        if points is not None and points < 0:
            raise DomainError(f"--points must be >= 0, got {points}")
        options = RunOptions(
            levels=parse_levels(m),
            points=settings.points if points is None else points,
            seed=settings.seed if seed is None else seed,
            tol=tol,
            order=parse_order(order),
            budget=budget_for(settings, j),
            fallback_tol=settings.case_tol,
        )
        report, log = VerificationPipeline(options, out).run(suite)
    except MockThetaError as e:
        fail(e)
    if json_path is not None:
        write_report(report, json_path)
        out.print(f"  [bold]Report:[/bold] {json_path}")
    if show_log:
        out.print(log.summary(), markup=False, highlight=False)
    if not report.all_passed:
        raise typer.Exit(code=1)


# =============================================================================
# matrix
# =============================================================================


@app.command("matrix")
def cmd_matrix(
    kind: str = typer.Argument(..., help="S or T"),
    m: str = M_OPTION,
    out: Optional[Path] = typer.Option(None, "--out", help="output file; stdout when omitted"),
    fmt: str = typer.Option("json", "--format", help="json or csv"),
) -> None:
    """Export M_S or M_T over the (n, nu, a) basis."""
    builders = {"S": modular_action.build_S_matrix, "T": modular_action.build_T_matrix}
    try:
        if kind.upper() not in builders:
            raise DomainError(f"matrix kind must be S or T, got {kind!r}")
        matrix = builders[kind.upper()](parse_half_integer(m))
        if out is None:
            typer.echo(render_matrix(matrix, fmt), nl=False)
        else:
            write_matrix(matrix, out, fmt)
            console.print(f"[bold]{matrix.kind}[/bold] {matrix.size}x{matrix.size} -> {out}")
    except MockThetaError as e:
        fail(e)


if __name__ == "__main__":
    app()
