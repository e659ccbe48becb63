"""
Verification suites.
Each suite expands a list of levels into CaseSpecs: an identity, its fixed
parameters and a callable producing the two sides. Sampled cases run once
per sample point; fixed cases (matrix identities) and exact cases
(termwise q-expansion identities) run once.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Callable, Dict, List, Sequence

from src.domain.errors import DomainError, SpecializationPoleError
from src.domain.indices import (
    FamilyIndex,
    PhiParams,
    Sign,
    ThetaIndex,
    TruncationBudget,
    family_indices,
    format_half,
)
from src.families import indefinite, mock_phi, modular_action
from src.numerics import qseries, theta
from src.numerics.core import Comparison, partial_fraction_average
from src.verification.sampling import SamplePoint

# =============================================================================
# TOLERANCES
# =============================================================================

CASE_TOLERANCES: Dict[str, float] = {
    "core.partial_fraction": 1e-12,
    "theta.anchor": 1e-11,
    "theta.gauss": 1e-10,
    "theta.translate": 1e-10,
    "theta.mumford_translate": 1e-10,
    "theta.S_action": 1e-8,
    "theta.T_action": 1e-10,
    "eta.T_action": 1e-12,
    "eta.S_action": 1e-10,
    "phi.kac_peterson": 1e-9,
    "phi.average": 1e-10,
    "phi.half_level": 1e-10,
    "phi.shift": 1e-10,
    "phi.shift_roundtrip": 1e-10,
    "phi.a_series": 1e-8,
    "indefinite.quotient_form": 1e-8,
    "indefinite.G_sum": 1e-8,
    "indefinite.translation": 1e-10,
    "indefinite.elliptic": 1e-10,
    "indefinite.reflection": 1e-10,
    "indefinite.torsor": 1e-10,
    "indefinite.F_reflection": 1e-10,
    "indefinite.h_specialization": 1e-9,
    "indefinite.f_zero": 1e-9,
    "indefinite.g_quotient": 1e-9,
    "indefinite.g_z_independence": 1e-9,
    "indefinite.lemma31": 1e-7,
    "indefinite.lemma31_bridge": 1e-8,
    "indefinite.lemma32": 1e-7,
    "indefinite.lemma33": 1e-7,
    "modular.G_S": 1e-7,
    "modular.G_T": 1e-10,
    "modular.quotient_S": 1e-7,
    "modular.S_action": 1e-6,
    "modular.T_action": 1e-9,
    "modular.S_squared": 1e-6,
    "modular.S_squared_matrix": 1e-10,
    "modular.S_unitary": 1e-10,
    "modular.ST_cubed": 1e-5,
    "modular.T_inverse": 1e-12,
    "modular.lemma51": 1e-7,
    "modular.lemma52": 1e-7,
    "modular.g_S": 1e-7,
    "modular.g_S_eta": 1e-7,
    "modular.g_S_consistency": 1e-10,
}

DEFAULT_ORDER = Fraction(15)


class CaseKind(str, Enum):
    SAMPLED = "sampled"
    FIXED = "fixed"
    EXACT = "exact"


@dataclass(frozen=True)
class CaseSpec:
    case_id: str
    params: Dict[str, Any]
    run: Callable[..., Any]
    kind: CaseKind = CaseKind.SAMPLED

    def evaluate(self, point: SamplePoint, budget: TruncationBudget) -> Comparison:
        return self.run(point, budget)


@dataclass
class Suite:
    name: str
    index: int
    build: Callable[[Sequence[int], Fraction], List[CaseSpec]]
    description: str = ""

    def cases(self, levels: Sequence[int], order: Fraction = DEFAULT_ORDER) -> List[CaseSpec]:
        return self.build(levels, order)


def _m(m2: int) -> str:
    return format_half(m2)


def _integral(levels: Sequence[int]) -> List[int]:
    return [m2 for m2 in levels if m2 % 2 == 0]


# =============================================================================
# THETA
# =============================================================================


def _theta_cases(levels: Sequence[int], order: Fraction) -> List[CaseSpec]:
    cases = [
        CaseSpec("theta.anchor", {}, lambda p, b: theta.mumford_anchor_check(p.tau, p.z, b)),
        CaseSpec("theta.gauss", {}, lambda p, b: theta.mumford_gauss_check(p.tau, b)),
        CaseSpec("theta.mumford_translate", {"nu": 1}, lambda p, b: theta.mumford_translate_check(p.tau, p.z, 1, b)),
        CaseSpec("eta.T_action", {}, lambda p, b: theta.eta_T_check(p.tau, b)),
        CaseSpec("eta.S_action", {}, lambda p, b: theta.eta_S_check(p.tau, b)),
    ]
    for m2 in levels:
        for n2 in (0, 1):
            for sign in Sign:
                idx = ThetaIndex(n2, m2, sign)
                params = {"m": _m(m2), "n": format_half(n2), "sign": sign.value}
                cases.append(
                    CaseSpec(
                        "theta.translate",
                        {**params, "c": 1, "b": 1},
                        lambda p, b, idx=idx: theta.theta_translate_check(idx, p.tau, p.z, 1, 1, b),
                    )
                )
                cases.append(CaseSpec("theta.S_action", params, lambda p, b, idx=idx: theta.theta_S_check(idx, p.tau, p.z, b)))
                cases.append(CaseSpec("theta.T_action", params, lambda p, b, idx=idx: theta.theta_T_check(idx, p.tau, p.z, b)))
    return cases


# =============================================================================
# PHI
# =============================================================================


def _partial_fraction(n: int, k: int) -> Callable[[SamplePoint, TruncationBudget], Comparison]:
    def run(p: SamplePoint, b: TruncationBudget) -> Comparison:
        lhs, rhs = partial_fraction_average(n, k, p.x, b.pole_guard)
        return Comparison(lhs, rhs)

    return run


def _phi_cases(levels: Sequence[int], order: Fraction) -> List[CaseSpec]:
    cases: List[CaseSpec] = []
    for n, k in ((3, 1), (7, 4), (12, 11)):
        cases.append(CaseSpec("core.partial_fraction", {"n": n, "k": k}, _partial_fraction(n, k)))
    for s2 in (1, 3, -5):
        for k in (-1, 0, 2):
            cases.append(
                CaseSpec(
                    "phi.kac_peterson",
                    {"s": format_half(s2), "k": k},
                    lambda p, b, s2=s2, k=k: mock_phi.kac_peterson_check(s2, k, p.tau, p.z, b),
                )
            )
    for m2 in levels:
        for n_div in (2, 3):
            for q in range(n_div):
                for shift in Sign:
                    for variant in (1, 2):
                        cases.append(
                            CaseSpec(
                                "phi.average",
                                {"m": _m(m2), "n": n_div, "p": q, "z2_shift": shift.value, "variant": variant},
                                lambda p, b, m2=m2, n_div=n_div, q=q, shift=shift, variant=variant: mock_phi.phi_average_check(
                                    m2, n_div, q, shift, p.tau, p.z, p.z2, variant, Sign.PLUS, b
                                ),
                            )
                        )
        if m2 > 1:
            for q in range(m2):
                for variant in (1, 2):
                    cases.append(
                        CaseSpec(
                            "phi.half_level",
                            {"m": _m(m2), "p": q, "variant": variant},
                            lambda p, b, m2=m2, q=q, variant=variant: mock_phi.phi_half_level_check(
                                m2, q, Sign.PLUS, p.tau, p.z, p.z2, variant, b
                            ),
                        )
                    )
        for sign in Sign:
            params = PhiParams(m2, 1, sign)
            for n_shift in (1, -1, 2):
                cases.append(
                    CaseSpec(
                        "phi.shift",
                        {"m": _m(m2), "s": "1/2", "shift": n_shift, "sign": sign.value},
                        lambda p, b, params=params, n_shift=n_shift: mock_phi.phi_shift_check(
                            params, n_shift, p.tau, p.z, p.z2, b
                        ),
                    )
                )
            cases.append(
                CaseSpec(
                    "phi.shift_roundtrip",
                    {"m": _m(m2), "s": "1/2", "shift": 2, "sign": sign.value},
                    lambda p, b, params=params: mock_phi.phi_shift_roundtrip(params, 2, p.tau, p.z, p.z2, b),
                )
            )
        for s2 in (1, 3):
            cases.append(
                CaseSpec(
                    "phi.a_series",
                    {"m": _m(m2), "s": format_half(s2)},
                    lambda p, b, m2=m2, s2=s2: mock_phi.a_series_check(m2, s2, p.tau, p.z, p.z2, b).worst(),
                )
            )
    return cases


# =============================================================================
# INDEFINITE FAMILY
# =============================================================================


def _family_params(idx: FamilyIndex) -> Dict[str, Any]:
    return {"m": _m(idx.m2), "n": idx.n, "nu": idx.nu}


def _indefinite_cases(levels: Sequence[int], order: Fraction) -> List[CaseSpec]:
    cases: List[CaseSpec] = []
    for m2 in levels:
        for idx in family_indices(m2):
            params = _family_params(idx)
            cases.extend(
                [
                    CaseSpec("indefinite.quotient_form", params, lambda p, b, idx=idx: indefinite.check_quotient_form(idx, p.tau, p.z, b)),
                    CaseSpec(
                        "indefinite.translation",
                        {**params, "c": 1},
                        lambda p, b, idx=idx: indefinite.check_translation(idx, 1, p.tau, p.z, b),
                    ),
                    CaseSpec(
                        "indefinite.elliptic",
                        {**params, "a": 1, "b": 1},
                        lambda p, b, idx=idx: indefinite.check_elliptic(idx, 1, 1, p.tau, p.z, b),
                    ),
                    CaseSpec("indefinite.reflection", params, lambda p, b, idx=idx: indefinite.check_reflection(idx, p.tau, p.z, b)),
                    CaseSpec(
                        "indefinite.torsor",
                        {**params, "a": 1, "b": 0, "c": 1},
                        lambda p, b, idx=idx: indefinite.check_torsor(idx, 1, 0, 1, p.tau, p.z, b),
                    ),
                    CaseSpec(
                        "indefinite.F_reflection",
                        {**params, "a": 1},
                        lambda p, b, idx=idx: indefinite.check_F_reflection(idx, 1, p.tau, p.z, b),
                    ),
                ]
            )
            for a in range(1, m2):
                cases.append(
                    CaseSpec(
                        "indefinite.h_specialization",
                        {**params, "a": a},
                        lambda p, b, idx=idx, a=a: indefinite.check_h_specialization(idx, a, p.tau, b),
                    )
                )
                cases.append(
                    CaseSpec(
                        "indefinite.f_zero",
                        {**params, "a": a},
                        lambda p, b, idx=idx, a=a: indefinite.F_zero_qexp_check(idx, a, p.tau, None, b),
                    )
                )
        for nu in range(m2 + 1):
            params = {"m": _m(m2), "nu": nu}
            cases.append(CaseSpec("indefinite.G_sum", params, lambda p, b, m2=m2, nu=nu: indefinite.check_G_sum(m2, nu, p.tau, p.z, b)))
            cases.append(CaseSpec("indefinite.lemma33", params, lambda p, b, m2=m2, nu=nu: indefinite.check_lemma33(m2, nu, p.tau, p.z, b)))
        for variant in (indefinite.REGION_K, indefinite.REGION_RP):
            cases.append(
                CaseSpec(
                    "indefinite.lemma31",
                    {"m": _m(m2), "s": "1/2", "form": variant},
                    lambda p, b, m2=m2, variant=variant: indefinite.check_lemma31(m2, 1, variant, p.tau, p.z, p.z2, b),
                )
            )
        cases.append(
            CaseSpec(
                "indefinite.lemma31_bridge",
                {"m": _m(m2), "s": "1/2"},
                lambda p, b, m2=m2: indefinite.check_lemma31_bridge(m2, 1, p.tau, p.z, p.z2, b),
            )
        )
        for a, bb, c, d in ((1, 0, 0, 0), (0, 1, 0.5, 0.5), (1, -1, 0.3, -0.2)):
            cases.append(
                CaseSpec(
                    "indefinite.lemma32",
                    {"m": _m(m2), "s": "1/2", "a": a, "b": bb, "c": c, "d": d},
                    lambda p, b, m2=m2, a=a, bb=bb, c=c, d=d: indefinite.check_lemma32(m2, 1, a, bb, c, d, p.tau, p.z, b),
                )
            )
    for m2 in _integral(levels):
        for n in range(m2):
            params = {"m": _m(m2), "n": n}
            cases.append(
                CaseSpec("indefinite.g_quotient", params, lambda p, b, m2=m2, n=n: indefinite.check_g_quotient(m2, n, p.tau, p.z, b))
            )
            cases.append(
                CaseSpec(
                    "indefinite.g_z_independence",
                    params,
                    lambda p, b, m2=m2, n=n: indefinite.check_g_quotient_z_independence(m2, n, p.tau, p.z, p.z2, b),
                )
            )
    return cases


# =============================================================================
# MODULAR ACTION
# =============================================================================


def _modular_cases(levels: Sequence[int], order: Fraction) -> List[CaseSpec]:
    cases: List[CaseSpec] = []
    for m2 in levels:
        level = {"m": _m(m2)}
        cases.extend(
            [
                CaseSpec("modular.S_action", level, lambda p, b, m2=m2: modular_action.check_S_action(m2, p.tau, p.z, b)),
                CaseSpec("modular.S_squared", level, lambda p, b, m2=m2: modular_action.check_S_squared(m2, p.tau, p.z, b)),
                CaseSpec(
                    "modular.S_squared_matrix",
                    level,
                    lambda p, b, m2=m2: modular_action.check_S_squared_matrix(m2),
                    CaseKind.FIXED,
                ),
                CaseSpec("modular.S_unitary", level, lambda p, b, m2=m2: modular_action.check_S_gram(m2), CaseKind.FIXED),
            ]
        )
        for idx in family_indices(m2):
            cases.append(
                CaseSpec("modular.G_S", _family_params(idx), lambda p, b, idx=idx: modular_action.check_G_S(idx, p.tau, p.z, b))
            )
        for nu in range(m2 + 1):
            cases.append(
                CaseSpec(
                    "modular.quotient_S",
                    {**level, "nu": nu},
                    lambda p, b, m2=m2, nu=nu: modular_action.check_quotient_S(m2, nu, p.tau, p.z, b),
                )
            )
    for m2 in _integral(levels):
        level = {"m": _m(m2)}
        cases.extend(
            [
                CaseSpec("modular.T_action", level, lambda p, b, m2=m2: modular_action.check_T_action(m2, p.tau, p.z, b)),
                CaseSpec("modular.ST_cubed", level, lambda p, b, m2=m2: modular_action.check_ST_cubed(m2, p.tau, p.z, b)),
                CaseSpec("modular.T_inverse", level, lambda p, b, m2=m2: modular_action.check_T_inverse(m2), CaseKind.FIXED),
            ]
        )
        for idx in family_indices(m2):
            cases.append(
                CaseSpec("modular.G_T", _family_params(idx), lambda p, b, idx=idx: modular_action.check_G_T(idx, p.tau, p.z, b))
            )
        for n in range(m2):
            params = {**level, "n": n}
            for a, bb in ((0, 0), (1, 1)):
                cases.append(
                    CaseSpec(
                        "modular.lemma51",
                        {**params, "a": a, "b": bb},
                        lambda p, b, m2=m2, n=n, a=a, bb=bb: modular_action.check_lemma51(m2, n, a, bb, p.tau, p.z, b),
                    )
                )
            cases.append(
                CaseSpec("modular.lemma52", params, lambda p, b, m2=m2, n=n: modular_action.check_lemma52(m2, n, p.tau, p.z, b))
            )
            cases.append(CaseSpec("modular.g_S", params, lambda p, b, m2=m2, n=n: modular_action.check_g_S(m2, n, p.tau, p.z, b)))
            cases.append(
                CaseSpec("modular.g_S_eta", params, lambda p, b, m2=m2, n=n: modular_action.check_g_S_eta(m2, n, p.tau, b))
            )
            cases.append(
                CaseSpec(
                    "modular.g_S_consistency",
                    params,
                    lambda p, b, m2=m2, n=n: modular_action.check_g_S_consistency(m2, n, p.tau, p.z, p.z2, b),
                )
            )
    return cases


# =============================================================================
# EXACT Q-EXPANSIONS
# =============================================================================


def _gauss_identical(m2: int, order: Fraction) -> bool:
    lhs, rhs = qseries.gauss_quotient_check(m2, order)
    return lhs == rhs


def _h_identical(idx: FamilyIndex, a: int, order: Fraction) -> bool:
    direct, region = qseries.h_spec_qexp(idx, a, order)
    return direct.same_terms(region)


def _h_pole_raises(idx: FamilyIndex, order: Fraction) -> bool:
    try:
        qseries.h_spec_qexp(idx, 0, order)
    except SpecializationPoleError:
        return True
    return False


def _g_cutoff_stable(idx: FamilyIndex, order: Fraction) -> bool:
    """The certified cutoff already holds every term below the order."""
    J = qseries.g_certified_cutoff(idx, order)
    return qseries.g_qexp(idx, order) == qseries.g_qexp(idx, order, J + 4)


def _qexp_cases(levels: Sequence[int], order: Fraction) -> List[CaseSpec]:
    cases: List[CaseSpec] = []
    order_text = str(order)
    for m2 in levels:
        level = {"m": _m(m2), "order": order_text}
        cases.append(
            CaseSpec("qexp.gauss_quotient", level, lambda m2=m2: _gauss_identical(m2, order), CaseKind.EXACT)
        )
        for idx in family_indices(m2):
            params = {**_family_params(idx), "order": order_text}
            cases.append(CaseSpec("qexp.h_pole", params, lambda idx=idx: _h_pole_raises(idx, order), CaseKind.EXACT))
            cases.append(CaseSpec("qexp.g_cutoff", params, lambda idx=idx: _g_cutoff_stable(idx, order), CaseKind.EXACT))
            for a in range(1, m2):
                cases.append(
                    CaseSpec(
                        "qexp.h_specialization",
                        {**params, "a": a},
                        lambda idx=idx, a=a: _h_identical(idx, a, order),
                        CaseKind.EXACT,
                    )
                )
    return cases


SUITES: Dict[str, Suite] = {
    suite.name: suite
    for suite in (
        Suite("theta", 0, _theta_cases, "theta, Mumford theta and eta laws"),
        Suite("phi", 1, _phi_cases, "partial fractions and Φ_1 identities"),
        Suite("indefinite", 2, _indefinite_cases, "g, h, G and F identities"),
        Suite("modular", 3, _modular_cases, "S and T action on the F span"),
        Suite("qexp", 4, _qexp_cases, "termwise q-expansion identities"),
    )
}

SUITE_ORDER = ("theta", "phi", "indefinite", "modular", "qexp")
SUITE_CHOICES = SUITE_ORDER + ("all",)


def resolve_suites(name: str) -> List[Suite]:
    if name == "all":
        return [SUITES[n] for n in SUITE_ORDER]
    if name not in SUITES:
        raise DomainError(f"unknown suite {name!r}; choose from {', '.join(SUITE_CHOICES)}")
    return [SUITES[name]]
