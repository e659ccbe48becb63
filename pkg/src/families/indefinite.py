"""
Indefinite Theta Family.
g^{[m]}_{n,ν}, h^{[m]}_{n,ν}, G^{[m]}_{n,ν}, F^{[m](a,b)}_{n,ν} and the
identities connecting them to Φ_1 and to the single theta quotient.

    g = [Σ_{0<p≤j} − Σ_{j<p≤0}] (−1)^j q^{(m+½)(j+ν−(ν+½)/(2m+1))² − m(p+ν−n/2m)²}
    h = Σ_j e^{2πimjz+πinz} q^{mj²+n(j+ν)} / (1 − e^{2πimz}q^{2m(j+ν)})
    G = g·θ_{n,m}(τ,z) + (−1)^ν q^{−mν²} θ^{(−)}_{ν+½,m+½}(τ,0)·h
    F = e^{πiaz} q^{a²/4m} G(τ, z + aτ/m + b/m)

The two terms of G are each of size |q|^{v} with v the valuation of g,
which is large and negative for ν far from m, and cancel down to O(1).
G, F and the identities built from them are therefore summed in mpmath
with the working precision raised by that loss.
"""

import cmath
import math
from fractions import Fraction
from typing import List, Optional, Union

import mpmath as mp

from src.domain.errors import BudgetExceededError, DomainError
from src.domain.indices import (
    DEFAULT_BUDGET,
    FamilyIndex,
    PhiParams,
    Sign,
    ThetaIndex,
    TorsorShift,
    TruncationBudget,
)
from src.families.mock_phi import AppellTerms, eta_cubed_over_odd, phi1_eval_mp
from src.numerics.core import (
    WINDOW_PAD,
    Comparison,
    adaptive_precision,
    check_tau,
    choose_truncation,
    exp_pi_i,
    guard_value,
    imag_ratio,
    log_abs_nome,
    mp_exp_2pi_i,
    mp_q_power,
    mp_rational,
    q_rational_power,
)
from src.numerics.qseries import (
    QExpansion,
    f_zero_qexp,
    g_certified_cutoff,
    g_qexp,
    h_direct_qexp,
    h_spec_qexp,
)
from src.numerics.theta import (
    ODD_THETA,
    eta_eval,
    theta_eval,
    theta_eval_mp,
    vanishes_at_origin,
)

Number = Union[complex, float, int]

# q-exponent units added above the tolerance order when g is truncated.
G_ORDER_MARGIN = 3


def quotient_theta(idx: FamilyIndex) -> ThetaIndex:
    """θ^{(−)}_{ν+½, m+½}."""
    return ThetaIndex(2 * idx.nu + 1, idx.m2 + 1, Sign.MINUS)


def level_theta(idx: FamilyIndex) -> ThetaIndex:
    """θ_{n,m}."""
    return ThetaIndex(2 * idx.n, idx.m2, Sign.PLUS)


def _sign_nu(nu: int) -> int:
    return -1 if nu % 2 else 1


# =============================================================================
# g
# =============================================================================


def g_order(tau: Number, budget: TruncationBudget = DEFAULT_BUDGET) -> Fraction:
    """Truncation order O with |q|^O below the tolerance."""
    log_r = log_abs_nome(tau)
    return Fraction(max(1, math.ceil(math.log(budget.tol) / log_r)) + G_ORDER_MARGIN)


def g_series(idx: FamilyIndex, tau: Number, budget: TruncationBudget = DEFAULT_BUDGET) -> QExpansion:
    order = g_order(tau, budget)
    cutoff = g_certified_cutoff(idx, order)
    if cutoff > budget.j_max:
        raise BudgetExceededError(
            f"g{idx.label()} needs region cutoff {cutoff} at order {order}, above j_max={budget.j_max}",
            requested=cutoff,
            allowed=budget.j_max,
        )
    return g_qexp(idx, order)


def g_eval(idx: FamilyIndex, tau: Number, budget: TruncationBudget = DEFAULT_BUDGET) -> complex:
    """g^{[m]}_{n,ν}(τ) from its region-certified expansion."""
    tau = check_tau(tau)
    return g_series(idx, tau, budget).evaluate(tau)


def g_depth(series: QExpansion) -> float:
    low = series.valuation()
    return 0.0 if low is None else max(0.0, -float(low))


# =============================================================================
# h
# =============================================================================


def h_terms(idx: FamilyIndex, tau: complex, z: complex) -> AppellTerms:
    m = Fraction(idx.m2, 2)
    return AppellTerms(
        quad=m,
        lin=Fraction(idx.n),
        zlin=float(m) * z,
        zconst=idx.n * z / 2 + idx.n * idx.nu * tau,
        zden=float(m) * z + idx.m2 * idx.nu * tau,
        step=idx.m2,
        sign=Sign.PLUS,
    )


def h_eval(
    idx: FamilyIndex,
    tau: Number,
    z: Number,
    budget: TruncationBudget = DEFAULT_BUDGET,
) -> complex:
    """h^{[m]}_{n,ν}(τ,z); PoleProximityError when 1 − e^{2πimz}q^{2m(j+ν)} nears 0."""
    tau = check_tau(tau)
    return h_terms(idx, tau, complex(z)).evaluate(tau, budget)


def h_eval_mp(
    idx: FamilyIndex,
    tau: Number,
    z: Number,
    budget: TruncationBudget = DEFAULT_BUDGET,
    depth: float = 0.0,
) -> "mp.mpc":
    tau = check_tau(tau)
    return h_terms(idx, tau, complex(z)).evaluate_mp(tau, budget, depth)


def check_h_specialization(
    idx: FamilyIndex,
    a: int,
    tau: Number,
    budget: TruncationBudget = DEFAULT_BUDGET,
) -> Comparison:
    """h(τ, aτ/m) summed numerically against its exact expansion at τ."""
    tau = check_tau(tau)
    order = g_order(tau, budget)
    numeric = h_eval(idx, tau, 2 * a * tau / idx.m2, budget)
    if 0 < a < idx.m2:
        _, series = h_spec_qexp(idx, a, order)
    else:
        series = h_direct_qexp(idx, a, order)
    return Comparison(numeric, series.evaluate(tau))


# =============================================================================
# G AND F
# =============================================================================


def G_eval(
    idx: FamilyIndex,
    tau: Number,
    z: Number = 0j,
    budget: TruncationBudget = DEFAULT_BUDGET,
) -> complex:
    """G^{[m]}_{n,ν}(τ,z) = g·θ_{n,m}(τ,z) + (−1)^ν q^{−mν²} θ^{(−)}_{ν+½,m+½}(τ,0)·h."""
    tau = check_tau(tau)
    z = complex(z)
    series = g_series(idx, tau, budget)
    quotient = quotient_theta(idx)
    if vanishes_at_origin(quotient):
        return series.evaluate(tau) * theta_eval(level_theta(idx), tau, z, budget)
    lift = Fraction(-idx.m2 * idx.nu * idx.nu, 2)

    def compute(depth: float):
        head = series.evaluate_mp(tau) * theta_eval_mp(level_theta(idx), tau, z, budget, depth)
        tail = (
            _sign_nu(idx.nu)
            * mp_q_power(tau, lift)
            * theta_eval_mp(quotient, tau, 0j, budget, depth)
            * h_eval_mp(idx, tau, z, budget, depth)
        )
        return head + tail, [head, tail]

    return adaptive_precision(compute, tau, budget, g_depth(series))


def G_quotient_eval(
    idx: FamilyIndex,
    tau: Number,
    z: Number = 0j,
    budget: TruncationBudget = DEFAULT_BUDGET,
) -> complex:
    """
    −((−1)^ν/2m) η³ Σ_{ℓ<2m} e^{πinℓ/m} θ^{(−)}_{ν+½,m+½}(τ, z−ℓ/m) / θ^{(−)}_{½,½}(τ, z−ℓ/m).

    A term whose numerator and denominator both vanish (ν = m at z = ℓ/m)
    is replaced by the ratio of z-derivatives.
    """
    tau = check_tau(tau)
    z = complex(z)
    quotient = quotient_theta(idx)
    total = 0j
    for ell in range(idx.m2):
        w = z - 2 * ell / idx.m2
        phase = exp_pi_i(Fraction(2 * idx.n * ell, idx.m2))
        if w == 0 and vanishes_at_origin(quotient):
            ratio = theta_eval(quotient, tau, 0j, budget, derivative=1) / theta_eval(
                ODD_THETA, tau, 0j, budget, derivative=1
            )
        else:
            denominator = theta_eval(ODD_THETA, tau, w, budget)
            guard_value(denominator, budget.pole_guard, f"theta(-)_(1/2,1/2)(tau, z - {ell}/m)", index=ell)
            ratio = theta_eval(quotient, tau, w, budget) / denominator
        total += phase * ratio
    return -_sign_nu(idx.nu) / idx.m2 * eta_eval(tau, budget) ** 3 * total


def theta_quotient(m2: int, nu: int, tau: Number, z: Number, budget: TruncationBudget = DEFAULT_BUDGET) -> complex:
    """−(−1)^ν η³ θ^{(−)}_{ν+½,m+½}(τ,z) / θ^{(−)}_{½,½}(τ,z)."""
    tau = check_tau(tau)
    z = complex(z)
    denominator = theta_eval(ODD_THETA, tau, z, budget)
    guard_value(denominator, budget.pole_guard, "theta(-)_(1/2,1/2)(tau, z)")
    numerator = theta_eval(ThetaIndex(2 * nu + 1, m2 + 1, Sign.MINUS), tau, z, budget)
    return -_sign_nu(nu) * eta_eval(tau, budget) ** 3 * numerator / denominator


def F_raw(
    idx: FamilyIndex,
    a: int,
    b: int,
    tau: Number,
    z: Number = 0j,
    budget: TruncationBudget = DEFAULT_BUDGET,
) -> complex:
    """e^{πiaz} q^{a²/4m} G(τ, z + aτ/m + b/m) for unreduced integers a, b."""
    tau = check_tau(tau)
    z = complex(z)
    shifted = z + 2 * a * tau / idx.m2 + 2 * b / idx.m2
    prefactor = cmath.exp(1j * math.pi * a * z) * q_rational_power(tau, Fraction(a * a, 2 * idx.m2))
    return prefactor * G_eval(idx, tau, shifted, budget)


def F_eval(
    idx: FamilyIndex,
    shift: TorsorShift,
    tau: Number,
    z: Number = 0j,
    budget: TruncationBudget = DEFAULT_BUDGET,
) -> complex:
    """F^{[m](a,b)}_{n,ν}(τ,z) with (a,b) taken in [0, 2m)²."""
    if shift.m2 != idx.m2:
        raise DomainError(f"torsor modulus {shift.m2} does not match level m2={idx.m2}")
    return F_raw(idx, shift.a, shift.b, tau, z, budget)


# =============================================================================
# G IDENTITIES
# =============================================================================


def check_quotient_form(idx: FamilyIndex, tau: Number, z: Number, budget: TruncationBudget = DEFAULT_BUDGET) -> Comparison:
    """G from its definition against the single theta quotient expression."""
    return Comparison(G_eval(idx, tau, z, budget), G_quotient_eval(idx, tau, z, budget))


def check_G_sum(m2: int, nu: int, tau: Number, z: Number, budget: TruncationBudget = DEFAULT_BUDGET) -> Comparison:
    """Σ_{n<2m} G^{[m]}_{n,ν}(τ,z) = −(−1)^ν η³ θ^{(−)}_{ν+½,m+½}(τ,z)/θ^{(−)}_{½,½}(τ,z)."""
    total = sum(G_eval(FamilyIndex(m2, n, nu), tau, z, budget) for n in range(m2))
    return Comparison(total, theta_quotient(m2, nu, tau, z, budget))


def check_translation(idx: FamilyIndex, c: int, tau: Number, z: Number, budget: TruncationBudget = DEFAULT_BUDGET) -> Comparison:
    """G(τ, z + c/m) = e^{πinc/m} G(τ,z)."""
    z = complex(z)
    lhs = G_eval(idx, tau, z + 2 * c / idx.m2, budget)
    return Comparison(lhs, exp_pi_i(Fraction(2 * idx.n * c, idx.m2)) * G_eval(idx, tau, z, budget))


def check_elliptic(
    idx: FamilyIndex,
    a: int,
    b: int,
    tau: Number,
    z: Number,
    budget: TruncationBudget = DEFAULT_BUDGET,
) -> Comparison:
    """G(τ, z + 2aτ + 2b) = e^{2πinb} e^{−2πimaz} q^{−ma²} G(τ,z)."""
    tau = check_tau(tau)
    z = complex(z)
    lhs = G_eval(idx, tau, z + 2 * a * tau + 2 * b, budget)
    rhs = (
        cmath.exp(-1j * math.pi * idx.m2 * a * z)
        * q_rational_power(tau, Fraction(-idx.m2 * a * a, 2))
        * G_eval(idx, tau, z, budget)
    )
    return Comparison(lhs, rhs)


def check_reflection(idx: FamilyIndex, tau: Number, z: Number, budget: TruncationBudget = DEFAULT_BUDGET) -> Comparison:
    """G^{[m]}_{n',ν'}(τ,−z) = (−1)^{2m} G^{[m]}_{n,ν}(τ,z), n + n' ∈ 2mZ, ν + ν' = 2m."""
    z = complex(z)
    parity = -1 if idx.m2 % 2 else 1
    return Comparison(G_eval(idx.reflected(), tau, -z, budget), parity * G_eval(idx, tau, z, budget))


def check_torsor(
    idx: FamilyIndex,
    a: int,
    b: int,
    c: int,
    tau: Number,
    z: Number,
    budget: TruncationBudget = DEFAULT_BUDGET,
) -> Comparison:
    """Worst of F^{(a,b+c)} = e^{πinc/m} F^{(a,b)} and F^{(a+2m,b)} = F^{(a,b)}."""
    base = F_raw(idx, a, b, tau, z, budget)
    b_phase = Comparison(
        F_raw(idx, a, b + c, tau, z, budget),
        exp_pi_i(Fraction(2 * idx.n * c, idx.m2)) * base,
    )
    a_period = Comparison(F_raw(idx, a + idx.m2, b, tau, z, budget), base)
    return Comparison.worst([b_phase, a_period])


def check_F_reflection(idx: FamilyIndex, a: int, tau: Number, z: Number, budget: TruncationBudget = DEFAULT_BUDGET) -> Comparison:
    """F^{(a,0)}_{n,ν}(τ,−z) = (−1)^{2m} F^{(−a,0)}_{n',ν'}(τ,z)."""
    z = complex(z)
    parity = -1 if idx.m2 % 2 else 1
    shift = TorsorShift(a, 0, idx.m2)
    lhs = F_eval(idx, shift, tau, -z, budget)
    rhs = parity * F_eval(idx.reflected(), shift.negated(), tau, z, budget)
    return Comparison(lhs, rhs)


def F_zero_qexp_check(
    idx: FamilyIndex,
    a: int,
    tau: Number,
    order: Optional[Fraction] = None,
    budget: TruncationBudget = DEFAULT_BUDGET,
) -> Comparison:
    """F^{(a,0)}_{n,ν}(τ,0) numerically (lhs) against its exact assembly evaluated at τ (rhs)."""
    tau = check_tau(tau)
    order = g_order(tau, budget) if order is None else Fraction(order)
    series = f_zero_qexp(idx, a, order)
    numeric = F_eval(idx, TorsorShift(a, 0, idx.m2), tau, 0j, budget)
    return Comparison(numeric, series.evaluate(tau))


# =============================================================================
# THE g-QUOTIENT AT ν = m
# =============================================================================


def _require_integral(m2: int) -> None:
    if m2 % 2:
        raise DomainError(f"needs an integral level m, got m = {m2}/2")


def g_quotient_eval(m2: int, n: int, tau: Number, z: Number, budget: TruncationBudget = DEFAULT_BUDGET) -> complex:
    """g^{[m]}_{n,m}(τ) as G_quotient / θ_{n,m}(τ,z); independent of z."""
    _require_integral(m2)
    idx = FamilyIndex(m2, n, m2 // 2)
    denominator = theta_eval(level_theta(idx), tau, z, budget)
    guard_value(denominator, budget.pole_guard, f"theta_({n},m)(tau, z)")
    return G_quotient_eval(idx, tau, z, budget) / denominator


def check_g_quotient_z_independence(
    m2: int,
    n: int,
    tau: Number,
    z1: Number,
    z2: Number,
    budget: TruncationBudget = DEFAULT_BUDGET,
) -> Comparison:
    return Comparison(g_quotient_eval(m2, n, tau, z1, budget), g_quotient_eval(m2, n, tau, z2, budget))


def check_g_quotient(m2: int, n: int, tau: Number, z: Number, budget: TruncationBudget = DEFAULT_BUDGET) -> Comparison:
    """g^{[m]}_{n,m} from its series against the quotient at z."""
    _require_integral(m2)
    idx = FamilyIndex(m2, n, m2 // 2)
    return Comparison(g_eval(idx, tau, budget), g_quotient_eval(m2, n, tau, z, budget))


# =============================================================================
# Φ_1 TO THETA QUOTIENT IDENTITIES
# =============================================================================

REGION_K = "region-k"
REGION_RP = "region-rp"


def _lemma_cutoff(m2: int, s2: int, tau: complex, dz: complex, budget: TruncationBudget, depth: float) -> int:
    spread = abs(imag_ratio(dz, tau))
    linear = abs(s2) / 2.0 + m2 / 2.0 * spread + 1.0
    return choose_truncation(0.5, tau, budget, linear=linear, scale=m2 * budget.j_max, depth=depth) + WINDOW_PAD


class _RegionTerms:
    """f_{j,k} θ_{k,m}(τ, z1+z2) with f_{j,k} = (−1)^j q^{(m+½)(j+s/(2m+1))² − k²/4m} e^{−2πijm(z1−z2)+πik(z1−z2)}."""

    def __init__(self, m2: int, s2: int, tau: complex, total: complex, diff: complex, budget: TruncationBudget, depth: float):
        """`total` = z1 + z2 feeds the thetas, `diff` = z1 − z2 the phases."""
        self.m2 = m2
        self.big_m = Fraction(m2 + 1, 2)
        self.offset = Fraction(s2, 2 * (m2 + 1))
        self.tau = tau
        self.dz = mp.mpc(diff)
        self.half_m = mp_rational(Fraction(m2, 2))
        self.thetas = [
            theta_eval_mp(ThetaIndex(2 * r, m2, Sign.PLUS), tau, total, budget, depth) for r in range(m2)
        ]

    def f(self, j: int, k: int) -> "mp.mpc":
        exponent = self.big_m * (j + self.offset) ** 2 - Fraction(k * k, 2 * self.m2)
        phase = mp_exp_2pi_i(-j * self.half_m * self.dz + k * self.dz / 2)
        value = mp_q_power(self.tau, exponent) * phase
        return -value if j % 2 else value

    def region_k(self, cutoff: int) -> "mp.mpc":
        """[Σ_{j≥1} Σ_{0≤k<2mj} − Σ_{j≤−1} Σ_{2mj≤k<0}] f_{j,k} θ_{k,m}."""
        terms: List["mp.mpc"] = []
        for j in range(1, cutoff + 1):
            terms.extend(self.f(j, k) * self.thetas[k % self.m2] for k in range(0, self.m2 * j))
        for j in range(-cutoff, 0):
            terms.extend(-self.f(j, k) * self.thetas[k % self.m2] for k in range(self.m2 * j, 0))
        return mp.fsum(terms)

    def region_rp(self, cutoff: int) -> "mp.mpc":
        """Σ_{r<2m} [Σ_{0<p≤j} − Σ_{j<p≤0}] f_{−j, r−2pm} θ_{r,m}."""
        total = []
        for r in range(self.m2):
            terms: List["mp.mpc"] = []
            for j in range(1, cutoff + 1):
                terms.extend(self.f(-j, r - p * self.m2) for p in range(1, j + 1))
            for j in range(-cutoff, 0):
                terms.extend(-self.f(-j, r - p * self.m2) for p in range(j + 1, 1))
            total.append(mp.fsum(terms) * self.thetas[r])
        return mp.fsum(total)


def lemma31_rhs(m2: int, s2: int, tau: complex, z1: complex, z2: complex, budget: TruncationBudget) -> complex:
    """−i θ^{(−)}_{s,m+½}(τ, z1+z2+(z1−z2)/(2m+1)) η³/ϑ11(τ,z1)."""
    argument = z1 + z2 + (z1 - z2) / (m2 + 1)
    theta = theta_eval(ThetaIndex(s2, m2 + 1, Sign.MINUS), tau, argument, budget)
    return -1j * theta * eta_cubed_over_odd(tau, z1, budget)


def lemma31_lhs(
    m2: int,
    s2: int,
    variant: str,
    tau: complex,
    z1: complex,
    z2: complex,
    budget: TruncationBudget = DEFAULT_BUDGET,
) -> complex:
    """
    region-k:  θ^{(−)}_{s,m+½}(τ, −2m(z1−z2)/(2m+1)) Φ^{[m,0]}_1(τ,z1,z2) − e^{−πims(z1−z2)/(m+½)} [region-k sum]
    region-rp: the same leading term + e^{−πims(z1−z2)/(m+½)} [region-rp sum]
    """
    if variant not in (REGION_K, REGION_RP):
        raise DomainError(f"variant must be {REGION_K!r} or {REGION_RP!r}, got {variant!r}")
    dz = z1 - z2
    lead_theta = ThetaIndex(s2, m2 + 1, Sign.MINUS)
    phi = PhiParams(m2, 0, Sign.PLUS)
    phase_coefficient = mp_rational(Fraction(m2 * s2, 2 * (m2 + 1)))

    def compute(depth: float):
        lead = theta_eval_mp(lead_theta, tau, -m2 * dz / (m2 + 1), budget, depth) * phi1_eval_mp(
            phi, tau, z1, z2, budget, depth
        )
        region = _RegionTerms(m2, s2, tau, z1 + z2, dz, budget, depth)
        cutoff = _lemma_cutoff(m2, s2, tau, dz, budget, depth)
        prefactor = mp.expjpi(-phase_coefficient * mp.mpc(dz))
        if variant == REGION_K:
            correction = -prefactor * region.region_k(cutoff)
        else:
            correction = prefactor * region.region_rp(cutoff)
        return lead + correction, [lead, correction]

    return adaptive_precision(compute, tau, budget)


def check_lemma31(
    m2: int,
    s2: int,
    variant: str,
    tau: Number,
    z1: Number,
    z2: Number,
    budget: TruncationBudget = DEFAULT_BUDGET,
) -> Comparison:
    """Φ^{[m,0]}_1 times a theta, corrected by a region sum, equals a theta quotient (s half-odd)."""
    if s2 % 2 == 0:
        raise DomainError(f"s must be an odd half-integer, got s2={s2}")
    tau = check_tau(tau)
    z1, z2 = complex(z1), complex(z2)
    return Comparison(
        lemma31_lhs(m2, s2, variant, tau, z1, z2, budget),
        lemma31_rhs(m2, s2, tau, z1, z2, budget),
    )


def check_lemma31_bridge(
    m2: int,
    s2: int,
    tau: Number,
    z1: Number,
    z2: Number,
    budget: TruncationBudget = DEFAULT_BUDGET,
) -> Comparison:
    """The region-k and region-rp forms at the same point."""
    tau = check_tau(tau)
    z1, z2 = complex(z1), complex(z2)
    return Comparison(
        lemma31_lhs(m2, s2, REGION_K, tau, z1, z2, budget),
        lemma31_lhs(m2, s2, REGION_RP, tau, z1, z2, budget),
    )


def check_lemma32(
    m2: int,
    s2: int,
    a: Number,
    b: Number,
    c: Number,
    d: Number,
    tau: Number,
    z: Number,
    budget: TruncationBudget = DEFAULT_BUDGET,
) -> Comparison:
    """
    With w = (a−b)τ + c − d and Z = 2z + (a+b)τ + c + d:

        θ^{(−)}_{s,m+½}(τ, −m·w/(m+½)) Φ^{[m,0]}_1(τ, z+aτ+c, z+bτ+d)
            + e^{−πims·w/(m+½)} Σ_{r<2m} [Σ_{0<p≤j} − Σ_{j<p≤0}] f_{−j,r−2pm} θ_{r,m}(τ, Z)
        = −i θ^{(−)}_{s,m+½}(τ, Z + w/(2m+1)) η³ / ϑ11(τ, Z/2 + w/2)
    """
    if s2 % 2 == 0:
        raise DomainError(f"s must be an odd half-integer, got s2={s2}")
    tau = check_tau(tau)
    z = complex(z)
    diff = (a - b) * tau + (c - d)
    total = 2 * z + (a + b) * tau + c + d
    lead_theta = ThetaIndex(s2, m2 + 1, Sign.MINUS)
    phi = PhiParams(m2, 0, Sign.PLUS)
    phase_coefficient = mp_rational(Fraction(m2 * s2, 2 * (m2 + 1)))

    def compute(depth: float):
        lead = theta_eval_mp(lead_theta, tau, -m2 * diff / (m2 + 1), budget, depth) * phi1_eval_mp(
            phi, tau, z + a * tau + c, z + b * tau + d, budget, depth
        )
        region = _RegionTerms(m2, s2, tau, total, diff, budget, depth)
        cutoff = _lemma_cutoff(m2, s2, tau, diff, budget, depth)
        correction = mp.expjpi(-phase_coefficient * mp.mpc(diff)) * region.region_rp(cutoff)
        return lead + correction, [lead, correction]

    lhs = adaptive_precision(compute, tau, budget)
    theta = theta_eval(lead_theta, tau, total + diff / (m2 + 1), budget)
    rhs = -1j * theta * eta_cubed_over_odd(tau, (total + diff) / 2, budget)
    return Comparison(lhs, rhs)


def check_lemma33(
    m2: int,
    nu: int,
    tau: Number,
    z: Number,
    budget: TruncationBudget = DEFAULT_BUDGET,
) -> Comparison:
    """
    (−1)^ν q^{−mν²} θ^{(−)}_{ν+½,m+½}(τ,0) Φ^{[m,0]}_1(τ, z/2+ντ, z/2−ντ) + Σ_{r<2m} g^{[m]}_{r,ν}(τ) θ_{r,m}(τ,z)
        = −(−1)^ν η³ θ^{(−)}_{ν+½,m+½}(τ,z) / θ^{(−)}_{½,½}(τ,z)
    """
    tau = check_tau(tau)
    z = complex(z)
    indices = [FamilyIndex(m2, r, nu) for r in range(m2)]
    series = [g_series(idx, tau, budget) for idx in indices]
    quotient = quotient_theta(indices[0])
    lift = Fraction(-m2 * nu * nu, 2)
    phi = PhiParams(m2, 0, Sign.PLUS)

    def compute(depth: float):
        if vanishes_at_origin(quotient):
            first = mp.mpc(0)
        else:
            first = (
                _sign_nu(nu)
                * mp_q_power(tau, lift)
                * theta_eval_mp(quotient, tau, 0j, budget, depth)
                * phi1_eval_mp(phi, tau, z / 2 + nu * tau, z / 2 - nu * tau, budget, depth)
            )
        second = mp.fsum(
            s.evaluate_mp(tau) * theta_eval_mp(level_theta(idx), tau, z, budget, depth)
            for idx, s in zip(indices, series)
        )
        return first + second, [first, second]

    depth = max(g_depth(s) for s in series)
    lhs = adaptive_precision(compute, tau, budget, depth)
    return Comparison(lhs, theta_quotient(m2, nu, tau, z, budget))
