"""
Theta Building Blocks.
θ^{(±)}_{n,m}(τ,z), the Mumford thetas ϑ_ab, Dedekind η and their
quasi-periodicity and S/T transformation rules.

Convention:
    θ^{(±)}_{n,m}(τ,z) = Σ_j (±1)^j q^{m(j+n/2m)²} e^{2πim(j+n/2m)z}
    ϑ_ab(τ,z)          = Σ_j e^{πi(j+a/2)²τ + 2πi(j+a/2)(z+b/2)}
    η(τ)               = q^{1/24} ∏_{k≥1} (1 − q^k)

so that θ^{(−)}_{½,½}(τ,2z) = −i·ϑ11(τ,z).
"""

import cmath
import math
from fractions import Fraction
from typing import Union

import mpmath as mp
import numpy as np

from src.domain.errors import BudgetExceededError, DomainError
from src.domain.indices import DEFAULT_BUDGET, Sign, ThetaIndex, ThetaKind, TruncationBudget
from src.numerics.core import (
    Comparison,
    alternating,
    check_tau,
    exp_pi_i,
    imag_ratio,
    log_abs_nome,
    mp_exp_2pi_i,
    mp_q_power,
    mp_rational,
    principal_half_power,
    q_rational_power,
    quadratic_window,
)

Number = Union[complex, float, int]

# θ^{(−)}_{½,½}, the odd theta in the θ convention.
ODD_THETA = ThetaIndex(1, 1, Sign.MINUS)


def vanishes_at_origin(idx: ThetaIndex) -> bool:
    """θ^{(−)}_{n,m}(τ,0) ≡ 0 exactly when n/m is an odd integer."""
    return idx.sign is Sign.MINUS and (idx.n2 - idx.m2) % (2 * idx.m2) == 0


# =============================================================================
# DOUBLE PRECISION EVALUATORS
# =============================================================================


def theta_eval(
    idx: ThetaIndex,
    tau: Number,
    z: Number = 0j,
    budget: TruncationBudget = DEFAULT_BUDGET,
    derivative: int = 0,
) -> complex:
    """
    θ^{(±)}_{n,m}(τ,z), or its `derivative`-th z-derivative.

    The window is centred on the largest term, so the certified tail is
    relative to the peak of |q|^{m x² + m x Im z/Im τ}.
    """
    tau = check_tau(tau)
    z = complex(z)
    if derivative < 0:
        raise DomainError(f"derivative order must be >= 0, got {derivative}")
    if derivative == 0 and z == 0 and vanishes_at_origin(idx):
        return 0j
    m = idx.m2 / 2.0
    shift = idx.n2 / (2.0 * idx.m2)
    y = imag_ratio(z, tau)
    window = quadratic_window(m, idx.n2 / 2.0 + m * y, tau, budget, slack=float(derivative))
    x = window + shift
    terms = alternating(window, idx.sign.factor) * np.exp(2j * np.pi * m * x * (x * tau + z))
    if derivative:
        terms = terms * (2j * np.pi * m * x) ** derivative
    return complex(np.sum(terms))


def _characteristic_sum(tau: complex, z: complex, half_shift: bool, alt: bool, budget: TruncationBudget) -> complex:
    """Σ_j (±1)^j q^{x²/2} e^{2πixz}, x = j or j + ½."""
    shift = 0.5 if half_shift else 0.0
    y = imag_ratio(z, tau)
    window = quadratic_window(0.5, shift + y, tau, budget)
    x = window + shift
    terms = alternating(window, -1 if alt else 1) * np.exp(1j * np.pi * x * (x * tau + 2.0 * z))
    return complex(np.sum(terms))


def mumford_eval(
    kind: Union[ThetaKind, str],
    tau: Number,
    z: Number = 0j,
    budget: TruncationBudget = DEFAULT_BUDGET,
) -> complex:
    """ϑ00, ϑ01, ϑ10 or ϑ11 at (τ,z), summed on their own windows."""
    kind = ThetaKind(kind)
    tau = check_tau(tau)
    z = complex(z)
    if kind is ThetaKind.K00:
        return _characteristic_sum(tau, z, False, False, budget)
    if kind is ThetaKind.K01:
        return _characteristic_sum(tau, z, False, True, budget)
    if kind is ThetaKind.K10:
        return _characteristic_sum(tau, z, True, False, budget)
    if z == 0:
        return 0j
    return 1j * _characteristic_sum(tau, z, True, True, budget)


def eta_cutoff(tau: Number, budget: TruncationBudget = DEFAULT_BUDGET) -> int:
    """Smallest N with Σ_{k>N} |q|^k < tol."""
    log_r = log_abs_nome(tau)
    log_tail = math.log(budget.tol) + math.log(-math.expm1(log_r))
    N = max(1, math.ceil(log_tail / log_r))
    if N > budget.j_max:
        raise BudgetExceededError(
            f"eta product needs {N} factors, above j_max={budget.j_max}",
            requested=N,
            allowed=budget.j_max,
        )
    return N


def eta_eval(tau: Number, budget: TruncationBudget = DEFAULT_BUDGET) -> complex:
    """q^{1/24} ∏_{k≤N} (1 − q^k)."""
    tau = check_tau(tau)
    N = eta_cutoff(tau, budget)
    k = np.arange(1, N + 1)
    factors = 1.0 - np.exp(2j * np.pi * k * tau)
    return q_rational_power(tau, Fraction(1, 24)) * complex(np.prod(factors))


# =============================================================================
# MPMATH EVALUATORS
# =============================================================================


def theta_eval_mp(
    idx: ThetaIndex,
    tau: Number,
    z: Number = 0j,
    budget: TruncationBudget = DEFAULT_BUDGET,
    depth: float = 0.0,
) -> "mp.mpc":
    """θ^{(±)}_{n,m}(τ,z) at the current mpmath precision; `depth` deepens the window."""
    tau = check_tau(tau)
    z = complex(z)
    if z == 0 and vanishes_at_origin(idx):
        return mp.mpc(0)
    m = Fraction(idx.m2, 2)
    shift = Fraction(idx.n2, 2 * idx.m2)
    y = imag_ratio(z, tau)
    window = quadratic_window(float(m), idx.n2 / 2.0 + float(m) * y, tau, budget, depth=depth)
    tau_mp, z_mp, m_mp = mp.mpc(tau), mp.mpc(z), mp_rational(m)
    terms = []
    for j in window.tolist():
        x = mp_rational(j + shift)
        term = mp_exp_2pi_i(m_mp * x * (x * tau_mp + z_mp))
        terms.append(-term if idx.sign is Sign.MINUS and j % 2 else term)
    return mp.fsum(terms)


def eta_mp(tau: Number) -> "mp.mpc":
    """η(τ) through mpmath's q-Pochhammer symbol."""
    tau = check_tau(tau)
    q = mp_exp_2pi_i(mp.mpc(tau))
    return mp_q_power(tau, Fraction(1, 24)) * mp.qp(q)


def mumford11_mp(tau: Number, z: Number, budget: TruncationBudget = DEFAULT_BUDGET, depth: float = 0.0) -> "mp.mpc":
    return mp.mpc(0, 1) * theta_eval_mp(ODD_THETA, tau, 2 * complex(z), budget, depth)


# =============================================================================
# QUASI-PERIODICITY
# =============================================================================


def theta_translate_check(
    idx: ThetaIndex,
    tau: Number,
    z: Number,
    c: int,
    b: int,
    budget: TruncationBudget = DEFAULT_BUDGET,
) -> Comparison:
    """
    Worst of three laws:
        θ_{n,m}(τ, z + cτ/m) = q^{−c²/4m} e^{−πicz} θ_{n+c,m}(τ,z)
        θ_{n,m}(τ, z + b/m)  = e^{πinb/m} θ_{n,m}(τ,z)
        θ^{(±)}_{n+2m,m}     = ±θ^{(±)}_{n,m}
    The first two are also checked composed.
    """
    tau = check_tau(tau)
    z = complex(z)
    m = idx.m2 / 2.0
    base = theta_eval(idx, tau, z, budget)

    tau_shift = Comparison(
        theta_eval(idx, tau, z + c * tau / m, budget),
        q_rational_power(tau, Fraction(-c * c, 2 * idx.m2))
        * cmath.exp(-1j * math.pi * c * z)
        * theta_eval(idx.shifted(c), tau, z, budget),
    )
    phase_b = exp_pi_i(Fraction(idx.n2 * b, idx.m2))
    real_shift = Comparison(theta_eval(idx, tau, z + b / m, budget), phase_b * base)
    composed = Comparison(
        theta_eval(idx, tau, z + c * tau / m + b / m, budget),
        q_rational_power(tau, Fraction(-c * c, 2 * idx.m2))
        * cmath.exp(-1j * math.pi * c * (z + b / m))
        * exp_pi_i(Fraction((idx.n2 + 2 * c) * b, idx.m2))
        * theta_eval(idx.shifted(c), tau, z, budget),
    )
    index_law = Comparison(
        theta_eval(idx.shifted(idx.m2), tau, z, budget),
        idx.sign.factor * base,
    )
    return Comparison.worst([tau_shift, real_shift, composed, index_law])


def mumford_translate_check(
    tau: Number,
    z: Number,
    nu: int,
    budget: TruncationBudget = DEFAULT_BUDGET,
) -> Comparison:
    """ϑ11(τ, z+ντ) = (−1)^ν q^{−ν²/2} e^{−2πiνz} ϑ11(τ,z)."""
    tau = check_tau(tau)
    z = complex(z)
    lhs = mumford_eval(ThetaKind.K11, tau, z + nu * tau, budget)
    rhs = (
        (-1) ** (nu % 2)
        * q_rational_power(tau, Fraction(-nu * nu, 2))
        * cmath.exp(-2j * math.pi * nu * z)
        * mumford_eval(ThetaKind.K11, tau, z, budget)
    )
    return Comparison(lhs, rhs)


def mumford_anchor_check(tau: Number, z: Number, budget: TruncationBudget = DEFAULT_BUDGET) -> Comparison:
    """θ^{(−)}_{½,½}(τ,2z) against −i·ϑ11(τ,z), each summed independently."""
    z = complex(z)
    return Comparison(
        theta_eval(ODD_THETA, tau, 2 * z, budget),
        -1j * mumford_eval(ThetaKind.K11, tau, z, budget),
    )


def mumford_gauss_check(tau: Number, budget: TruncationBudget = DEFAULT_BUDGET) -> Comparison:
    """ϑ00(2τ,0) = η(2τ)^5 / (η(τ)² η(4τ)²)."""
    tau = check_tau(tau)
    return Comparison(
        mumford_eval(ThetaKind.K00, 2 * tau, 0j, budget),
        eta_eval(2 * tau, budget) ** 5 / (eta_eval(tau, budget) ** 2 * eta_eval(4 * tau, budget) ** 2),
    )


# =============================================================================
# MODULAR TRANSFORMATIONS
# =============================================================================


def theta_S_image(
    idx: ThetaIndex,
    tau: Number,
    z: Number = 0j,
    budget: TruncationBudget = DEFAULT_BUDGET,
) -> complex:
    """
    θ^{(σ)}_{n,m}(−1/τ, z/τ) computed from values at τ:

        (−iτ/2m)^{1/2} e^{πimz²/2τ} Σ_{r=0}^{2m−1} e^{−πin(r+β)/m} θ^{(σ')}_{r+β,m}(τ,z)

    with β = 0 for (+), β = ½ for (−), and σ' = (−) exactly when 2n is odd.
    """
    tau = check_tau(tau)
    z = complex(z)
    beta2 = 1 if idx.sign is Sign.MINUS else 0
    target_sign = Sign.MINUS if idx.n2 % 2 else Sign.PLUS
    total = 0j
    for r in range(idx.m2):
        k2 = 2 * r + beta2
        phase = exp_pi_i(Fraction(-idx.n2 * k2, 2 * idx.m2))
        total += phase * theta_eval(ThetaIndex(k2, idx.m2, target_sign), tau, z, budget)
    prefactor = principal_half_power(tau, Fraction(1, 2)) / math.sqrt(idx.m2)
    gaussian = cmath.exp(1j * math.pi * idx.m2 * z * z / (4 * tau))
    return prefactor * gaussian * total


def theta_S_check(
    idx: ThetaIndex,
    tau: Number,
    z: Number = 0j,
    budget: TruncationBudget = DEFAULT_BUDGET,
) -> Comparison:
    tau = check_tau(tau)
    z = complex(z)
    lhs = theta_eval(idx, -1 / tau, z / tau, budget)
    return Comparison(lhs, theta_S_image(idx, tau, z, budget))


def theta_T_check(
    idx: ThetaIndex,
    tau: Number,
    z: Number = 0j,
    budget: TruncationBudget = DEFAULT_BUDGET,
) -> Comparison:
    """θ^{(σ)}_{n,m}(τ+1,z) = e^{πin²/2m} θ^{(σε)}_{n,m}(τ,z), ε = (−1)^{2m+2n}."""
    tau = check_tau(tau)
    target = idx if (idx.m2 + idx.n2) % 2 == 0 else idx.with_sign(idx.sign.flipped())
    phase = exp_pi_i(Fraction(idx.n2 * idx.n2, 4 * idx.m2))
    return Comparison(theta_eval(idx, tau + 1, z, budget), phase * theta_eval(target, tau, z, budget))


def eta_T_check(tau: Number, budget: TruncationBudget = DEFAULT_BUDGET) -> Comparison:
    """η(τ+1) = e^{πi/12} η(τ)."""
    tau = check_tau(tau)
    return Comparison(eta_eval(tau + 1, budget), exp_pi_i(Fraction(1, 12)) * eta_eval(tau, budget))


def eta_S_check(tau: Number, budget: TruncationBudget = DEFAULT_BUDGET) -> Comparison:
    """η(−1/τ) = (−iτ)^{1/2} η(τ)."""
    tau = check_tau(tau)
    return Comparison(
        eta_eval(-1 / tau, budget),
        principal_half_power(tau, Fraction(1, 2)) * eta_eval(tau, budget),
    )
