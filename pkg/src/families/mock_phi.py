"""
Appell-Type Mock Theta Function.
Φ^{(±)[m,s]}_1(τ,z1,z2) = Σ_j (±1)^j e^{2πimj(z1+z2)+2πisz1} q^{mj²+sj} / (1 − e^{2πiz1}q^j)
with its root-of-unity averages, s-shifts, the Kac-Peterson specialisation
and the three evaluations of the auxiliary triple sum A^{[m,s]}.

The fourth argument of Φ_1 is fixed to 0 throughout.
"""

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, NamedTuple, Union

import mpmath as mp
import numpy as np

from src.domain.errors import DomainError
from src.domain.indices import DEFAULT_BUDGET, PhiParams, Sign, ThetaIndex, ThetaKind, TruncationBudget
from src.numerics.core import (
    Comparison,
    alternating,
    check_tau,
    crossing_indices,
    guard_denominators,
    guard_value,
    imag_ratio,
    mp_exp_2pi_i,
    mp_rational,
    q_rational_power,
    quadratic_window,
    unity_root,
)
from src.numerics.theta import eta_eval, mumford_eval, theta_eval

Number = Union[complex, float, int]


# =============================================================================
# APPELL SUMS
# =============================================================================


@dataclass(frozen=True)
class AppellTerms:
    """
    Σ_j sign^j e^{2πi[(quad·j² + lin·j)τ + j·zlin + zconst]} / (1 − e^{2πi·zden} q^{step·j})

    Every Φ_1 evaluation in the package is one of these.
    """

    quad: Fraction
    lin: Fraction
    zlin: complex
    zconst: complex
    zden: complex
    step: int = 1
    sign: Sign = Sign.PLUS

    def window(self, tau: complex, budget: TruncationBudget, depth: float = 0.0) -> np.ndarray:
        y_lin = imag_ratio(self.zlin, tau)
        y_den = imag_ratio(self.zden, tau)
        return quadratic_window(
            float(self.quad),
            float(self.lin) + y_lin,
            tau,
            budget,
            slack=float(self.step),
            depth=depth,
            extra=crossing_indices(-y_den / self.step),
        )

    def denominators(self, tau: complex, window: np.ndarray) -> np.ndarray:
        return 1.0 - np.exp(2j * np.pi * (self.zden + self.step * window * tau))

    def evaluate(self, tau: Number, budget: TruncationBudget = DEFAULT_BUDGET) -> complex:
        tau = check_tau(tau)
        window = self.window(tau, budget)
        denominators = self.denominators(tau, window)
        guard_denominators(denominators, window, budget.pole_guard, "Appell denominator")
        return self.sum_over(tau, window, denominators)

    def sum_over(self, tau: complex, window: np.ndarray, denominators: np.ndarray) -> complex:
        """The sum over `window` against denominators already guarded by the caller."""
        quad, lin = float(self.quad), float(self.lin)
        phase = (quad * window**2 + lin * window) * tau + window * self.zlin + self.zconst
        numerators = alternating(window, self.sign.factor) * np.exp(2j * np.pi * phase)
        return complex(np.sum(numerators / denominators))

    def evaluate_mp(
        self,
        tau: Number,
        budget: TruncationBudget = DEFAULT_BUDGET,
        depth: float = 0.0,
    ) -> "mp.mpc":
        """Same sum at the current mpmath precision."""
        tau = check_tau(tau)
        window = self.window(tau, budget, depth)
        tau_mp = mp.mpc(tau)
        quad, lin = mp_rational(self.quad), mp_rational(self.lin)
        zlin, zconst, zden = mp.mpc(self.zlin), mp.mpc(self.zconst), mp.mpc(self.zden)
        terms = []
        for j in window.tolist():
            denominator = 1 - mp_exp_2pi_i(zden + self.step * j * tau_mp)
            guard_value(denominator, budget.pole_guard, "Appell denominator", index=j)
            term = mp_exp_2pi_i((quad * j * j + lin * j) * tau_mp + j * zlin + zconst) / denominator
            terms.append(-term if self.sign is Sign.MINUS and j % 2 else term)
        return mp.fsum(terms)


def phi1_terms(p: PhiParams, z1: Number, z2: Number) -> AppellTerms:
    z1, z2 = complex(z1), complex(z2)
    m = Fraction(p.m2, 2)
    s = Fraction(p.s2, 2)
    return AppellTerms(m, s, float(m) * (z1 + z2), float(s) * z1, z1, 1, p.sign)


def phi1_eval(
    p: PhiParams,
    tau: Number,
    z1: Number,
    z2: Number = 0j,
    budget: TruncationBudget = DEFAULT_BUDGET,
) -> complex:
    """Φ^{(±)[m,s]}_1(τ,z1,z2); raises PoleProximityError when z1 nears Z + τZ."""
    return phi1_terms(p, z1, z2).evaluate(tau, budget)


def phi1_eval_mp(
    p: PhiParams,
    tau: Number,
    z1: Number,
    z2: Number = 0j,
    budget: TruncationBudget = DEFAULT_BUDGET,
    depth: float = 0.0,
) -> "mp.mpc":
    return phi1_terms(p, z1, z2).evaluate_mp(tau, budget, depth)


# =============================================================================
# AVERAGING AND SHIFTS
# =============================================================================


def phi_average_check(
    m2: int,
    n_div: int,
    p: int,
    z2_shift: Sign,
    tau: Number,
    z1: Number,
    z2: Number,
    variant: int = 1,
    sign: Sign = Sign.PLUS,
    budget: TruncationBudget = DEFAULT_BUDGET,
) -> Comparison:
    """
    variant 1:  Σ_{k<n} e^{+2πipk/n} Φ^{[nm,0]}_1(τ, z1 − k/n, z2 ± k/n)
    variant 2:  Σ_{k<n} e^{−2πipk/n} Φ^{[nm,0]}_1(τ, z1 + k/n, z2 ± k/n)
    both equal  n Σ_j e^{2πinmj(z1+z2)+2πipz1} q^{nmj²+pj} / (1 − e^{2πinz1}q^{nj}).

    The z2 shift only changes e^{2πinmj(z1+z2)} by e^{∓4πimjk} = 1.
    """
    if n_div < 1:
        raise DomainError(f"n_div must be >= 1, got {n_div}")
    if not 0 <= p < n_div:
        raise DomainError(f"need 0 <= p < n_div, got p={p}, n_div={n_div}")
    if variant not in (1, 2):
        raise DomainError(f"variant must be 1 or 2, got {variant}")
    tau = check_tau(tau)
    z1, z2 = complex(z1), complex(z2)
    params = PhiParams(n_div * m2, 0, sign)
    step = 1 if variant == 1 else -1
    lean = z2_shift.factor
    lhs = 0j
    for k in range(n_div):
        lhs += unity_root(n_div, step * p * k) * phi1_eval(
            params, tau, z1 - step * k / n_div, z2 + lean * k / n_div, budget
        )
    big_m = Fraction(n_div * m2, 2)
    averaged = AppellTerms(
        big_m, Fraction(p), float(big_m) * (z1 + z2), p * z1, n_div * z1, n_div, sign
    )
    return Comparison(lhs, n_div * averaged.evaluate(tau, budget))


def phi_half_level_check(
    m2: int,
    p: int,
    z2_shift: Sign,
    tau: Number,
    z1: Number,
    z2: Number,
    variant: int = 1,
    budget: TruncationBudget = DEFAULT_BUDGET,
) -> Comparison:
    """The average at level ½ over 2m roots of unity (2m integral)."""
    return phi_average_check(1, m2, p, z2_shift, tau, z1, z2, variant, Sign.PLUS, budget)


def shift_correction(p: PhiParams, s2: int, tau: Number, z1: Number, z2: Number, budget: TruncationBudget) -> complex:
    """e^{πis(z1−z2)} q^{−s²/4m} θ^{(±)}_{s,m}(τ, z1+z2)."""
    z1, z2 = complex(z1), complex(z2)
    return (
        cmath.exp(1j * math.pi * (s2 / 2.0) * (z1 - z2))
        * q_rational_power(tau, Fraction(-s2 * s2, 8 * p.m2))
        * theta_eval(ThetaIndex(s2, p.m2, p.sign), tau, z1 + z2, budget)
    )


def phi_shift_check(
    p: PhiParams,
    n_shift: int,
    tau: Number,
    z1: Number,
    z2: Number,
    budget: TruncationBudget = DEFAULT_BUDGET,
) -> Comparison:
    """
    Φ^{[m,s+n]} = Φ^{[m,s]} − Σ_{0≤j<n} (correction at s+j)
    Φ^{[m,s−n]} = Φ^{[m,s]} + Σ_{1≤j≤n} (correction at s−j)
    """
    if n_shift == 0:
        raise DomainError("shift must be nonzero")
    tau = check_tau(tau)
    shifted = PhiParams(p.m2, p.s2 + 2 * n_shift, p.sign)
    lhs = phi1_eval(shifted, tau, z1, z2, budget)
    rhs = phi1_eval(p, tau, z1, z2, budget)
    if n_shift > 0:
        for j in range(n_shift):
            rhs -= shift_correction(p, p.s2 + 2 * j, tau, z1, z2, budget)
    else:
        for j in range(1, -n_shift + 1):
            rhs += shift_correction(p, p.s2 - 2 * j, tau, z1, z2, budget)
    return Comparison(lhs, rhs)


def phi_shift_roundtrip(
    p: PhiParams,
    n_shift: int,
    tau: Number,
    z1: Number,
    z2: Number,
    budget: TruncationBudget = DEFAULT_BUDGET,
) -> Comparison:
    """Evaluate Φ^{[m,s+n]} directly and walk back down to Φ^{[m,s]} through the corrections."""
    if n_shift <= 0:
        raise DomainError(f"roundtrip shift must be positive, got {n_shift}")
    shifted = PhiParams(p.m2, p.s2 + 2 * n_shift, p.sign)
    down = phi1_eval(shifted, tau, z1, z2, budget)
    for j in range(1, n_shift + 1):
        down += shift_correction(p, shifted.s2 - 2 * j, tau, z1, z2, budget)
    return Comparison(down, phi1_eval(p, tau, z1, z2, budget))


# =============================================================================
# KAC-PETERSON AND THE TRIPLE SUM
# =============================================================================


def eta_cubed_over_odd(tau: Number, z: Number, budget: TruncationBudget) -> complex:
    """η(τ)³ / ϑ11(τ,z)."""
    odd = mumford_eval(ThetaKind.K11, tau, z, budget)
    guard_value(odd, budget.pole_guard, "theta_11(tau, z)")
    return eta_eval(tau, budget) ** 3 / odd


def kac_peterson_check(
    s2: int,
    k: int,
    tau: Number,
    z: Number,
    budget: TruncationBudget = DEFAULT_BUDGET,
) -> Comparison:
    """Φ^{(−)[½,s]}_1(τ, z, −z+2kτ) = −i e^{−2πikz} η³/ϑ11(τ,z), s half-odd."""
    if s2 % 2 == 0:
        raise DomainError(f"s must be an odd half-integer, got s2={s2}")
    tau = check_tau(tau)
    z = complex(z)
    lhs = phi1_eval(PhiParams(1, s2, Sign.MINUS), tau, z, -z + 2 * k * tau, budget)
    rhs = -1j * cmath.exp(-2j * math.pi * k * z) * eta_cubed_over_odd(tau, z, budget)
    return Comparison(lhs, rhs)


class ASeries(NamedTuple):
    """Three evaluations of A^{[m,s]}(τ,z1,z2)."""

    via_flow: complex
    via_closed: complex
    via_direct: complex

    def comparisons(self) -> List[Comparison]:
        return [
            Comparison(self.via_flow, self.via_closed),
            Comparison(self.via_direct, self.via_closed),
        ]

    def worst(self) -> Comparison:
        return Comparison.worst(self.comparisons())


def a_series_flow(m2: int, s2: int, tau: complex, z1: complex, z2: complex, budget: TruncationBudget) -> complex:
    """Σ_j (−1)^j q^{(m+½)j²+sj} e^{2πijm(z1+z2)} Φ^{[m,0]}_1(τ, z1, z2+2jτ)."""
    m = m2 / 2.0
    big_m = Fraction(m2 + 1, 2)
    s = Fraction(s2, 2)
    params = PhiParams(m2, 0, Sign.PLUS)
    outer_window = quadratic_window(0.5, float(s), tau, budget, slack=m2 + 1.0).tolist()
    inner = {j: phi1_terms(params, z1, z2 + 2 * j * tau) for j in outer_window}
    windows = {j: terms.window(tau, budget) for j, terms in inner.items()}
    # z2 shifts leave the poles alone: one scan over the union of inner windows
    low = min(int(w.min()) for w in windows.values())
    high = max(int(w.max()) for w in windows.values())
    span = np.arange(low, high + 1)
    denominators = phi1_terms(params, z1, z2).denominators(tau, span)
    guard_denominators(denominators, span, budget.pole_guard, "Appell denominator")
    total = 0j
    for j in outer_window:
        outer = (
            (-1) ** (j % 2)
            * q_rational_power(tau, big_m * j * j + s * j)
            * cmath.exp(2j * math.pi * j * m * (z1 + z2))
        )
        total += outer * inner[j].sum_over(tau, windows[j], denominators[windows[j] - low])
    return total


def a_series_closed(m2: int, s2: int, tau: complex, z1: complex, z2: complex, budget: TruncationBudget) -> complex:
    """−i e^{πims(z1−z2)/M} q^{−s²/4M} θ^{(−)}_{s,M}(τ, z1+z2+(z1−z2)/(2m+1)) η³/ϑ11(τ,z1), M = m+½."""
    m = m2 / 2.0
    big_m = (m2 + 1) / 2.0
    s = s2 / 2.0
    argument = z1 + z2 + (z1 - z2) / (m2 + 1)
    theta = theta_eval(ThetaIndex(s2, m2 + 1, Sign.MINUS), tau, argument, budget)
    return (
        -1j
        * cmath.exp(1j * math.pi * m * s * (z1 - z2) / big_m)
        * q_rational_power(tau, Fraction(-s2 * s2, 8 * (m2 + 1)))
        * theta
        * eta_cubed_over_odd(tau, z1, budget)
    )


def a_series_direct(m2: int, s2: int, tau: complex, z1: complex, z2: complex, budget: TruncationBudget) -> complex:
    """Σ_{j,k} (−1)^j e^{2πikm(z1+z2)} q^{j²/2+mk²−sj} / (1 − e^{2πiz1}q^{j+k})."""
    m = m2 / 2.0
    s = s2 / 2.0
    y = imag_ratio(z1 + z2, tau)
    j_window = quadratic_window(0.5, -s, tau, budget, slack=1.0)
    k_window = quadratic_window(m, m * y, tau, budget, slack=1.0)
    j_grid, k_grid = np.meshgrid(j_window, k_window, indexing="ij")
    r_grid = (j_grid + k_grid).ravel()
    denominators = 1.0 - np.exp(2j * np.pi * (z1 + r_grid * tau))
    guard_denominators(denominators, r_grid, budget.pole_guard, "triple sum denominator")
    phase = (0.5 * j_grid**2 + m * k_grid**2 - s * j_grid) * tau + k_grid * m * (z1 + z2)
    numerators = (1.0 - 2.0 * (j_grid % 2)) * np.exp(2j * np.pi * phase)
    return complex(np.sum(numerators.ravel() / denominators))


def a_series_check(
    m2: int,
    s2: int,
    tau: Number,
    z1: Number,
    z2: Number,
    budget: TruncationBudget = DEFAULT_BUDGET,
) -> ASeries:
    """A^{[m,s]}(τ,z1,z2) by spectral flow, by its theta quotient and as a double sum."""
    if m2 < 1:
        raise DomainError(f"level m2 must be >= 1, got {m2}")
    if s2 % 2 == 0:
        raise DomainError(f"s must be an odd half-integer, got s2={s2}")
    tau = check_tau(tau)
    z1, z2 = complex(z1), complex(z2)
    return ASeries(
        via_flow=a_series_flow(m2, s2, tau, z1, z2, budget),
        via_closed=a_series_closed(m2, s2, tau, z1, z2, budget),
        via_direct=a_series_direct(m2, s2, tau, z1, z2, budget),
    )
