"""
Core Numerics.
Nome and rational q-powers, principal half powers, roots of unity,
truncation budgeting for bilateral sums, residuals and pole guards.

Every q^r is computed as exp(2πi·r·τ); no complex power of q is ever taken.
Two backends share the same windows: numpy (double precision, vectorised)
and mpmath (working precision raised by the caller when sums cancel).
"""

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence, Tuple, Union

import mpmath as mp
import numpy as np

from src.domain.errors import BudgetExceededError, DomainError, PoleProximityError
from src.domain.indices import DEFAULT_BUDGET, TruncationBudget

Rational = Union[int, Fraction]
Number = Union[complex, float, int]

TWO_PI = 2.0 * math.pi

# Exact values of e^{2πi k/4}, indexed by k.
QUARTER_ROOTS = {0: 1 + 0j, 1: 1j, 2: -1 + 0j, -1: -1j}

# Extra decimal digits carried above the target tolerance in mpmath sums.
GUARD_DIGITS = 6

# Indices added on each side of every certified window.
WINDOW_PAD = 2


# =============================================================================
# POINTS, POWERS AND ROOTS
# =============================================================================


def check_tau(tau: Number) -> complex:
    tau = complex(tau)
    if not tau.imag > 0:
        raise DomainError(f"Im(tau) must be positive, got tau={tau!r}")
    return tau


def nome(tau: Number) -> complex:
    """q = e^{2πiτ}."""
    tau = check_tau(tau)
    return cmath.exp(2j * math.pi * tau)


def q_rational_power(tau: Number, r: Union[Rational, float]) -> complex:
    """q^r = e^{2πi·r·τ}, single valued."""
    tau = check_tau(tau)
    if r == 0:
        return 1 + 0j
    return cmath.exp(2j * math.pi * float(r) * tau)


def principal_half_power(tau: Number, exponent: Union[Rational, float]) -> complex:
    """(−iτ)^{k/2} through the principal logarithm; Re(−iτ) > 0 on H."""
    tau = check_tau(tau)
    if (Fraction(exponent) * 2).denominator != 1:
        raise DomainError(f"exponent must be a multiple of 1/2, got {exponent!r}")
    w = -1j * tau
    return cmath.exp(float(exponent) * cmath.log(w))


def unity_root(N: int, k: int) -> complex:
    """e^{2πik/N}, exact at the quarter turns."""
    if N < 1:
        raise DomainError(f"root of unity order must be >= 1, got {N}")
    r = k % N
    if 2 * r > N:
        r -= N
    if (4 * r) % N == 0:
        return QUARTER_ROOTS[(4 * r) // N]
    return cmath.exp(2j * math.pi * r / N)


def exp_pi_i(x: Rational) -> complex:
    """e^{πix} for rational x, routed through unity_root."""
    x = Fraction(x)
    return unity_root(2 * x.denominator, x.numerator)


def mp_exp_2pi_i(x) -> "mp.mpc":
    """e^{2πix} at the current mpmath precision."""
    return mp.expjpi(2 * x)


def mp_rational(x: Rational) -> "mp.mpf":
    x = Fraction(x)
    return mp.mpf(x.numerator) / x.denominator


def mp_q_power(tau, r: Rational) -> "mp.mpc":
    """q^r at mpmath precision for exact rational r."""
    if r == 0:
        return mp.mpc(1)
    return mp_exp_2pi_i(mp_rational(r) * mp.mpc(tau))


# =============================================================================
# PARTIAL FRACTIONS
# =============================================================================


def partial_fraction_average(
    n: int,
    k: int,
    x: Number,
    pole_guard: float = DEFAULT_BUDGET.pole_guard,
) -> Tuple[complex, complex]:
    """Σ_j ω^{−jk}/(1 − ω^j x) against n x^k/(1 − x^n), ω = e^{2πi/n}."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if not 0 <= k < n:
        raise DomainError(f"need 0 <= k < n, got k={k}, n={n}")
    x = complex(x)
    lhs = 0j
    for j in range(n):
        denominator = 1 - unity_root(n, j) * x
        if abs(denominator) < pole_guard:
            raise PoleProximityError(
                f"1 - w^{j} x is within {pole_guard:g} of 0",
                index=j,
                distance=abs(denominator),
            )
        lhs += unity_root(n, -j * k) / denominator
    closed = 1 - x**n
    if abs(closed) < pole_guard:
        raise PoleProximityError(
            f"1 - x^{n} is within {pole_guard:g} of 0", index=n, distance=abs(closed)
        )
    rhs = n * x**k / closed
    return lhs, rhs


# =============================================================================
# TRUNCATION
# =============================================================================


def log_abs_nome(tau: Number) -> float:
    """log|q| = −2π Im τ."""
    return -TWO_PI * check_tau(tau).imag


def choose_truncation(
    m: Union[Rational, float],
    tau: Number,
    budget: TruncationBudget = DEFAULT_BUDGET,
    linear: float = 0.0,
    scale: float = 1.0,
    depth: float = 0.0,
) -> int:
    """
    Smallest J <= j_max with Σ_{|j|>J} |q|^{m j² − C|j|} < tol.

    The tail is bounded by 2·scale·t_{J+1}/(1 − ρ) with t_j = |q|^{m j² − C j}
    and ρ = |q|^{m(2J+3) − C}, valid once m(2J+3) > C. `depth` tightens the
    tolerance to tol·|q|^{depth} for sums that cancel.
    """
    m = float(m)
    if m <= 0:
        raise DomainError(f"quadratic coefficient must be positive, got {m}")
    log_r = log_abs_nome(tau)
    C = abs(float(linear))
    log_target = math.log(budget.tol) + depth * log_r
    for J in range(0, budget.j_max + 1):
        slope = m * (2 * J + 3) - C
        if slope <= 0:
            continue
        log_rho = slope * log_r
        log_t = (m * (J + 1) ** 2 - C * (J + 1)) * log_r
        log_tail = math.log(2.0 * scale) + log_t - math.log(-math.expm1(log_rho))
        if log_tail < log_target:
            return J
    raise BudgetExceededError(
        f"no cutoff J <= {budget.j_max} meets tail tolerance {budget.tol:g} "
        f"(m={m:g}, C={C:g}, tau={complex(tau)!r})",
        requested=None,
        allowed=budget.j_max,
    )


def quadratic_window(
    a: Union[Rational, float],
    b: float,
    tau: Number,
    budget: TruncationBudget = DEFAULT_BUDGET,
    slack: float = 0.0,
    depth: float = 0.0,
    extra: Iterable[int] = (),
) -> np.ndarray:
    """
    Integer window for a bilateral sum with |term_j| ≈ |q|^{a j² + b j}.

    Centred at the vertex round(−b/2a); the half-width is certified relative
    to the peak term. `slack` widens the linear coefficient for denominators,
    `extra` forces indices such as pole crossings into the window.
    """
    a = float(a)
    center = int(round(-float(b) / (2.0 * a)))
    half_width = choose_truncation(a, tau, budget, linear=a + slack, depth=depth) + WINDOW_PAD
    window = np.arange(center - half_width, center + half_width + 1)
    extra = list(extra)
    if extra:
        window = np.union1d(window, np.asarray(extra, dtype=int))
    return window


def crossing_indices(ratio: float, spread: int = 1) -> Sequence[int]:
    """Indices around j0 = round(ratio), where |x q^j| crosses 1."""
    j0 = int(round(ratio))
    return list(range(j0 - spread, j0 + spread + 1))


def working_dps(tau: Number, depth: float, budget: TruncationBudget = DEFAULT_BUDGET) -> int:
    """Decimal digits for an mpmath sum that loses |q|^{−depth} to cancellation."""
    target = math.ceil(-math.log10(budget.tol)) + GUARD_DIGITS
    lost = max(0.0, depth) * TWO_PI * check_tau(tau).imag / math.log(10.0)
    return target + math.ceil(lost)


def adaptive_precision(
    compute: Callable[[float], Tuple["mp.mpc", Sequence["mp.mpc"]]],
    tau: Number,
    budget: TruncationBudget = DEFAULT_BUDGET,
    depth: float = 0.0,
    retries: int = 2,
) -> complex:
    """
    Run `compute(depth)` under mpmath until its cancellation is covered.

    `compute` returns (value, pieces). The loss log|max piece / value| is
    converted to q-exponent units and, when it exceeds the depth used, the
    computation is repeated with a deeper window and more digits.
    """
    log_r = log_abs_nome(tau)
    value = mp.mpc(0)
    for _ in range(retries + 1):
        with mp.workdps(working_dps(tau, depth, budget)):
            value, pieces = compute(depth)
            biggest = max((abs(p) for p in pieces), default=mp.mpf(0))
            size = abs(value)
            if biggest == 0 or size == 0:
                return complex(value)
            loss = float(mp.log(biggest / size)) / (-log_r)
        if loss <= depth + 0.5:
            return complex(value)
        depth = loss + 1.0
    return complex(value)


# =============================================================================
# RESIDUALS AND GUARDS
# =============================================================================


def residual(lhs: Number, rhs: Number) -> float:
    """Relative when |rhs| > 1, absolute otherwise."""
    lhs, rhs = complex(lhs), complex(rhs)
    diff = abs(lhs - rhs)
    scale = abs(rhs)
    return diff / scale if scale > 1.0 else diff


@dataclass(frozen=True)
class Comparison:
    """Both sides of an identity at one point."""

    lhs: complex
    rhs: complex

    @property
    def abs_err(self) -> float:
        return abs(complex(self.lhs) - complex(self.rhs))

    @property
    def rel_err(self) -> float:
        scale = abs(complex(self.rhs))
        return self.abs_err / scale if scale > 0 else self.abs_err

    @property
    def residual(self) -> float:
        return residual(self.lhs, self.rhs)

    def __float__(self) -> float:
        return self.residual

    @classmethod
    def worst(cls, comparisons: Iterable["Comparison"]) -> "Comparison":
        """The comparison with the largest residual."""
        items = list(comparisons)
        if not items:
            return cls(0j, 0j)
        return max(items, key=lambda c: c.residual)

    @classmethod
    def of_vectors(cls, lhs: Sequence[Number], rhs: Sequence[Number]) -> "Comparison":
        if len(lhs) != len(rhs):
            raise DomainError(f"vector lengths differ: {len(lhs)} vs {len(rhs)}")
        return cls.worst(cls(complex(a), complex(b)) for a, b in zip(lhs, rhs))


def guard_denominators(
    values: np.ndarray,
    indices: np.ndarray,
    pole_guard: float,
    label: str,
) -> None:
    """Raise PoleProximityError naming the first index below the guard."""
    moduli = np.abs(values)
    bad = np.nonzero(moduli < pole_guard)[0]
    if bad.size:
        i = int(bad[0])
        raise PoleProximityError(
            f"{label}: denominator at index {int(indices[i])} is within "
            f"{pole_guard:g} of 0 (|d|={moduli[i]:.3e})",
            index=int(indices[i]),
            distance=float(moduli[i]),
        )


def guard_value(value, pole_guard: float, label: str, index: Optional[int] = None) -> None:
    size = float(abs(value))
    if size < pole_guard:
        raise PoleProximityError(
            f"{label} is within {pole_guard:g} of 0 (|d|={size:.3e})",
            index=index,
            distance=size,
        )


def alternating(window: np.ndarray, sign: int) -> np.ndarray:
    """(sign)^j over a window of integers."""
    if sign == 1:
        return np.ones(window.shape, dtype=float)
    return 1.0 - 2.0 * (window % 2)


def exp_2pi_i(x: np.ndarray) -> np.ndarray:
    return np.exp(2j * np.pi * x)


def imag_ratio(z: Number, tau: Number) -> float:
    """Im z / Im τ, the growth rate of e^{2πiz·j} in units of |q|^j."""
    return complex(z).imag / check_tau(tau).imag
