"""
Modular Action.
S and T laws of G and F, the matrices of the invariant span
{F^{[m](a,0)}_{n,ν}} and the mock S-transform of g^{[m]}_{n,m}.

Automorphy convention for the value vector v = (F^{[m](a,0)}_{n,ν}(τ,z)):
    v(−1/τ, z/τ) = (−iτ)^{3/2} e^{πimz²/2τ} · M_S · v(τ,z)
    v(τ+1, z)    = M_T · v(τ,z)
The scalar i/(2m√(2m+1)) lives inside M_S; (−iτ)^{3/2} stays outside.
"""

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Union

import numpy as np

from src.domain.errors import DomainError
from src.domain.indices import (
    DEFAULT_BUDGET,
    BasisIndex,
    FamilyIndex,
    ThetaIndex,
    TorsorShift,
    TruncationBudget,
    basis_indices,
)
from src.families.indefinite import F_eval, F_raw, G_eval, g_eval, theta_quotient
from src.numerics.core import Comparison, check_tau, exp_pi_i, principal_half_power, q_rational_power
from src.numerics.theta import eta_eval, theta_eval

Number = Union[complex, float, int]


@dataclass
class TransformMatrix:
    """A transformation matrix over the BasisIndex ordering."""

    kind: str
    m2: int
    entries: np.ndarray
    basis: List[BasisIndex] = field(default_factory=list)
    weight: Fraction = Fraction(3, 2)

    @property
    def size(self) -> int:
        return len(self.basis)

    def apply(self, vector: Sequence[complex]) -> np.ndarray:
        return self.entries @ np.asarray(vector, dtype=complex)

    def is_diagonal(self, tol: float = 0.0) -> bool:
        off = self.entries - np.diag(np.diag(self.entries))
        return bool(np.max(np.abs(off), initial=0.0) <= tol)

    def to_dict(self) -> Dict[str, object]:
        return {
            "kind": self.kind,
            "m": f"{self.m2}/2" if self.m2 % 2 else str(self.m2 // 2),
            "weight": str(self.weight),
            "basis": [list(b.as_tuple()) for b in self.basis],
            "entries": [[[float(e.real), float(e.imag)] for e in row] for row in self.entries],
        }


def _require_integral(m2: int, what: str) -> None:
    if m2 % 2:
        raise DomainError(f"{what} needs an integral level m, got m = {m2}/2")


def _parity(m2: int) -> int:
    """(−1)^{2m}."""
    return -1 if m2 % 2 else 1


def automorphy_S(tau: Number, z: Number, m2: int) -> complex:
    """(−iτ)^{3/2} e^{πimz²/2τ}."""
    tau = check_tau(tau)
    z = complex(z)
    return principal_half_power(tau, Fraction(3, 2)) * cmath.exp(1j * math.pi * m2 * z * z / (4 * tau))


# =============================================================================
# MATRICES
# =============================================================================


def s_entry(m2: int, row: BasisIndex, col: BasisIndex) -> complex:
    """i/(2m√(2m+1)) (−1)^{ν+ν'} e^{−2πi(ν+½)(ν'+½)/(2m+1)} e^{−πin'a/m} e^{−πi(n+a)ℓ/m}."""
    sign = -1 if (row.nu + col.nu) % 2 else 1
    phase = (
        Fraction(-(2 * row.nu + 1) * (2 * col.nu + 1), 2 * (m2 + 1))
        + Fraction(-2 * col.n * row.a, m2)
        + Fraction(-2 * (row.n + row.a) * col.a, m2)
    )
    return 1j * sign * exp_pi_i(phase) / (m2 * math.sqrt(m2 + 1))


def build_S_matrix(m2: int) -> TransformMatrix:
    basis = basis_indices(m2)
    entries = np.array([[s_entry(m2, row, col) for col in basis] for row in basis], dtype=complex)
    return TransformMatrix("S", m2, entries, basis)


def t_phase(m2: int, index: BasisIndex) -> Fraction:
    """Exponent x of the diagonal entry e^{πix}."""
    return Fraction((index.n + index.a) ** 2 - index.n**2, m2) + Fraction((2 * index.nu + 1) ** 2, 4 * (m2 + 1))


def build_T_matrix(m2: int) -> TransformMatrix:
    _require_integral(m2, "the T matrix")
    basis = basis_indices(m2)
    entries = np.diag([exp_pi_i(t_phase(m2, b)) for b in basis]).astype(complex)
    return TransformMatrix("T", m2, entries, basis)


def build_T_inverse_matrix(m2: int) -> TransformMatrix:
    _require_integral(m2, "the T matrix")
    basis = basis_indices(m2)
    entries = np.diag([exp_pi_i(-t_phase(m2, b)) for b in basis]).astype(complex)
    return TransformMatrix("T^-1", m2, entries, basis)


def reflection_target(m2: int, index: BasisIndex) -> BasisIndex:
    """(n, ν, a) -> (−n mod 2m, 2m − ν, −a mod 2m)."""
    return BasisIndex((-index.n) % m2, m2 - index.nu, (-index.a) % m2)


def reflection_permutation(m2: int) -> np.ndarray:
    """P with (P v)_{(n,ν,a)} = v_{reflection_target(n,ν,a)}."""
    basis = basis_indices(m2)
    position = {b: i for i, b in enumerate(basis)}
    P = np.zeros((len(basis), len(basis)), dtype=complex)
    for i, b in enumerate(basis):
        P[i, position[reflection_target(m2, b)]] = 1.0
    return P


# =============================================================================
# VALUE VECTORS
# =============================================================================


def value_vector(m2: int, tau: Number, z: Number, budget: TruncationBudget = DEFAULT_BUDGET) -> np.ndarray:
    """(F^{[m](a,0)}_{n,ν}(τ,z)) over BasisIndex order; z must avoid the poles of G."""
    return np.array(
        [
            F_eval(FamilyIndex(m2, b.n, b.nu), TorsorShift(b.a, 0, m2), tau, z, budget)
            for b in basis_indices(m2)
        ],
        dtype=complex,
    )


def check_S_action(m2: int, tau: Number, z: Number, budget: TruncationBudget = DEFAULT_BUDGET) -> Comparison:
    """v(−1/τ, z/τ) against (−iτ)^{3/2} e^{πimz²/2τ} M_S v(τ,z)."""
    tau = check_tau(tau)
    z = complex(z)
    lhs = value_vector(m2, -1 / tau, z / tau, budget)
    rhs = automorphy_S(tau, z, m2) * build_S_matrix(m2).apply(value_vector(m2, tau, z, budget))
    return Comparison.of_vectors(lhs, rhs)


def check_T_action(m2: int, tau: Number, z: Number, budget: TruncationBudget = DEFAULT_BUDGET) -> Comparison:
    tau = check_tau(tau)
    lhs = value_vector(m2, tau + 1, z, budget)
    rhs = build_T_matrix(m2).apply(value_vector(m2, tau, z, budget))
    return Comparison.of_vectors(lhs, rhs)


def check_S_squared(m2: int, tau: Number, z: Number, budget: TruncationBudget = DEFAULT_BUDGET) -> Comparison:
    """
    Round trip through −1/τ: the S-rule applied at (−1/τ, z/τ) to the
    directly evaluated v(−1/τ, z/τ) must land on v(τ, −z).
    """
    tau = check_tau(tau)
    z = complex(z)
    tau_s, z_s = -1 / tau, z / tau
    image = value_vector(m2, tau_s, z_s, budget)
    predicted = automorphy_S(tau_s, z_s, m2) * build_S_matrix(m2).apply(image)
    return Comparison.of_vectors(predicted, value_vector(m2, tau, -z, budget))


def check_S_squared_matrix(m2: int) -> Comparison:
    """M_S² against (−1)^{2m} times the reflection permutation, entrywise."""
    S = build_S_matrix(m2).entries
    return Comparison.of_vectors((S @ S).ravel(), (_parity(m2) * reflection_permutation(m2)).ravel())


def check_S_gram(m2: int) -> Comparison:
    """M_S M_S^† against the identity: M_S is unitary."""
    S = build_S_matrix(m2).entries
    return Comparison.of_vectors((S @ S.conj().T).ravel(), np.eye(S.shape[0]).ravel())


def check_ST_cubed(m2: int, tau: Number, z: Number, budget: TruncationBudget = DEFAULT_BUDGET) -> Comparison:
    """
    Three steps u → j_S(τ_k+1, z_k) M_S M_T u starting from v(τ,z), with
    τ_{k+1} = −1/(τ_k+1) and z_{k+1} = z_k/(τ_k+1), end at v(τ, −z).
    """
    tau = check_tau(tau)
    z = complex(z)
    S = build_S_matrix(m2)
    T = build_T_matrix(m2)
    u = value_vector(m2, tau, z, budget)
    t_k, z_k = tau, z
    for _ in range(3):
        u = automorphy_S(t_k + 1, z_k, m2) * S.apply(T.apply(u))
        t_k, z_k = -1 / (t_k + 1), z_k / (t_k + 1)
    return Comparison.of_vectors(u, value_vector(m2, tau, -z, budget))


def check_T_inverse(m2: int) -> Comparison:
    """M_T^{−1} M_T against the identity."""
    T = build_T_matrix(m2).entries
    T_inv = build_T_inverse_matrix(m2).entries
    return Comparison.of_vectors((T_inv @ T).ravel(), np.eye(T.shape[0]).ravel())


# =============================================================================
# G AND THE THETA QUOTIENT
# =============================================================================


def check_G_S(idx: FamilyIndex, tau: Number, z: Number, budget: TruncationBudget = DEFAULT_BUDGET) -> Comparison:
    """
    G_{n,ν}(−1/τ, z/τ) = i(−iτ)^{3/2}/(2m√(2m+1)) Σ_{n',ν',ℓ} (−1)^{ν+ν'} e^{πinℓ/m}
        e^{−πi(ν+½)(ν'+½)/(m+½)} e^{πimz²/2τ} e^{−πiℓz} q^{ℓ²/4m} G_{n',ν'}(τ, z − ℓτ/m)
    """
    tau = check_tau(tau)
    z = complex(z)
    m2 = idx.m2
    lhs = G_eval(idx, -1 / tau, z / tau, budget)
    total = 0j
    for ell in range(m2):
        shifted = z - 2 * ell * tau / m2
        flow = cmath.exp(-1j * math.pi * ell * z) * q_rational_power(tau, Fraction(ell * ell, 2 * m2))
        for nu_p in range(m2 + 1):
            phase = exp_pi_i(
                Fraction(2 * idx.n * ell, m2) - Fraction((2 * idx.nu + 1) * (2 * nu_p + 1), 2 * (m2 + 1))
            )
            sign = -1 if (idx.nu + nu_p) % 2 else 1
            block = sum(G_eval(FamilyIndex(m2, n_p, nu_p), tau, shifted, budget) for n_p in range(m2))
            total += sign * phase * flow * block
    rhs = 1j * automorphy_S(tau, z, m2) / (m2 * math.sqrt(m2 + 1)) * total
    return Comparison(lhs, rhs)


def check_G_T(idx: FamilyIndex, tau: Number, z: Number, budget: TruncationBudget = DEFAULT_BUDGET) -> Comparison:
    """G(τ+1, z) = e^{πi(ν+½)²/(2m+1)} G(τ,z), integral m only."""
    _require_integral(idx.m2, "the T-rule of G")
    tau = check_tau(tau)
    phase = exp_pi_i(Fraction((2 * idx.nu + 1) ** 2, 4 * (idx.m2 + 1)))
    return Comparison(G_eval(idx, tau + 1, z, budget), phase * G_eval(idx, tau, z, budget))


def check_quotient_S(m2: int, nu: int, tau: Number, z: Number, budget: TruncationBudget = DEFAULT_BUDGET) -> Comparison:
    """
    Q_ν(−1/τ, z/τ) = i(−iτ)^{3/2}/√(2m+1) e^{πimz²/2τ} Σ_{ν'} (−1)^{ν+ν'} e^{−2πi(ν+½)(ν'+½)/(2m+1)} Q_{ν'}(τ,z)
    for Q_ν = −(−1)^ν η³ θ^{(−)}_{ν+½,m+½}/θ^{(−)}_{½,½}, the n-sum of G_{n,ν}.
    """
    tau = check_tau(tau)
    z = complex(z)
    lhs = theta_quotient(m2, nu, -1 / tau, z / tau, budget)
    total = 0j
    for nu_p in range(m2 + 1):
        sign = -1 if (nu + nu_p) % 2 else 1
        phase = exp_pi_i(Fraction(-(2 * nu + 1) * (2 * nu_p + 1), 2 * (m2 + 1)))
        total += sign * phase * theta_quotient(m2, nu_p, tau, z, budget)
    rhs = 1j * automorphy_S(tau, z, m2) / math.sqrt(m2 + 1) * total
    return Comparison(lhs, rhs)


# =============================================================================
# THE MOCK S-TRANSFORM OF g
# =============================================================================


def check_lemma51(
    m2: int,
    n: int,
    a: int,
    b: int,
    tau: Number,
    z: Number,
    budget: TruncationBudget = DEFAULT_BUDGET,
) -> Comparison:
    """
    F^{(a,b)}_{n,m}(−1/τ, z/τ) = (−iτ)^{1/2}/√(2m) e^{πinb/m} e^{πiaz/τ} e^{−πia²/2mτ} e^{πim(z−a/m)²/2τ}
        · g^{[m]}_{n,m}(−1/τ) · Σ_{k<2m} e^{−πi(n+a)k/m} θ_{k,m}(τ,z)
    """
    _require_integral(m2, "the S-transform of F at nu = m")
    tau = check_tau(tau)
    z = complex(z)
    idx = FamilyIndex(m2, n, m2 // 2)
    lhs = F_raw(idx, a, b, -1 / tau, z / tau, budget)
    m = m2 / 2.0
    prefactor = (
        principal_half_power(tau, Fraction(1, 2))
        / math.sqrt(m2)
        * exp_pi_i(Fraction(2 * n * b, m2))
        * cmath.exp(1j * math.pi * a * z / tau)
        * cmath.exp(-1j * math.pi * a * a / (m2 * tau))
        * cmath.exp(1j * math.pi * m * (z - a / m) ** 2 / (2 * tau))
    )
    theta_sum = sum(
        exp_pi_i(Fraction(-2 * (n + a) * k, m2)) * theta_eval(ThetaIndex(2 * k, m2), tau, z, budget)
        for k in range(m2)
    )
    return Comparison(lhs, prefactor * g_eval(idx, -1 / tau, budget) * theta_sum)


def g_S_assembly(m2: int, n: int, tau: Number, z: Number, budget: TruncationBudget = DEFAULT_BUDGET) -> complex:
    """−i(−1)^m τ/√(2m(2m+1)) Σ_{n',ν'} e^{πinn'/m} F^{[m](−n',0)}_{n',ν'}(τ,z)."""
    _require_integral(m2, "the S-transform of g")
    tau = check_tau(tau)
    z = complex(z)
    total = 0j
    for n_p in range(m2):
        phase = exp_pi_i(Fraction(2 * n * n_p, m2))
        for nu_p in range(m2 + 1):
            total += phase * F_eval(FamilyIndex(m2, n_p, nu_p), TorsorShift(-n_p, 0, m2), tau, z, budget)
    sign = -1 if (m2 // 2) % 2 else 1
    return -1j * sign * tau / math.sqrt(m2 * (m2 + 1)) * total


def check_lemma52(m2: int, n: int, tau: Number, z: Number, budget: TruncationBudget = DEFAULT_BUDGET) -> Comparison:
    """g^{[m]}_{n,m}(−1/τ) θ_{0,m}(τ,z) against the F assembly at τ."""
    tau = check_tau(tau)
    idx = FamilyIndex(m2, n, m2 // 2)
    lhs = g_eval(idx, -1 / tau, budget) * theta_eval(ThetaIndex(0, m2), tau, z, budget)
    return Comparison(lhs, g_S_assembly(m2, n, tau, z, budget))


def g_S_rhs(m2: int, n: int, tau: Number, z: Number, budget: TruncationBudget = DEFAULT_BUDGET) -> complex:
    """The F assembly divided by θ_{0,m}(τ,z); equals g^{[m]}_{n,m}(−1/τ) for every z."""
    theta = theta_eval(ThetaIndex(0, m2), tau, z, budget)
    return g_S_assembly(m2, n, tau, z, budget) / theta


def check_g_S(m2: int, n: int, tau: Number, z: Number, budget: TruncationBudget = DEFAULT_BUDGET) -> Comparison:
    """g^{[m]}_{n,m}(−1/τ) by direct series against the F assembly at τ."""
    tau = check_tau(tau)
    idx = FamilyIndex(m2, n, m2 // 2)
    return Comparison(g_eval(idx, -1 / tau, budget), g_S_rhs(m2, n, tau, z, budget))


def check_g_S_consistency(
    m2: int,
    n: int,
    tau: Number,
    z1: Number,
    z2: Number,
    budget: TruncationBudget = DEFAULT_BUDGET,
) -> Comparison:
    """The F assembly at two values of z."""
    return Comparison(g_S_rhs(m2, n, tau, z1, budget), g_S_rhs(m2, n, tau, z2, budget))


def g_S_eta_rhs(
    m2: int,
    n: int,
    tau: Number,
    budget: TruncationBudget = DEFAULT_BUDGET,
    radius: float = 1e-2,
    points: int = 8,
) -> complex:
    """
    η(mτ)²η(4mτ)²/η(2mτ)⁵ times the F assembly at z = 0.

    The n' = 0 terms of the assembly have poles at z = 0 that cancel in the
    sum, so its value there is taken as the mean over a circle around 0.
    """
    _require_integral(m2, "the S-transform of g")
    tau = check_tau(tau)
    m = m2 // 2
    nodes = radius * np.exp(2j * np.pi * np.arange(points) / points)
    at_zero = complex(np.mean([g_S_assembly(m2, n, tau, complex(z), budget) for z in nodes]))
    quotient = eta_eval(m * tau, budget) ** 2 * eta_eval(4 * m * tau, budget) ** 2 / eta_eval(2 * m * tau, budget) ** 5
    return quotient * at_zero


def check_g_S_eta(m2: int, n: int, tau: Number, budget: TruncationBudget = DEFAULT_BUDGET) -> Comparison:
    """g^{[m]}_{n,m}(−1/τ) against the η-quotient form of the F assembly at z = 0."""
    tau = check_tau(tau)
    idx = FamilyIndex(m2, n, m2 // 2)
    return Comparison(g_eval(idx, -1 / tau, budget), g_S_eta_rhs(m2, n, tau, budget))
