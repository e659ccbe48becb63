"""
Test: Core Numerics.
Nome powers, roots of unity, truncation windows, residuals and pole guards.
"""

import sys
import os

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

import math
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.domain.errors import BudgetExceededError, DomainError, PoleProximityError
from src.domain.indices import ModularPoint, TruncationBudget
from src.numerics.core import (
    Comparison,
    adaptive_precision,
    check_tau,
    choose_truncation,
    exp_pi_i,
    guard_denominators,
    nome,
    partial_fraction_average,
    principal_half_power,
    q_rational_power,
    quadratic_window,
    residual,
    unity_root,
)


def test_tau_must_lie_in_upper_half_plane():
    with pytest.raises(DomainError):
        check_tau(0.3)
    with pytest.raises(DomainError):
        nome(0.1 - 0.5j)


def test_modular_point_needs_upper_half_plane():
    assert ModularPoint(0.1 + 1.0j).z == 0j
    with pytest.raises(DomainError):
        ModularPoint(0.5 + 0j, 0.1j)


def test_nome_at_i():
    assert abs(nome(1j) - math.exp(-2 * math.pi)) < 1e-17


def test_nome_is_periodic():
    assert abs(nome(1 + 1j) - nome(1j)) < 1e-15


def test_rational_power_matches_mpmath():
    tau = 0.1 + 1.2j
    with mp.workdps(30):
        oracle = complex(mp.exp(2j * mp.pi * mp.mpf(-5) / 8 * mp.mpc(tau)))
    value = q_rational_power(tau, Fraction(-5, 8))
    assert abs(value - oracle) / abs(oracle) < 1e-15


def test_rational_power_of_zero_is_one():
    assert q_rational_power(0.3 + 0.8j, 0) == 1


def test_quarter_turns_are_exact():
    assert unity_root(4, 1) == 1j
    assert unity_root(8, 4) == -1
    assert unity_root(12, -3) == -1j
    assert exp_pi_i(Fraction(1, 2)) == 1j
    assert exp_pi_i(Fraction(3)) == -1


def test_unity_root_rejects_bad_order():
    with pytest.raises(DomainError):
        unity_root(0, 1)


def test_principal_half_power():
    assert abs(principal_half_power(1j, Fraction(1, 2)) - 1) < 1e-15
    tau = 0.4 + 0.9j
    assert abs(principal_half_power(tau, 1) - (-1j * tau)) < 1e-15
    square = principal_half_power(tau, Fraction(1, 2)) ** 2
    assert abs(square - (-1j * tau)) < 1e-14
    with pytest.raises(DomainError):
        principal_half_power(tau, Fraction(1, 3))


@settings(max_examples=1000, deadline=None)
@given(
    n=st.integers(min_value=1, max_value=12),
    data=st.data(),
    radius=st.floats(min_value=0.05, max_value=0.9),
    angle=st.floats(min_value=0.0, max_value=2 * math.pi),
)
def test_partial_fraction_average(n, data, radius, angle):
    k = data.draw(st.integers(min_value=0, max_value=n - 1))
    x = radius * complex(math.cos(angle), math.sin(angle))
    lhs, rhs = partial_fraction_average(n, k, x)
    assert residual(lhs, rhs) < 1e-12


def test_partial_fraction_pole_is_named():
    with pytest.raises(PoleProximityError) as info:
        partial_fraction_average(4, 1, 1.0)
    assert info.value.details["index"] == 0


def test_partial_fraction_preconditions():
    with pytest.raises(DomainError):
        partial_fraction_average(3, 3, 0.5)
    with pytest.raises(DomainError):
        partial_fraction_average(0, 0, 0.5)


@pytest.mark.parametrize("m,C,tau", [(1, 0, 1j), (0.5, 1.5, 0.2 + 0.6j), (2, 3, 0.05j), (1.5, 0, 0.3 + 2j)])
def test_truncation_meets_tail_bound(m, C, tau):
    budget = TruncationBudget()
    J = choose_truncation(m, tau, budget, linear=C)
    r = abs(nome(tau))
    tail = 2 * sum(r ** (m * j * j - C * j) for j in range(J + 1, J + 400))
    assert tail < budget.tol


def test_truncation_budget_exhausted():
    with pytest.raises(BudgetExceededError) as info:
        choose_truncation(1, 0.01j, TruncationBudget(j_max=3))
    assert info.value.details["allowed"] == 3


def test_truncation_rejects_nonpositive_quadratic():
    with pytest.raises(DomainError):
        choose_truncation(0, 1j)


def test_window_is_centred_on_vertex():
    window = quadratic_window(1.0, -6.0, 1j)
    assert 3 in window
    assert window[0] + window[-1] == 6


def test_window_keeps_extra_indices():
    window = quadratic_window(1.0, 0.0, 2j, extra=[40])
    assert 40 in window
    assert np.all(np.diff(window) > 0)


def test_residual_switches_to_relative():
    assert residual(1001.0, 1000.0) == pytest.approx(1e-3)
    assert residual(0.5 + 1e-9, 0.5) == pytest.approx(1e-9)


def test_comparison_worst_and_vectors():
    worst = Comparison.worst([Comparison(1.0, 1.0), Comparison(2.0, 2.5), Comparison(0.1, 0.1)])
    assert worst.abs_err == pytest.approx(0.5)
    assert Comparison.worst([]).residual == 0
    vector = Comparison.of_vectors([1, 2, 3], [1, 2, 3.5])
    assert vector.abs_err == pytest.approx(0.5)
    with pytest.raises(DomainError):
        Comparison.of_vectors([1, 2], [1])


def test_guard_denominators_names_first_bad_index():
    values = np.array([1.0, 0.5, 1e-12, 1e-13])
    with pytest.raises(PoleProximityError) as info:
        guard_denominators(values, np.array([-1, 0, 1, 2]), 1e-8, "Appell denominator")
    assert info.value.details["index"] == 1
    assert "Appell denominator" in str(info.value)


def test_adaptive_precision_deepens_on_cancellation():
    depths = []

    def compute(depth):
        depths.append(depth)
        return mp.mpf(10) ** -30, [mp.mpf(1)]

    value = adaptive_precision(compute, 1j, TruncationBudget(), depth=0.0)
    assert abs(value - 1e-30) < 1e-40
    assert len(depths) == 2
    assert depths[1] > 10


def test_adaptive_precision_single_pass_without_loss():
    depths = []

    def compute(depth):
        depths.append(depth)
        return mp.mpf(1) / 3, [mp.mpf(1) / 3]

    value = adaptive_precision(compute, 1j, TruncationBudget())
    assert abs(value - 1 / 3) < 1e-15
    assert depths == [0.0]
