"""
Test: Exact q-expansions.
QExpansion arithmetic, the η/θ/Gauss expansions, region certification and
the exact specializations of h and F.
"""

import sys
import os

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from fractions import Fraction

import pytest

from src.domain.errors import (
    ConductorOverflowError,
    CutoffInsufficientError,
    DomainError,
    SeriesDivisionError,
    SpecializationPoleError,
)
from src.domain.indices import FamilyIndex, Sign, ThetaIndex, ThetaKind
from src.numerics import qseries, theta
from src.numerics.qseries import QExpansion

F = Fraction


# =============================================================================
# QEXPANSION
# =============================================================================


def test_rejects_zero_coefficients():
    with pytest.raises(DomainError):
        QExpansion({F(1): F(0)}, 5)


def test_rejects_exponent_at_order():
    with pytest.raises(DomainError):
        QExpansion({F(5): F(1)}, 5)


def test_rejects_exponent_off_lattice():
    with pytest.raises(DomainError):
        QExpansion({F(1, 3): F(1)}, 5, conductor=2)


def test_conductor_overflow():
    with pytest.raises(ConductorOverflowError):
        QExpansion({}, 1, conductor=2**21)
    third = QExpansion.monomial(F(1, 3), 1, 5)
    with pytest.raises(ConductorOverflowError):
        third.shift(F(1, 2**20))


def test_from_terms_cancels_and_drops():
    series = QExpansion.from_terms([(0, 1), (1, 2), (1, -2), (7, 1)], 5)
    assert series.terms == {F(0): F(1)}


def test_series_ring_operations():
    one_plus = QExpansion.from_terms([(0, 1), (1, 1)], 10)
    one_minus = QExpansion.from_terms([(0, 1), (1, -1)], 10)
    assert qseries.series_mul(one_plus, one_minus).terms == {F(0): 1, F(2): -1}
    assert qseries.series_add(one_plus, QExpansion.zero(10)) == one_plus
    assert qseries.series_scale(one_minus, F(1, 2)).terms == {F(0): F(1, 2), F(1): F(-1, 2)}
    assert qseries.series_scale(one_plus, one_minus) == qseries.series_mul(one_plus, one_minus)
    quotient = qseries.series_div(QExpansion.from_terms([(0, 1), (2, -1)], 10), one_minus)
    assert quotient.terms == {F(0): 1, F(1): 1}


def test_series_product_of_shifted_factors():
    factor = QExpansion.from_terms([(F(1, 24), 1), (F(25, 24), -1)], F(49, 24), conductor=24)
    square = qseries.series_mul(factor, factor)
    assert square.order == F(25, 12)
    assert square.terms == {F(1, 12): 1, F(13, 12): -2}
    assert square.valuation() == F(1, 12)


def test_geometric_series_by_division():
    one = QExpansion.one(10)
    geometric = one.div(QExpansion.from_terms([(0, 1), (1, -1)], 10))
    assert geometric.order == 10
    assert geometric.terms == {F(k): F(1) for k in range(10)}
    back = geometric.mul(QExpansion.from_terms([(0, 1), (1, -1)], 10))
    assert back.same_terms(one)


def test_division_by_zero_series():
    with pytest.raises(SeriesDivisionError):
        QExpansion.one(3).div(QExpansion.zero(3))


def test_shift_and_substitute_move_the_order():
    series = QExpansion.from_terms([(0, 1), (1, 3)], 4)
    shifted = series.shift(F(1, 2))
    assert shifted.order == F(9, 2)
    assert shifted.coefficient(F(3, 2)) == 3
    doubled = series.substitute(2)
    assert doubled.order == 8
    assert doubled.coefficient(2) == 3
    with pytest.raises(DomainError):
        series.substitute(0)


def test_coefficient_beyond_order():
    with pytest.raises(DomainError):
        QExpansion.one(2).coefficient(2)


def test_product_order_tracks_valuations():
    a = QExpansion.from_terms([(F(1, 2), 1)], 3, conductor=2)
    b = QExpansion.from_terms([(1, 1), (2, 1)], 4)
    product = a.mul(b)
    assert product.order == 4
    assert product.terms == {F(3, 2): F(1), F(5, 2): F(1)}


def test_document_roundtrip_keeps_terms():
    series = qseries.eta_qexp(1, 10)
    assert QExpansion.from_document(series.to_document()) == series


# =============================================================================
# ETA, THETA, GAUSS
# =============================================================================


def test_eta_expansion_terms():
    series = qseries.eta_qexp(1, 6)
    assert series.terms == {F(1, 24): 1, F(25, 24): -1, F(49, 24): -1, F(121, 24): 1}


def test_eta_expansion_scale():
    series = qseries.eta_qexp(F(1, 2), 2)
    assert series.valuation() == F(1, 48)
    assert series.coefficient(F(25, 48)) == -1
    with pytest.raises(DomainError):
        qseries.eta_qexp(0, 2)


def test_eta_expansion_evaluates_to_eta():
    tau = 0.1 + 0.9j
    assert abs(qseries.eta_qexp(1, 40).evaluate(tau) - theta.eta_eval(tau)) < 1e-13


def test_theta_expansion_matches_evaluation():
    idx = ThetaIndex(1, 3, Sign.MINUS)
    tau = 0.2 + 0.8j
    series = qseries.theta_qexp(idx, 30)
    assert abs(series.evaluate(tau) - theta.theta_eval(idx, tau, 0)) < 1e-13


def test_theta_expansion_at_level_one():
    series = qseries.theta_qexp(ThetaIndex(0, 2), 10)
    assert series.terms == {F(0): 1, F(1): 2, F(4): 2, F(9): 2}


def test_theta_expansion_keeps_terms_right_of_the_start():
    # j = -1 gives 9/16, j = 0 gives 1/16: the start index sits left of the vertex
    assert qseries.theta_qexp(ThetaIndex(1, 2, Sign.PLUS), F(1, 2)).terms == {F(1, 16): 1}
    assert qseries.theta_qexp(ThetaIndex(1, 2, Sign.PLUS), 1).terms == {F(1, 16): 1, F(9, 16): 1}
    assert qseries.theta_qexp(ThetaIndex(1, 2, Sign.MINUS), 1).terms == {F(1, 16): 1, F(9, 16): -1}


def test_configured_conductor_bound_is_enforced():
    with pytest.raises(DomainError):
        qseries.theta_qexp(ThetaIndex(0, 4), 5, max_conductor=24)
    with pytest.raises(ConductorOverflowError):
        qseries.g_qexp(FamilyIndex(2, 0, 1), 3, max_conductor=24 - 1)
    assert qseries.theta_qexp(ThetaIndex(0, 2), 5, max_conductor=24).conductor == 16
    with pytest.raises(ConductorOverflowError):
        qseries.h_spec_qexp(FamilyIndex(2, 1, 0), 1, 5, max_conductor=3)


def test_mumford_expansion_kinds():
    even = qseries.mumford_qexp(ThetaKind.K00, 2, 0, 5)
    odd = qseries.mumford_qexp(ThetaKind.K01, 2, 0, 5)
    assert even.terms == {F(0): 1, F(1, 2): 2, F(2): 2, F(9, 2): 2}
    assert odd.terms == {F(0): 1, F(1, 2): -2, F(2): 2, F(9, 2): -2}
    with pytest.raises(DomainError):
        qseries.mumford_qexp(ThetaKind.K11, 2, 0, 5)


@pytest.mark.parametrize("m2", [1, 2, 3, 4])
def test_gauss_quotient_is_identical(m2):
    lhs, rhs = qseries.gauss_quotient_check(m2, 20)
    assert lhs == rhs


# =============================================================================
# INDEFINITE FAMILIES
# =============================================================================


def test_g_leading_term_after_cancellation():
    series = qseries.g_qexp(FamilyIndex(2, 0, 1), 3)
    assert series.valuation() == F(3, 8)
    assert series.coefficient(F(3, 8)) == 1
    assert series.coefficient(F(-5, 8)) == 0


def test_g_exponents_are_bounded_below():
    idx = FamilyIndex(3, 1, 2)
    series = qseries.g_qexp(idx, 8)
    assert series.valuation() >= qseries.g_lower_bound(idx)


def test_g_cutoff_insufficient():
    idx = FamilyIndex(2, 1, 0)
    certified = qseries.g_certified_cutoff(idx, 10)
    assert certified >= 1
    with pytest.raises(CutoffInsufficientError):
        qseries.g_qexp(idx, 10, J=certified - 1)
    assert qseries.g_qexp(idx, 10, J=certified + 3) == qseries.g_qexp(idx, 10)


def test_certified_extent_rejects_divergent_branch():
    with pytest.raises(DomainError):
        qseries.certified_extent([(F(0), F(-1), F(0))], 5, +1)
    assert qseries.certified_extent([(F(1), F(0), F(10))], 5, +1) == 0


@pytest.mark.parametrize("m2", [2, 3, 4])
def test_h_specialization_two_ways(m2):
    for n in range(m2):
        for nu in (0, 1):
            idx = FamilyIndex(m2, n, nu)
            for a in range(1, m2):
                direct, region = qseries.h_spec_qexp(idx, a, 10)
                assert direct.same_terms(region), (idx, a)


@pytest.mark.parametrize("a", [0, 4, -4])
def test_h_specialization_pole(a):
    with pytest.raises(SpecializationPoleError):
        qseries.h_direct_qexp(FamilyIndex(4, 1, 0), a, 5)


def test_region_form_needs_interior_shift():
    with pytest.raises(DomainError):
        qseries.region_bracket_qexp(FamilyIndex(4, 1, 0), 5, 5)


def test_f_zero_expansion_is_finite_to_order():
    series = qseries.f_zero_qexp(FamilyIndex(2, 0, 1), 1, 6)
    assert series.order == 6
    assert not series.is_zero()
