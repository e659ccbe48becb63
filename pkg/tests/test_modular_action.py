"""
Test: Modular action.
S/T matrices of the invariant span, the S and T laws of G, F and the theta
quotient, and the mock S-transform of g at ν = m.
"""

import sys
import os

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

import math

import numpy as np
import pytest

from src.domain.errors import DomainError
from src.domain.indices import BasisIndex, FamilyIndex, basis_indices
from src.families import modular_action

TAU = 0.1 + 1.0j
Z = 0.13 + 0.04j
Z2 = -0.09 + 0.06j


# =============================================================================
# MATRICES
# =============================================================================


def test_basis_order_is_lexicographic():
    basis = basis_indices(2)
    assert len(basis) == 2 * 3 * 2
    assert basis == sorted(basis)
    assert basis[0] == BasisIndex(0, 0, 0)


def test_S_matrix_shape_and_modulus():
    S = modular_action.build_S_matrix(2)
    assert S.size == 12
    assert S.entries.shape == (12, 12)
    assert np.allclose(np.abs(S.entries), 1 / (2 * math.sqrt(3)))


@pytest.mark.parametrize("m2", [1, 2, 3, 4])
def test_S_matrix_is_unitary(m2):
    assert modular_action.check_S_gram(m2).residual < 1e-10


@pytest.mark.parametrize("m2", [1, 2, 3, 4])
def test_S_squared_is_signed_reflection(m2):
    assert modular_action.check_S_squared_matrix(m2).residual < 1e-10


@pytest.mark.parametrize("m2", [1, 2, 3])
def test_reflection_is_an_involution(m2):
    P = modular_action.reflection_permutation(m2)
    assert np.array_equal(P @ P, np.eye(P.shape[0]))


@pytest.mark.parametrize("m2", [2, 4])
def test_T_matrix_is_unimodular_diagonal(m2):
    T = modular_action.build_T_matrix(m2)
    assert T.is_diagonal()
    assert np.allclose(np.abs(np.diag(T.entries)), 1.0)
    assert modular_action.check_T_inverse(m2).residual < 1e-12


def test_T_matrix_needs_integral_level():
    with pytest.raises(DomainError):
        modular_action.build_T_matrix(1)
    with pytest.raises(DomainError):
        modular_action.build_T_inverse_matrix(3)


def test_matrix_document_shape():
    document = modular_action.build_T_matrix(2).to_dict()
    assert document["kind"] == "T"
    assert document["m"] == "1"
    assert document["weight"] == "3/2"
    assert len(document["basis"]) == 12
    assert len(document["entries"][0][0]) == 2
    assert modular_action.build_S_matrix(1).to_dict()["m"] == "1/2"


# =============================================================================
# VALUE VECTORS
# =============================================================================


@pytest.mark.parametrize("m2", [1, 2])
def test_S_action_on_value_vector(m2):
    assert modular_action.check_S_action(m2, TAU, Z).residual < 1e-6


def test_T_action_on_value_vector():
    assert modular_action.check_T_action(2, TAU, Z).residual < 1e-9


def test_S_round_trip_reflects_z():
    assert modular_action.check_S_squared(1, TAU, Z).residual < 1e-6


def test_ST_cubed_returns_to_start():
    assert modular_action.check_ST_cubed(2, TAU, Z).residual < 1e-5


# =============================================================================
# G, THE QUOTIENT, g
# =============================================================================


@pytest.mark.parametrize("idx", [FamilyIndex(1, 0, 0), FamilyIndex(2, 1, 1), FamilyIndex(3, 2, 3)], ids=str)
def test_G_S_rule(idx):
    assert modular_action.check_G_S(idx, TAU, Z).residual < 1e-7


@pytest.mark.parametrize("idx", [FamilyIndex(2, 0, 0), FamilyIndex(2, 1, 2), FamilyIndex(4, 3, 1)], ids=str)
def test_G_T_rule(idx):
    assert modular_action.check_G_T(idx, TAU, Z).residual < 1e-10


def test_G_T_rule_needs_integral_level():
    with pytest.raises(DomainError):
        modular_action.check_G_T(FamilyIndex(3, 0, 0), TAU, Z)


@pytest.mark.parametrize("m2", [1, 2, 3])
def test_quotient_S_rule(m2):
    for nu in range(m2 + 1):
        assert modular_action.check_quotient_S(m2, nu, TAU, Z).residual < 1e-7


@pytest.mark.parametrize("a,b", [(0, 0), (1, 1)])
def test_F_S_transform_at_nu_equal_m(a, b):
    for n in range(2):
        assert modular_action.check_lemma51(2, n, a, b, TAU, Z).residual < 1e-7


@pytest.mark.parametrize("n", [0, 1])
def test_g_S_transform(n):
    assert modular_action.check_lemma52(2, n, TAU, Z).residual < 1e-7
    assert modular_action.check_g_S(2, n, TAU, Z).residual < 1e-7
    assert modular_action.check_g_S_consistency(2, n, TAU, Z, Z2).residual < 1e-10


def test_g_S_transform_needs_integral_level():
    with pytest.raises(DomainError):
        modular_action.g_S_assembly(1, 0, TAU, Z)


@pytest.mark.parametrize("n", [0, 1])
def test_g_S_transform_eta_quotient_form(n):
    assert modular_action.check_g_S_eta(2, n, TAU).residual < 1e-7
    at_zero = modular_action.g_S_eta_rhs(2, n, TAU)
    assert abs(at_zero - modular_action.g_S_rhs(2, n, TAU, Z)) < 1e-7


def test_g_S_eta_quotient_form_at_level_two():
    assert modular_action.check_g_S_eta(4, 1, 0.05 + 1.2j).residual < 1e-7
    with pytest.raises(DomainError):
        modular_action.g_S_eta_rhs(3, 0, TAU)
