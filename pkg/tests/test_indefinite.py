"""
Test: Indefinite theta family.
g, h, G and F: the quotient form, quasi-periodicity, reflection, torsor
laws, exact specializations and the Φ_1 to theta quotient identities.
"""

import sys
import os

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

import mpmath as mp
import pytest

from src.domain.errors import DomainError, PoleProximityError
from src.domain.indices import DEFAULT_BUDGET, FamilyIndex, TorsorShift, family_indices
from src.families import indefinite

TAU = 0.1 + 1.0j
Z = 0.17 + 0.05j
Z2 = -0.11 + 0.03j

LEVELS = [1, 2, 3]


def all_indices():
    return [idx for m2 in LEVELS for idx in family_indices(m2)]


def direct_h(idx: FamilyIndex, tau: complex, z: complex) -> complex:
    with mp.workdps(30):
        tau, z = mp.mpc(tau), mp.mpc(z)
        m = mp.mpf(idx.m2) / 2
        total = mp.mpc(0)
        for j in range(-30, 31):
            numerator = mp.exp(2j * mp.pi * (m * j * z + idx.n * z / 2 + (m * j * j + idx.n * (j + idx.nu)) * tau))
            denominator = 1 - mp.exp(2j * mp.pi * (m * z + idx.m2 * (j + idx.nu) * tau))
            total += numerator / denominator
        return complex(total)


def test_family_index_bounds():
    with pytest.raises(DomainError):
        FamilyIndex(2, 2, 0)
    with pytest.raises(DomainError):
        FamilyIndex(2, 0, 3)
    assert len(family_indices(2)) == 2 * 3


def test_reflected_index():
    assert FamilyIndex(4, 1, 1).reflected() == FamilyIndex(4, 3, 3)
    assert FamilyIndex(3, 0, 0).reflected() == FamilyIndex(3, 0, 3)


@pytest.mark.parametrize("idx", [FamilyIndex(2, 1, 0), FamilyIndex(3, 2, 1), FamilyIndex(4, 0, 4)], ids=str)
def test_h_matches_direct_sum(idx):
    assert abs(indefinite.h_eval(idx, TAU, Z) - direct_h(idx, TAU, Z)) < 1e-11


def test_h_pole_is_guarded():
    idx = FamilyIndex(2, 0, 1)
    # 1 − e^{2πimz} q^{2m(j+ν)} vanishes at z = −2ντ, j = 0
    with pytest.raises(PoleProximityError):
        indefinite.h_eval(idx, TAU, -2 * TAU)


def test_g_series_and_evaluation_agree():
    idx = FamilyIndex(2, 0, 1)
    series = indefinite.g_series(idx, TAU)
    assert abs(series.evaluate(TAU) - indefinite.g_eval(idx, TAU)) < 1e-14
    assert series.coefficient(series.valuation()) == 1


@pytest.mark.parametrize("idx", all_indices(), ids=str)
def test_quotient_form(idx):
    assert indefinite.check_quotient_form(idx, TAU, Z).residual < 1e-8


@pytest.mark.parametrize("m2", LEVELS)
def test_sum_over_n_is_theta_quotient(m2):
    for nu in range(m2 + 1):
        assert indefinite.check_G_sum(m2, nu, TAU, Z).residual < 1e-8


@pytest.mark.parametrize("idx", [FamilyIndex(2, 1, 0), FamilyIndex(3, 2, 2), FamilyIndex(4, 3, 1)], ids=str)
def test_translation_and_elliptic(idx):
    assert indefinite.check_translation(idx, 1, TAU, Z).residual < 1e-10
    assert indefinite.check_elliptic(idx, 1, 1, TAU, Z).residual < 1e-10
    assert indefinite.check_elliptic(idx, -1, 2, TAU, Z).residual < 1e-10


@pytest.mark.parametrize("idx", all_indices(), ids=str)
def test_reflection(idx):
    assert indefinite.check_reflection(idx, TAU, Z).residual < 1e-10


@pytest.mark.parametrize("idx", [FamilyIndex(2, 1, 1), FamilyIndex(3, 0, 2)], ids=str)
def test_torsor_laws(idx):
    assert indefinite.check_torsor(idx, 1, 0, 1, TAU, Z).residual < 1e-10
    assert indefinite.check_F_reflection(idx, 1, TAU, Z).residual < 1e-10


def test_torsor_modulus_must_match():
    with pytest.raises(DomainError):
        indefinite.F_eval(FamilyIndex(2, 0, 0), TorsorShift(1, 0, 3), TAU, Z)


@pytest.mark.parametrize("idx", [FamilyIndex(2, 1, 0), FamilyIndex(3, 1, 2), FamilyIndex(4, 2, 1)], ids=str)
def test_h_specialization(idx):
    for a in range(1, idx.m2):
        assert indefinite.check_h_specialization(idx, a, TAU).residual < 1e-9


@pytest.mark.parametrize("idx", [FamilyIndex(2, 0, 1), FamilyIndex(3, 2, 0)], ids=str)
def test_F_at_zero_against_exact_assembly(idx):
    for a in range(1, idx.m2):
        assert indefinite.F_zero_qexp_check(idx, a, TAU).residual < 1e-9


@pytest.mark.parametrize("m2", [2, 4])
def test_g_at_nu_equal_m(m2):
    for n in range(m2):
        assert indefinite.check_g_quotient(m2, n, TAU, Z).residual < 1e-9
        assert indefinite.check_g_quotient_z_independence(m2, n, TAU, Z, Z2).residual < 1e-9


def test_g_quotient_needs_integral_level():
    with pytest.raises(DomainError):
        indefinite.g_quotient_eval(3, 0, TAU, Z)


@pytest.mark.parametrize("m2", [1, 2])
@pytest.mark.parametrize("variant", [indefinite.REGION_K, indefinite.REGION_RP])
def test_phi_region_identity(m2, variant):
    assert indefinite.check_lemma31(m2, 1, variant, TAU, Z, Z2).residual < 1e-7


def test_phi_region_forms_agree():
    assert indefinite.check_lemma31_bridge(2, 1, TAU, Z, Z2).residual < 1e-8


def test_phi_region_identity_preconditions():
    with pytest.raises(DomainError):
        indefinite.check_lemma31(2, 2, indefinite.REGION_K, TAU, Z, Z2)
    with pytest.raises(DomainError):
        indefinite.lemma31_lhs(2, 1, "region-x", TAU, Z, Z2)


@pytest.mark.parametrize("a,b,c,d", [(1, 0, 0, 0), (0, 1, 0.5, 0.5), (1, -1, 0.3, -0.2), (0.4, 0.1, 0.25, 0)])
def test_phi_region_identity_on_lattice_shifts(a, b, c, d):
    assert indefinite.check_lemma32(2, 1, a, b, c, d, TAU, Z).residual < 1e-7


@pytest.mark.parametrize("m2", [1, 2])
def test_lattice_shift_form_matches_general_form(m2):
    a, b, c, d = 1, -1, 0.3, -0.2
    shifted = indefinite.check_lemma32(m2, 3, a, b, c, d, TAU, Z)
    z1 = Z + a * TAU + c
    z2 = Z + b * TAU + d
    general = indefinite.lemma31_lhs(m2, 3, indefinite.REGION_RP, TAU, z1, z2)
    assert abs(shifted.lhs - general) <= 1e-8 * max(1.0, abs(general))
    assert abs(shifted.rhs - indefinite.lemma31_rhs(m2, 3, TAU, z1, z2, DEFAULT_BUDGET)) <= 1e-9 * max(1.0, abs(shifted.rhs))


def test_lattice_shift_form_needs_half_odd_s():
    with pytest.raises(DomainError):
        indefinite.check_lemma32(2, 2, 1, 0, 0, 0, TAU, Z)


@pytest.mark.parametrize("m2", [1, 2])
def test_phi_plus_g_is_theta_quotient(m2):
    for nu in range(m2 + 1):
        assert indefinite.check_lemma33(m2, nu, TAU, Z).residual < 1e-7
