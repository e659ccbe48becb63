"""
Test: Theta.
θ^{(±)}_{n,m}, the Mumford thetas and η against mpmath oracles, plus the
quasi-periodicity and modular laws.
"""

import sys
import os

sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

import math

import mpmath as mp
import pytest

from src.domain.errors import BudgetExceededError, DomainError
from src.domain.indices import Sign, ThetaIndex, ThetaKind, TruncationBudget
from src.numerics import theta

POINTS = [(1j, 0.1 + 0.05j), (0.3 + 0.8j, -0.2 + 0.1j), (-0.4 + 1.3j, 0.35 - 0.15j)]

INDICES = [
    ThetaIndex(0, 2, Sign.PLUS),
    ThetaIndex(1, 2, Sign.MINUS),
    ThetaIndex(1, 1, Sign.MINUS),
    ThetaIndex(3, 3, Sign.PLUS),
    ThetaIndex(-2, 4, Sign.MINUS),
]


def direct_theta(idx: ThetaIndex, tau: complex, z: complex) -> complex:
    """Plain bilateral sum over |j| <= 40 at 30 digits."""
    with mp.workdps(30):
        m = mp.mpf(idx.m2) / 2
        shift = mp.mpf(idx.n2) / (2 * idx.m2)
        total = mp.mpc(0)
        for j in range(-40, 41):
            x = j + shift
            term = mp.exp(2j * mp.pi * m * x * (x * mp.mpc(tau) + mp.mpc(z)))
            total += -term if idx.sign is Sign.MINUS and j % 2 else term
        return complex(total)


def jacobi(which: int, tau: complex, z: complex) -> complex:
    with mp.workdps(30):
        return complex(mp.jtheta(which, mp.pi * mp.mpc(z), mp.exp(1j * mp.pi * mp.mpc(tau))))


@pytest.mark.parametrize("idx", INDICES, ids=lambda i: i.label())
@pytest.mark.parametrize("tau,z", POINTS)
def test_theta_matches_direct_sum(idx, tau, z):
    assert abs(theta.theta_eval(idx, tau, z) - direct_theta(idx, tau, z)) < 1e-12


@pytest.mark.parametrize("idx", INDICES, ids=lambda i: i.label())
def test_mpmath_backend_agrees(idx):
    tau, z = 0.2 + 0.9j, 0.1 - 0.05j
    with mp.workdps(25):
        value = complex(theta.theta_eval_mp(idx, tau, z))
    assert abs(value - theta.theta_eval(idx, tau, z)) < 1e-12


def test_theta_at_i_against_jacobi_theta():
    oracle = complex(mp.jtheta(3, 0, mp.exp(-2 * mp.pi)))
    value = theta.theta_eval(ThetaIndex(0, 2), 1j)
    assert abs(value - oracle) < 1e-14
    assert abs(value - 1.00373487) < 1e-8


def test_eta_at_i():
    oracle = math.gamma(0.25) / (2 * math.pi**0.75)
    assert abs(theta.eta_eval(1j) - oracle) < 1e-14
    assert abs(theta.eta_eval(1j) - 0.7682254) < 1e-7


@pytest.mark.parametrize("tau", [1j, 0.25 + 0.5j, -0.45 + 2.0j])
def test_eta_matches_q_pochhammer(tau):
    with mp.workdps(25):
        oracle = complex(theta.eta_mp(tau))
    assert abs(theta.eta_eval(tau) - oracle) < 1e-13


def test_eta_budget_exhausted_near_real_axis():
    with pytest.raises(BudgetExceededError):
        theta.eta_eval(0.001j, TruncationBudget(j_max=10))


@pytest.mark.parametrize("kind,which", [("00", 3), ("01", 4), ("10", 2)])
@pytest.mark.parametrize("tau,z", POINTS)
def test_mumford_even_kinds(kind, which, tau, z):
    assert abs(theta.mumford_eval(kind, tau, z) - jacobi(which, tau, z)) < 1e-13


@pytest.mark.parametrize("tau,z", POINTS)
def test_mumford_odd_kind_sign(tau, z):
    assert abs(theta.mumford_eval(ThetaKind.K11, tau, z) + jacobi(1, tau, z)) < 1e-13


def test_structural_zeros():
    assert theta.theta_eval(ThetaIndex(1, 1, Sign.MINUS), 0.3 + 0.7j, 0) == 0
    assert theta.theta_eval(ThetaIndex(3, 1, Sign.MINUS), 0.3 + 0.7j, 0) == 0
    assert theta.mumford_eval("11", 1j, 0) == 0
    assert not theta.vanishes_at_origin(ThetaIndex(1, 1, Sign.PLUS))
    assert not theta.vanishes_at_origin(ThetaIndex(0, 2, Sign.MINUS))


def test_z_derivative_matches_central_difference():
    idx = ThetaIndex(1, 3, Sign.MINUS)
    tau, z, h = 0.1 + 1.1j, 0.07 + 0.02j, 1e-5
    numeric = (theta.theta_eval(idx, tau, z + h) - theta.theta_eval(idx, tau, z - h)) / (2 * h)
    exact = theta.theta_eval(idx, tau, z, derivative=1)
    assert abs(numeric - exact) / abs(exact) < 1e-6


def test_negative_derivative_rejected():
    with pytest.raises(DomainError):
        theta.theta_eval(ThetaIndex(0, 2), 1j, 0, derivative=-1)


def test_level_must_be_positive():
    with pytest.raises(DomainError):
        ThetaIndex(0, 0)


@pytest.mark.parametrize("idx", INDICES, ids=lambda i: i.label())
@pytest.mark.parametrize("c,b", [(1, 1), (-1, 2), (2, 0)])
def test_quasi_periodicity(idx, c, b):
    assert theta.theta_translate_check(idx, 0.15 + 1.2j, 0.05 + 0.03j, c, b).residual < 1e-10


@pytest.mark.parametrize("nu", [-1, 1, 2])
def test_mumford_translate(nu):
    assert theta.mumford_translate_check(0.2 + 1.1j, 0.13 - 0.04j, nu).residual < 1e-10


@pytest.mark.parametrize("tau,z", POINTS)
def test_odd_theta_anchor(tau, z):
    assert theta.mumford_anchor_check(tau, z).residual < 1e-11


@pytest.mark.parametrize("tau", [1j, 0.3 + 0.7j])
def test_gauss_eta_quotient(tau):
    assert theta.mumford_gauss_check(tau).residual < 1e-10


@pytest.mark.parametrize("idx", INDICES, ids=lambda i: i.label())
def test_S_transformation(idx):
    assert theta.theta_S_check(idx, 0.1 + 1.1j, 0.08 + 0.02j).residual < 1e-8


@pytest.mark.parametrize("idx", INDICES, ids=lambda i: i.label())
def test_T_transformation(idx):
    assert theta.theta_T_check(idx, -0.3 + 0.9j, 0.1 - 0.05j).residual < 1e-10


@pytest.mark.parametrize("tau", [1j, 0.4 + 0.7j, -0.2 + 1.6j])
def test_eta_modular_laws(tau):
    assert theta.eta_T_check(tau).residual < 1e-12
    assert theta.eta_S_check(tau).residual < 1e-10
