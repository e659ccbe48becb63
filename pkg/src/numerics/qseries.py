"""
Exact q-expansions.
Formal series in q with rational exponents and rational coefficients,
exact to a truncation order, plus the expansions of η, θ, the Mumford
thetas, the Gauss quotient and the indefinite families g and h.
"""

import math
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import mpmath as mp
import numpy as np

from src.domain.errors import (
    ConductorOverflowError,
    CutoffInsufficientError,
    DomainError,
    SeriesDivisionError,
    SpecializationPoleError,
)
from src.domain.indices import FamilyIndex, Sign, ThetaIndex, ThetaKind
from src.numerics.core import check_tau, mp_exp_2pi_i, mp_rational

Rational = Union[int, Fraction]

MAX_CONDUCTOR = 1 << 20


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


# =============================================================================
# QEXPANSION
# =============================================================================


class QExpansion:
    """
    Σ c_e q^e exact for every exponent below `order`.

    Exponents live in (1/conductor)Z; no stored coefficient is zero.
    """

    __slots__ = ("_terms", "order", "conductor", "max_conductor")

    def __init__(
        self,
        terms: Dict[Fraction, Fraction],
        order: Rational,
        conductor: int = 1,
        max_conductor: int = MAX_CONDUCTOR,
    ):
        order = Fraction(order)
        if conductor < 1:
            raise DomainError(f"conductor must be >= 1, got {conductor}")
        if conductor > max_conductor:
            raise ConductorOverflowError(
                f"conductor {conductor} exceeds the bound {max_conductor}",
                conductor=conductor,
            )
        cleaned: Dict[Fraction, Fraction] = {}
        for exponent, coefficient in terms.items():
            exponent, coefficient = Fraction(exponent), Fraction(coefficient)
            if coefficient == 0:
                raise DomainError(f"zero coefficient stored at exponent {exponent}")
            if exponent >= order:
                raise DomainError(f"exponent {exponent} is not below order {order}")
            if (exponent * conductor).denominator != 1:
                raise DomainError(
                    f"exponent {exponent} is outside (1/{conductor})Z"
                )
            cleaned[exponent] = coefficient
        self._terms = dict(sorted(cleaned.items()))
        self.order = order
        self.conductor = conductor
        self.max_conductor = max_conductor

    # ------------------------------------------------------------------ build

    @classmethod
    def from_terms(
        cls,
        pairs: Iterable[Tuple[Rational, Rational]],
        order: Rational,
        conductor: int = 1,
        max_conductor: int = MAX_CONDUCTOR,
    ) -> "QExpansion":
        """Accumulate (exponent, coefficient) pairs; drops zeros and exponents >= order."""
        order = Fraction(order)
        acc: Dict[Fraction, Fraction] = {}
        for exponent, coefficient in pairs:
            exponent = Fraction(exponent)
            if exponent >= order:
                continue
            acc[exponent] = acc.get(exponent, Fraction(0)) + Fraction(coefficient)
        acc = {e: c for e, c in acc.items() if c != 0}
        return cls(acc, order, conductor, max_conductor)

    @classmethod
    def zero(cls, order: Rational, conductor: int = 1) -> "QExpansion":
        return cls({}, order, conductor)

    @classmethod
    def one(cls, order: Rational) -> "QExpansion":
        return cls.monomial(0, 1, order)

    @classmethod
    def monomial(cls, exponent: Rational, coefficient: Rational, order: Rational) -> "QExpansion":
        exponent = Fraction(exponent)
        return cls.from_terms([(exponent, coefficient)], order, exponent.denominator)

    # --------------------------------------------------------------- queries

    @property
    def terms(self) -> Dict[Fraction, Fraction]:
        return dict(self._terms)

    def items(self) -> List[Tuple[Fraction, Fraction]]:
        return list(self._terms.items())

    def coefficient(self, exponent: Rational) -> Fraction:
        exponent = Fraction(exponent)
        if exponent >= self.order:
            raise DomainError(f"exponent {exponent} is beyond the order {self.order}")
        return self._terms.get(exponent, Fraction(0))

    def valuation(self) -> Optional[Fraction]:
        """Smallest exponent with a nonzero coefficient, None for the zero series."""
        return next(iter(self._terms), None)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QExpansion):
            return NotImplemented
        return self._terms == other._terms and self.order == other.order

    def __repr__(self) -> str:
        shown = " + ".join(f"({c})q^({e})" for e, c in list(self._terms.items())[:6])
        more = " + ..." if len(self._terms) > 6 else ""
        return f"QExpansion({shown or '0'}{more} + O(q^{self.order}))"

    def same_terms(self, other: "QExpansion") -> bool:
        """Termwise equality below the common order."""
        common = min(self.order, other.order)
        return self.truncate(common)._terms == other.truncate(common)._terms

    # ------------------------------------------------------------ operations

    def _bounded(self, conductor: int) -> int:
        if conductor > self.max_conductor:
            raise ConductorOverflowError(
                f"conductor {conductor} exceeds the bound {self.max_conductor}", conductor=conductor
            )
        return conductor

    def truncate(self, order: Rational) -> "QExpansion":
        order = min(Fraction(order), self.order)
        kept = {e: c for e, c in self._terms.items() if e < order}
        return QExpansion(kept, order, self.conductor, self.max_conductor)

    def negate(self) -> "QExpansion":
        return self.scale(-1)

    def scale(self, factor: Rational) -> "QExpansion":
        factor = Fraction(factor)
        if factor == 0:
            return QExpansion({}, self.order, self.conductor, self.max_conductor)
        kept = {e: c * factor for e, c in self._terms.items()}
        return QExpansion(kept, self.order, self.conductor, self.max_conductor)

    def shift(self, exponent: Rational) -> "QExpansion":
        """Multiply by q^exponent."""
        exponent = Fraction(exponent)
        conductor = self._bounded(_lcm(self.conductor, exponent.denominator))
        kept = {e + exponent: c for e, c in self._terms.items()}
        return QExpansion(kept, self.order + exponent, conductor, self.max_conductor)

    def substitute(self, k: Rational) -> "QExpansion":
        """q -> q^k for a positive rational k."""
        k = Fraction(k)
        if k <= 0:
            raise DomainError(f"substitution exponent must be positive, got {k}")
        conductor = self._bounded(self.conductor * k.denominator)
        kept = {e * k: c for e, c in self._terms.items()}
        return QExpansion(kept, self.order * k, conductor, self.max_conductor)

    def add(self, other: "QExpansion") -> "QExpansion":
        order = min(self.order, other.order)
        conductor = self._bounded(_lcm(self.conductor, other.conductor))
        pairs = [(e, c) for e, c in self._terms.items()]
        pairs += [(e, c) for e, c in other._terms.items()]
        return QExpansion.from_terms(pairs, order, conductor, min(self.max_conductor, other.max_conductor))

    def mul(self, other: "QExpansion") -> "QExpansion":
        va = self.valuation()
        vb = other.valuation()
        va = self.order if va is None else va
        vb = other.order if vb is None else vb
        order = min(self.order + vb, other.order + va)
        conductor = self._bounded(_lcm(self.conductor, other.conductor))
        acc: Dict[Fraction, Fraction] = {}
        for ea, ca in self._terms.items():
            for eb, cb in other._terms.items():
                e = ea + eb
                if e < order:
                    acc[e] = acc.get(e, Fraction(0)) + ca * cb
        acc = {e: c for e, c in acc.items() if c != 0}
        return QExpansion(acc, order, conductor, min(self.max_conductor, other.max_conductor))

    def div(self, other: "QExpansion") -> "QExpansion":
        """Long division on the exponent lattice."""
        vb = other.valuation()
        if vb is None:
            raise SeriesDivisionError("division by the zero series")
        lead = other._terms[vb]
        va = self.valuation()
        va = self.order if va is None else va
        order = min(self.order - vb, other.order - 2 * vb + va)
        conductor = self._bounded(_lcm(self.conductor, other.conductor))
        bound = order + vb
        remainder = {e: c for e, c in self._terms.items() if e < bound}
        quotient: Dict[Fraction, Fraction] = {}
        while remainder:
            e = min(remainder)
            c = remainder.pop(e) / lead
            quotient[e - vb] = c
            for eb, cb in other._terms.items():
                if eb == vb:
                    continue
                target = e - vb + eb
                if target >= bound:
                    continue
                updated = remainder.get(target, Fraction(0)) - c * cb
                if updated == 0:
                    remainder.pop(target, None)
                else:
                    remainder[target] = updated
        return QExpansion(quotient, order, conductor, min(self.max_conductor, other.max_conductor))

    def pow(self, k: int) -> "QExpansion":
        if k < 1:
            raise DomainError(f"power must be >= 1, got {k}")
        result = self
        for _ in range(k - 1):
            result = result.mul(self)
        return result

    __add__ = add
    __mul__ = mul
    __truediv__ = div
    __neg__ = negate

    def __sub__(self, other: "QExpansion") -> "QExpansion":
        return self.add(other.negate())

    # ------------------------------------------------------------ evaluation

    def evaluate(self, tau: complex) -> complex:
        """Σ c_e e^{2πi e τ} in double precision."""
        tau = check_tau(tau)
        if not self._terms:
            return 0j
        exponents = np.array([float(e) for e in self._terms])
        coefficients = np.array([float(c) for c in self._terms.values()])
        return complex(np.sum(coefficients * np.exp(2j * np.pi * exponents * tau)))

    def evaluate_mp(self, tau) -> "mp.mpc":
        """Σ c_e e^{2πi e τ} at the current mpmath precision."""
        tau = mp.mpc(tau)
        return mp.fsum(
            mp_rational(c) * mp_exp_2pi_i(mp_rational(e) * tau)
            for e, c in self._terms.items()
        )

    # --------------------------------------------------------- serialisation

    def to_json(self) -> List[List[List[int]]]:
        """[[num, den] of exponent, [num, den] of coefficient] pairs, sorted by exponent."""
        return [
            [[e.numerator, e.denominator], [c.numerator, c.denominator]]
            for e, c in self._terms.items()
        ]

    @classmethod
    def from_json(cls, pairs: Sequence[Sequence[Sequence[int]]], order: Rational, conductor: int = 1) -> "QExpansion":
        return cls.from_terms(
            [(Fraction(e[0], e[1]), Fraction(c[0], c[1])) for e, c in pairs], order, conductor
        )

    def to_document(self) -> Dict[str, object]:
        return {
            "order": [self.order.numerator, self.order.denominator],
            "conductor": self.conductor,
            "terms": self.to_json(),
        }

    @classmethod
    def from_document(cls, document: Dict[str, object]) -> "QExpansion":
        num, den = document["order"]
        return cls.from_json(document["terms"], Fraction(num, den), int(document["conductor"]))


def series_add(a: QExpansion, b: QExpansion) -> QExpansion:
    return a.add(b)


def series_mul(a: QExpansion, b: QExpansion) -> QExpansion:
    return a.mul(b)


def series_scale(a: QExpansion, factor: Union[Rational, QExpansion]) -> QExpansion:
    if isinstance(factor, QExpansion):
        return a.mul(factor)
    return a.scale(factor)


def series_div(a: QExpansion, b: QExpansion) -> QExpansion:
    return a.div(b)


# =============================================================================
# REGION CERTIFICATION
# =============================================================================

# A branch is (A, B, C) for A t² + B t + C in the outer index t = direction·j.
Branch = Tuple[Fraction, Fraction, Fraction]


def _branch_value(branch: Branch, t: int) -> Fraction:
    A, B, C = branch
    return A * t * t + B * t + C


def certified_extent(
    branches: Sequence[Branch],
    bound: Rational,
    direction: int,
) -> int:
    """
    Largest t >= 1 where some branch, written in j = direction·t, is below `bound`.

    Returns 0 when every branch is already >= bound for all t >= 1. Each branch
    must grow: A > 0, or A = 0 with B·direction > 0; otherwise the region
    sum diverges in that direction.
    """
    bound = Fraction(bound)
    oriented: List[Branch] = []
    for A, B, C in branches:
        A, B, C = Fraction(A), Fraction(B) * direction, Fraction(C)
        if A < 0 or (A == 0 and B <= 0):
            raise DomainError(
                f"region sum diverges in direction {direction:+d} "
                f"(branch {A}t^2 + {B}t + {C})"
            )
        oriented.append((A, B, C))
    vertex = 1
    for A, B, _ in oriented:
        if A > 0:
            vertex = max(vertex, math.ceil(-B / (2 * A)))
    last_below = 0
    t = 1
    while True:
        below = any(_branch_value(br, t) < bound for br in oriented)
        if below:
            last_below = t
        elif t >= vertex:
            return last_below
        t += 1


def _certify(
    positive: Sequence[Branch],
    negative: Sequence[Branch],
    bound: Rational,
    cutoff: Optional[int],
) -> int:
    certified = max(
        certified_extent(positive, bound, +1),
        certified_extent(negative, bound, -1),
    )
    if cutoff is None:
        return certified
    if cutoff < certified:
        raise CutoffInsufficientError(
            f"region cutoff J={cutoff} is below the certified cutoff {certified}",
            requested=cutoff,
            allowed=certified,
        )
    return cutoff


# =============================================================================
# ETA, THETA AND MUMFORD EXPANSIONS
# =============================================================================


def eta_qexp(scale: Rational, order: Rational, max_conductor: int = MAX_CONDUCTOR) -> QExpansion:
    """η(scale·τ) from the pentagonal-number series."""
    k = Fraction(scale)
    if k <= 0:
        raise DomainError(f"eta scale must be positive, got {k}")
    order = Fraction(order)
    if order <= 0:
        raise DomainError(f"order must be positive, got {order}")
    conductor = 24 * k.denominator
    pairs = []
    for direction in (1, -1):
        j = 0 if direction == 1 else -1
        while True:
            exponent = k / 24 + k * Fraction(j * (3 * j - 1), 2)
            if exponent >= order:
                break
            pairs.append((exponent, -1 if j % 2 else 1))
            j += direction
    return QExpansion.from_terms(pairs, order, conductor, max_conductor)


def theta_qexp(idx: ThetaIndex, order: Rational, max_conductor: int = MAX_CONDUCTOR) -> QExpansion:
    """θ^{(±)}_{n,m}(τ,0) = Σ_j (±1)^j q^{(2·m2·j + n2)²/(8·m2)}."""
    order = Fraction(order)
    m2, n2 = idx.m2, idx.n2
    conductor = 8 * m2
    start = math.floor(Fraction(-n2, 2 * m2))
    pairs = []
    for direction in (1, -1):
        j = start if direction == 1 else start - 1
        while True:
            exponent = Fraction((2 * m2 * j + n2) ** 2, 8 * m2)
            # the start may sit left of the vertex; only later terms grow
            if exponent >= order and (j - start) * direction > 0:
                break
            if exponent < order:
                pairs.append((exponent, idx.sign.factor ** (j % 2)))
            j += direction
    return QExpansion.from_terms(pairs, order, conductor, max_conductor)


def mumford_qexp(
    kind: Union[ThetaKind, str],
    scale2: int,
    shift: Rational,
    order: Rational,
    max_conductor: int = MAX_CONDUCTOR,
) -> QExpansion:
    """ϑ_00 or ϑ_01 at (Mτ, cτ) with M = scale2/2: Σ_j (±1)^j q^{M j²/2 + c j}."""
    kind = ThetaKind(kind)
    if kind not in (ThetaKind.K00, ThetaKind.K01):
        raise DomainError(f"exact Mumford expansion needs kind 00 or 01, got {kind.value}")
    if scale2 < 1:
        raise DomainError(f"Mumford scale must be positive, got scale2={scale2}")
    order = Fraction(order)
    half_m = Fraction(scale2, 4)
    c = Fraction(shift)
    conductor = _lcm(half_m.denominator, c.denominator)
    alt = kind == ThetaKind.K01
    start = math.floor(-c / (2 * half_m))
    pairs = []
    for direction in (1, -1):
        j = start if direction == 1 else start - 1
        while True:
            exponent = half_m * j * j + c * j
            if exponent >= order and (j - start) * direction > 0:
                break
            if exponent < order:
                pairs.append((exponent, -1 if (alt and j % 2) else 1))
            j += direction
    return QExpansion.from_terms(pairs, order, conductor, max_conductor)


def gauss_quotient_qexp(m2: int, order: Rational, max_conductor: int = MAX_CONDUCTOR) -> QExpansion:
    """η(2mτ)^5 / (η(mτ)² η(4mτ)²) to the given order."""
    m = Fraction(m2, 2)
    order = Fraction(order)
    # the quotient loses m/6 of order; expand the factors deeper and cut back
    work = order + m
    numerator = eta_qexp(2 * m, work, max_conductor).pow(5)
    denominator = series_mul(eta_qexp(m, work, max_conductor).pow(2), eta_qexp(4 * m, work, max_conductor).pow(2))
    quotient = series_div(numerator, denominator)
    if quotient.order < order:
        raise DomainError(f"gauss quotient only exact to {quotient.order} < {order}")
    return quotient.truncate(order)


def gauss_quotient_check(m2: int, order: Rational, max_conductor: int = MAX_CONDUCTOR) -> Tuple[QExpansion, QExpansion]:
    """θ_{0,m}(τ,0) against η(2mτ)^5/(η(mτ)²η(4mτ)²)."""
    if m2 < 1:
        raise DomainError(f"level m2 must be >= 1, got {m2}")
    lhs = theta_qexp(ThetaIndex(0, m2, Sign.PLUS), order, max_conductor)
    rhs = gauss_quotient_qexp(m2, order, max_conductor)
    return lhs, rhs


# =============================================================================
# INDEFINITE FAMILY EXPANSIONS
# =============================================================================


def _g_constants(idx: FamilyIndex) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
    m = Fraction(idx.m2, 2)
    big_m = m + Fraction(1, 2)
    alpha = idx.nu - Fraction(2 * idx.nu + 1, 2 * (idx.m2 + 1))
    beta = idx.nu - Fraction(idx.n, idx.m2)
    return m, big_m, alpha, beta


def g_exponent(idx: FamilyIndex, j: int, p: int) -> Fraction:
    """(m+½)(j+ν−(ν+½)/(2m+1))² − m(p+ν−n/2m)²."""
    m, big_m, alpha, beta = _g_constants(idx)
    return big_m * (j + alpha) ** 2 - m * (p + beta) ** 2


def _g_branches(idx: FamilyIndex) -> Tuple[List[Branch], List[Branch]]:
    m, big_m, alpha, beta = _g_constants(idx)

    def quad(a2: Fraction, a1: Fraction, a0: Fraction) -> Branch:
        return (a2, a1, a0)

    # j > 0: endpoints p = 1 and p = j
    positive = [
        quad(big_m, 2 * big_m * alpha, big_m * alpha**2 - m * (1 + beta) ** 2),
        quad(
            big_m - m,
            2 * (big_m * alpha - m * beta),
            big_m * alpha**2 - m * beta**2,
        ),
    ]
    # j < 0: endpoints p = 0 and p = j + 1
    negative = [
        quad(big_m, 2 * big_m * alpha, big_m * alpha**2 - m * beta**2),
        quad(
            big_m - m,
            2 * (big_m * alpha - m * (1 + beta)),
            big_m * alpha**2 - m * (1 + beta) ** 2,
        ),
    ]
    return positive, negative


def g_conductor(idx: FamilyIndex) -> int:
    return _lcm(8 * (idx.m2 + 1), 2 * idx.m2)


def g_certified_cutoff(idx: FamilyIndex, order: Rational, J: Optional[int] = None) -> int:
    positive, negative = _g_branches(idx)
    return _certify(positive, negative, order, J)


def g_lower_bound(idx: FamilyIndex) -> Fraction:
    """A lower bound for every exponent of g, from the branch minima."""
    positive, negative = _g_branches(idx)
    bound: Optional[Fraction] = None
    for direction, branches in ((1, positive), (-1, negative)):
        for A, B, C in branches:
            B = B * direction
            if A > 0:
                t = max(Fraction(1), -B / (2 * A))
                low = A * t * t + B * t + C
            else:
                low = _branch_value((A, B, C), 1)
            bound = low if bound is None else min(bound, low)
    return bound


@lru_cache(maxsize=256)
def _g_qexp_cached(idx: FamilyIndex, order: Fraction, J: Optional[int], max_conductor: int) -> QExpansion:
    cutoff = g_certified_cutoff(idx, order, J)
    pairs = []
    for j in range(1, cutoff + 1):
        sign = -1 if j % 2 else 1
        for p in range(1, j + 1):
            pairs.append((g_exponent(idx, j, p), sign))
    for j in range(-cutoff, 0):
        sign = 1 if j % 2 else -1
        for p in range(j + 1, 1):
            pairs.append((g_exponent(idx, j, p), sign))
    return QExpansion.from_terms(pairs, order, g_conductor(idx), max_conductor)


def g_qexp(
    idx: FamilyIndex,
    order: Rational,
    J: Optional[int] = None,
    max_conductor: int = MAX_CONDUCTOR,
) -> QExpansion:
    """
    g^{[m]}_{n,ν}: [Σ_{0<p≤j} − Σ_{j<p≤0}] (−1)^j q^{E(j,p)}.

    The j-cutoff is certified from the endpoint branches of each region;
    a supplied J below the certified one raises CutoffInsufficientError.
    """
    return _g_qexp_cached(idx, Fraction(order), J, max_conductor)


def _h_check_specialization(idx: FamilyIndex, a: int) -> None:
    if a % idx.m2 == 0:
        j = -idx.nu - a // idx.m2
        raise SpecializationPoleError(
            f"z = a·tau/m with a={a} makes 1 - q^(a+2m(j+nu)) vanish at j={j}",
            index=j,
            distance=0.0,
        )


def h_direct_qexp(idx: FamilyIndex, a: int, order: Rational, max_conductor: int = MAX_CONDUCTOR) -> QExpansion:
    """h^{[m]}_{n,ν}(τ, aτ/m) by geometric expansion of each denominator."""
    _h_check_specialization(idx, a)
    order = Fraction(order)
    m = Fraction(idx.m2, 2)
    n, nu = idx.n, idx.nu

    def base(j: int) -> Fraction:
        return m * j * j + (n + a) * j + n * nu + Fraction(a * n, idx.m2)

    def step(j: int) -> int:
        return a + idx.m2 * (j + nu)

    # both envelopes X_j and X_j + |e_j| are quadratics with leading m
    base_branch = (m, Fraction(n + a), base(0))
    shifted = (m, Fraction(n + a - idx.m2), base(0) - a - idx.m2 * nu)
    branches = [base_branch, shifted]
    cutoff = max(
        certified_extent(branches, order, +1),
        certified_extent(branches, order, -1),
    )
    pairs = []
    for j in range(-cutoff, cutoff + 1):
        e = step(j)
        x = base(j)
        if e > 0:
            k = 0
            while x + e * k < order:
                pairs.append((x + e * k, 1))
                k += 1
        else:
            k = 1
            while x - e * k < order:
                pairs.append((x - e * k, -1))
                k += 1
    return QExpansion.from_terms(pairs, order, 2 * idx.m2, max_conductor)


def region_bracket_qexp(
    idx: FamilyIndex,
    a: int,
    order: Rational,
    J: Optional[int] = None,
    max_conductor: int = MAX_CONDUCTOR,
) -> QExpansion:
    """[Σ_{j≥k≥0} − Σ_{j<k<0}] q^{m(j−ν+(n+a)/2m)² − m(k−ν+n/2m)²}."""
    _h_check_specialization(idx, a)
    if not 0 < a < idx.m2:
        raise DomainError(f"region form converges only for 0 < a < 2m, got a={a}, 2m={idx.m2}")
    order = Fraction(order)
    m = Fraction(idx.m2, 2)
    nu = idx.nu
    u = -nu + Fraction(idx.n + a, idx.m2)
    w = -nu + Fraction(idx.n, idx.m2)

    def exponent(j: int, k: int) -> Fraction:
        return m * (j + u) ** 2 - m * (k + w) ** 2

    # j >= 0: endpoints k = 0 (quadratic) and k = j (linear, slope a)
    positive = [
        (m, 2 * m * u, m * u * u - m * w * w),
        (Fraction(0), 2 * m * (u - w), m * (u * u - w * w)),
    ]
    # j <= -2: endpoints k = −1 (quadratic) and k = j + 1 (linear, slope a − 2m)
    negative = [
        (m, 2 * m * u, m * u * u - m * (w - 1) ** 2),
        (Fraction(0), 2 * m * (u - w - 1), m * (u * u - (w + 1) ** 2)),
    ]
    cutoff = _certify(positive, negative, order, J)
    pairs = []
    for j in range(0, cutoff + 1):
        for k in range(0, j + 1):
            pairs.append((exponent(j, k), 1))
    for j in range(-cutoff, -1):
        for k in range(j + 1, 0):
            pairs.append((exponent(j, k), -1))
    return QExpansion.from_terms(pairs, order, 2 * idx.m2, max_conductor)


def h_spec_qexp(
    idx: FamilyIndex,
    a: int,
    order: Rational,
    J: Optional[int] = None,
    max_conductor: int = MAX_CONDUCTOR,
) -> Tuple[QExpansion, QExpansion]:
    """h^{[m]}_{n,ν}(τ, aτ/m) as (direct geometric expansion, region expansion)."""
    order = Fraction(order)
    m = Fraction(idx.m2, 2)
    direct = h_direct_qexp(idx, a, order, max_conductor)
    prefactor = m * idx.nu**2 - Fraction(a * a, 2 * idx.m2)
    region = region_bracket_qexp(idx, a, order - prefactor, J, max_conductor).shift(prefactor)
    return direct, region.truncate(order)


def f_zero_qexp(idx: FamilyIndex, a: int, order: Rational, max_conductor: int = MAX_CONDUCTOR) -> QExpansion:
    """
    F^{[m](a,0)}_{n,ν}(τ,0) assembled exactly:
    q^{(n+a)²/4m} ϑ00(2mτ,(n+a)τ)·g + (−1)^ν q^{(ν+½)²/(4m+2)} ϑ01((2m+1)τ,(ν+½)τ)·bracket.

    When n + a ≡ 0 (mod 2m) the first factor is θ_{0,m}(τ,0), taken from the
    η-quotient.
    """
    order = Fraction(order)
    a = a % idx.m2
    _h_check_specialization(idx, a)
    big_m2 = idx.m2 + 1

    g = g_qexp(idx, order, max_conductor=max_conductor)
    g_low = g.valuation()
    g_low = order if g_low is None else g_low
    first_order = order - min(g_low, Fraction(0)) + 1
    if (idx.n + a) % idx.m2 == 0:
        first = gauss_quotient_qexp(idx.m2, first_order, max_conductor)
    else:
        lift = Fraction((idx.n + a) ** 2, 2 * idx.m2)
        first = mumford_qexp(ThetaKind.K00, 2 * idx.m2, idx.n + a, first_order - lift, max_conductor).shift(lift)
    head = series_mul(first, g).truncate(order)

    bracket = region_bracket_qexp(idx, a, order, max_conductor=max_conductor)
    b_low = bracket.valuation()
    b_low = order if b_low is None else b_low
    second_order = order - min(b_low, Fraction(0)) + 1
    nu_half = Fraction(2 * idx.nu + 1, 2)
    lift = nu_half**2 / (2 * big_m2)
    second = mumford_qexp(ThetaKind.K01, 2 * big_m2, nu_half, second_order - lift, max_conductor).shift(lift)
    tail = series_scale(series_mul(second, bracket).truncate(order), -1 if idx.nu % 2 else 1)
    return series_add(head, tail).truncate(order)
