"""
Index types for theta, mock theta and indefinite families.
Half-integers are stored doubled (the "2x" integer) so index arithmetic stays exact.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Tuple

from src.domain.errors import DomainError


class Sign(str, Enum):
    """Superscript (+) or (−) of a theta series."""

    PLUS = "+"
    MINUS = "-"

    @property
    def factor(self) -> int:
        return 1 if self is Sign.PLUS else -1

    def flipped(self) -> "Sign":
        return Sign.MINUS if self is Sign.PLUS else Sign.PLUS

    @classmethod
    def parse(cls, text: str) -> "Sign":
        cleaned = text.strip().lower()
        if cleaned in ("+", "plus", "p"):
            return cls.PLUS
        if cleaned in ("-", "minus", "m", "−"):
            return cls.MINUS
        raise DomainError(f"sign must be '+' or '-', got {text!r}")


class ThetaKind(str, Enum):
    """Mumford theta kinds."""

    K00 = "00"
    K01 = "01"
    K10 = "10"
    K11 = "11"


# =============================================================================
# HALF-INTEGER PLUMBING
# =============================================================================


def parse_half_integer(text: str) -> int:
    """Parse "p/2" or an integer into its doubled integer."""
    raw = str(text).strip()
    try:
        value = Fraction(raw)
    except (ValueError, ZeroDivisionError):
        raise DomainError(f"not a half-integer: {text!r}")
    doubled = value * 2
    if doubled.denominator != 1:
        raise DomainError(f"not a half-integer: {text!r}")
    return int(doubled)


def format_half(x2: int) -> str:
    """Render a doubled half-integer as "p/2" or an integer."""
    if x2 % 2 == 0:
        return str(x2 // 2)
    return f"{x2}/2"


def half(x2: int) -> Fraction:
    return Fraction(x2, 2)


# =============================================================================
# POINTS AND BUDGETS
# =============================================================================


@dataclass(frozen=True)
class ModularPoint:
    """A point (τ, z) of H × C; two-variable families also use z2."""

    tau: complex
    z: complex = 0j
    z2: complex = 0j

    def __post_init__(self):
        if complex(self.tau).imag <= 0:
            raise DomainError(f"Im(tau) must be positive, got tau={self.tau!r}")


@dataclass(frozen=True)
class TruncationBudget:
    """Summation cutoff, tail tolerance and pole guard shared by every evaluator."""

    j_max: int = 200
    tol: float = 1e-12
    pole_guard: float = 1e-8

    def __post_init__(self):
        if self.j_max < 1:
            raise DomainError(f"j_max must be >= 1, got {self.j_max}")
        if not 0 < self.tol < 1:
            raise DomainError(f"tol must lie in (0, 1), got {self.tol}")
        if not 0 < self.pole_guard < 1:
            raise DomainError(f"pole_guard must lie in (0, 1), got {self.pole_guard}")

    def with_j_max(self, j_max: int) -> "TruncationBudget":
        return TruncationBudget(j_max=j_max, tol=self.tol, pole_guard=self.pole_guard)


DEFAULT_BUDGET = TruncationBudget()


# =============================================================================
# FAMILY INDICES
# =============================================================================


@dataclass(frozen=True)
class ThetaIndex:
    """θ^{(sign)}_{n,m} with n = n2/2 and m = m2/2."""

    n2: int
    m2: int
    sign: Sign = Sign.PLUS

    def __post_init__(self):
        if self.m2 < 1:
            raise DomainError(f"theta level m2 must be >= 1, got {self.m2}")

    @property
    def n(self) -> Fraction:
        return half(self.n2)

    @property
    def m(self) -> Fraction:
        return half(self.m2)

    def shifted(self, c: int) -> "ThetaIndex":
        """Index n + c for an integer c."""
        return ThetaIndex(self.n2 + 2 * c, self.m2, self.sign)

    def with_sign(self, sign: Sign) -> "ThetaIndex":
        return ThetaIndex(self.n2, self.m2, sign)

    def label(self) -> str:
        return f"theta{self.sign.value}[{format_half(self.n2)},{format_half(self.m2)}]"


@dataclass(frozen=True)
class PhiParams:
    """Φ^{(sign)[m,s]}_1 with m = m2/2 and s = s2/2."""

    m2: int
    s2: int
    sign: Sign = Sign.PLUS

    def __post_init__(self):
        if self.m2 < 1:
            raise DomainError(f"mock theta level m2 must be >= 1, got {self.m2}")

    @property
    def m(self) -> Fraction:
        return half(self.m2)

    @property
    def s(self) -> Fraction:
        return half(self.s2)


@dataclass(frozen=True)
class FamilyIndex:
    """(m, n, ν) of g, h, G and F, with 0 <= n < 2m and 0 <= ν <= 2m."""

    m2: int
    n: int
    nu: int

    def __post_init__(self):
        if self.m2 < 1:
            raise DomainError(f"family level m2 must be >= 1, got {self.m2}")
        if not 0 <= self.n < self.m2:
            raise DomainError(f"need 0 <= n < 2m, got n={self.n}, 2m={self.m2}")
        if not 0 <= self.nu <= self.m2:
            raise DomainError(f"need 0 <= nu <= 2m, got nu={self.nu}, 2m={self.m2}")

    @property
    def m(self) -> Fraction:
        return half(self.m2)

    @property
    def integral_level(self) -> bool:
        return self.m2 % 2 == 0

    def reflected(self) -> "FamilyIndex":
        """(n', ν') with n + n' in 2mZ and ν + ν' = 2m."""
        return FamilyIndex(self.m2, (-self.n) % self.m2, self.m2 - self.nu)

    def label(self) -> str:
        return f"[m={format_half(self.m2)}] n={self.n} nu={self.nu}"


@dataclass(frozen=True)
class TorsorShift:
    """(a, b) in (Z/2mZ)^2; stored reduced to [0, 2m)."""

    a: int
    b: int
    m2: int

    def __post_init__(self):
        if self.m2 < 1:
            raise DomainError(f"torsor modulus m2 must be >= 1, got {self.m2}")
        object.__setattr__(self, "a", self.a % self.m2)
        object.__setattr__(self, "b", self.b % self.m2)

    def negated(self) -> "TorsorShift":
        return TorsorShift(-self.a, -self.b, self.m2)


@dataclass(frozen=True, order=True)
class BasisIndex:
    """(n, ν, a) labelling F^{[m](a,0)}_{n,ν} in the invariant span."""

    n: int
    nu: int
    a: int

    def label(self) -> str:
        return f"({self.n},{self.nu},{self.a})"

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.n, self.nu, self.a)


def basis_indices(m2: int) -> List[BasisIndex]:
    """All (n, ν, a) for level m2/2, in lexicographic order."""
    if m2 < 1:
        raise DomainError(f"basis level m2 must be >= 1, got {m2}")
    return [
        BasisIndex(n, nu, a)
        for n in range(m2)
        for nu in range(m2 + 1)
        for a in range(m2)
    ]


def family_indices(m2: int) -> List[FamilyIndex]:
    return [FamilyIndex(m2, n, nu) for n in range(m2) for nu in range(m2 + 1)]
