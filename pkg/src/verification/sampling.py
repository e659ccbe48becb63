"""
Seeded sample points in the upper half-plane.
Every case draws from its own stream keyed by (seed, suite, case id), so a
redraw in one case never moves the points of another.
"""

import zlib
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Tuple, TypeVar

import numpy as np

from src.domain.errors import PoleProximityError

T = TypeVar("T")

# =============================================================================
# SAMPLING BOX
# =============================================================================

TAU_RE = (-0.5, 0.5)
TAU_IM = (0.6, 2.0)
Z_BOUND = 0.7
MAX_REDRAWS = 8


@dataclass(frozen=True)
class SamplePoint:
    """τ, z and a second elliptic variable z2, plus a real x for scalar identities."""

    tau: complex
    z: complex
    z2: complex
    x: complex
    draw: int = 0

    def to_params(self) -> Dict[str, object]:
        return {
            "tau": [round(self.tau.real, 12), round(self.tau.imag, 12)],
            "z": [round(self.z.real, 12), round(self.z.imag, 12)],
            "z2": [round(self.z2.real, 12), round(self.z2.imag, 12)],
            "draw": self.draw,
        }


class PointSampler:
    def __init__(self, seed: int, suite_index: int, case_key: str):
        self.seed = seed
        self.suite_index = suite_index
        self.case_key = case_key
        self.rng = np.random.default_rng([seed, suite_index, zlib.crc32(case_key.encode("utf-8"))])
        self.draws = 0

    def _z(self) -> complex:
        re, im = self.rng.uniform(-Z_BOUND, Z_BOUND, size=2)
        return complex(re, im)

    def _x(self) -> complex:
        """Uniform on the open unit disk, by rejection from the square."""
        while True:
            x = complex(*self.rng.uniform(-1.0, 1.0, size=2))
            if abs(x) < 1.0:
                return x

    def draw(self) -> SamplePoint:
        tau = complex(self.rng.uniform(*TAU_RE), self.rng.uniform(*TAU_IM))
        z, z2 = self._z(), self._z()
        x = self._x()
        point = SamplePoint(tau=tau, z=z, z2=z2, x=x, draw=self.draws)
        self.draws += 1
        return point


def sample_until_clear(
    sampler: PointSampler,
    evaluate: Callable[[SamplePoint], T],
    max_redraws: int = MAX_REDRAWS,
    on_redraw: Optional[Callable[[SamplePoint, PoleProximityError], None]] = None,
) -> Tuple[SamplePoint, T]:
    """Evaluate at fresh points until no pole guard trips; the last error propagates."""
    attempt = 0
    while True:
        point = sampler.draw()
        try:
            return point, evaluate(point)
        except PoleProximityError as e:
            if attempt >= max_redraws:
                raise
            if on_redraw is not None:
                on_redraw(point, e)
            attempt += 1
