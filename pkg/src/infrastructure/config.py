"""
Runtime settings.
Read once from MOCKTHETA_* environment variables (a .env file is honoured);
CLI flags override them per run.
"""

import os
from typing import Dict, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError

from src.domain.errors import DomainError
from src.domain.indices import TruncationBudget
from src.numerics.qseries import MAX_CONDUCTOR

load_dotenv()

ENV_PREFIX = "MOCKTHETA_"


class Settings(BaseModel):
    j_max: int = Field(200, ge=1)
    tol: float = Field(1e-12, gt=0, lt=1)
    pole_guard: float = Field(1e-8, gt=0, lt=1)
    max_conductor: int = Field(MAX_CONDUCTOR, ge=24)
    seed: int = 42
    points: int = Field(10, ge=0)
    case_tol: float = Field(1e-7, gt=0)

    def budget(self) -> TruncationBudget:
        return TruncationBudget(j_max=self.j_max, tol=self.tol, pole_guard=self.pole_guard)


def _environment(environ: Optional[Dict[str, str]] = None) -> Dict[str, str]:
    environ = os.environ if environ is None else environ
    values = {}
    for name in Settings.model_fields:
        raw = environ.get(ENV_PREFIX + name.upper())
        if raw is not None and raw.strip() != "":
            values[name] = raw.strip()
    return values


def get_settings(environ: Optional[Dict[str, str]] = None) -> Settings:
    """Settings from the environment; a bad value raises DomainError naming the variable."""
    try:
        return Settings(**_environment(environ))
    except ValidationError as e:
        first = e.errors()[0]
        name = ENV_PREFIX + str(first["loc"][0]).upper()
        raise DomainError(f"invalid {name}: {first['msg']}", variable=name) from e
