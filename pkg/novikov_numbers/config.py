from pathlib import Path
from typing import Literal

from dotenv import dotenv_values
from pydantic import BaseModel, ConfigDict, field_validator
from sympy import isprime

# === Load defaults ===
DEFAULTS_FILE = Path(__file__).resolve().parent.parent / "defaults.env"
_cfg = dotenv_values(DEFAULTS_FILE)

DEFAULT_SEED = int(_cfg.get("NOVIKOV_SEED", 0))
DEFAULT_STRATEGY = _cfg.get("NOVIKOV_STRATEGY", "randomized")
DEFAULT_PRIME = int(_cfg.get("NOVIKOV_PRIME", 2**31 - 1))
DEFAULT_TRIALS = int(_cfg.get("NOVIKOV_TRIALS", 3))
DEFAULT_EPSILON = float(_cfg.get("NOVIKOV_EPSILON", 1e-8))
DEFAULT_ORDER = int(_cfg.get("NOVIKOV_ORDER", 4))
DEFAULT_FORMAT = _cfg.get("NOVIKOV_FORMAT", "table")
DEFAULT_LOG_LEVEL = _cfg.get("NOVIKOV_LOG_LEVEL", "WARNING").upper()

MIN_PRIME = 2**30


class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    seed: int = DEFAULT_SEED
    strategy: Literal["randomized", "exact"] = DEFAULT_STRATEGY
    prime: int = DEFAULT_PRIME
    trials: int = DEFAULT_TRIALS
    epsilon: float = DEFAULT_EPSILON
    order: int = DEFAULT_ORDER
    output_format: Literal["table", "json", "csv"] = DEFAULT_FORMAT
    log_level: str = DEFAULT_LOG_LEVEL

    @field_validator("prime")
    @classmethod
    def _prime_is_large_prime(cls, value: int) -> int:
        if value <= MIN_PRIME or not isprime(value):
            raise ValueError(f"prime must be a prime above 2^30, got {value}")
        return value

    @field_validator("trials")
    @classmethod
    def _trials_positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError("trials must be at least 1")
        return value

    @field_validator("epsilon")
    @classmethod
    def _epsilon_positive(cls, value: float) -> float:
        if not value > 0:
            raise ValueError("epsilon must be positive")
        return value

    @field_validator("order")
    @classmethod
    def _order_nonnegative(cls, value: int) -> int:
        if value < 0:
            raise ValueError("order must be nonnegative")
        return value

    def rank_strategy(self):
        # algebra -> log -> config, so import lazily
        from .algebra import Exact, Randomized

        if self.strategy == "exact":
            return Exact()
        return Randomized(trials=self.trials, prime=self.prime, seed=self.seed)
