"""Resource caps, bias defaults and exit codes."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Dict

# Reasoner caps sized for desk-scale knowledge bases
DEFAULT_MAX_PARTITIONS = 2 ** 16
DEFAULT_MAX_HERBRAND = 24
DEFAULT_CHASE_DEPTH = 2
DEFAULT_MAX_CANDIDATES = 20000

# Language bias bounds applied when a bias block omits them
BIAS_DEFAULTS: Dict[str, int] = {
    "max_body_literals": 4,
    "max_literal_size": 4,
    "max_onto_steps": 2,
    "max_head_literals": 2,
}

# CLI exit codes; the verdict itself is payload, never an exit code
EXIT_CODES: Dict[str, int] = {
    "ok": 0,
    "input_error": 2,
    "resource_limit": 3,
    "inconsistent_kb": 4,
}


@dataclass(frozen=True)
class Limits:
    """Caps passed explicitly to every reasoning entry point."""
    max_partitions: int = DEFAULT_MAX_PARTITIONS
    max_herbrand: int = DEFAULT_MAX_HERBRAND
    chase_depth: int = DEFAULT_CHASE_DEPTH
    max_candidates: int = DEFAULT_MAX_CANDIDATES

    def __post_init__(self):
        for name, value in asdict(self).items():
            if value < 1:
                raise ValueError(f"{name} must be positive, got {value}")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> Limits:
        return cls(**{k: v for k, v in d.items() if k in cls.__dataclass_fields__})


DEFAULT_LIMITS = Limits()
