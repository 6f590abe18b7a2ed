"""Run configuration echoed in every report header."""
from dataclasses import asdict, dataclass
from typing import Any, Optional

from config import (
    CHAIN_ENUMERATION_CAP,
    DEFAULT_FORMAT,
    DEFAULT_NODE_LIMIT,
    DEFAULT_SEED,
    DEFAULT_TIME_LIMIT,
    DEFAULT_TRIALS,
    DEFAULT_WORKERS,
    ZONE_ENUMERATION_CAP,
)


@dataclass(frozen=True)
class RunConfig:
    """Effective configuration of one CLI run."""
    seed: int = DEFAULT_SEED
    trials: int = DEFAULT_TRIALS
    format: str = DEFAULT_FORMAT
    band: Optional[tuple[float, float]] = None
    chain_cap: int = CHAIN_ENUMERATION_CAP
    zone_cap: int = ZONE_ENUMERATION_CAP
    node_limit: Optional[int] = DEFAULT_NODE_LIMIT
    time_limit: Optional[float] = DEFAULT_TIME_LIMIT
    workers: int = DEFAULT_WORKERS

    def __post_init__(self):
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError(f"Seed must fit in 64 bits, got {self.seed}")
        if self.format not in ("json", "csv"):
            raise ValueError(f"Unknown report format: {self.format}")
        if self.workers < 1:
            raise ValueError("At least one worker is required")

    def as_dict(self) -> dict[str, Any]:
        data = asdict(self)
        if self.band is not None:
            data["band"] = list(self.band)
        return data
