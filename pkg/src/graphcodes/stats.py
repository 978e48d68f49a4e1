"""Failure-rate estimates with Wilson score intervals."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import stats


def wilson_ci(successes: int, trials: int, z: float = 1.959963984540054) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion (no continuity correction)."""
    if trials < 1:
        raise ValueError("trials must be positive")
    if not 0 <= successes <= trials:
        raise ValueError("successes must lie in [0, trials]")
    level = 2.0 * stats.norm.cdf(z) - 1.0
    ci = stats.binomtest(int(successes), int(trials)).proportion_ci(confidence_level=level, method="wilson")
    point = successes / trials
    return min(float(ci.low), point), max(float(ci.high), point)


def trial_seeds(seed: int, trial: int, count: int) -> np.ndarray:
    """``count`` independent 64-bit seeds for trial number ``trial`` of a run."""
    ss = np.random.SeedSequence(int(seed) % (1 << 64), spawn_key=(int(trial),))
    return ss.generate_state(count, dtype=np.uint64)


@dataclass
class MonteCarloEstimate:
    trials: int
    failures: int
    point: float
    ci_low: float
    ci_high: float
    seed: int
    params: dict = field(default_factory=dict)
    causes: dict = field(default_factory=dict)
    events: dict = field(default_factory=dict)
    disagreements: int = 0

    @classmethod
    def from_counts(cls, failures: int, trials: int, seed: int, **extra) -> MonteCarloEstimate:
        lo, hi = wilson_ci(failures, trials)
        return cls(trials, failures, failures / trials, lo, hi, seed, **extra)

    def to_dict(self) -> dict:
        return asdict(self)
