"""Per-iteration worker straggling states and computation rates.

Three models:
  ge-homogeneous    two-state Markov chain per worker, common rates mu_slow /
                    mu_fast; the binary state IS the straggler flag.
  ge-heterogeneous  same chain, but per-worker fast rates ~ U[rate_low,
                    rate_high] with slow rate fast/slowdown; the scheduler
                    classifies stragglers by rate < tau.
  time-varying      each worker resamples its rate ~ U[rate_low, rate_high]
                    with probability p per iteration; straggler iff rate < tau.

State transitions happen at the start of an iteration; the observation lags
one iteration under imperfect SSI.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

GE_HOMOGENEOUS = "ge-homogeneous"
GE_HETEROGENEOUS = "ge-heterogeneous"
TIME_VARYING = "time-varying"
MODELS = (GE_HOMOGENEOUS, GE_HETEROGENEOUS, TIME_VARYING)

_RATE_FLOOR = 1e-12  # rates must stay strictly positive


@dataclass(frozen=True)
class StragglerConfig:
    model: str = GE_HOMOGENEOUS
    p: float = 0.05
    mu_slow: float = 0.1
    mu_fast: float = 10.0
    tau: float = 0.5
    rate_low: float = 0.0
    rate_high: float = 5.0
    slowdown: float = 10.0
    initial_stragglers: int = 0
    ssi: str = "imperfect"  # "perfect" | "imperfect"

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"unknown straggler model {self.model!r}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("switch probability must be in [0, 1]")
        if self.model == GE_HOMOGENEOUS and not self.mu_fast > self.mu_slow > 0:
            raise ValueError("need mu_fast > mu_slow > 0")
        if self.tau <= 0:
            raise ValueError("straggling threshold tau must be positive")
        if self.ssi not in ("perfect", "imperfect"):
            raise ValueError(f"unknown SSI mode {self.ssi!r}")


@dataclass(frozen=True)
class StragglerState:
    """Snapshot at one iteration: S[k]=1 when worker k+1 is not straggling."""

    S: np.ndarray
    mu: np.ndarray
    iteration: int = 1
    fast_rates: np.ndarray | None = field(default=None)  # ge-heterogeneous only

    @property
    def stragglers(self) -> int:
        return int(np.sum(self.S == 0))


def classify(mu, tau) -> np.ndarray:
    """Straggler flag(s): strictly below the threshold."""
    return np.asarray(mu) < tau


def init_state(cfg: StragglerConfig, K: int, rng: np.random.Generator) -> StragglerState:
    """Initial state with exactly ``initial_stragglers`` slow workers.

    The straggling subset is sampled uniformly; pinning it to fixed indices
    would systematically align (or anti-align) with the static clustering.
    """
    c = cfg.initial_stragglers
    if not 0 <= c <= K:
        raise ValueError(f"initial straggler count {c} outside [0, {K}]")
    S = np.ones(K, dtype=np.int8)
    slow = rng.choice(K, size=c, replace=False)
    S[slow] = 0
    if cfg.model == GE_HOMOGENEOUS:
        mu = np.where(S == 1, cfg.mu_fast, cfg.mu_slow)
        return StragglerState(S=S, mu=mu)
    if cfg.model == GE_HETEROGENEOUS:
        fast = np.maximum(rng.uniform(cfg.rate_low, cfg.rate_high, size=K), _RATE_FLOOR)
        mu = np.where(S == 1, fast, fast / cfg.slowdown)
        return StragglerState(S=S, mu=mu, fast_rates=fast)
    # time-varying: stragglers start in [rate_low, tau), the rest in [tau, rate_high]
    mu = np.where(
        S == 0,
        rng.uniform(cfg.rate_low, cfg.tau, size=K),
        rng.uniform(cfg.tau, cfg.rate_high, size=K),
    )
    mu = np.maximum(mu, _RATE_FLOOR)
    return StragglerState(S=(mu >= cfg.tau).astype(np.int8), mu=mu)


def step(state: StragglerState, cfg: StragglerConfig, rng: np.random.Generator) -> StragglerState:
    """Advance the chain by one iteration.

    Draw counts per step are fixed (independent of the realized states) so a
    trace is bit-reproducible regardless of what it passes through.
    """
    K = len(state.S)
    if cfg.model in (GE_HOMOGENEOUS, GE_HETEROGENEOUS):
        flips = rng.random(K) < cfg.p
        S = np.where(flips, 1 - state.S, state.S).astype(np.int8)
        if cfg.model == GE_HOMOGENEOUS:
            mu = np.where(S == 1, cfg.mu_fast, cfg.mu_slow)
            return StragglerState(S=S, mu=mu, iteration=state.iteration + 1)
        fast = state.fast_rates
        mu = np.where(S == 1, fast, fast / cfg.slowdown)
        return StragglerState(S=S, mu=mu, iteration=state.iteration + 1, fast_rates=fast)
    resample = rng.random(K) < cfg.p
    fresh = np.maximum(rng.uniform(cfg.rate_low, cfg.rate_high, size=K), _RATE_FLOOR)
    mu = np.where(resample, fresh, state.mu)
    return StragglerState(
        S=(mu >= cfg.tau).astype(np.int8), mu=mu, iteration=state.iteration + 1
    )


def observe(current: StragglerState, previous: StragglerState, ssi: str) -> StragglerState:
    """The scheduler's view: the realized state under perfect SSI, the
    previous iteration's state otherwise."""
    if ssi == "perfect":
        return current
    if ssi == "imperfect":
        return previous
    raise ValueError(f"unknown SSI mode {ssi!r}")


def trace(cfg: StragglerConfig, K: int, T: int, rng: np.random.Generator) -> list[StragglerState]:
    """States for iterations 1..T (transitions at the start of 2..T)."""
    states = [init_state(cfg, K, rng)]
    for _ in range(T - 1):
        states.append(step(states[-1], cfg, rng))
    return states
