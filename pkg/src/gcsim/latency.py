"""Shifted-exponential computation times and completion-time order statistics.

A worker with rate mu and shift alpha finishes its r partial gradients at
X = r * (alpha + E / mu) with E ~ Exp(1), i.e. P[X <= t] = 1 - exp(-mu (t/r -
alpha)) for t >= r*alpha. Completion times are pure order statistics over the
per-worker draws, so all schemes can be compared on identical draws.
"""

from __future__ import annotations

import numpy as np


def sample_latency(mu: float, alpha: float, r: int, rng: np.random.Generator) -> float:
    """One draw of the time to finish r partial gradients."""
    if mu <= 0 or alpha <= 0 or r < 1:
        raise ValueError(f"need mu > 0, alpha > 0, r >= 1 (mu={mu}, alpha={alpha}, r={r})")
    return float(r * (alpha + rng.exponential() / mu))


def sample_latencies(mu, alpha: float, r: int, rng: np.random.Generator) -> np.ndarray:
    """Vectorized draws, one per worker rate in ``mu``."""
    mu = np.asarray(mu, dtype=float)
    return r * (alpha + rng.exponential(size=mu.shape) / mu)


def cluster_completion(times, ell: int, r: int) -> float:
    """Time of the (ell-r+1)-th earliest of the cluster's ell workers."""
    times = np.asarray(times, dtype=float)
    if times.shape != (ell,):
        raise ValueError(f"expected exactly {ell} worker times, got shape {times.shape}")
    if not 1 <= r <= ell:
        raise ValueError(f"need 1 <= r <= ell, got r={r}")
    return float(np.partition(times, ell - r)[ell - r])


def iteration_completion(cluster_times) -> float:
    """An iteration ends when its slowest cluster finishes."""
    times = np.asarray(cluster_times, dtype=float)
    if times.size == 0:
        raise ValueError("no cluster times")
    return float(times.max())


def gc_completion(times, r: int) -> float:
    """Uncoded-clustering baseline: (K-r+1)-th earliest of all K workers."""
    times = np.asarray(times, dtype=float)
    K = times.size
    if not 1 <= r <= K:
        raise ValueError(f"need 1 <= r <= K, got r={r}")
    return float(np.partition(times, K - r)[K - r])


def lower_bound_completion(times, P: int, ell: int, r: int) -> float:
    """Idealized bound: the P*(ell-r+1)-th earliest worker overall."""
    times = np.asarray(times, dtype=float)
    if times.size != P * ell:
        raise ValueError(f"expected K = P*ell = {P * ell} times, got {times.size}")
    k = P * (ell - r + 1)
    return float(np.partition(times, k - 1)[k - 1])
