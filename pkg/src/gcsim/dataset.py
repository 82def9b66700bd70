"""Synthetic linear-regression data, mini-batch partitioning and gradients.

The learner exists to verify end-to-end gradient recovery: the loss is the
squared error l(x, y, theta) = (y - x . theta)^2, so every partial gradient is
closed-form and the coded reconstruction can be checked against the
centralized gradient exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rng import LANE_DATASET, substream


@dataclass(frozen=True)
class Dataset:
    """Feature matrix (s, d) with labels (s,)."""

    features: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        if self.features.ndim != 2 or self.labels.ndim != 1:
            raise ValueError("features must be (s, d), labels (s,)")
        if self.features.shape[0] != self.labels.shape[0]:
            raise ValueError("features and labels disagree on dataset size")

    @property
    def size(self) -> int:
        return self.features.shape[0]

    @property
    def dim(self) -> int:
        return self.features.shape[1]


@dataclass(frozen=True)
class MiniBatch:
    """Batch ``index`` in [1..K] owning dataset row indices ``members``."""

    index: int
    members: np.ndarray


@dataclass(frozen=True)
class ModelState:
    theta: np.ndarray
    iteration: int = 0
    eta: float = 0.1


def generate_synthetic(d, s_train, s_test, seed, noise=0.1):
    """Train/test datasets with labels x . w + Gaussian noise.

    ``noise`` scales the noise std relative to the clean label std, keeping
    the problem non-degenerate without swamping the signal. Deterministic
    given ``seed``.
    """
    if d < 1 or s_train < 1 or s_test < 1:
        raise ValueError(f"invalid sizes d={d}, s_train={s_train}, s_test={s_test}")
    rng = substream(seed, LANE_DATASET)
    w = rng.normal(size=d)
    X = rng.normal(size=(s_train + s_test, d))
    clean = X @ w
    scale = float(np.std(clean)) or 1.0
    y = clean + rng.normal(size=s_train + s_test) * (noise * scale)
    train = Dataset(X[:s_train], y[:s_train])
    test = Dataset(X[s_train:], y[s_train:])
    return train, test


def partition(data: Dataset, K: int) -> list[MiniBatch]:
    """K contiguous, equal-size, disjoint mini-batches covering the dataset."""
    if K < 1 or data.size % K != 0:
        raise ValueError(f"dataset size {data.size} not divisible into K={K} batches")
    per = data.size // K
    return [
        MiniBatch(index=k + 1, members=np.arange(k * per, (k + 1) * per))
        for k in range(K)
    ]


def partial_gradient(data: Dataset, batch: MiniBatch, theta: np.ndarray) -> np.ndarray:
    """Average squared-error gradient over one mini-batch: mean of -2(y - x.theta)x."""
    if len(batch.members) == 0:
        raise ValueError("empty mini-batch")
    X = data.features[batch.members]
    y = data.labels[batch.members]
    residual = y - X @ theta
    return (-2.0 / len(batch.members)) * (X.T @ residual)


def full_gradient(data: Dataset, batches, theta: np.ndarray) -> np.ndarray:
    """Arithmetic mean of the K partial gradients.

    Equals the centralized gradient over the whole dataset when the batches
    are an equal-size partition.
    """
    if not batches:
        raise ValueError("no batches given")
    grads = [partial_gradient(data, b, theta) for b in batches]
    return np.mean(grads, axis=0)


def centralized_gradient(data: Dataset, theta: np.ndarray) -> np.ndarray:
    """Gradient of the mean squared error over the full dataset (oracle)."""
    residual = data.labels - data.features @ theta
    return (-2.0 / data.size) * (data.features.T @ residual)


def gd_step(model: ModelState, gradient: np.ndarray) -> ModelState:
    """theta <- theta - eta * g, iteration counter advanced."""
    if gradient.shape != model.theta.shape:
        raise ValueError("gradient/theta dimension mismatch")
    return ModelState(
        theta=model.theta - model.eta * gradient,
        iteration=model.iteration + 1,
        eta=model.eta,
    )


def mse_loss(data: Dataset, theta: np.ndarray) -> float:
    residual = data.labels - data.features @ theta
    return float(np.mean(residual**2))
