"""Worker-cluster assignment matrices and derived data assignments.

Workers are numbered 1..K and split into ell = K/P index groups of size P.
A circular right-shift by sigma places group element (p-1-sigma) mod P into
column p. The static matrix uses one fixed shift per group; the dynamic
matrix stacks n shifted copies of every group (shift amounts sampled without
replacement), so each worker becomes eligible for exactly n distinct
clusters. Columns are consumed by the scheduler in ascending worker order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .rng import LANE_MATRIX, substream


@dataclass(frozen=True)
class ClusterAssignment:
    """Eligibility matrix: column p lists the workers assignable to cluster p.

    ``entries`` keeps the constructed row layout (groups x shifts); the
    scheduler only consumes the per-column sorted views.
    """

    entries: np.ndarray
    K: int
    P: int
    n: int
    kind: str  # "static" | "dynamic"
    shifts: tuple[tuple[int, ...], ...] = field(default=())

    def __post_init__(self):
        rows = self.ell * self.n if self.kind == "dynamic" else self.ell
        if self.entries.shape != (rows, self.P):
            raise ValueError(f"matrix shape {self.entries.shape} != ({rows}, {self.P})")
        counts = np.bincount(self.entries.ravel(), minlength=self.K + 1)[1:]
        expected = self.n if self.kind == "dynamic" else 1
        if not np.all(counts == expected):
            raise ValueError("each worker must appear exactly "
                             f"{expected} time(s) in the matrix")

    @property
    def ell(self) -> int:
        return self.K // self.P

    def column(self, p: int) -> list[int]:
        """Raw column p (1-indexed cluster), constructed row order."""
        return [int(w) for w in self.entries[:, p - 1]]

    def sorted_column(self, p: int) -> list[int]:
        """Column p normalized ascending by worker index."""
        return sorted(self.column(p))

    def sorted_columns(self) -> dict[int, list[int]]:
        return {p: self.sorted_column(p) for p in range(1, self.P + 1)}

    def eligible_clusters(self) -> dict[int, tuple[int, ...]]:
        """worker -> ascending tuple of clusters it may join."""
        elig: dict[int, list[int]] = {k: [] for k in range(1, self.K + 1)}
        for p in range(1, self.P + 1):
            for w in self.sorted_column(p):
                elig[w].append(p)
        return {k: tuple(ps) for k, ps in elig.items()}

    def static_slots(self) -> dict[int, tuple[int, int]]:
        """worker -> (cluster, codeword slot) under the fixed layout.

        Only meaningful for a static matrix, where the row index is the slot.
        """
        if self.kind != "static":
            raise ValueError("slots are fixed only for a static assignment")
        return {
            int(self.entries[i, p]): (p + 1, i + 1)
            for i in range(self.ell)
            for p in range(self.P)
        }

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "workers": self.K,
            "clusters": self.P,
            "replication": self.n,
            "shifts": [list(s) for s in self.shifts],
            "matrix": self.entries.tolist(),
            "columns_sorted": {str(p): self.sorted_column(p) for p in range(1, self.P + 1)},
        }


@dataclass(frozen=True)
class DataAssignment:
    """Per-worker stored mini-batch sets and the implied memory bound."""

    batches: dict[int, tuple[int, ...]]
    memory: int

    def to_json(self) -> dict:
        return {
            "memory": self.memory,
            "batches": {str(k): list(v) for k, v in sorted(self.batches.items())},
        }


def _groups(K: int, P: int) -> list[np.ndarray]:
    return [np.arange(g * P + 1, (g + 1) * P + 1) for g in range(K // P)]


def _shift_row(group: np.ndarray, sigma: int) -> np.ndarray:
    P = len(group)
    return np.array([group[(p - sigma) % P] for p in range(P)])


def _check_divisible(K: int, P: int):
    if P < 1 or K % P != 0:
        raise ValueError(f"P={P} must divide K={K}")


def static_assignment(K: int, P: int) -> ClusterAssignment:
    """Canonical fixed partition: group rows with shifts alternating 0, P-1."""
    _check_divisible(K, P)
    shifts = tuple((0,) if g % 2 == 0 else (P - 1,) for g in range(K // P))
    rows = [_shift_row(grp, s[0]) for grp, s in zip(_groups(K, P), shifts)]
    return ClusterAssignment(
        entries=np.array(rows), K=K, P=P, n=1, kind="static", shifts=shifts
    )


def dynamic_assignment_matrix(K, P, n, seed=0, shifts=None) -> ClusterAssignment:
    """ell*n x P eligibility matrix from per-group circular shifts.

    Shift amounts are sampled uniformly without replacement from {0..P-1}
    per group (``shifts`` overrides sampling, mainly for tests). Band j holds
    every group shifted by its j-th amount, so each worker lands in exactly
    n distinct clusters.
    """
    _check_divisible(K, P)
    ell = K // P
    if not 1 <= n <= P:
        raise ValueError(f"need 1 <= n <= P for sampling without replacement, got n={n}")
    if shifts is None:
        rng = substream(seed, LANE_MATRIX)
        shifts = tuple(tuple(int(s) for s in rng.choice(P, size=n, replace=False))
                       for _ in range(ell))
    else:
        shifts = tuple(tuple(int(s) for s in grp) for grp in shifts)
        if len(shifts) != ell or any(len(set(s)) != n for s in shifts):
            raise ValueError("need ell groups of n distinct shift amounts")
    groups = _groups(K, P)
    rows = [_shift_row(groups[g], shifts[g][j]) for j in range(n) for g in range(ell)]
    return ClusterAssignment(
        entries=np.array(rows), K=K, P=P, n=n, kind="dynamic", shifts=shifts
    )


def cluster_batches(K: int, P: int) -> dict[int, tuple[int, ...]]:
    """Cluster p owns mini-batches {(p-1)*ell + 1, ..., p*ell}."""
    ell = K // P
    return {p: tuple(range((p - 1) * ell + 1, p * ell + 1)) for p in range(1, P + 1)}


def derive_data_assignment(A: ClusterAssignment, codes) -> DataAssignment:
    """Minimal per-worker batch storage implied by the assignable codewords.

    Static: a worker holds exactly the r-batch support of its fixed slot.
    Dynamic: a worker may be handed any slot of any of its n clusters, so it
    holds the union of their batch sets (n*ell batches).
    """
    by_cluster = {code.cluster: code for code in codes}
    missing = [p for p in range(1, A.P + 1) if p not in by_cluster]
    if missing:
        raise ValueError(f"codes missing for clusters {missing}")
    batches: dict[int, tuple[int, ...]] = {}
    if A.kind == "static":
        for worker, (p, slot) in A.static_slots().items():
            batches[worker] = tuple(sorted(by_cluster[p].codewords[slot - 1].support))
    else:
        for worker, clusters in A.eligible_clusters().items():
            owned: set[int] = set()
            for p in clusters:
                owned.update(by_cluster[p].batch_set)
            batches[worker] = tuple(sorted(owned))
    return DataAssignment(batches=batches, memory=max(len(v) for v in batches.values()))


def feasibility_check(K: int, P: int, n: int) -> bool:
    """Swap-resolution guarantee: n > P(K-1)/(2K)."""
    _check_divisible(K, P)
    return n > P * (K - 1) / (2 * K)
