"""Per-cluster gradient codes: cyclic supports, coefficients, decoding.

Each cluster of ell workers runs an independent code over its ell mini-batches
with computation load r: codeword slot i covers batches
{b_i, b_{i+1 mod ell}, ..., b_{i+r-1 mod ell}}. Coefficients are built so that
the scaled all-ones target lies in the span of ANY ell-r+1 coefficient rows:
every row is forced into the null space of a seeded random (r-1) x ell matrix
whose columns sum to zero. Decoding any ell-r+1 returned slots then recovers
the batch-gradient average by one small linear solve.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from .rng import LANE_CODE, substream

# abs tolerance for "target is in the row span" residual checks
_SPAN_TOL = 1e-9
_COEF_CAP = 1e6


class NotDecodable(Exception):
    """Fewer distinct codeword slots than the decoding threshold ell-r+1."""


@dataclass(frozen=True)
class Codeword:
    """Slot ``slot`` of cluster ``cluster``: sum_j coefficients[j] * g[support[j]]."""

    cluster: int
    slot: int
    support: tuple[int, ...]
    coefficients: np.ndarray


@dataclass(frozen=True)
class ClusterCode:
    cluster: int
    batch_set: tuple[int, ...]
    codewords: tuple[Codeword, ...]
    r: int

    @property
    def ell(self) -> int:
        return len(self.batch_set)

    @property
    def threshold(self) -> int:
        """Distinct slots needed to decode."""
        return self.ell - self.r + 1

    def coefficient_matrix(self) -> np.ndarray:
        """(ell, ell) matrix over batch positions; row i = slot i+1."""
        ell = self.ell
        pos = {b: j for j, b in enumerate(self.batch_set)}
        B = np.zeros((ell, ell))
        for cw in self.codewords:
            for b, c in zip(cw.support, cw.coefficients):
                B[cw.slot - 1, pos[b]] = c
        return B

    def to_json(self) -> dict:
        return {
            "cluster": self.cluster,
            "batches": list(self.batch_set),
            "load": self.r,
            "slots": {
                str(cw.slot): {
                    "support": list(cw.support),
                    "coefficients": [float(c) for c in cw.coefficients],
                }
                for cw in self.codewords
            },
        }


def _kernel_coefficients(ell, r, rng):
    """Coefficient matrix with cyclic supports, rows orthogonal to a random
    zero-column-sum kernel. Returns None when the sampled kernel is unusable."""
    if r == 1:
        return np.eye(ell)
    H = rng.normal(size=(r - 1, ell))
    H[:, -1] = -H[:, :-1].sum(axis=1)
    B = np.zeros((ell, ell))
    for i in range(ell):
        supp = [(i + t) % ell for t in range(r)]
        try:
            x = np.linalg.solve(H[:, supp[1:]], -H[:, supp[0]])
        except np.linalg.LinAlgError:
            return None
        if not np.all(np.isfinite(x)) or np.max(np.abs(x)) > _COEF_CAP:
            return None
        B[i, supp[0]] = 1.0
        B[i, supp[1:]] = x
    return B


def _spans_target(B, rows, target):
    a, *_ = np.linalg.lstsq(B[rows].T, target, rcond=None)
    return np.linalg.norm(B[rows].T @ a - target) <= _SPAN_TOL


def build_cluster_code(cluster, batch_set, r, seed=0, max_verify_subsets=20000):
    """Construct the cluster's code and verify decodability at build time.

    Every (ell-r+1)-subset of slots is checked to span the decoding target;
    on the measure-zero failure the coefficients are resampled with a bumped
    seed. When the subset count exceeds ``max_verify_subsets`` a deterministic
    random sample of subsets is checked instead.
    """
    batch_set = tuple(batch_set)
    ell = len(batch_set)
    if not 1 <= r <= ell:
        raise ValueError(f"need 1 <= r <= ell, got r={r}, ell={ell}")
    target = np.full(ell, 1.0 / ell)
    for attempt in range(64):
        rng = substream(seed, LANE_CODE, cluster, ell, r, attempt)
        B = _kernel_coefficients(ell, r, rng)
        if B is None:
            continue
        if comb(ell, ell - r + 1) <= max_verify_subsets:
            subsets = combinations(range(ell), ell - r + 1)
        else:
            subsets = (
                sorted(rng.choice(ell, size=ell - r + 1, replace=False))
                for _ in range(max_verify_subsets)
            )
        if all(_spans_target(B, list(W), target) for W in subsets):
            codewords = tuple(
                Codeword(
                    cluster=cluster,
                    slot=i + 1,
                    support=tuple(batch_set[(i + t) % ell] for t in range(r)),
                    coefficients=B[i, [(i + t) % ell for t in range(r)]].copy(),
                )
                for i in range(ell)
            )
            return ClusterCode(cluster=cluster, batch_set=batch_set, codewords=codewords, r=r)
    raise RuntimeError(f"could not build a decodable code for ell={ell}, r={r}")


def evaluate_codeword(cw: Codeword, gradients) -> np.ndarray:
    """sum_j coefficients[j] * gradients[support[j]]."""
    missing = [b for b in cw.support if b not in gradients]
    if missing:
        raise KeyError(f"missing batch gradients {missing} for slot {cw.slot}")
    return sum(c * gradients[b] for c, b in zip(cw.coefficients, cw.support))


def decode_cluster(code: ClusterCode, received) -> np.ndarray:
    """Recover (1/ell) * sum of the cluster's batch gradients.

    ``received`` is an iterable of (slot, value) pairs; at least ell-r+1
    distinct slots are required. All received rows are used in one
    least-squares solve for the combination coefficients.
    """
    by_slot = {}
    for slot, value in received:
        by_slot.setdefault(slot, np.asarray(value, dtype=float))
    if len(by_slot) < code.threshold:
        raise NotDecodable(
            f"got {len(by_slot)} distinct slots, need {code.threshold}"
        )
    slots = sorted(by_slot)
    B = code.coefficient_matrix()
    rows = [s - 1 for s in slots]
    target = np.full(code.ell, 1.0 / code.ell)
    a, *_ = np.linalg.lstsq(B[rows].T, target, rcond=None)
    residual = np.linalg.norm(B[rows].T @ a - target)
    if residual > 1e-6:
        # impossible under the construction-time decodability check
        raise RuntimeError(
            f"decoding system inconsistent (residual {residual:.3e}) for "
            f"cluster {code.cluster}, slots {slots}"
        )
    return sum(ai * by_slot[s] for ai, s in zip(a, slots))


def codebook_to_json(codes) -> dict:
    """Cluster -> slots -> support/coefficients document for audits."""
    return {str(code.cluster): code.to_json() for code in codes}
