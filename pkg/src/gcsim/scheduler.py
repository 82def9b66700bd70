"""Greedy per-iteration worker placement for dynamic clustering.

Given the eligibility matrix and the scheduler's view of who is straggling,
workers are packed into clusters in two phases:

Phase I   The larger of the two categories (non-stragglers on ties) is placed
          first. Clusters take turns in an order that gives the least-served
          cluster (fewest eligible candidates of the category, ties by lower
          index) the first pick; on its turn a cluster takes its best eligible
          unplaced candidate (lowest index, or highest rate when rates are
          given). A category's placement stops at the end of the first round
          in which some non-full cluster found no candidate; then the other
          category is placed the same way.

Phase II  Leftover workers are resolved against clusters that still have open
          slots: placed directly when eligible, otherwise by swapping with the
          first already-placed worker that can legally move into the open
          cluster. A swap never moves a worker that Phase II already placed.

The placement is deterministic: no randomness, pure function of its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .assignment import ClusterAssignment


class NoResolution(Exception):
    """Phase II found no legal swap; possible only when n <= P(K-1)/(2K)."""


@dataclass(frozen=True)
class Placement:
    """Slot-ordered worker ids per cluster: clusters[p-1][i-1] computes slot i."""

    clusters: tuple[tuple[int, ...], ...]
    iteration: int = 0
    swaps: int = 0

    def cluster_of(self) -> dict[int, int]:
        return {w: p + 1 for p, members in enumerate(self.clusters) for w in members}

    def slot_of(self) -> dict[int, tuple[int, int]]:
        """worker -> (cluster, slot)."""
        return {
            w: (p + 1, i + 1)
            for p, members in enumerate(self.clusters)
            for i, w in enumerate(members)
        }

    def straggler_counts(self, straggler_flags) -> list[int]:
        """Per-cluster count of workers flagged straggling (flags 1-indexed by worker)."""
        return [sum(1 for w in members if straggler_flags[w - 1]) for members in self.clusters]


def determine_order(A: ClusterAssignment, candidates) -> tuple[int, ...]:
    """Cluster selection order: fewest eligible candidates first, ties by index."""
    cands = set(candidates)
    counts = {p: len(cands.intersection(A.sorted_column(p))) for p in range(1, A.P + 1)}
    return tuple(sorted(counts, key=lambda p: (counts[p], p)))


def _pick(column, remaining, rates):
    """Best eligible unplaced worker in a column, or None."""
    elig = [w for w in column if w in remaining]
    if not elig:
        return None
    if rates is None:
        return elig[0]  # column is sorted ascending by index
    return max(elig, key=lambda w: (rates[w - 1], -w))


def _place_category(A, candidates, clusters, order, rates, turns_left):
    """Round-robin greedy placement of one category; see module docstring for
    the stop rule. Returns (unplaced ids, turns left under the safety cap)."""
    ell = A.ell
    columns = {p: A.sorted_column(p) for p in order}
    remaining = set(candidates)
    while remaining and turns_left > 0:
        conflict = False
        for p in order:
            if not remaining or turns_left <= 0:
                break
            if len(clusters[p - 1]) >= ell:
                continue  # full clusters are skipped without consuming a turn
            turns_left -= 1
            w = _pick(columns[p], remaining, rates)
            if w is None:
                conflict = True
            else:
                clusters[p - 1].append(w)
                remaining.remove(w)
        if conflict:
            break
    return sorted(remaining), turns_left


def phase1_place(A: ClusterAssignment, observed_ok, rates=None, max_turns=None):
    """Ordered greedy placement of both categories.

    ``observed_ok`` is the scheduler's 1/0 view per worker (1 = not
    straggling); ``rates`` switches selection to fastest-first. Returns
    (clusters as list of lists, sorted unplaced worker ids).
    """
    observed_ok = np.asarray(observed_ok)
    if observed_ok.shape != (A.K,):
        raise ValueError(f"observed state must have length K={A.K}")
    if max_turns is None:
        max_turns = 2 * A.K * A.P
    ok = [k for k in range(1, A.K + 1) if observed_ok[k - 1]]
    bad = [k for k in range(1, A.K + 1) if not observed_ok[k - 1]]
    first, second = (ok, bad) if len(ok) >= len(bad) else (bad, ok)
    clusters: list[list[int]] = [[] for _ in range(A.P)]
    unplaced: list[int] = []
    turns = max_turns
    for category in (first, second):
        left, turns = _place_category(
            A, category, clusters, determine_order(A, category), rates, turns
        )
        unplaced.extend(left)
    return clusters, sorted(unplaced)


def phase2_resolve(A: ClusterAssignment, clusters, unplaced) -> int:
    """Resolve placement conflicts in ascending worker order; returns the
    number of swaps performed. Mutates ``clusters``.

    Each resolution places one worker: directly into an open eligible
    cluster when possible, otherwise by the first-fit swap (scan the
    worker's clusters ascending, their occupants in placement order) that
    frees a seat while filling an open one. Any placed worker may serve as
    a swap partner; restricting partners to workers untouched by earlier
    resolutions can dead-end states that the swap guarantee covers.
    """
    ell = A.ell
    columns = {p: set(A.sorted_column(p)) for p in range(1, A.P + 1)}
    eligible = A.eligible_clusters()
    swaps = 0
    for k in sorted(unplaced):
        open_clusters = [p for p in range(1, A.P + 1) if len(clusters[p - 1]) < ell]
        direct = [p for p in open_clusters if k in columns[p]]
        if direct:
            clusters[direct[0] - 1].append(k)
            continue
        resolved = False
        for p in open_clusters:
            for pbar in eligible[k]:
                for idx, kbar in enumerate(clusters[pbar - 1]):
                    if kbar not in columns[p]:
                        continue
                    clusters[pbar - 1][idx] = k  # k inherits kbar's slot
                    clusters[p - 1].append(kbar)
                    swaps += 1
                    resolved = True
                    break
                if resolved:
                    break
            if resolved:
                break
        if not resolved:
            raise NoResolution(f"no swap can place worker {k}")
    return swaps


def assign_clusters(
    A: ClusterAssignment,
    observed_ok,
    rates=None,
    iteration: int = 0,
    max_turns=None,
) -> Placement:
    """Full placement: order determination, Phase I, Phase II.

    Codeword slot i of a cluster goes to the i-th worker placed into it
    (slots are exchangeable for decoding, so this only fixes determinism).
    """
    clusters, unplaced = phase1_place(A, observed_ok, rates=rates, max_turns=max_turns)
    swaps = phase2_resolve(A, clusters, unplaced) if unplaced else 0
    return Placement(
        clusters=tuple(tuple(members) for members in clusters),
        iteration=iteration,
        swaps=swaps,
    )


def static_placement(A: ClusterAssignment) -> Placement:
    """The fixed placement encoded by a static assignment matrix."""
    if A.kind != "static":
        raise ValueError("static placement needs a static matrix")
    return Placement(
        clusters=tuple(tuple(int(w) for w in A.entries[:, p]) for p in range(A.P))
    )


def check_placement(A: ClusterAssignment, placement: Placement):
    """Validity oracle: sizes, eligibility, each worker exactly once."""
    ell = A.ell
    seen: list[int] = []
    for p, members in enumerate(placement.clusters, start=1):
        if len(members) != ell:
            raise AssertionError(f"cluster {p} has {len(members)} workers, wants {ell}")
        column = set(A.sorted_column(p))
        for w in members:
            if w not in column:
                raise AssertionError(f"worker {w} not eligible for cluster {p}")
        seen.extend(members)
    if sorted(seen) != list(range(1, A.K + 1)):
        raise AssertionError("placement is not a bijection onto the workers")
