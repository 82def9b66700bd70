"""Experiment orchestration: traces, placements, draws, records, summaries.

One experiment fixes a single eligibility matrix, then plays ``runs``
independent straggler traces of ``iterations`` steps each. Within an
iteration every scheme is evaluated on the SAME per-worker latency draws
(common random numbers), so comparisons are paired and the lower bound
dominates pointwise. Optionally, the gradient pipeline is verified each
iteration by decoding every scheme's codewords from its earliest finishers
and checking the reconstruction against the centralized gradient.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import coding, dataset, latency, scheduler, stragglers
from .assignment import (
    cluster_batches,
    dynamic_assignment_matrix,
    feasibility_check,
    static_assignment,
)
from .rng import LANE_LATENCY, LANE_TRACE, substream

log = logging.getLogger(__name__)

SCHEME_GC = "GC"
SCHEME_GCSC = "GC-SC"
SCHEME_GCDC = "GC-DC"
SCHEME_LB = "LB"
ALL_SCHEMES = (SCHEME_GC, SCHEME_GCSC, SCHEME_GCDC, SCHEME_LB)

VERIFY_TOL = 1e-9


class DecodeVerificationError(Exception):
    """A decoded gradient failed to match the centralized gradient."""


@dataclass(frozen=True)
class ExperimentConfig:
    workers: int = 20
    clusters: int = 5
    load: int = 3
    replication: int = 3
    iterations: int = 400
    runs: int = 30
    seed: int = 0
    schemes: tuple[str, ...] = ALL_SCHEMES
    alpha: float = 0.01
    straggler: stragglers.StragglerConfig = field(
        default_factory=stragglers.StragglerConfig
    )
    verify_gradients: bool = False
    verify_dim: int = 100
    verify_size: int = 400
    eta: float = 0.1
    jobs: int = 1
    collect_placements: bool = False

    def __post_init__(self):
        if self.clusters < 1 or self.workers % self.clusters != 0:
            raise ValueError(
                f"clusters={self.clusters} must divide workers={self.workers}"
            )
        if not 1 <= self.load <= self.ell:
            raise ValueError(f"need 1 <= load <= ell={self.ell}, got {self.load}")
        if not 1 <= self.replication <= self.clusters:
            raise ValueError(
                f"replication must be in [1, clusters], got {self.replication}"
            )
        if self.iterations < 1 or self.runs < 1:
            raise ValueError("iterations and runs must be positive")
        if not self.schemes:
            raise ValueError("scheme list is empty")
        unknown = [s for s in self.schemes if s not in ALL_SCHEMES]
        if unknown:
            raise ValueError(f"unknown schemes {unknown}; valid: {list(ALL_SCHEMES)}")
        if self.straggler.initial_stragglers > self.workers:
            raise ValueError("more initial stragglers than workers")
        if self.verify_gradients and self.verify_size % self.workers != 0:
            raise ValueError(
                f"verification dataset size {self.verify_size} must be divisible "
                f"by workers={self.workers}"
            )

    @property
    def ell(self) -> int:
        return self.workers // self.clusters


def default_initial_stragglers(workers: int) -> int:
    return workers // 2


@dataclass(frozen=True)
class IterationRecord:
    run: int
    iteration: int
    scheme: str
    completion_time: float
    max_cluster_stragglers: int
    conflicts: int


@dataclass(frozen=True)
class PlacementRecord:
    run: int
    iteration: int
    cluster: int
    slot: int
    worker: int
    straggler: int


@dataclass(frozen=True)
class SummaryRow:
    scheme: str
    mean: float
    std: float
    improvement_vs_gcsc: float | None


@dataclass(frozen=True)
class ExperimentResult:
    config: ExperimentConfig
    records: list[IterationRecord]
    summary: list[SummaryRow]
    feasible: bool
    fallbacks: int
    placements: list[PlacementRecord] | None = None

    def mean(self, scheme: str) -> float:
        for row in self.summary:
            if row.scheme == scheme:
                return row.mean
        raise KeyError(scheme)


class _VerifyContext:
    """Dataset and codes for end-to-end gradient checks."""

    def __init__(self, cfg: ExperimentConfig):
        self.train, _ = dataset.generate_synthetic(
            cfg.verify_dim, cfg.verify_size, max(cfg.verify_size // 5, 1), cfg.seed
        )
        self.batches = dataset.partition(self.train, cfg.workers)
        owned = cluster_batches(cfg.workers, cfg.clusters)
        self.cluster_codes = {
            p: coding.build_cluster_code(p, owned[p], cfg.load, seed=cfg.seed)
            for p in range(1, cfg.clusters + 1)
        }
        # plain-GC code: one cyclic code over all K batches, slot k <-> worker k
        self.gc_code = coding.build_cluster_code(
            0, tuple(range(1, cfg.workers + 1)), cfg.load, seed=cfg.seed
        )

    def batch_gradients(self, theta) -> dict[int, np.ndarray]:
        return {
            b.index: dataset.partial_gradient(self.train, b, theta)
            for b in self.batches
        }


def _decode_clustered(placement, codes, grads, draws, ell, r):
    """Decode each cluster from its earliest ell-r+1 finishers; average."""
    parts = []
    for p, members in enumerate(placement.clusters, start=1):
        order = sorted(range(ell), key=lambda i: draws[members[i] - 1])
        received = []
        for i in order[: ell - r + 1]:
            slot = i + 1
            cw = codes[p].codewords[slot - 1]
            received.append((slot, coding.evaluate_codeword(cw, grads)))
        parts.append(coding.decode_cluster(codes[p], received))
    return np.mean(parts, axis=0)


def _decode_gc(gc_code, grads, draws, r):
    """Decode the plain-GC code from the earliest K-r+1 workers."""
    K = len(draws)
    order = np.argsort(draws, kind="stable")
    received = []
    for k0 in order[: K - r + 1]:
        slot = int(k0) + 1
        received.append((slot, coding.evaluate_codeword(gc_code.codewords[slot - 1], grads)))
    return coding.decode_cluster(gc_code, received)


def _verify_schemes(ctx, cfg, theta, draws, static_pl, dynamic_pl):
    grads = ctx.batch_gradients(theta)
    reference = dataset.centralized_gradient(ctx.train, theta)
    scale = max(float(np.linalg.norm(reference)), 1e-30)
    estimates = {}
    if SCHEME_GC in cfg.schemes:
        estimates[SCHEME_GC] = _decode_gc(ctx.gc_code, grads, draws, cfg.load)
    if SCHEME_GCSC in cfg.schemes:
        estimates[SCHEME_GCSC] = _decode_clustered(
            static_pl, ctx.cluster_codes, grads, draws, cfg.ell, cfg.load
        )
    if SCHEME_GCDC in cfg.schemes and dynamic_pl is not None:
        estimates[SCHEME_GCDC] = _decode_clustered(
            dynamic_pl, ctx.cluster_codes, grads, draws, cfg.ell, cfg.load
        )
    for scheme, est in estimates.items():
        rel = float(np.linalg.norm(est - reference)) / scale
        if rel > VERIFY_TOL:
            raise DecodeVerificationError(
                f"{scheme} decoded gradient off by {rel:.3e} (tol {VERIFY_TOL})"
            )
    return reference


def scheme_completion(scheme, draws, r, P, ell, placement=None) -> float:
    """Completion time of one scheme on a shared vector of worker draws.

    The clustered schemes need their Placement; GC and LB are pure order
    statistics over all K draws.
    """
    draws = np.asarray(draws, dtype=float)
    if scheme == SCHEME_GC:
        return latency.gc_completion(draws, r)
    if scheme == SCHEME_LB:
        return latency.lower_bound_completion(draws, P, ell, r)
    if scheme in (SCHEME_GCSC, SCHEME_GCDC):
        if placement is None:
            raise ValueError(f"{scheme} needs a placement")
        return latency.iteration_completion(
            [
                latency.cluster_completion(draws[np.array(m) - 1], ell, r)
                for m in placement.clusters
            ]
        )
    raise ValueError(f"unknown scheme {scheme!r}")


def _observed_ok(obs: stragglers.StragglerState, cfg: stragglers.StragglerConfig):
    """Scheduler's non-straggler flags: chain state for the homogeneous model,
    rate threshold for the heterogeneous ones."""
    if cfg.model == stragglers.GE_HOMOGENEOUS:
        return obs.S.astype(bool)
    return ~stragglers.classify(obs.mu, cfg.tau)


def _true_straggler_flags(state, cfg):
    if cfg.model == stragglers.GE_HOMOGENEOUS:
        return state.S == 0
    return stragglers.classify(state.mu, cfg.tau)


def run_single(cfg: ExperimentConfig, run: int, static_A, dynamic_A, ctx=None):
    """One run: a fresh straggler trace shared by every scheme.

    Returns (records, placement records or None, fallback count).
    """
    scfg = cfg.straggler
    K, P, r, ell, T = cfg.workers, cfg.clusters, cfg.load, cfg.ell, cfg.iterations
    heterogeneous = scfg.model != stragglers.GE_HOMOGENEOUS
    trace_rng = substream(cfg.seed, LANE_TRACE, run)
    state = stragglers.init_state(scfg, K, trace_rng)
    prev = state
    static_pl = scheduler.static_placement(static_A)
    model = dataset.ModelState(theta=np.zeros(cfg.verify_dim), eta=cfg.eta)
    records: list[IterationRecord] = []
    placement_rows: list[PlacementRecord] | None = (
        [] if cfg.collect_placements else None
    )
    fallbacks = 0
    for t in range(1, T + 1):
        if t > 1:
            prev, state = state, stragglers.step(state, scfg, trace_rng)
        obs = stragglers.observe(state, prev, scfg.ssi)
        draws = latency.sample_latencies(
            state.mu, cfg.alpha, r, substream(cfg.seed, LANE_LATENCY, run, t)
        )
        true_flags = _true_straggler_flags(state, scfg)
        total_stragglers = int(np.sum(true_flags))
        dynamic_pl = None
        if SCHEME_GCDC in cfg.schemes:
            obs_ok = _observed_ok(obs, scfg)
            rates = obs.mu if heterogeneous else None
            try:
                dynamic_pl = scheduler.assign_clusters(
                    dynamic_A, obs_ok, rates=rates, iteration=t
                )
            except scheduler.NoResolution:
                log.warning(
                    "run %d iter %d: placement conflict unresolvable, "
                    "falling back to static clustering", run, t,
                )
                dynamic_pl = static_pl
                fallbacks += 1
        for scheme in cfg.schemes:
            if scheme in (SCHEME_GC, SCHEME_LB):
                value = scheme_completion(scheme, draws, r, P, ell)
                worst = total_stragglers
                swaps = 0
            else:
                pl = static_pl if scheme == SCHEME_GCSC else dynamic_pl
                value = scheme_completion(scheme, draws, r, P, ell, placement=pl)
                worst = max(pl.straggler_counts(true_flags))
                swaps = pl.swaps if scheme == SCHEME_GCDC else 0
            records.append(
                IterationRecord(
                    run=run,
                    iteration=t,
                    scheme=scheme,
                    completion_time=float(value),
                    max_cluster_stragglers=int(worst),
                    conflicts=int(swaps),
                )
            )
        if placement_rows is not None and dynamic_pl is not None:
            for p, members in enumerate(dynamic_pl.clusters, start=1):
                for i, w in enumerate(members, start=1):
                    placement_rows.append(
                        PlacementRecord(
                            run=run, iteration=t, cluster=p, slot=i,
                            worker=w, straggler=int(true_flags[w - 1]),
                        )
                    )
        if cfg.verify_gradients and ctx is not None:
            gradient = _verify_schemes(ctx, cfg, model.theta, draws, static_pl, dynamic_pl)
            model = dataset.gd_step(model, gradient)
    return records, placement_rows, fallbacks


def _run_single_args(args):
    return run_single(*args)


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """All runs under one fixed eligibility matrix; deterministic given seed."""
    static_A = static_assignment(cfg.workers, cfg.clusters)
    dynamic_A = dynamic_assignment_matrix(
        cfg.workers, cfg.clusters, cfg.replication, seed=cfg.seed
    )
    feasible = feasibility_check(cfg.workers, cfg.clusters, cfg.replication)
    if not feasible and SCHEME_GCDC in cfg.schemes:
        log.warning(
            "replication n=%d violates n > P(K-1)/(2K); conflict resolution may "
            "fall back to static clustering", cfg.replication,
        )
    ctx = _VerifyContext(cfg) if cfg.verify_gradients else None
    runs = list(range(1, cfg.runs + 1))
    if cfg.jobs > 1:
        args = [(cfg, run, static_A, dynamic_A, ctx) for run in runs]
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            outputs = list(pool.map(_run_single_args, args))
    else:
        outputs = [run_single(cfg, run, static_A, dynamic_A, ctx) for run in runs]
    records: list[IterationRecord] = []
    placements: list[PlacementRecord] = []
    fallbacks = 0
    for recs, rows, nfall in outputs:
        records.extend(recs)
        if rows:
            placements.extend(rows)
        fallbacks += nfall
    return ExperimentResult(
        config=cfg,
        records=records,
        summary=summarize(records),
        feasible=feasible,
        fallbacks=fallbacks,
        placements=placements if cfg.collect_placements else None,
    )


def summarize(records) -> list[SummaryRow]:
    """Mean completion time per scheme with across-run sample std."""
    if not records:
        raise ValueError("no records to summarize")
    per_run: dict[str, dict[int, list[float]]] = {}
    order: list[str] = []
    for rec in records:
        if rec.scheme not in per_run:
            per_run[rec.scheme] = {}
            order.append(rec.scheme)
        per_run[rec.scheme].setdefault(rec.run, []).append(rec.completion_time)
    means = {}
    stds = {}
    for scheme, by_run in per_run.items():
        run_means = np.array([np.mean(v) for _, v in sorted(by_run.items())])
        means[scheme] = float(run_means.mean())
        stds[scheme] = float(run_means.std(ddof=1)) if len(run_means) > 1 else 0.0
    base = means.get(SCHEME_GCSC)
    rows = []
    for scheme in order:
        improvement = None
        if base is not None and base > 0:
            improvement = (base - means[scheme]) / base
        rows.append(
            SummaryRow(
                scheme=scheme,
                mean=means[scheme],
                std=stds[scheme],
                improvement_vs_gcsc=improvement,
            )
        )
    return rows


DATA_HEADER = "run,iteration,scheme,completion_time,max_cluster_stragglers,conflicts"
SUMMARY_HEADER = "scheme,mean,std,improvement_vs_gcsc"
PLACEMENT_HEADER = "run,iteration,cluster,slot,worker,straggler"
HISTOGRAM_HEADER = "straggler_count,occurrences"


def records_csv_text(records) -> str:
    if not records:
        raise ValueError("no records to write")
    lines = [DATA_HEADER]
    for r in records:
        lines.append(
            f"{r.run},{r.iteration},{r.scheme},{r.completion_time!r},"
            f"{r.max_cluster_stragglers},{r.conflicts}"
        )
    return "\n".join(lines) + "\n"


def summary_csv_text(summary) -> str:
    if not summary:
        raise ValueError("no summary rows to write")
    lines = [SUMMARY_HEADER]
    for row in summary:
        imp = "" if row.improvement_vs_gcsc is None else repr(row.improvement_vs_gcsc)
        lines.append(f"{row.scheme},{row.mean!r},{row.std!r},{imp}")
    return "\n".join(lines) + "\n"


def placements_csv_text(placements) -> str:
    if not placements:
        raise ValueError("no placement rows to write")
    lines = [PLACEMENT_HEADER]
    for p in placements:
        lines.append(
            f"{p.run},{p.iteration},{p.cluster},{p.slot},{p.worker},{p.straggler}"
        )
    return "\n".join(lines) + "\n"


def placement_histogram_csv_text(placements) -> str:
    """Distribution of per-cluster straggler counts over all run-iterations."""
    if not placements:
        raise ValueError("no placement rows to aggregate")
    counts: dict[tuple[int, int, int], int] = {}
    for p in placements:
        key = (p.run, p.iteration, p.cluster)
        counts[key] = counts.get(key, 0) + p.straggler
    histogram: dict[int, int] = {}
    for c in counts.values():
        histogram[c] = histogram.get(c, 0) + 1
    lines = [HISTOGRAM_HEADER]
    for c in sorted(histogram):
        lines.append(f"{c},{histogram[c]}")
    return "\n".join(lines) + "\n"


def write_csv(text: str, path):
    with open(path, "w", newline="") as fh:
        fh.write(text)


def trace_csv_text(cfg: stragglers.StragglerConfig, K: int, T: int, seed: int, run: int = 1) -> str:
    """Iteration x worker straggling-state matrix for one run's trace."""
    states = stragglers.trace(cfg, K, T, substream(seed, LANE_TRACE, run))
    lines = ["iteration," + ",".join(f"w{k}" for k in range(1, K + 1))]
    for t, st in enumerate(states, start=1):
        lines.append(f"{t}," + ",".join(str(int(s)) for s in st.S))
    return "\n".join(lines) + "\n"
