"""FastAPI service wrapping the simulation library.

The service is stateless: every endpoint computes its result and returns
document contents (CSV/JSON text) for the client to persist, so multiple
clients can share one server without fighting over a filesystem.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import coding, engine
from ..assignment import (
    cluster_batches,
    derive_data_assignment,
    dynamic_assignment_matrix,
    feasibility_check,
    static_assignment,
)
from .models import (
    AssignmentRequest,
    AssignmentResponse,
    ExperimentRequest,
    ExperimentResponse,
    SummaryEntry,
    TraceRequest,
    TraceResponse,
)

app = FastAPI(
    title="gcsim",
    description="Gradient coding with static/dynamic clustering: "
    "straggler-tolerant distributed GD simulations",
    version="0.1.0",
)


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": app.version}


@app.post("/experiments/run", response_model=ExperimentResponse)
def run_experiment(request: ExperimentRequest) -> ExperimentResponse:
    try:
        cfg = request.to_config()
    except ValueError as err:
        raise HTTPException(status_code=422, detail=str(err))
    try:
        result = engine.run_experiment(cfg)
    except engine.DecodeVerificationError as err:
        raise HTTPException(status_code=500, detail=f"gradient verification failed: {err}")
    placements_csv = histogram_csv = None
    if cfg.collect_placements and result.placements:
        placements_csv = engine.placements_csv_text(result.placements)
        histogram_csv = engine.placement_histogram_csv_text(result.placements)
    return ExperimentResponse(
        summary=[
            SummaryEntry(
                scheme=row.scheme,
                mean=row.mean,
                std=row.std,
                improvement_vs_gcsc=row.improvement_vs_gcsc,
            )
            for row in result.summary
        ],
        data_csv=engine.records_csv_text(result.records),
        summary_csv=engine.summary_csv_text(result.summary),
        placements_csv=placements_csv,
        histogram_csv=histogram_csv,
        feasible=result.feasible,
        fallbacks=result.fallbacks,
        records=len(result.records),
    )


@app.post("/assignments/dump", response_model=AssignmentResponse)
def dump_assignment(request: AssignmentRequest) -> AssignmentResponse:
    try:
        static = static_assignment(request.workers, request.clusters)
        dynamic = dynamic_assignment_matrix(
            request.workers, request.clusters, request.replication, seed=request.seed
        )
        owned = cluster_batches(request.workers, request.clusters)
        codes = [
            coding.build_cluster_code(p, owned[p], request.load, seed=request.seed)
            for p in sorted(owned)
        ]
        static_data = derive_data_assignment(static, codes)
        dynamic_data = derive_data_assignment(dynamic, codes)
    except ValueError as err:
        raise HTTPException(status_code=422, detail=str(err))
    return AssignmentResponse(
        static=static.to_json(),
        dynamic=dynamic.to_json(),
        static_data=static_data.to_json(),
        dynamic_data=dynamic_data.to_json(),
        codebook=coding.codebook_to_json(codes),
        feasible=feasibility_check(request.workers, request.clusters, request.replication),
    )


@app.post("/traces/dump", response_model=TraceResponse)
def dump_trace(request: TraceRequest) -> TraceResponse:
    try:
        cfg = request.straggler.to_config(request.workers)
        text = engine.trace_csv_text(
            cfg, request.workers, request.iterations, request.seed, run=request.run
        )
    except ValueError as err:
        raise HTTPException(status_code=422, detail=str(err))
    return TraceResponse(trace_csv=text)
