"""Pydantic request/response models for the simulation service."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

from .. import engine, stragglers

SchemeName = Literal["GC", "GC-SC", "GC-DC", "LB"]
ModelName = Literal["ge-homogeneous", "ge-heterogeneous", "time-varying"]
SsiMode = Literal["perfect", "imperfect"]


class StragglerParams(BaseModel):
    model: ModelName = "ge-homogeneous"
    switch_prob: float = Field(default=0.05, ge=0.0, le=1.0)
    mu_slow: float = Field(default=0.1, gt=0.0)
    mu_fast: float = Field(default=10.0, gt=0.0)
    tau: float = Field(default=0.5, gt=0.0)
    initial_stragglers: Optional[int] = Field(
        default=None, ge=0, description="defaults to half the workers"
    )
    ssi: SsiMode = "imperfect"

    def to_config(self, workers: int) -> stragglers.StragglerConfig:
        count = self.initial_stragglers
        if count is None:
            count = engine.default_initial_stragglers(workers)
        return stragglers.StragglerConfig(
            model=self.model,
            p=self.switch_prob,
            mu_slow=self.mu_slow,
            mu_fast=self.mu_fast,
            tau=self.tau,
            initial_stragglers=count,
            ssi=self.ssi,
        )


class ExperimentRequest(BaseModel):
    workers: int = Field(default=20, ge=1)
    clusters: int = Field(default=5, ge=1)
    load: int = Field(default=3, ge=1)
    replication: int = Field(default=3, ge=1)
    iterations: int = Field(default=400, ge=1)
    runs: int = Field(default=30, ge=1)
    seed: int = 0
    schemes: list[SchemeName] = Field(default=list(engine.ALL_SCHEMES))
    alpha: float = Field(default=0.01, gt=0.0)
    straggler: StragglerParams = Field(default_factory=StragglerParams)
    verify_gradients: bool = False
    verify_dim: int = Field(default=100, ge=1)
    verify_size: int = Field(default=400, ge=1)
    jobs: int = Field(default=1, ge=1)
    dump_placements: bool = False

    def to_config(self) -> engine.ExperimentConfig:
        return engine.ExperimentConfig(
            workers=self.workers,
            clusters=self.clusters,
            load=self.load,
            replication=self.replication,
            iterations=self.iterations,
            runs=self.runs,
            seed=self.seed,
            schemes=tuple(self.schemes),
            alpha=self.alpha,
            straggler=self.straggler.to_config(self.workers),
            verify_gradients=self.verify_gradients,
            verify_dim=self.verify_dim,
            verify_size=self.verify_size,
            jobs=self.jobs,
            collect_placements=self.dump_placements,
        )


class SummaryEntry(BaseModel):
    scheme: str
    mean: float
    std: float
    improvement_vs_gcsc: Optional[float] = None


class ExperimentResponse(BaseModel):
    summary: list[SummaryEntry]
    data_csv: str
    summary_csv: str
    placements_csv: Optional[str] = None
    histogram_csv: Optional[str] = None
    feasible: bool
    fallbacks: int
    records: int


class AssignmentRequest(BaseModel):
    workers: int = Field(default=20, ge=1)
    clusters: int = Field(default=5, ge=1)
    load: int = Field(default=3, ge=1)
    replication: int = Field(default=3, ge=1)
    seed: int = 0


class AssignmentResponse(BaseModel):
    static: dict
    dynamic: dict
    static_data: dict
    dynamic_data: dict
    codebook: dict
    feasible: bool


class TraceRequest(BaseModel):
    workers: int = Field(default=20, ge=1)
    iterations: int = Field(default=400, ge=1)
    seed: int = 0
    run: int = Field(default=1, ge=1)
    straggler: StragglerParams = Field(default_factory=StragglerParams)


class TraceResponse(BaseModel):
    trace_csv: str
