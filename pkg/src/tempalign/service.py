"""HTTP service exposing calibration, propagation, alignment and prediction.

Quick computations (alignment, propagation, emulator prediction) answer
synchronously; long-running work (calibration, emulator training) runs as
jobs on a bounded worker pool and is polled via /jobs/{id}. Shared state
(scenario store, chains, models) is immutable once registered; submitting
the same long-running configuration twice returns the existing job.
"""

from __future__ import annotations

import threading
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal

import numpy as np
from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field, field_validator

from . import __version__, bundle
from .calibration import (
    DramConfig,
    LikelihoodConfig,
    PosteriorChain,
    default_priors,
    dram_chain,
    sample_prior,
    valid_parameter_row,
)
from .emulator import EmulatorModel, TrainConfig, generate_training_set, train
from .errors import ConfigurationError, TempalignError, ValidationError
from .fair.params import ParameterVector
from .provenance import config_hash
from .scenarios import ScenarioStore
from .socioecon import (
    BenchmarkEnsemble,
    Portfolio,
    implied_temperature,
    intensity_ratios,
    pathway_adjustment_factor,
    portfolio_from_dict,
)
from .uncertainty import EmissionUncertaintySpec, propagate

JobKind = Literal["calibrate", "propagate", "align", "train-emulator"]
JOB_STATES = ("queued", "running", "done", "failed")


@dataclass
class JobDescriptor:
    id: str
    kind: str
    status: str = "queued"
    progress: float = 0.0
    result: str | None = None     # artifact reference (path or registry id)
    error: str | None = None
    config_digest: str = ""

    def to_dict(self) -> dict:
        return {"id": self.id, "kind": self.kind, "status": self.status,
                "progress": self.progress, "result": self.result,
                "error": self.error, "config_hash": self.config_digest}


class JobRegistry:
    """In-process job table; terminal states are immutable."""

    def __init__(self, max_workers: int = 2):
        self._jobs: dict[str, JobDescriptor] = {}
        self._by_config: dict[str, str] = {}
        self._lock = threading.Lock()
        self._pool = ThreadPoolExecutor(max_workers=max_workers)

    def submit(self, kind: str, digest: str, fn) -> JobDescriptor:
        with self._lock:
            existing = self._by_config.get(digest)
            if existing is not None:
                return self._jobs[existing]
            job = JobDescriptor(id=uuid.uuid4().hex[:12], kind=kind, config_digest=digest)
            self._jobs[job.id] = job
            self._by_config[digest] = job.id

        def runner():
            self.update(job.id, status="running", progress=0.05)
            try:
                result_ref = fn(lambda frac: self.update(job.id, progress=frac))
                self.update(job.id, status="done", progress=1.0, result=result_ref)
            except Exception as exc:  # job failures are reported, not raised
                self.update(job.id, status="failed", error=str(exc))

        self._pool.submit(runner)
        return job

    def update(self, job_id: str, **kw) -> None:
        with self._lock:
            job = self._jobs[job_id]
            if job.status in ("done", "failed"):
                return
            if "progress" in kw:
                kw["progress"] = max(job.progress, min(1.0, kw["progress"]))
            for k, v in kw.items():
                setattr(job, k, v)

    def get(self, job_id: str) -> JobDescriptor | None:
        with self._lock:
            return self._jobs.get(job_id)


@dataclass
class ServiceState:
    """Immutable snapshots of everything the endpoints read."""

    store: ScenarioStore
    benchmark: BenchmarkEnsemble | None = None
    chains: dict[str, PosteriorChain] = field(default_factory=dict)
    models: dict[str, EmulatorModel] = field(default_factory=dict)
    artifacts_dir: Path = Path("artifacts")
    jobs: JobRegistry = field(default_factory=JobRegistry)

    def add_chain(self, name: str, chain: PosteriorChain) -> None:
        self.chains[name] = chain

    def add_model(self, name: str, model: EmulatorModel) -> None:
        self.models[name] = model


def default_state(artifacts_dir: str | Path = "artifacts") -> ServiceState:
    state = ServiceState(store=bundle.load_store(),
                         benchmark=bundle.load_bundled_benchmark(),
                         artifacts_dir=Path(artifacts_dir))
    art = Path(artifacts_dir)
    if art.is_dir():
        # artifact files are named <kind>_<name>_<confighash>; register by name
        for meta in sorted(art.glob("chain_*.json")):
            name = meta.stem[len("chain_"):].rsplit("_", 1)[0]
            state.chains[name] = PosteriorChain.load(meta.with_suffix(""))
        for meta in sorted(art.glob("emulator_*.json")):
            name = meta.stem[len("emulator_"):].rsplit("_", 1)[0]
            state.models[name] = EmulatorModel.load(meta.with_suffix(""))
    return state


# --------------------------------------------------------------------------
# request / response payloads


class UncertaintyPayload(BaseModel):
    family: Literal["normal", "lognormal"] = "normal"
    mu: float = 0.0
    sigma: float = Field(default=0.0, ge=0.0)
    mode: Literal["co2", "proportional"] = "proportional"

    def to_spec(self) -> EmissionUncertaintySpec:
        return EmissionUncertaintySpec(family=self.family, mu=self.mu,
                                       sigma=self.sigma, mode=self.mode)


class ConstituentPayload(BaseModel):
    name: str
    sector: str
    scope1_kt: float = Field(ge=0)
    scope2_kt: float = Field(ge=0)
    scope3_kt: float = Field(ge=0)
    gva_musd: float = Field(gt=0)
    reporting_year: int | None = None


class PortfolioPayload(BaseModel):
    base_year: int
    constituents: list[ConstituentPayload] = Field(min_length=1)

    def to_portfolio(self) -> Portfolio:
        return portfolio_from_dict(self.model_dump())


class AlignRequest(BaseModel):
    portfolio: PortfolioPayload
    scenario_ids: list[str] = Field(min_length=1)
    mode: Literal["mcmc", "emulator"] = "mcmc"
    chain_id: str = "default"
    model_id: str = "default"
    n: int = Field(default=1000, ge=100, le=20000)
    seed: int = 0
    levels: list[float] = Field(default_factory=lambda: [0.9])
    uncertainty: UncertaintyPayload | None = None

    @field_validator("levels")
    @classmethod
    def _levels_valid(cls, v):
        if any(not 0 < x < 1 for x in v):
            raise ValueError("levels must be in (0, 1)")
        return v


class PropagateRequest(BaseModel):
    scenario_id: str
    chain: str = "default"        # chain id, or "prior", or "fixed"
    n: int = Field(default=1000, ge=100, le=20000)
    seed: int = 0
    levels: list[float] = Field(default_factory=lambda: [0.9])
    uncertainty: UncertaintyPayload | None = None


class PriorOverride(BaseModel):
    family: Literal["normal", "lognormal", "uniform"] = "normal"
    loc: float
    scale: float
    low: float = float("-inf")
    high: float = float("inf")


class CalibrateRequest(BaseModel):
    n_iter: int = Field(default=100_000, ge=2000, le=2_000_000)
    seed: int = 0
    use_concentration: bool = False
    chain_name: str = "default"
    prior_overrides: dict[str, PriorOverride] = Field(default_factory=dict)


class TrainEmulatorRequest(BaseModel):
    chain_id: str = "default"
    grid_low: float = Field(default=0.5, gt=0)
    grid_high: float = Field(default=1.5, gt=0)
    grid_points: int = Field(default=40, ge=5, le=500)
    n_draws: int = Field(default=500, ge=100, le=20000)
    epochs: int = Field(default=2000, ge=10, le=50000)
    seed: int = 0
    model_name: str = "default"


# --------------------------------------------------------------------------
# app


def create_app(state: ServiceState | None = None) -> FastAPI:
    app = FastAPI(title="tempalign", version=__version__,
                  description="Portfolio temperature alignment with uncertainty "
                              "quantification")
    st = state if state is not None else default_state()
    app.state.engine = st

    @app.exception_handler(TempalignError)
    async def engine_error(request: Request, exc: TempalignError):
        status = 422 if isinstance(exc, (ValidationError, ConfigurationError)) else 400
        return JSONResponse(status_code=status, content={"detail": str(exc)})

    @app.get("/scenarios")
    def scenarios(request: Request):
        unknown = set(request.query_params) - set()
        if unknown:
            raise HTTPException(status_code=400,
                                detail=f"unknown query parameters: {sorted(unknown)}")
        out = []
        for sid in st.store.ids():
            scen = st.store.get(sid)
            out.append({"id": sid,
                        "first_year": int(scen.years[0]),
                        "last_year": int(scen.years[-1]),
                        "n_gases": len(scen.schema)})
        return {"scenarios": out}

    @app.get("/chains")
    def chains():
        return {"chains": [
            {"id": name, "n_samples": int(c.samples.shape[0]),
             "burn_in": c.burn_in, "acceptance_rate": c.acceptance_rate,
             "seed": c.seed}
            for name, c in sorted(st.chains.items())]}

    @app.get("/models")
    def models():
        return {"models": [
            {"id": name, "model_id": m.model_id, "mode": m.mode,
             "validation_rmse": m.validation_rmse, "converged": m.converged}
            for name, m in sorted(st.models.items())]}

    def _resolve_chain(chain_id: str):
        if chain_id == "prior":
            prior = default_priors()
            return sample_prior(prior, 2000, seed=0, validate=valid_parameter_row), "prior"
        if chain_id == "fixed":
            return None, "fixed-default-parameters"
        if chain_id in st.chains:
            return st.chains[chain_id], chain_id
        raise HTTPException(status_code=404, detail=f"unknown chain {chain_id!r}")

    @app.post("/align")
    def align(req: AlignRequest):
        portfolio = req.portfolio.to_portfolio()
        if st.benchmark is None:
            raise HTTPException(status_code=409, detail="no benchmark ensemble loaded")
        for sid in req.scenario_ids:
            if sid not in st.store.scenarios:
                raise HTTPException(status_code=404, detail=f"unknown scenario {sid!r}")
        digest = config_hash(req.model_dump())
        spec = req.uncertainty.to_spec() if req.uncertainty else None
        warnings: list[str] = []
        results = {}

        if req.mode == "mcmc":
            chain, chain_ref = _resolve_chain(req.chain_id)
            for sid in req.scenario_ids:
                scen = st.store.get(sid)
                band, summary = implied_temperature(
                    portfolio, st.benchmark, scen, st.store.sector_shares,
                    chain=chain, spec=spec, n=req.n, levels=tuple(req.levels),
                    seed=req.seed)
                results[sid] = {"band": band.to_dict(), "summary": summary}
            provenance_ref = {"chain_id": chain_ref}
        else:
            model = st.models.get(req.model_id)
            if model is None:
                raise HTTPException(status_code=404,
                                    detail=f"unknown emulator model {req.model_id!r}")
            ratios = intensity_ratios(portfolio, st.benchmark)
            k = pathway_adjustment_factor(ratios, st.store.sector_shares)
            for sid in req.scenario_ids:
                scen = st.store.get(sid)
                if sid not in model.scenario_ids:
                    raise HTTPException(status_code=409,
                                        detail=f"model was not trained on {sid!r}")
                base_idx = scen.pathway.year_index(portfolio.base_year)
                base_co2e = float(scen.pathway.co2e_total()[base_idx])
                pred = model.predict(np.array([k * base_co2e]))
                warnings.extend(pred.warnings)
                block = pred.per_scenario[sid]
                end = -1
                summary = {
                    "scenario": sid,
                    "end_year": int(block["years"][end]),
                    "mean_end": float(block["mean"][end]),
                    "median_end": float(block["median"][end]),
                    "mean_2050": pred.at(sid, 2050)["mean"],
                    "median_2050": pred.at(sid, 2050)["median"],
                }
                results[sid] = {
                    "band": {
                        "years": block["years"].tolist(),
                        "median": block["median"].tolist(),
                        "mean": block["mean"].tolist(),
                        "bands": {"0.9": {"lower": block["q05"].tolist(),
                                          "upper": block["q95"].tolist()}},
                        "n_samples": None,
                        "provenance": "emulator",
                        "seed": req.seed,
                    },
                    "summary": summary,
                }
            provenance_ref = {"model_id": model.model_id}

        return {
            "provenance": {
                "engine_version": __version__,
                "mode": req.mode,
                "seed": req.seed,
                "config_hash": digest,
                "scenario_ids": req.scenario_ids,
                "adjustment_factor": pathway_adjustment_factor(
                    intensity_ratios(portfolio, st.benchmark), st.store.sector_shares),
                **provenance_ref,
            },
            "warnings": warnings,
            "results": results,
        }

    @app.post("/propagate")
    def propagate_endpoint(req: PropagateRequest):
        if req.scenario_id not in st.store.scenarios:
            raise HTTPException(status_code=404,
                                detail=f"unknown scenario {req.scenario_id!r}")
        chain, chain_ref = _resolve_chain(req.chain)
        theta = ParameterVector() if chain is None else None
        scen = st.store.get(req.scenario_id)
        spec = req.uncertainty.to_spec() if req.uncertainty else None
        band = propagate(scen, chain=chain, theta=theta, spec=spec, n=req.n,
                         levels=tuple(req.levels), seed=req.seed, base_year=2022)
        return {
            "provenance": {"engine_version": __version__, "seed": req.seed,
                           "chain_id": chain_ref, "scenario_id": req.scenario_id,
                           "config_hash": config_hash(req.model_dump())},
            "band": band.to_dict(),
        }

    @app.post("/calibrate", status_code=202)
    def calibrate(req: CalibrateRequest):
        if st.store.observations is None:
            raise HTTPException(status_code=409, detail="no observations loaded")
        digest = config_hash(req.model_dump())
        prior = default_priors()
        if req.prior_overrides:
            from .calibration import ParameterPrior, PriorSpec
            by_name = {p.name: p for p in prior.priors}
            for name, override in req.prior_overrides.items():
                if name not in by_name:
                    raise HTTPException(status_code=422,
                                        detail=f"unknown parameter {name!r}")
                # ParameterPrior validation rejects inconsistent bounds with 422
                by_name[name] = ParameterPrior(name=name, **override.model_dump())
            prior = PriorSpec(priors=tuple(by_name.values()))
        scen = st.store.get(st.store.ids()[0])
        hist = scen.pathway.slice_years(
            int(scen.years[0]), int(st.store.observations.years[-1]))

        def work(progress):
            progress(0.1)
            chain = dram_chain(
                ParameterVector(), req.n_iter, prior, st.store.observations,
                LikelihoodConfig(pathway=hist, use_concentration=req.use_concentration),
                DramConfig(seed=req.seed))
            progress(0.9)
            st.artifacts_dir.mkdir(parents=True, exist_ok=True)
            ref = st.artifacts_dir / f"chain_{req.chain_name}_{digest}"
            chain.save(ref)
            st.add_chain(req.chain_name, chain)
            return str(ref)

        job = st.jobs.submit("calibrate", digest, work)
        return job.to_dict()

    @app.post("/emulator/train", status_code=202)
    def train_emulator(req: TrainEmulatorRequest):
        chain, chain_ref = _resolve_chain(req.chain_id)
        digest = config_hash(req.model_dump())

        def work(progress):
            progress(0.1)
            grid = np.linspace(req.grid_low, req.grid_high, req.grid_points)
            scenarios = [st.store.get(sid) for sid in st.store.ids()]
            ts = generate_training_set(chain, scenarios, grid,
                                       n_draws=req.n_draws, seed=req.seed)
            progress(0.7)
            model = train(ts, TrainConfig(epochs=req.epochs, seed=req.seed,
                                          learning_rate=3e-3),
                          chain_id=chain_ref)
            st.artifacts_dir.mkdir(parents=True, exist_ok=True)
            ref = st.artifacts_dir / f"emulator_{req.model_name}_{digest}"
            model.save(ref)
            st.add_model(req.model_name, model)
            return str(ref)

        job = st.jobs.submit("train-emulator", digest, work)
        return job.to_dict()

    @app.get("/jobs/{job_id}")
    def job_status(job_id: str):
        job = st.jobs.get(job_id)
        if job is None:
            raise HTTPException(status_code=404, detail=f"unknown job {job_id!r}")
        return job.to_dict()

    @app.get("/spec")
    def openapi_spec():
        return app.openapi()

    return app
