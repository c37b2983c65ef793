"""FastAPI application wrapping the core package.

Domain validation failures (bad graphs, out-of-range noise, refused
enumerations) map to HTTP 400 with the original message; shape errors in
the request body are FastAPI's usual 422.
"""
from __future__ import annotations

import os
from dataclasses import asdict
from fractions import Fraction

from fastapi import FastAPI, HTTPException

from ..bounds import BoundInputs, evaluate_bounds
from ..figures import FigureSpec, build_figure
from ..genmodel import ModelParams
from ..graphs import EnumerationLimitError, Graph, GraphError, GraphFamily, build_family, metrics
from ..montecarlo import TrialConfig, run_trials, summary_to_dict
from .schemas import (
    BoundsRequest,
    BoundsResponse,
    FigureRequest,
    FigureResponse,
    GraphInfoRequest,
    GraphInfoResponse,
    GraphRequest,
    HealthResponse,
    SimulateRequest,
    SimulateResponse,
)

_DOMAIN_ERRORS = (GraphError, EnumerationLimitError, ValueError)


def build_graph(req: GraphRequest) -> Graph:
    if (req.family is None) == (req.edges is None):
        raise GraphError("specify exactly one of family or edges")
    if req.edges is not None:
        n = req.n if req.n is not None else max(max(i, j) for i, j in req.edges) + 1
        return Graph(n, tuple((int(i), int(j)) for i, j in req.edges))
    if req.n is None:
        raise GraphError("family graphs need n")
    return build_family(GraphFamily(req.family, req.n, d=req.d, seed=req.seed))


def default_workers() -> int:
    raw = os.environ.get("MRFLIMITS_WORKERS", "1")
    try:
        workers = int(raw)
    except ValueError:
        raise GraphError(f"MRFLIMITS_WORKERS must be an integer, got {raw!r}") from None
    return workers


def _tup(values):
    return None if values is None else tuple(values)


def create_app() -> FastAPI:
    app = FastAPI(title="mrflimits", description="Exact-recovery limits for noisy pairwise observations")

    @app.get("/healthz", response_model=HealthResponse)
    def healthz():
        return HealthResponse(status="ok")

    @app.post("/graph-info", response_model=GraphInfoResponse)
    def graph_info(req: GraphInfoRequest):
        try:
            g = build_graph(req.graph)
            m = metrics(g, limit=req.cheeger_limit)
        except _DOMAIN_ERRORS as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        exact = str(m.cheeger) if isinstance(m.cheeger, Fraction) else None
        return GraphInfoResponse(
            family=g.family,
            n=m.n,
            num_edges=m.num_edges,
            delta_max=m.delta_max,
            min_degree=min(m.degrees),
            cheeger=float(m.cheeger),
            cheeger_fraction=exact,
            cheeger_method=m.cheeger_method,
            connected=True,
        )

    @app.post("/bounds", response_model=BoundsResponse)
    def bounds(req: BoundsRequest):
        try:
            g = build_graph(req.graph)
            inputs = BoundInputs.from_graph(
                g, ModelParams(req.p, req.q), cheeger=req.cheeger, limit=req.cheeger_limit
            )
            report = evaluate_bounds(inputs)
        except _DOMAIN_ERRORS as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return BoundsResponse(
            n=inputs.n,
            num_edges=inputs.num_edges,
            delta_max=inputs.delta_max,
            cheeger=inputs.cheeger,
            **asdict(report),
        )

    @app.post("/figure", response_model=FigureResponse)
    def figure(req: FigureRequest):
        try:
            spec = FigureSpec(
                figure_id=req.figure_id,
                p_step=req.p_step,
                q_values=_tup(req.q_values),
                n=req.n,
                deltas=_tup(req.deltas),
                dense_edges=req.dense_edges,
                trees=_tup(req.trees),
                completes=_tup(req.completes),
                stars=_tup(req.stars),
                chains=_tup(req.chains),
                expanders=_tup(req.expanders),
            )
            fig = build_figure(spec)
        except _DOMAIN_ERRORS as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return FigureResponse(
            figure_id=fig.figure_id,
            panels={
                name: {"columns": list(panel.columns), "rows": [list(r) for r in panel.rows]}
                for name, panel in fig.panels.items()
            },
        )

    @app.post("/simulate", response_model=SimulateResponse)
    def simulate(req: SimulateRequest):
        try:
            g = build_graph(req.graph)
            workers = req.workers if req.workers is not None else default_workers()
            cfg = TrialConfig(
                graph=g,
                params=ModelParams(req.p, req.q),
                trials=req.trials,
                master_seed=req.seed,
                workers=workers,
                solver_limit=req.solver_limit,
                cheeger=req.cheeger,
            )
            summary = run_trials(cfg)
        except _DOMAIN_ERRORS as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        payload = summary_to_dict(cfg, summary)
        payload["verdict"] = "CONSISTENT" if summary.bound_consistent else "VIOLATION"
        return SimulateResponse(**payload)

    return app


app = create_app()
