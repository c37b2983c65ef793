"""Request and response models for the HTTP service.

Extra fields are rejected everywhere so a typo in a request never
silently falls back to a default.
"""
from __future__ import annotations

from pydantic import BaseModel, ConfigDict


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class GraphRequest(StrictModel):
    """Exactly one of `family` (with its parameters) or `edges`.

    Families: complete, chain, star, expander (expander needs d and is
    deterministic in seed). Explicit edge lists may pass n to pin the
    node count; otherwise it is inferred from the largest endpoint.
    """

    family: str | None = None
    n: int | None = None
    d: int | None = None
    seed: int = 0
    edges: list[tuple[int, int]] | None = None


class GraphInfoRequest(StrictModel):
    graph: GraphRequest
    cheeger_limit: int = 24


class GraphInfoResponse(StrictModel):
    family: str | None
    n: int
    num_edges: int
    delta_max: int
    min_degree: int
    cheeger: float
    cheeger_fraction: str | None  # exact value when known, e.g. "1/3"
    cheeger_method: str
    connected: bool


class BoundReportPayload(StrictModel):
    regime: str
    f: float
    g: float
    g_star: float
    minimax_lower: float
    kappa: float | None
    mle_success_lower_raw: float
    mle_success_lower: float
    epsilon1: float
    epsilon2: float | None
    epsilon_tractable: float
    tractable_success_lower: float
    necessary_condition_violated: bool
    sufficient_condition_holds: bool


class BoundsRequest(StrictModel):
    graph: GraphRequest
    p: float
    q: float | None = None
    cheeger: float | None = None  # override, e.g. d/2 for large expanders
    cheeger_limit: int = 24


class BoundsResponse(BoundReportPayload):
    n: int
    num_edges: int
    delta_max: int
    cheeger: float


class FigureRequest(StrictModel):
    figure_id: str
    p_step: float = 0.005
    q_values: list[float] | None = None
    n: int | None = None
    deltas: list[int] | None = None
    dense_edges: int | None = None
    trees: list[int] | None = None
    completes: list[int] | None = None
    stars: list[int] | None = None
    chains: list[int] | None = None
    expanders: list[tuple[int, int]] | None = None


class PanelPayload(StrictModel):
    columns: list[str]
    rows: list[list[float]]


class FigureResponse(StrictModel):
    figure_id: str
    panels: dict[str, PanelPayload]


class SimulateRequest(StrictModel):
    graph: GraphRequest
    p: float
    q: float | None = None
    trials: int
    seed: int
    workers: int | None = None  # None: service default (environment or 1)
    solver_limit: int = 26
    cheeger: float | None = None


class SimulateConfigEcho(StrictModel):
    """Provenance block persisted with results. No worker count: the
    output is identical at every worker count and must say so."""

    family: str
    n: int
    num_edges: int
    p: float
    q: float | None
    regime: str
    trials: int
    master_seed: int
    solver_limit: int


class SimulateResponse(StrictModel):
    config: SimulateConfigEcho
    trials: int
    successes: int
    rate: float
    ci_low: float
    ci_high: float
    tie_trials: int
    bounds: BoundReportPayload
    bound_consistent: bool
    necessary_condition_violated: bool
    sufficient_condition_holds: bool
    verdict: str


class HealthResponse(StrictModel):
    status: str
