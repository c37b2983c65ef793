"""Monte Carlo estimation of exact-recovery rates, checked against the bounds.

Each trial draws a fresh truth vector and observation from its own
counter-based RNG stream keyed by (master_seed, trial index), so results
are bit-identical at every worker count: parallelism only changes which
thread evaluates a chunk, never what the chunk contains. Trials are
solved in batches through the vectorized solvers and aggregated by
order-independent sums.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np
from scipy.special import ndtri

from .bounds import BoundInputs, BoundReport, evaluate_bounds
from .genmodel import (
    EDGE_AND_NODE,
    EDGE_ONLY,
    ModelParams,
    sample_edge_obs,
    sample_labels,
    sample_node_obs,
    stream,
)
from .graphs import EnumerationLimitError, Graph
from .solver import DEFAULT_ENUM_LIMIT, batch_mle_edge_node, batch_mle_edge_only

CHUNK_TRIALS = 256
CONFIDENCE = 0.99
# Acceptance slack: empirical rate may sit below the theoretical lower
# bound by at most this many Wilson half-widths before we call it a
# violation.
SLACK_HALF_WIDTHS = 3.0


@dataclass(frozen=True)
class TrialConfig:
    """One simulation cell: a graph, noise parameters, and a seed."""

    graph: Graph
    params: ModelParams
    trials: int
    master_seed: int
    workers: int = 1
    solver_limit: int = DEFAULT_ENUM_LIMIT
    cheeger: float | None = None  # override when exact enumeration is impractical

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"need at least one trial, got {self.trials}")
        if self.workers < 1:
            raise ValueError(f"need at least one worker, got {self.workers}")
        if self.graph.n > self.solver_limit:
            raise EnumerationLimitError(
                f"n={self.graph.n} exceeds the solver enumeration limit {self.solver_limit}"
            )

    @property
    def regime(self) -> str:
        return self.params.regime


@dataclass(frozen=True)
class McSummary:
    """Aggregated outcome of one cell plus the bounds it is checked against."""

    regime: str
    trials: int
    successes: int
    rate: float
    ci_low: float
    ci_high: float
    tie_trials: int
    bounds: BoundReport
    bound_consistent: bool
    necessary_condition_violated: bool
    sufficient_condition_holds: bool

    @property
    def half_width(self) -> float:
        return 0.5 * (self.ci_high - self.ci_low)


def wilson_interval(successes: int, trials: int, confidence: float = CONFIDENCE):
    """Score interval for a binomial proportion; stays sane at rates near 0/1."""
    if trials < 1:
        raise ValueError("interval needs at least one trial")
    if not 0 <= successes <= trials:
        raise ValueError(f"successes {successes} outside [0, {trials}]")
    z = float(ndtri(0.5 + confidence / 2.0))
    phat = successes / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2.0 * trials)) / denom
    half = z * math.sqrt(phat * (1.0 - phat) / trials + z * z / (4.0 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def _chunk_ranges(trials: int, chunk: int = CHUNK_TRIALS):
    return [(start, min(start + chunk, trials)) for start in range(0, trials, chunk)]


def _solve_chunk(cfg: TrialConfig, alpha: float | None, start: int, stop: int):
    """Sample trials [start, stop), solve them as a batch, count outcomes."""
    g, params = cfg.graph, cfg.params
    count = stop - start
    ys = np.empty((count, g.n), dtype=np.int8)
    xs = np.empty((count, g.num_edges), dtype=np.int8)
    cs = np.empty((count, g.n), dtype=np.int8) if params.q is not None else None
    for i, t in enumerate(range(start, stop)):
        rng = stream(cfg.master_seed, t)
        y = sample_labels(g.n, rng)
        ys[i] = y
        xs[i] = sample_edge_obs(g, y, params.p, rng)
        if cs is not None:
            cs[i] = sample_node_obs(y, params.q, rng)
    if params.q is None:
        labels, tied = batch_mle_edge_only(g, xs, limit=cfg.solver_limit)
        truth = np.where(ys[:, :1] == 1, ys, -ys)  # canonical class representative
    else:
        labels, tied = batch_mle_edge_node(g, xs, cs, alpha, limit=cfg.solver_limit)
        truth = ys
    successes = np.all(labels == truth, axis=1)
    return int(successes.sum()), int(tied.sum())


def run_trials(cfg: TrialConfig) -> McSummary:
    """Estimate the exact-recovery rate and compare it with the lower bound.

    Deterministic in cfg.master_seed: worker count and chunk scheduling
    cannot change any count.
    """
    report = evaluate_bounds(BoundInputs.from_graph(cfg.graph, cfg.params, cheeger=cfg.cheeger))
    alpha = cfg.params.alpha if cfg.params.q is not None else None
    ranges = _chunk_ranges(cfg.trials)
    if cfg.workers > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            outcomes = list(pool.map(lambda r: _solve_chunk(cfg, alpha, *r), ranges))
    else:
        outcomes = [_solve_chunk(cfg, alpha, *r) for r in ranges]
    successes = sum(o[0] for o in outcomes)
    ties = sum(o[1] for o in outcomes)
    rate = successes / cfg.trials
    ci_low, ci_high = wilson_interval(successes, cfg.trials)
    slack = SLACK_HALF_WIDTHS * 0.5 * (ci_high - ci_low)
    return McSummary(
        regime=cfg.regime,
        trials=cfg.trials,
        successes=successes,
        rate=rate,
        ci_low=ci_low,
        ci_high=ci_high,
        tie_trials=ties,
        bounds=report,
        bound_consistent=rate >= report.mle_success_lower - slack,
        necessary_condition_violated=report.necessary_condition_violated,
        sufficient_condition_holds=report.sufficient_condition_holds,
    )


def sweep(cfg_grid: list[TrialConfig]) -> list[McSummary]:
    """Run a list of cells in order; each cell is internally parallel."""
    return [run_trials(cfg) for cfg in cfg_grid]


def cell_seed(master_seed: int, cell_index: int) -> int:
    """Derived seed for one grid cell; distinct cells get independent streams."""
    ss = np.random.SeedSequence((master_seed, cell_index))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def grid_configs(
    graph: Graph,
    params_list,
    trials: int,
    master_seed: int,
    workers: int = 1,
    solver_limit: int = DEFAULT_ENUM_LIMIT,
    cheeger: float | None = None,
) -> list[TrialConfig]:
    """Cells for a parameter grid on one graph, seeds derived per cell."""
    return [
        TrialConfig(
            graph=graph,
            params=params,
            trials=trials,
            master_seed=cell_seed(master_seed, idx),
            workers=workers,
            solver_limit=solver_limit,
            cheeger=cheeger,
        )
        for idx, params in enumerate(params_list)
    ]


def summary_to_dict(cfg: TrialConfig, summary: McSummary) -> dict:
    """JSON-ready dict. Excludes the worker count: it must not affect output."""
    g = cfg.graph
    return {
        "config": {
            "family": g.family or "custom",
            "n": g.n,
            "num_edges": g.num_edges,
            "p": cfg.params.p,
            "q": cfg.params.q,
            "regime": cfg.regime,
            "trials": cfg.trials,
            "master_seed": cfg.master_seed,
            "solver_limit": cfg.solver_limit,
        },
        "trials": summary.trials,
        "successes": summary.successes,
        "rate": summary.rate,
        "ci_low": summary.ci_low,
        "ci_high": summary.ci_high,
        "tie_trials": summary.tie_trials,
        "bounds": asdict(summary.bounds),
        "bound_consistent": summary.bound_consistent,
        "necessary_condition_violated": summary.necessary_condition_violated,
        "sufficient_condition_holds": summary.sufficient_condition_holds,
    }
