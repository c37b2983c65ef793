"""Generative model: uniform binary labels, independently flipped edge/node observations.

Regime "EdgeOnly" observes noisy edge products only (labels recoverable up to
a global sign flip); "EdgeAndNode" adds noisy per-node observations, which
break the flip symmetry.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .graphs import Graph, GraphError

EDGE_ONLY = "EdgeOnly"
EDGE_AND_NODE = "EdgeAndNode"


@dataclass(frozen=True)
class ModelParams:
    """Noise levels: p for edge flips, q for node flips (None in EdgeOnly).

    The combined-objective weight alpha = log((1-q)/q) / log((1-p)/p) is only
    defined for p, q strictly inside (0, 1/2); accessing .alpha at a boundary
    raises rather than clamping, because clamping would silently change every
    downstream value. Callers wanting near-noiseless node observations pass
    q = 1e-9 explicitly.
    """

    p: float
    q: float | None = None

    def __post_init__(self):
        if not (0.0 <= self.p <= 0.5):
            raise ValueError(f"p must be in [0, 1/2], got {self.p}")
        if self.q is not None and not (0.0 <= self.q <= 0.5):
            raise ValueError(f"q must be in [0, 1/2], got {self.q}")

    @property
    def regime(self) -> str:
        return EDGE_ONLY if self.q is None else EDGE_AND_NODE

    @property
    def alpha(self) -> float:
        if self.q is None:
            raise ValueError("alpha is undefined without node observations (q is None)")
        if not (0.0 < self.p < 0.5) or not (0.0 < self.q < 0.5):
            raise ValueError(
                f"alpha is undefined at boundary parameters p={self.p}, q={self.q}; "
                "use values strictly inside (0, 1/2), e.g. q=1e-9 for near-noiseless nodes"
            )
        return (math.log1p(-self.q) - math.log(self.q)) / (math.log1p(-self.p) - math.log(self.p))


@dataclass(frozen=True)
class Observation:
    """Edge values aligned with the graph's edge list; node values optional."""

    edge_values: np.ndarray  # int8, shape (num_edges,), entries +-1
    node_values: np.ndarray | None = None  # int8, shape (n,), entries +-1


def stream(master_seed: int, *stream_ids: int) -> np.random.Generator:
    """Independent counter-based RNG stream for (master_seed, stream ids...).

    Philox keyed by the id tuple: distinct ids of the same arity never
    collide, and any trial can be regenerated in isolation, which is what
    makes parallel runs reproducible at every worker count. Keep the arity
    fixed per call site; SeedSequence mixes a trailing zero id like an
    absent one, so (7, 0) aliases (7,).
    """
    return np.random.Generator(np.random.Philox(np.random.SeedSequence((master_seed, *stream_ids))))


def sample_labels(n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform label vector in {-1,+1}^n."""
    return (rng.integers(0, 2, size=n, dtype=np.int8) * 2 - 1).astype(np.int8)


def sample_edge_obs(g: Graph, y: np.ndarray, p: float, rng: np.random.Generator) -> np.ndarray:
    """Edge observation x_ij = y_i * y_j, each flipped independently with probability p."""
    ei = np.fromiter((e[0] for e in g.edges), dtype=np.intp, count=g.num_edges)
    ej = np.fromiter((e[1] for e in g.edges), dtype=np.intp, count=g.num_edges)
    truth = (y[ei] * y[ej]).astype(np.int8)
    flips = rng.random(g.num_edges) < p
    return np.where(flips, -truth, truth).astype(np.int8)


def sample_node_obs(y: np.ndarray, q: float, rng: np.random.Generator) -> np.ndarray:
    """Node observation c_k = y_k, flipped independently with probability q."""
    flips = rng.random(len(y)) < q
    return np.where(flips, -y, y).astype(np.int8)


def sample_trial(g: Graph, params: ModelParams, rng: np.random.Generator):
    """One full draw: labels, then edge observation, then node observation (if any).

    The draw order is part of the reproducibility contract: a trial is
    regenerated exactly from its own stream.
    """
    y = sample_labels(g.n, rng)
    edge_values = sample_edge_obs(g, y, params.p, rng)
    node_values = None
    if params.q is not None:
        node_values = sample_node_obs(y, params.q, rng)
    return y, Observation(edge_values, node_values)


def observation_to_json(g: Graph, obs: Observation) -> str:
    payload = {
        "edges": [[i, j, int(v)] for (i, j), v in zip(g.edges, obs.edge_values)],
        "nodes": None if obs.node_values is None else [int(v) for v in obs.node_values],
    }
    return json.dumps(payload, sort_keys=True)


def observation_from_json(g: Graph, text: str) -> Observation:
    """Parse and re-align an observation against g's edge list."""
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(f"malformed observation JSON: {exc}") from None
    values = {}
    for entry in payload.get("edges", []):
        i, j, v = entry
        i, j = (int(i), int(j)) if i < j else (int(j), int(i))
        if v not in (1, -1):
            raise GraphError(f"edge value must be +-1, got {v!r} on ({i},{j})")
        if (i, j) in values:
            raise GraphError(f"duplicate edge ({i},{j}) in observation")
        values[(i, j)] = int(v)
    if set(values) != set(g.edges):
        raise GraphError("observation edges do not match the graph's edge set")
    edge_values = np.array([values[e] for e in g.edges], dtype=np.int8)
    nodes = payload.get("nodes")
    node_values = None
    if nodes is not None:
        if len(nodes) != g.n or any(v not in (1, -1) for v in nodes):
            raise GraphError(f"node values must be {g.n} entries of +-1")
        node_values = np.array(nodes, dtype=np.int8)
    return Observation(edge_values, node_values)
