"""Exhaustive maximum-likelihood label search.

The estimator argmax_y y^T X y (+ alpha c^T y) is NP-hard in general; at desk
scale we enumerate. Candidates are walked in Gray-code order so each step
flips one node and updates the score in O(degree) instead of O(|E|). A
vectorized variant scores whole batches of observations against the full
candidate table at once for the Monte Carlo harness.

Canonical candidate keys: bit (n-1-j) of the key is set iff y_j = +1, so
ascending key order is ascending lexicographic order with -1 < +1 and node 0
most significant. Edge-only search fixes y_0 = +1 (keys 2^(n-1) .. 2^n - 1),
quotienting out the global flip. Ties are broken toward the smallest key.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .genmodel import EDGE_AND_NODE, EDGE_ONLY
from .graphs import EnumerationLimitError, Graph

DEFAULT_ENUM_LIMIT = 26


@dataclass(frozen=True)
class MleResult:
    argmax: np.ndarray
    score: float
    ties: int
    enumerated: int


@dataclass(frozen=True)
class RecoveryOutcome:
    regime: str
    exact: bool


def labels_from_key(n: int, key: int) -> np.ndarray:
    bits = (key >> np.arange(n - 1, -1, -1)) & 1
    return (2 * bits - 1).astype(np.int8)


def key_from_labels(labels) -> int:
    key = 0
    for v in labels:
        key = (key << 1) | (1 if v > 0 else 0)
    return key


def _check_edge_obs(g: Graph, x) -> np.ndarray:
    x = np.asarray(x)
    if x.shape != (g.num_edges,):
        raise ValueError(f"expected {g.num_edges} edge observations, got shape {x.shape}")
    if not np.all(np.abs(x) == 1):
        raise ValueError("edge observations must be +/-1")
    return x.astype(np.int64)


def _check_node_obs(g: Graph, c) -> np.ndarray:
    c = np.asarray(c)
    if c.shape != (g.n,):
        raise ValueError(f"expected {g.n} node observations, got shape {c.shape}")
    if not np.all(np.abs(c) == 1):
        raise ValueError("node observations must be +/-1")
    return c.astype(np.int64)


def _check_labels(g: Graph, y) -> np.ndarray:
    y = np.asarray(y)
    if y.shape != (g.n,):
        raise ValueError(f"expected {g.n} labels, got shape {y.shape}")
    if not np.all(np.abs(y) == 1):
        raise ValueError("labels must be +/-1")
    return y.astype(np.int64)


def score_edge(g: Graph, x, y) -> int:
    """sum over edges (i,j) of x_ij y_i y_j, each edge counted once."""
    x = _check_edge_obs(g, x)
    y = _check_labels(g, y)
    i, j = (np.array([e[0] for e in g.edges], dtype=np.int64),
            np.array([e[1] for e in g.edges], dtype=np.int64))
    return int(np.sum(x * y[i] * y[j]))


def score_combined(g: Graph, x, c, alpha: float, y) -> float:
    """Edge score plus alpha times the node agreement sum."""
    c = _check_node_obs(g, c)
    y = _check_labels(g, y)
    return float(score_edge(g, x, y)) + alpha * float(np.sum(c * y))


def _check_size(g: Graph, limit: int):
    if g.n > limit:
        raise EnumerationLimitError(
            f"graph too large for exhaustive search: n={g.n} exceeds limit {limit}")


def _partition(total: int, workers: int):
    """Contiguous ranges covering [0, total), at most `workers` of them."""
    workers = max(1, min(workers, total))
    step = (total + workers - 1) // workers
    return [(lo, min(lo + step, total)) for lo in range(0, total, step)]


def _gray_range_edge(g: Graph, x: np.ndarray, lo: int, hi: int, n: int):
    """Walk candidates lo..hi-1 of the edge-only enumeration.

    Candidate i has gray code gc = i ^ (i >> 1) laid over the n-1 free
    coordinates (bit b of gc drives node n-1-b), with node 0 pinned to +1.
    Returns (best_score, best_key, ties_at_best).
    """
    adj = g.adjacency()
    gc = lo ^ (lo >> 1)
    y = labels_from_key(n, (1 << (n - 1)) | gc).astype(np.int64)
    score = int(score_edge(g, x, y))
    best_score, best_key, ties = score, (1 << (n - 1)) | gc, 1
    y_list = y.tolist()
    for i in range(lo + 1, hi):
        b = (i & -i).bit_length() - 1  # trailing zeros of i = flipped gray bit
        node = n - 1 - b
        s = 0
        yn = y_list[node]
        for nb, ei in adj[node]:
            s += x[ei] * y_list[nb]
        score -= 2 * yn * int(s)
        y_list[node] = -yn
        gc ^= 1 << b
        key = (1 << (n - 1)) | gc
        if score > best_score:
            best_score, best_key, ties = score, key, 1
        elif score == best_score:
            ties += 1
            if key < best_key:
                best_key = key
    return best_score, best_key, ties


def _gray_range_combined(g: Graph, x: np.ndarray, c: np.ndarray,
                         num: int, den: int, lo: int, hi: int, n: int):
    """Walk candidates lo..hi-1 of the full 2^n enumeration.

    Scores are compared exactly as integers: den*edge + num*node, where
    num/den is alpha's exact binary fraction. Returns the winning
    (edge_score, node_score) pair along with key and tie count.
    """
    adj = g.adjacency()
    gc = lo ^ (lo >> 1)
    y = labels_from_key(n, gc).astype(np.int64)
    e = int(score_edge(g, x, y))
    m = int(np.sum(c * y))
    y_list = y.tolist()
    c_list = c.tolist()
    exact = e * den + num * m
    best = (exact, gc, e, m)
    ties = 1
    for i in range(lo + 1, hi):
        b = (i & -i).bit_length() - 1
        node = n - 1 - b
        yn = y_list[node]
        s = 0
        for nb, ei in adj[node]:
            s += x[ei] * y_list[nb]
        e -= 2 * yn * int(s)
        m -= 2 * yn * c_list[node]
        y_list[node] = -yn
        gc ^= 1 << b
        exact = e * den + num * m
        if exact > best[0]:
            best = (exact, gc, e, m)
            ties = 1
        elif exact == best[0]:
            ties += 1
            if gc < best[1]:
                best = (exact, gc, e, m)
    return best, ties


def mle_edge_only(g: Graph, x, limit: int = DEFAULT_ENUM_LIMIT,
                  workers: int = 1) -> MleResult:
    """Maximize the edge score over the 2^(n-1) flip-equivalence classes.

    The argmax is canonical (y_0 = +1); among tied optima the
    lexicographically smallest canonical vector wins regardless of worker
    count.
    """
    _check_size(g, limit)
    x = _check_edge_obs(g, x)
    n = g.n
    total = 1 << (n - 1)
    ranges = _partition(total, workers)
    if len(ranges) == 1:
        results = [_gray_range_edge(g, x, 0, total, n)]
    else:
        with ThreadPoolExecutor(max_workers=len(ranges)) as pool:
            results = list(pool.map(
                lambda r: _gray_range_edge(g, x, r[0], r[1], n), ranges))
    best_score = max(r[0] for r in results)
    best_key = min(r[1] for r in results if r[0] == best_score)
    ties = sum(r[2] for r in results if r[0] == best_score)
    argmax = labels_from_key(n, best_key)
    return MleResult(argmax=argmax, score=float(score_edge(g, x, argmax)),
                     ties=ties, enumerated=total)


def mle_edge_node(g: Graph, x, c, alpha: float, limit: int = DEFAULT_ENUM_LIMIT,
                  workers: int = 1) -> MleResult:
    """Maximize edge score + alpha * node agreement over all 2^n vectors.

    The node term breaks the global-flip symmetry, so no quotient is taken.
    """
    if not (alpha > 0 and math.isfinite(alpha)):
        raise ValueError(f"alpha must be positive and finite, got {alpha}")
    _check_size(g, limit)
    x = _check_edge_obs(g, x)
    c = _check_node_obs(g, c)
    n = g.n
    num, den = float(alpha).as_integer_ratio()
    total = 1 << n
    ranges = _partition(total, workers)
    if len(ranges) == 1:
        results = [_gray_range_combined(g, x, c, num, den, 0, total, n)]
    else:
        with ThreadPoolExecutor(max_workers=len(ranges)) as pool:
            results = list(pool.map(
                lambda r: _gray_range_combined(g, x, c, num, den, r[0], r[1], n),
                ranges))
    best_exact = max(b[0] for b, _ in results)
    winners = [(b, t) for b, t in results if b[0] == best_exact]
    best = min(b for b, _ in winners)
    ties = sum(t for _, t in winners)
    argmax = labels_from_key(n, best[1])
    return MleResult(argmax=argmax, score=score_combined(g, x, c, alpha, argmax),
                     ties=ties, enumerated=total)


def canonical(labels) -> np.ndarray:
    """Flip-class representative with first coordinate +1."""
    labels = np.asarray(labels)
    return (labels if labels[0] > 0 else -labels).astype(np.int8)


def check_recovery(result: MleResult, truth, regime: str) -> RecoveryOutcome:
    truth = np.asarray(truth)
    if regime == EDGE_ONLY:
        exact = bool(np.array_equal(result.argmax, canonical(truth)))
    elif regime == EDGE_AND_NODE:
        exact = bool(np.array_equal(result.argmax, truth.astype(np.int8)))
    else:
        raise ValueError(f"unknown regime {regime!r}")
    return RecoveryOutcome(regime=regime, exact=exact)


def candidate_table(g: Graph, quotient: bool) -> np.ndarray:
    """All candidate label vectors in ascending key order, shape (K, n).

    quotient=True pins y_0 = +1 (K = 2^(n-1)); otherwise K = 2^n.
    """
    n = g.n
    if quotient:
        keys = np.arange(1 << (n - 1), 1 << n, dtype=np.int64)
    else:
        keys = np.arange(0, 1 << n, dtype=np.int64)
    bits = (keys[:, None] >> np.arange(n - 1, -1, -1)[None, :]) & 1
    return (2 * bits - 1).astype(np.int8)


def _edge_sign_table(g: Graph, cands: np.ndarray) -> np.ndarray:
    i = np.array([e[0] for e in g.edges], dtype=np.int64)
    j = np.array([e[1] for e in g.edges], dtype=np.int64)
    return (cands[:, i] * cands[:, j]).astype(np.float32)


def batch_mle_edge_only(g: Graph, xs: np.ndarray,
                        limit: int = DEFAULT_ENUM_LIMIT) -> tuple[np.ndarray, np.ndarray]:
    """Solve many edge-only instances at once.

    xs: (T, |E|) array of +/-1. Returns (argmax_labels (T, n) int8,
    tied (T,) bool). Scores are integers below 2^24, so float32 matmul is
    exact and the first-index argmax is the lexicographic tie-break.
    """
    _check_size(g, limit)
    xs = np.asarray(xs, dtype=np.float32)
    cands = candidate_table(g, quotient=True)
    signs = _edge_sign_table(g, cands)  # (K, |E|)
    scores = xs @ signs.T  # (T, K)
    best = np.argmax(scores, axis=1)
    row_max = scores[np.arange(len(xs)), best]
    tied = (scores == row_max[:, None]).sum(axis=1) > 1
    return cands[best], tied


def batch_mle_edge_node(g: Graph, xs: np.ndarray, cs: np.ndarray, alpha: float,
                        limit: int = DEFAULT_ENUM_LIMIT) -> tuple[np.ndarray, np.ndarray]:
    """Solve many combined instances at once.

    Float scores pick a near-max set per trial (margin well above the float64
    noise floor); exact integer comparison on that set settles the true
    argmax and tie flags, so float rounding can never misrank.
    """
    if not (alpha > 0 and math.isfinite(alpha)):
        raise ValueError(f"alpha must be positive and finite, got {alpha}")
    _check_size(g, limit)
    xs = np.asarray(xs, dtype=np.float32)
    cs = np.asarray(cs, dtype=np.float32)
    cands = candidate_table(g, quotient=False)
    signs = _edge_sign_table(g, cands)
    edge_scores = (xs @ signs.T).astype(np.float64)  # exact integers
    node_scores = (cs @ cands.astype(np.float32).T).astype(np.float64)  # exact
    scores = edge_scores + float(alpha) * node_scores
    row_max = scores.max(axis=1)
    margin = 1e-6 * np.maximum(1.0, np.abs(row_max))
    num, den = float(alpha).as_integer_ratio()
    T = len(xs)
    out = np.empty((T, g.n), dtype=np.int8)
    tied = np.zeros(T, dtype=bool)
    for t in range(T):
        near = np.nonzero(scores[t] >= row_max[t] - margin[t])[0]
        exact = [int(edge_scores[t, k]) * den + num * int(node_scores[t, k])
                 for k in near]
        ex_best = max(exact)
        winners = [k for k, v in zip(near, exact) if v == ex_best]
        out[t] = cands[winners[0]]  # near-set indices ascend, keys ascend
        tied[t] = len(winners) > 1
    return out, tied
