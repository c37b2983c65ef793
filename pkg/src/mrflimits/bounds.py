"""Closed-form recovery bounds for both observation regimes.

Quantities follow the symbols used in the report fields: f/g/g* are minimax
error lower bounds (worst-node total-variation and entropy-counting floors),
kappa is the observation-entropy upper bound behind the g* refinement, the
MLE success lower bound is a union bound built from the tail factors h1/h2,
and epsilon1/epsilon2 bound the failure of the tractable (polynomial-time)
estimators whose guarantees we evaluate but do not implement.

Everything is computed in log space (log-gamma binomials, log-sum-exp) and
exponentiated last; the raw formulas overflow naively beyond n of about 50.
Conventions 0^0 = 1 and 0*log 0 = 0 apply throughout.
"""
from __future__ import annotations

import math
import sys
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, logsumexp, xlogy

from .genmodel import EDGE_AND_NODE, EDGE_ONLY, ModelParams
from .graphs import CHEEGER_ENUM_LIMIT, EnumerationLimitError, Graph, metrics

LOG2 = math.log(2.0)

# Exact binomial expectations only: refuse rather than approximate beyond this
# many terms.
EB_TERM_LIMIT = 1_000_000

# exp() overflows above ~709.78; union bounds past that are saturated to the
# most negative finite float so reports never carry inf/NaN.
_EXP_MAX = 709.0
_RAW_FLOOR = -sys.float_info.max


@dataclass(frozen=True)
class BoundInputs:
    """Arguments every bound takes: graph summary plus noise parameters."""

    n: int
    num_edges: int
    delta_max: int
    cheeger: float
    params: ModelParams

    def __post_init__(self):
        if self.num_edges < self.n - 1:
            raise ValueError("connected graphs need at least n-1 edges")
        if self.cheeger <= 0:
            raise ValueError("cheeger must be positive")
        if self.delta_max < 1:
            raise ValueError("delta_max must be at least 1")

    @classmethod
    def from_graph(cls, g: Graph, params: ModelParams, cheeger=None,
                   limit: int = CHEEGER_ENUM_LIMIT) -> "BoundInputs":
        m = metrics(g, cheeger=cheeger, limit=limit)
        return cls(n=g.n, num_edges=g.num_edges, delta_max=m.delta_max,
                   cheeger=float(m.cheeger), params=params)


@dataclass(frozen=True)
class MinimaxFragment:
    f: float
    g: float
    g_star: float
    kappa: float | None
    minimax_lower: float


@dataclass(frozen=True)
class BoundReport:
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


def binary_entropy(p: float) -> float:
    """Natural-log binary entropy -p log p - (1-p) log(1-p)."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p}")
    return float(-xlogy(p, p) - xlogy(1.0 - p, 1.0 - p))


def _check_p(p: float):
    if not 0.0 <= p <= 0.5:
        raise ValueError(f"flip probability must be in [0, 1/2], got {p}")


def _klog(k, logx):
    """k * logx elementwise with the 0 * (-inf) -> 0 convention (0^0 = 1)."""
    k = np.asarray(k, dtype=float)
    with np.errstate(invalid="ignore"):
        out = k * logx
    return np.where(k == 0, 0.0, out)


def _log_binom(n, k):
    n = np.asarray(n, dtype=float)
    k = np.asarray(k, dtype=float)
    return gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)


def f1(p: float, delta_max: int) -> float:
    """Worst-node total-variation floor, edge observations only.

    (1/2) sum_m C(delta,m) min{(1-p)^m p^(delta-m), p^m (1-p)^(delta-m)}.
    The boundary values 0 and 1/2 are returned exactly.
    """
    _check_p(p)
    if delta_max < 1:
        raise ValueError(f"delta_max must be at least 1, got {delta_max}")
    if p == 0.0:
        return 0.0
    if p == 0.5:
        return 0.5
    m = np.arange(delta_max + 1)
    logp, log1mp = math.log(p), math.log1p(-p)
    log_a = m * log1mp + (delta_max - m) * logp
    log_b = m * logp + (delta_max - m) * log1mp
    v = 0.5 * float(np.exp(logsumexp(_log_binom(delta_max, m) + np.minimum(log_a, log_b))))
    return min(v, 0.5)  # mathematically <= 1/2; shave summation noise


def f2(p: float, q: float, delta_max: int) -> float:
    """Worst-node total-variation floor with the node observation included."""
    _check_p(p)
    _check_p(q)
    if delta_max < 1:
        raise ValueError(f"delta_max must be at least 1, got {delta_max}")
    m = np.arange(delta_max + 1)
    with np.errstate(divide="ignore"):
        logp = np.log(p)
        logq = np.log(q)
    log1mp, log1mq = math.log1p(-p), math.log1p(-q)
    log_u = _klog(m, logp) + _klog(delta_max - m, log1mp)
    log_v = _klog(m, log1mp) + _klog(delta_max - m, logp)
    t1 = np.minimum(log_u + logq, log_v + log1mq)
    t2 = np.minimum(log_u + log1mq, log_v + logq)
    terms = _log_binom(delta_max, m) + np.logaddexp(t1, t2)
    return min(0.5 * float(np.exp(logsumexp(terms))), 0.5)


def g1(p: float, n: int, num_edges: int) -> float:
    """Entropy-counting floor, edge observations only; may be negative."""
    return (n - 1) / n - (num_edges / n) * (1.0 - binary_entropy(p) / LOG2)


def g2(p: float, q: float, n: int, num_edges: int) -> float:
    """Entropy-counting floor with node observations."""
    return g1(p, n, num_edges) - (1.0 - binary_entropy(q) / LOG2)


def log_tau(m, n: int, cheeger: float, p: float):
    """log tau(m), where tau(m) = 2 r^m + sum_k C(n,k) r^((phi min(k, n-k) - m) v 0)
    and r = p/(1-p).

    Accepts a scalar or array m; vectorized over m with log-sum-exp across the
    n terms. p = 0 is rejected (the ratio degenerates; the g* indicator is
    false there so callers never need it).
    """
    if not 0.0 < p <= 0.5:
        raise ValueError(f"tau needs p in (0, 1/2], got {p}")
    if cheeger <= 0:
        raise ValueError("cheeger must be positive")
    m_arr = np.atleast_1d(np.asarray(m, dtype=float))
    if np.any(m_arr < 0):
        raise ValueError("m must be nonnegative")
    logr = math.log(p) - math.log1p(-p)  # <= 0
    k = np.arange(1, n)
    log_c = _log_binom(n, k)
    base = cheeger * np.minimum(k, n - k)
    out = np.empty(m_arr.shape, dtype=float)
    # keep the (block x n) exponent matrix bounded
    block = max(1, (4 * 1024 * 1024) // max(n, 1))
    for lo in range(0, len(m_arr), block):
        ms = m_arr[lo:lo + block, None]
        expo = np.maximum(base[None, :] - ms, 0.0)
        kterms = logsumexp(log_c[None, :] + expo * logr, axis=1)
        out[lo:lo + block] = np.logaddexp(kterms, LOG2 + m_arr[lo:lo + block] * logr)
    return out if np.ndim(m) else float(out[0])


def _log_kappa_pieces(n: int, num_edges: int, cheeger: float, p: float):
    """log E_B[tau(B)/2^n] and log E_B[-(tau(B)/2^n) log(tau(B)/2^n)]
    for B ~ Bin(|E|-n+1, 1/2), as an exact finite sum."""
    terms = num_edges - n + 1
    if terms + 1 > EB_TERM_LIMIT:
        raise EnumerationLimitError(
            f"binomial expectation needs {terms + 1} terms; cap is {EB_TERM_LIMIT}"
        )
    ms = np.arange(terms + 1, dtype=float)
    log_w = _log_binom(terms, ms) - terms * LOG2
    ell = np.minimum(log_tau(ms, n, cheeger, p) - n * LOG2, 0.0)  # log(tau/2^n) <= 0
    log_e1 = float(logsumexp(log_w + ell))
    if np.any(ell < 0):
        # -(x log x) as exp(L) * (-L); terms with L = 0 contribute nothing
        with np.errstate(divide="ignore"):
            log_e2 = float(logsumexp(log_w + ell + np.log(-ell)))
    else:
        log_e2 = -math.inf
    return log_e1, log_e2


def _log_kappa1(n: int, num_edges: int, cheeger: float, p: float) -> float:
    log_e1, log_e2 = _log_kappa_pieces(n, num_edges, cheeger, p)
    big = num_edges * (LOG2 + math.log1p(-p))  # log {2(1-p)}^|E|
    log_rate = math.log(num_edges) + math.log(-math.log1p(-p))
    return big + float(np.logaddexp(log_rate + log_e1, log_e2))


def kappa1(inputs: BoundInputs) -> float:
    """Observation-entropy upper bound, edge-only regime."""
    return math.exp(_log_kappa1(inputs.n, inputs.num_edges, inputs.cheeger, inputs.params.p))


def _log_kappa2(n: int, num_edges: int, cheeger: float, p: float, q: float) -> float:
    if not 0.0 < q <= 0.5:
        raise ValueError(f"kappa needs q in (0, 1/2], got {q}")
    log_e1, log_e2 = _log_kappa_pieces(n, num_edges, cheeger, p)
    big_e = num_edges * (LOG2 + math.log1p(-p))
    big_n = n * (LOG2 + math.log1p(-q))
    # -|E| log(1-p) - n log(1-q) > 0 for p or q > 0
    rate_en = -num_edges * math.log1p(-p) - n * math.log1p(-q)
    t1 = math.log(rate_en) - LOG2 + big_n + big_e + log_e1
    t2 = math.log(-num_edges * math.log1p(-p) + n * LOG2) - LOG2 + big_e - n * LOG2
    t3 = -LOG2 + big_n + big_e + log_e2
    return float(logsumexp([t1, t2, t3]))


def kappa2(inputs: BoundInputs) -> float:
    """Observation-entropy upper bound, edge+node regime."""
    if inputs.params.q is None:
        raise ValueError("kappa2 needs node-observation parameters (q)")
    return math.exp(
        _log_kappa2(inputs.n, inputs.num_edges, inputs.cheeger, inputs.params.p, inputs.params.q)
    )


def _entropy_gate_regime1(num_edges: int, p: float) -> bool:
    # indicator (1-p)^|E| <= 1/e, in log space
    return num_edges * math.log1p(-p) <= -1.0


def _entropy_gate_regime2(n: int, num_edges: int, p: float, q: float) -> bool:
    return num_edges * math.log1p(-p) + n * math.log1p(-q) <= -1.0


def _correction(log_kappa: float, budget: float, n: int) -> float:
    """(budget - kappa) v 0, divided by n log 2, comparing in log space so an
    astronomically large kappa never overflows on the way to a zero correction."""
    if log_kappa >= math.log(budget):
        return 0.0
    return (budget - math.exp(log_kappa)) / (n * LOG2)


def _star_pieces(inputs: BoundInputs, regime: str) -> tuple[float | None, float]:
    """(kappa, correction) for the given regime.

    kappa is None when the entropy gate is off, and also when kappa itself is
    out of reach: at p=0 (or q=0 in the node regime) where the formula is
    singular, when the exact binomial expectation exceeds the term cap, and
    when the value is too large for a float (the correction still comes out
    of log space correctly in that case, as exactly zero). The correction is
    nonnegative, so skipping it keeps g* a valid (merely weaker) lower bound
    instead of failing the whole report.
    """
    p, q = inputs.params.p, inputs.params.q
    try:
        if regime == EDGE_ONLY:
            if p == 0.0 or not _entropy_gate_regime1(inputs.num_edges, p):
                return None, 0.0
            log_k = _log_kappa1(inputs.n, inputs.num_edges, inputs.cheeger, p)
            budget = inputs.num_edges * LOG2
        else:
            if p == 0.0 or q == 0.0 or not _entropy_gate_regime2(inputs.n, inputs.num_edges, p, q):
                return None, 0.0
            log_k = _log_kappa2(inputs.n, inputs.num_edges, inputs.cheeger, p, q)
            budget = (inputs.num_edges + inputs.n) * LOG2
    except EnumerationLimitError:
        return None, 0.0
    kappa = math.exp(log_k) if log_k <= _EXP_MAX else None
    return kappa, _correction(log_k, budget, inputs.n)


def g1_star(inputs: BoundInputs) -> float:
    """g1 plus the entropy-gated correction term."""
    _, corr = _star_pieces(inputs, EDGE_ONLY)
    return g1(inputs.params.p, inputs.n, inputs.num_edges) + corr


def g2_star(inputs: BoundInputs) -> float:
    """g2 plus the entropy-gated correction term."""
    p, q = inputs.params.p, inputs.params.q
    if q is None:
        raise ValueError("g2_star needs node-observation parameters (q)")
    _, corr = _star_pieces(inputs, EDGE_AND_NODE)
    return g2(p, q, inputs.n, inputs.num_edges) + corr


def minimax_lower_regime1(inputs: BoundInputs) -> MinimaxFragment:
    """max{f, g, g*} with the components recorded."""
    p = inputs.params.p
    f = f1(p, inputs.delta_max)
    g = g1(p, inputs.n, inputs.num_edges)
    kappa, corr = _star_pieces(inputs, EDGE_ONLY)
    g_star = g + corr
    return MinimaxFragment(f=f, g=g, g_star=g_star, kappa=kappa,
                           minimax_lower=max(f, g, g_star))


def minimax_lower_regime2(inputs: BoundInputs) -> MinimaxFragment:
    p, q = inputs.params.p, inputs.params.q
    if q is None:
        raise ValueError("regime-II bounds need node-observation parameters (q)")
    f = f2(p, q, inputs.delta_max)
    g = g2(p, q, inputs.n, inputs.num_edges)
    kappa, corr = _star_pieces(inputs, EDGE_AND_NODE)
    g_star = g + corr
    return MinimaxFragment(f=f, g=g, g_star=g_star, kappa=kappa,
                           minimax_lower=max(f, g, g_star))


def necessary_condition_violated_regime1(inputs: BoundInputs) -> bool:
    """True iff |E| (1 - H*(p)/log 2) <= n/2 - 1: every estimator then errs
    with probability at least 1/2 (equivalently g1 >= 1/2)."""
    p = inputs.params.p
    return inputs.num_edges * (1.0 - binary_entropy(p) / LOG2) <= inputs.n / 2 - 1


def necessary_condition_violated_regime2(inputs: BoundInputs) -> bool:
    p, q = inputs.params.p, inputs.params.q
    lhs = inputs.num_edges * (1.0 - binary_entropy(p) / LOG2) \
        + inputs.n * (1.0 - binary_entropy(q) / LOG2)
    return lhs <= inputs.n / 2 - 1


def h1(pq: float, z: float) -> float:
    """Bernstein-style tail factor exp(-(1-2p)^2 z / ((4/3)(1-p)(1+4p)))."""
    _check_p(pq)
    if z < 0:
        raise ValueError("z must be nonnegative")
    return math.exp(-((1.0 - 2.0 * pq) ** 2) * z / ((4.0 / 3.0) * (1.0 - pq) * (1.0 + 4.0 * pq)))


def _h1_rate(pq: float) -> float:
    return (1.0 - 2.0 * pq) ** 2 / ((4.0 / 3.0) * (1.0 - pq) * (1.0 + 4.0 * pq))


def log_mle_failure_regime1(inputs: BoundInputs) -> float:
    """log sum_{k=1..n/2} C(n,k) h1(p, phi k): the union-bound failure mass."""
    k = np.arange(1, inputs.n // 2 + 1)
    rate = _h1_rate(inputs.params.p)
    return float(logsumexp(_log_binom(inputs.n, k) - rate * inputs.cheeger * k))


def _one_minus_exp(log_s: float) -> float:
    if log_s > _EXP_MAX:
        return _RAW_FLOOR
    return 1.0 - math.exp(log_s)


def mle_success_lower_regime1(inputs: BoundInputs) -> float:
    """Raw success lower bound for exhaustive MLE, edge-only; may be negative
    (vacuous). Clamping happens in the report."""
    return _one_minus_exp(log_mle_failure_regime1(inputs))


def h2(z: float, w: float, params: ModelParams) -> float:
    """Joint tail factor for edge deviation weight z and node deviation count w.

    h2(0,0) is 1 by convention (empty deviation event), as is the p=q=1/2
    boundary where the drift term vanishes identically.
    """
    if params.q is None:
        raise ValueError("h2 needs node-observation parameters (q)")
    if z < 0 or w < 0:
        raise ValueError("z and w must be nonnegative")
    p, q = params.p, params.q
    if (z == 0 and w == 0) or (p == 0.5 and q == 0.5):
        return 1.0
    alpha = params.alpha
    drift = (1.0 - 2.0 * p) * z + alpha * (1.0 - 2.0 * q) * w
    if drift == 0.0:
        return 1.0
    denom = (
        8.0 * p * (1.0 - p) * z
        + 8.0 * q * (1.0 - q) * alpha**2 * w
        + (4.0 / 3.0) * max(1.0 - p, (1.0 - q) * alpha) * drift
    )
    return math.exp(-(drift * drift) / denom)


def _log_h2_terms(z, w, p: float, q: float, alpha: float | None):
    """Vectorized log h2 over arrays z, w; alpha None means the p=q=1/2 boundary."""
    z = np.asarray(z, dtype=float)
    w = np.asarray(w, dtype=float)
    if alpha is None:
        return np.zeros(np.broadcast(z, w).shape)
    drift = (1.0 - 2.0 * p) * z + alpha * (1.0 - 2.0 * q) * w
    denom = (
        8.0 * p * (1.0 - p) * z
        + 8.0 * q * (1.0 - q) * alpha**2 * w
        + (4.0 / 3.0) * max(1.0 - p, (1.0 - q) * alpha) * drift
    )
    with np.errstate(invalid="ignore", divide="ignore"):
        out = -(drift * drift) / denom
    return np.where(drift == 0.0, 0.0, out)


def log_mle_failure_regime2(inputs: BoundInputs) -> float:
    """log of the smaller of the two union-bound routes (marginal h1 x h1
    route and joint h2 route).

    The joint route needs the likelihood-ratio weight alpha, which is only
    defined strictly inside (0, 1/2)^2 (plus the all-noise corner where every
    factor is 1); elsewhere the marginal route stands alone.
    """
    n, phi = inputs.n, inputs.cheeger
    p, q = inputs.params.p, inputs.params.q
    if q is None:
        raise ValueError("regime-II bound needs q")

    k_half = np.arange(1, n // 2 + 1)
    k_full = np.arange(1, n + 1)
    route1 = float(np.logaddexp(
        logsumexp(_log_binom(n, k_half) - _h1_rate(p) * phi * k_half),
        logsumexp(_log_binom(n, k_full) - _h1_rate(q) * k_full),
    ))

    if p == 0.5 and q == 0.5:
        alpha = None
    elif 0.0 < p < 0.5 and 0.0 < q < 0.5:
        alpha = inputs.params.alpha
    else:
        return route1
    k_zero = np.arange(0, n // 2 + 1)
    route2 = float(np.logaddexp(
        logsumexp(_log_binom(n, k_half) + _log_h2_terms(phi * k_half, k_half, p, q, alpha)),
        logsumexp(_log_binom(n, k_zero) + _log_h2_terms(phi * k_zero, n - k_zero, p, q, alpha)),
    ))
    return min(route1, route2)


def mle_success_lower_regime2(inputs: BoundInputs) -> float:
    """Raw success lower bound for exhaustive MLE with node observations."""
    return _one_minus_exp(log_mle_failure_regime2(inputs))


def log_epsilon1(inputs: BoundInputs) -> float:
    """log of the tractable-estimator failure bound (edge stage)."""
    n, delta, phi = inputs.n, inputs.delta_max, inputs.cheeger
    p = inputs.params.p
    num = 3.0 * (1.0 - 2.0 * p) ** 2 * phi**4
    den = 1536.0 * delta**3 * p * (1.0 - p) + 32.0 * (1.0 - 2.0 * p) * (1.0 - p) * phi**2 * delta
    return math.log(2.0 * n) - num / den


def epsilon1(inputs: BoundInputs) -> float:
    """Failure bound of the tractable edge-stage estimator; 2n at p=1/2."""
    n, delta, phi = inputs.n, inputs.delta_max, inputs.cheeger
    p = inputs.params.p
    num = 3.0 * (1.0 - 2.0 * p) ** 2 * phi**4
    den = 1536.0 * delta**3 * p * (1.0 - p) + 32.0 * (1.0 - 2.0 * p) * (1.0 - p) * phi**2 * delta
    return 2.0 * n * math.exp(-num / den)


def epsilon2(n: int, q: float) -> float:
    """Failure bound of the tractable node-majority stage: exp(-(n/2)(1-2q)^2)."""
    _check_p(q)
    return math.exp(-(n / 2.0) * (1.0 - 2.0 * q) ** 2)


def sufficient_condition_regime1(inputs: BoundInputs) -> bool:
    """phi (1-2p)^2 / ((1-p)(1+4p)) >= (8/3) log n: exhaustive MLE then
    succeeds with probability at least 1 - 2/n."""
    p = inputs.params.p
    lhs = inputs.cheeger * (1.0 - 2.0 * p) ** 2 / ((1.0 - p) * (1.0 + 4.0 * p))
    return lhs >= (8.0 / 3.0) * math.log(inputs.n)


def sufficient_condition_regime2(inputs: BoundInputs) -> bool:
    """Both regime-II rate inequalities; success then holds with probability
    at least 1 - 5/n.

    False wherever alpha is undefined (boundary p or q): the predicate only
    asserts a guarantee it can evaluate.
    """
    p, q = inputs.params.p, inputs.params.q
    if q is None:
        raise ValueError("regime-II condition needs q")
    if not (0.0 < p < 0.5 and 0.0 < q < 0.5):
        return False
    alpha = inputs.params.alpha
    phi = inputs.cheeger
    n = inputs.n
    mx = max(1.0 - p, (1.0 - q) * alpha)
    drift = (1.0 - 2.0 * p) * phi + alpha * (1.0 - 2.0 * q)
    lhs1 = drift**2 / (6.0 * p * (1.0 - p) * phi + 6.0 * q * (1.0 - q) * alpha**2 + mx * drift)
    lhs2 = alpha * (1.0 - 2.0 * q) ** 2 * n / (6.0 * q * (1.0 - q) * alpha + mx * (1.0 - 2.0 * q))
    logn = math.log(n)
    return lhs1 >= (8.0 / 3.0) * logn and lhs2 >= (4.0 / 3.0) * logn


def pairwise_error_sum(n_terms: int, p: float, q: float) -> float:
    """sum_m C(t,m) min{p^m (1-p)^(t-m) q, (1-p)^m p^(t-m) (1-q)}.

    The per-node Bayes-error mass after t edge observations and one node
    observation; non-increasing in t, which is what makes the minimum-degree
    node the worst case.
    """
    if n_terms < 0:
        raise ValueError("n_terms must be nonnegative")
    _check_p(p)
    _check_p(q)
    m = np.arange(n_terms + 1)
    with np.errstate(divide="ignore"):
        logp, logq = np.log(p), np.log(q)
    log1mp, log1mq = math.log1p(-p), math.log1p(-q)
    log_u = _klog(m, logp) + _klog(n_terms - m, log1mp)
    log_v = _klog(m, log1mp) + _klog(n_terms - m, logp)
    terms = _log_binom(n_terms, m) + np.minimum(log_u + logq, log_v + log1mq)
    return float(np.exp(logsumexp(terms)))


def r_function(p: float, q: float) -> float:
    """Ratio of the node-side to edge-side sufficient-condition rates."""
    if not (0.0 < p < 0.5 and 0.0 < q < 0.5):
        raise ValueError("r_function needs p, q strictly inside (0, 1/2)")
    alpha = ModelParams(p, q).alpha
    mx = max(1.0 - p, (1.0 - q) * alpha)
    num = 6.0 * q * (1.0 - q) * alpha / (1.0 - 2.0 * q) + mx
    den = 6.0 * p * (1.0 - p) / (1.0 - 2.0 * p) + mx
    return num / den


def evaluate_bounds(inputs: BoundInputs) -> BoundReport:
    """Full report for one (graph, params) point."""
    params = inputs.params
    if params.regime == EDGE_ONLY:
        frag = minimax_lower_regime1(inputs)
        raw = mle_success_lower_regime1(inputs)
        eps1 = epsilon1(inputs)
        eps2 = None
        eps_total = eps1
        necessary = necessary_condition_violated_regime1(inputs)
        sufficient = sufficient_condition_regime1(inputs)
    else:
        frag = minimax_lower_regime2(inputs)
        raw = mle_success_lower_regime2(inputs)
        eps1 = epsilon1(inputs)
        eps2 = epsilon2(inputs.n, params.q)
        eps_total = eps1 + eps2
        necessary = necessary_condition_violated_regime2(inputs)
        sufficient = sufficient_condition_regime2(inputs)
    return BoundReport(
        regime=params.regime,
        f=frag.f,
        g=frag.g,
        g_star=frag.g_star,
        minimax_lower=frag.minimax_lower,
        kappa=frag.kappa,
        mle_success_lower_raw=raw,
        mle_success_lower=max(0.0, min(1.0, raw)),
        epsilon1=eps1,
        epsilon2=eps2,
        epsilon_tractable=eps_total,
        tractable_success_lower=max(0.0, 1.0 - eps_total),
        necessary_condition_violated=necessary,
        sufficient_condition_holds=sufficient,
    )
