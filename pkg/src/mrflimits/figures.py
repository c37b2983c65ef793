"""Figure data: formula curves over noise grids, rendered as CSV or JSON.

Each preset id maps to a set of panels; a panel is one table with a
header row and one row per grid point. Everything here is deterministic
formula evaluation, so repeated runs emit byte-identical files. Curve
panels summarize graphs by closed-form metrics rather than concrete
edge lists: at panel sizes (n up to a few thousand) exact expansion
enumeration is impossible, so regular expanders use the d/2 convention
throughout.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

from .bounds import (
    LOG2,
    BoundInputs,
    BoundReport,
    binary_entropy,
    evaluate_bounds,
    f1,
    f2,
    g1,
    g2,
    r_function,
)
from .genmodel import ModelParams

FIGURE_IDS = (
    "fig1",
    "fig2",
    "fig3",
    "fig4",
    "fig5",
    "appendix-a1",
    "appendix-a2",
    "appendix-b1",
    "appendix-b2",
    "fig7",
)
DEFAULT_P_STEP = 0.005
DEFAULT_Q_VALUES = (0.05, 0.15, 0.25, 0.35, 0.45)


@dataclass(frozen=True)
class GraphShape:
    """Closed-form graph summary used by curve panels."""

    label: str
    n: int
    num_edges: int
    delta_max: int
    cheeger: float


def complete_shape(n: int) -> GraphShape:
    if n < 2:
        raise ValueError("complete shape needs n >= 2")
    return GraphShape(f"n{n}", n, n * (n - 1) // 2, n - 1, float((n + 1) // 2))


def chain_shape(n: int) -> GraphShape:
    if n < 3:
        raise ValueError("chain shape needs n >= 3")
    return GraphShape(f"n{n}", n, n - 1, 2, 1.0 / (n // 2))


def star_shape(n: int) -> GraphShape:
    if n < 3:
        raise ValueError("star shape needs n >= 3")
    return GraphShape(f"n{n}", n, n - 1, n - 1, 1.0)


def expander_shape(n: int, d: int) -> GraphShape:
    if not 2 <= d < n:
        raise ValueError(f"regular shape needs 2 <= d < n, got n={n} d={d}")
    if (n * d) % 2:
        raise ValueError(f"n*d must be even, got n={n} d={d}")
    return GraphShape(f"n{n}_d{d}", n, n * d // 2, d, d / 2.0)


@dataclass(frozen=True)
class FigureSpec:
    """Which preset to build, plus overrides for its grids and graphs.

    Fields left at None fall back to per-figure defaults; figures that
    do not use a field ignore it.
    """

    figure_id: str
    p_step: float = DEFAULT_P_STEP
    q_values: tuple[float, ...] | None = None
    n: int | None = None
    deltas: tuple[int, ...] | None = None
    dense_edges: int | None = None
    trees: tuple[int, ...] | None = None
    completes: tuple[int, ...] | None = None
    stars: tuple[int, ...] | None = None
    chains: tuple[int, ...] | None = None
    expanders: tuple[tuple[int, int], ...] | None = None

    def __post_init__(self):
        if self.figure_id not in FIGURE_IDS:
            raise ValueError(f"unknown figure id {self.figure_id!r}; known: {', '.join(FIGURE_IDS)}")
        p_grid(self.p_step)  # validates the step
        for q in self.q_values or ():
            if not 0.0 <= q <= 0.5:
                raise ValueError(f"q must be in [0, 1/2], got {q}")


@dataclass(frozen=True)
class Panel:
    columns: tuple[str, ...]
    rows: tuple[tuple[float, ...], ...]


@dataclass(frozen=True)
class Figure:
    figure_id: str
    panels: dict[str, Panel] = field(default_factory=dict)


def p_grid(step: float) -> list[float]:
    """Evenly spaced grid over [0, 1/2] including both endpoints."""
    if not 0.0 < step <= 0.5:
        raise ValueError(f"grid step must be in (0, 1/2], got {step}")
    count = round(0.5 / step)
    if abs(count * step - 0.5) > 1e-9:
        raise ValueError(f"grid step {step} does not divide [0, 1/2] evenly")
    return [0.5 * i / count for i in range(count + 1)]


def _report(shape: GraphShape, p: float, q: float | None) -> BoundReport:
    inputs = BoundInputs(n=shape.n, num_edges=shape.num_edges,
                         delta_max=shape.delta_max, cheeger=shape.cheeger,
                         params=ModelParams(p, q))
    return evaluate_bounds(inputs)


_ROW_FIELDS = {
    "minimax": lambda rep: rep.minimax_lower,
    "mle": lambda rep: rep.mle_success_lower,
    "tractable": lambda rep: rep.tractable_success_lower,
}


def _bound_panels(figure: Figure, family: str, shapes, grid, rows=("minimax", "mle", "tractable")):
    """Regime-one panels: one column per shape, one panel per bound row."""
    reports = {s.label: [_report(s, p, None) for p in grid] for s in shapes}
    for row in rows:
        pick = _ROW_FIELDS[row]
        cols = ("p",) + tuple(s.label for s in shapes)
        data = tuple(
            (p,) + tuple(pick(reports[s.label][i]) for s in shapes)
            for i, p in enumerate(grid)
        )
        figure.panels[f"{family}_{row}"] = Panel(cols, data)


def _bound_panels_with_nodes(figure: Figure, family: str, shape: GraphShape, qs, grid):
    """Regime-two panels for one shape: a column per q plus the
    edge-only reference curve."""
    node_reports = {q: [_report(shape, p, q) for p in grid] for q in qs}
    edge_reports = [_report(shape, p, None) for p in grid]
    for row in ("minimax", "mle", "tractable"):
        pick = _ROW_FIELDS[row]
        cols = ("p",) + tuple(f"q{format(q, 'g')}" for q in qs) + ("edge_only",)
        data = tuple(
            (p,) + tuple(pick(node_reports[q][i]) for q in qs) + (pick(edge_reports[i]),)
            for i, p in enumerate(grid)
        )
        figure.panels[f"{family}_{row}"] = Panel(cols, data)


def _build_fig1(spec: FigureSpec, grid) -> Figure:
    n = spec.n or 16
    deltas = spec.deltas or (1, 2, 4, 8)
    dense = spec.dense_edges or 2 * (n - 1)
    fig = Figure("fig1")
    cols = ("p",) + tuple(f"f1_delta{d}" for d in deltas) + ("g1_tree", f"g1_edges{dense}")
    rows = tuple(
        (p,) + tuple(f1(p, d) for d in deltas) + (g1(p, n, n - 1), g1(p, n, dense))
        for p in grid
    )
    fig.panels["curves"] = Panel(cols, rows)
    return fig


def _build_fig2(spec: FigureSpec, grid) -> Figure:
    fig = Figure("fig2")
    rows = []
    for p in grid:
        necessary_rate = 1.0 - binary_entropy(p) / LOG2
        sufficient_rate = (1.0 - 2.0 * p) ** 2 / ((1.0 - p) * (1.0 + 4.0 * p))
        rows.append((p, necessary_rate, sufficient_rate))
    fig.panels["rates"] = Panel(("p", "one_minus_entropy_ratio", "sufficient_rate"), tuple(rows))
    return fig


def _build_fig3(spec: FigureSpec, grid) -> Figure:
    expanders = spec.expanders or ((4, 2), (16, 4), (64, 60))
    trees = spec.trees or (4, 16, 64)
    fig = Figure("fig3")
    _bound_panels(fig, "expander", [expander_shape(n, d) for n, d in expanders], grid)
    _bound_panels(fig, "tree", [chain_shape(n) for n in trees], grid)
    return fig


def _build_fig4(spec: FigureSpec, grid) -> Figure:
    n = spec.n or 16
    deltas = spec.deltas or (4,)
    dense = spec.dense_edges or 2 * (n - 1)
    qs = spec.q_values or DEFAULT_Q_VALUES
    fig = Figure("fig4")
    cols = ["p"]
    cols += [f"f2_delta{d}_q{format(q, 'g')}" for d in deltas for q in qs]
    cols += ["g2_tree_q0.5"]
    cols += [f"g2_edges{dense}_q{format(q, 'g')}" for q in qs]
    rows = []
    for p in grid:
        row = [p]
        row += [f2(p, q, d) for d in deltas for q in qs]
        row += [g2(p, 0.5, n, n - 1)]
        row += [g2(p, q, n, dense) for q in qs]
        rows.append(tuple(row))
    fig.panels["curves"] = Panel(tuple(cols), tuple(rows))
    return fig


def _build_fig5(spec: FigureSpec, grid) -> Figure:
    expanders = spec.expanders or ((64, 30),)
    stars = spec.stars or (64,)
    qs = spec.q_values or DEFAULT_Q_VALUES
    fig = Figure("fig5")
    for n, d in expanders:
        _bound_panels_with_nodes(fig, "expander", expander_shape(n, d), qs, grid)
    for n in stars:
        _bound_panels_with_nodes(fig, "star", star_shape(n), qs, grid)
    return fig


def _build_appendix_a1(spec: FigureSpec, grid) -> Figure:
    completes = spec.completes or (4, 16, 64, 2048)
    fig = Figure("appendix-a1")
    _bound_panels(fig, "complete", [complete_shape(n) for n in completes], grid)
    return fig


def _build_appendix_a2(spec: FigureSpec, grid) -> Figure:
    expanders = spec.expanders or ((64, 8), (64, 30), (64, 60), (2048, 2000))
    fig = Figure("appendix-a2")
    _bound_panels(fig, "expander", [expander_shape(n, d) for n, d in expanders], grid,
                  rows=("mle", "tractable"))
    return fig


def _build_appendix_b1(spec: FigureSpec, grid) -> Figure:
    completes = spec.completes or (64,)
    expanders = spec.expanders or ((64, 30),)
    qs = spec.q_values or DEFAULT_Q_VALUES
    fig = Figure("appendix-b1")
    for n in completes:
        _bound_panels_with_nodes(fig, "complete", complete_shape(n), qs, grid)
    for n, d in expanders:
        _bound_panels_with_nodes(fig, "expander", expander_shape(n, d), qs, grid)
    return fig


def _build_appendix_b2(spec: FigureSpec, grid) -> Figure:
    chains = spec.chains or (64,)
    stars = spec.stars or (64,)
    qs = spec.q_values or DEFAULT_Q_VALUES
    fig = Figure("appendix-b2")
    for n in chains:
        _bound_panels_with_nodes(fig, "chain", chain_shape(n), qs, grid)
    for n in stars:
        _bound_panels_with_nodes(fig, "star", star_shape(n), qs, grid)
    return fig


def _build_fig7(spec: FigureSpec, grid) -> Figure:
    # boundaries excluded: the weight ratio is undefined at 0 and 1/2
    interior = [v for v in grid if 0.0 < v < 0.5]
    fig = Figure("fig7")
    rows = tuple((p, q, r_function(p, q)) for p in interior for q in interior)
    fig.panels["grid"] = Panel(("p", "q", "r"), rows)
    return fig


_BUILDERS = {
    "fig1": _build_fig1,
    "fig2": _build_fig2,
    "fig3": _build_fig3,
    "fig4": _build_fig4,
    "fig5": _build_fig5,
    "appendix-a1": _build_appendix_a1,
    "appendix-a2": _build_appendix_a2,
    "appendix-b1": _build_appendix_b1,
    "appendix-b2": _build_appendix_b2,
    "fig7": _build_fig7,
}


def build_figure(spec: FigureSpec) -> Figure:
    return _BUILDERS[spec.figure_id](spec, p_grid(spec.p_step))


def panel_csv(panel: Panel) -> str:
    # fixed 12-significant-digit formatting keeps files byte-identical
    lines = [",".join(panel.columns)]
    for row in panel.rows:
        lines.append(",".join(format(v, ".12g") for v in row))
    return "\n".join(lines) + "\n"


def figure_json(figure: Figure) -> str:
    payload = {
        "figure_id": figure.figure_id,
        "panels": {
            name: {"columns": list(panel.columns), "rows": [list(r) for r in panel.rows]}
            for name, panel in figure.panels.items()
        },
    }
    return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"


def write_figure(figure: Figure, out_dir: str, fmt: str = "csv") -> list[str]:
    """Write one file per panel (csv) or one file total (json); returns paths."""
    if fmt not in ("csv", "json"):
        raise ValueError(f"format must be csv or json, got {fmt!r}")
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    if fmt == "json":
        path = os.path.join(out_dir, f"{figure.figure_id}.json")
        with open(path, "w", newline="") as fh:
            fh.write(figure_json(figure))
        return [path]
    for name, panel in figure.panels.items():
        path = os.path.join(out_dir, f"{figure.figure_id}_{name}.csv")
        with open(path, "w", newline="") as fh:
            fh.write(panel_csv(panel))
        paths.append(path)
    return paths
