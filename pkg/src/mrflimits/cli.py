"""Command-line client for the recovery-limits service.

Every subcommand talks to the HTTP service: with --server it targets a
running instance, otherwise it mounts the app in-process, so both paths
exercise the same request validation and return identical payloads.

Exit codes: 0 success, 2 usage or validation error, 3 I/O or transport
error, 4 bound-consistency violation (simulate only).
"""
from __future__ import annotations

import asyncio
import json
import sys

import click
import httpx

from .figures import Figure, Panel, write_figure
from .graphs import GraphError, parse_edge_list

_TIMEOUT = 600.0


def _die(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _post(server: str | None, path: str, payload: dict) -> httpx.Response:
    try:
        if server:
            with httpx.Client(base_url=server, timeout=_TIMEOUT) as client:
                return client.post(path, json=payload)

        async def _in_process() -> httpx.Response:
            # imported here so plain usage errors never pay the app start-up
            from .service import create_app

            transport = httpx.ASGITransport(app=create_app())
            async with httpx.AsyncClient(
                transport=transport, base_url="http://service", timeout=_TIMEOUT
            ) as client:
                return await client.post(path, json=payload)

        return asyncio.run(_in_process())
    except httpx.HTTPError as exc:
        _die(3, f"service unreachable: {exc}")


def _payload_or_die(resp: httpx.Response) -> dict:
    """Decode a response, mapping request rejections to exit 2 and
    anything else non-200 to exit 3."""
    if resp.status_code in (400, 422):
        try:
            detail = resp.json()["detail"]
        except (ValueError, KeyError):
            detail = resp.text
        if not isinstance(detail, str):
            detail = json.dumps(detail)
        _die(2, detail)
    if resp.status_code != 200:
        _die(3, f"service returned status {resp.status_code}: {resp.text}")
    return resp.json()


# ---------------------------------------------------------------- config

def _load_config(path: str | None) -> dict[str, str]:
    """Read a key = value file. '#' comments and [section] headers are
    ignored; values are plain text, parsed by whichever option uses them.
    Keys match the long flag names with dashes replaced by underscores.
    """
    if path is None:
        return {}
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        _die(3, f"cannot read config: {exc}")
    entries: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#") or line.startswith("["):
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            _die(2, f"{path}:{lineno}: expected 'key = value', got {line!r}")
        entries[key.strip().replace("-", "_")] = value.strip().strip("'\"")
    return entries


def _parse_bool(text: str) -> bool:
    low = text.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(text)


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(tok) for tok in text.split(",") if tok.strip())


def _float_list(text: str) -> tuple[float, ...]:
    return tuple(float(tok) for tok in text.split(",") if tok.strip())


def _pair_list(text: str) -> tuple[tuple[int, int], ...]:
    """Comma list of n:d pairs, e.g. '64:30,2048:2000'."""
    pairs = []
    for tok in text.split(","):
        tok = tok.strip()
        if not tok:
            continue
        a, sep, b = tok.partition(":")
        if not sep:
            raise ValueError(tok)
        pairs.append((int(a), int(b)))
    return tuple(pairs)


def _resolve(config: dict[str, str], spec: dict) -> dict:
    """Merge flag values over config values over defaults.

    spec maps key -> (flag_value, parser, default); a flag value of None
    means unset. Config values are strings and go through the parser.
    """
    out = {}
    for key, (flag, parse, default) in spec.items():
        if flag is not None:
            out[key] = flag
        elif key in config:
            try:
                out[key] = parse(config[key])
            except (ValueError, TypeError):
                _die(2, f"bad config value for {key}: {config[key]!r}")
        else:
            out[key] = default
    return out


# ---------------------------------------------------------------- graphs

def _graph_options(fn):
    opts = [
        click.option("--family", default=None,
                     help="complete | chain | star | expander"),
        click.option("--n", type=int, default=None, help="node count"),
        click.option("--d", type=int, default=None, help="expander degree"),
        click.option("--graph-seed", type=int, default=None,
                     help="expander sampling seed (default 0)"),
        click.option("--edges", "edges_path", default=None, metavar="PATH",
                     help="edge-list file, one 'i j' pair per line"),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


_GRAPH_KEYS = ("family", "n", "d", "graph_seed", "edges")


def _graph_spec(family, n, d, graph_seed, edges_path) -> dict:
    return {
        "family": (family, str, None),
        "n": (n, int, None),
        "d": (d, int, None),
        "graph_seed": (graph_seed, int, None),
        "edges": (edges_path, str, None),
    }


def _graph_payload(vals: dict) -> dict:
    if vals["edges"] is not None:
        if vals["family"] is not None:
            _die(2, "give either --family or --edges, not both")
        try:
            with open(vals["edges"]) as fh:
                text = fh.read()
        except OSError as exc:
            _die(3, f"cannot read edge list: {exc}")
        try:
            g = parse_edge_list(text)
        except GraphError as exc:
            _die(2, str(exc))
        return {"edges": [list(e) for e in g.edges], "n": g.n}
    if vals["family"] is None:
        _die(2, "a graph is required: --family or --edges")
    if vals["n"] is None:
        _die(2, "--n is required with --family")
    block = {"family": vals["family"], "n": vals["n"]}
    if vals["d"] is not None:
        block["d"] = vals["d"]
    if vals["graph_seed"] is not None:
        block["seed"] = vals["graph_seed"]
    return block


# ------------------------------------------------------------- commands

@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def main():
    """Exact label recovery on noisy graphs: metrics, bounds, figure data,
    and Monte Carlo consistency checks."""


_CONFIG_OPT = click.option("--config", "config_path", default=None, metavar="PATH",
                           help="key = value defaults; flags win")
_SERVER_OPT = click.option("--server", default=None, metavar="URL",
                           help="use a running service instead of in-process")


@main.command("graph-info")
@_graph_options
@click.option("--cheeger-limit", type=int, default=None,
              help="max n for exact expansion enumeration (default 24)")
@click.option("--json", "as_json", is_flag=True, default=None,
              help="print the full response as JSON")
@_CONFIG_OPT
@_SERVER_OPT
def graph_info(family, n, d, graph_seed, edges_path, cheeger_limit, as_json,
               config_path, server):
    """Print size, degree, and expansion metrics for a graph."""
    config = _load_config(config_path)
    vals = _resolve(config, {
        **_graph_spec(family, n, d, graph_seed, edges_path),
        "cheeger_limit": (cheeger_limit, int, None),
        "json": (as_json, _parse_bool, False),
        "server": (server, str, None),
    })
    payload = {"graph": _graph_payload(vals)}
    if vals["cheeger_limit"] is not None:
        payload["cheeger_limit"] = vals["cheeger_limit"]
    body = _payload_or_die(_post(vals["server"], "/graph-info", payload))
    if vals["json"]:
        click.echo(json.dumps(body, indent=2, sort_keys=True))
        return
    note = body["cheeger_method"]
    if note == "closed-form" and body["family"] == "chain" and body["n"] % 2 == 0:
        note = "closed-form, even n"
    click.echo(
        f"n={body['n']} edges={body['num_edges']} delta_max={body['delta_max']} "
        f"cheeger={format(body['cheeger'], 'g')} ({note})"
    )
    click.echo(
        f"connected={'yes' if body['connected'] else 'no'} "
        f"min_degree={body['min_degree']} family={body['family'] or 'custom'}"
    )


def _minimax_branch(body: dict) -> str:
    f, g, g_star = body["f"], body["g"], body["g_star"]
    if f >= g and f >= g_star:
        return "f"
    return "g_star" if g_star > g else "g"


_BOUND_FIELDS = (
    "f", "g", "g_star", "kappa", "minimax_lower",
    "mle_success_lower_raw", "mle_success_lower",
    "epsilon1", "epsilon2", "epsilon_tractable", "tractable_success_lower",
)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port):
    """Run the HTTP service for other clients (point --server at it)."""
    import uvicorn

    from .service import app

    uvicorn.run(app, host=host, port=port)


@main.command()
@_graph_options
@click.option("--p", type=float, default=None, help="edge flip probability")
@click.option("--q", type=float, default=None,
              help="node flip probability (switches to the two-source regime)")
@click.option("--cheeger", type=float, default=None,
              help="override the expansion constant, e.g. d/2 for a large expander")
@click.option("--cheeger-limit", type=int, default=None)
@click.option("--json", "as_json", is_flag=True, default=None)
@_CONFIG_OPT
@_SERVER_OPT
def bounds(family, n, d, graph_seed, edges_path, p, q, cheeger, cheeger_limit,
           as_json, config_path, server):
    """Evaluate every closed-form bound for one (graph, p[, q]) point."""
    config = _load_config(config_path)
    vals = _resolve(config, {
        **_graph_spec(family, n, d, graph_seed, edges_path),
        "p": (p, float, None),
        "q": (q, float, None),
        "cheeger": (cheeger, float, None),
        "cheeger_limit": (cheeger_limit, int, None),
        "json": (as_json, _parse_bool, False),
        "server": (server, str, None),
    })
    if vals["p"] is None:
        _die(2, "--p is required")
    if vals["q"] is not None and not 0.0 < vals["q"] < 0.5:
        # the closed forms stay finite at q in {0, 1/2}, but the two-source
        # report degenerates there; drop --q for the edge-only regime instead
        _die(2, f"q must lie strictly inside (0, 1/2), got {vals['q']}")
    payload = {"graph": _graph_payload(vals), "p": vals["p"]}
    for key in ("q", "cheeger", "cheeger_limit"):
        if vals[key] is not None:
            payload[key] = vals[key]
    body = _payload_or_die(_post(vals["server"], "/bounds", payload))
    if vals["json"]:
        click.echo(json.dumps(body, indent=2, sort_keys=True))
        return
    click.echo(f"regime={body['regime']}")
    click.echo(
        f"n={body['n']} edges={body['num_edges']} delta_max={body['delta_max']} "
        f"cheeger={format(body['cheeger'], 'g')}"
    )
    click.echo(f"minimax_branch={_minimax_branch(body)}")
    for key in _BOUND_FIELDS:
        value = body[key]
        if value is None:
            if key == "kappa":
                click.echo("kappa=none")
            continue  # epsilon2 is absent in the edge-only regime
        click.echo(f"{key}={value!r}")
    click.echo(f"necessary_condition_violated={str(body['necessary_condition_violated']).lower()}")
    click.echo(f"sufficient_condition_holds={str(body['sufficient_condition_holds']).lower()}")


@main.command()
@click.option("--id", "figure_id", default=None,
              help="fig1 fig2 fig3 fig4 fig5 fig7 appendix-a1 appendix-a2 appendix-b1 appendix-b2")
@click.option("--step", type=float, default=None, help="p-grid step (default 0.005)")
@click.option("--q", "q_values", default=None, metavar="LIST",
              help="comma list of q values for node-regime figures")
@click.option("--n", type=int, default=None)
@click.option("--deltas", default=None, metavar="LIST", help="comma list of degrees")
@click.option("--dense-edges", type=int, default=None)
@click.option("--trees", default=None, metavar="LIST", help="comma list of sizes")
@click.option("--completes", default=None, metavar="LIST")
@click.option("--stars", default=None, metavar="LIST")
@click.option("--chains", default=None, metavar="LIST")
@click.option("--expanders", default=None, metavar="LIST",
              help="comma list of n:d pairs, e.g. 64:30,2048:2000")
@click.option("--out", "out_dir", default=None, metavar="DIR",
              help="output directory (default .)")
@click.option("--format", "fmt", default=None, help="csv (default) or json")
@_CONFIG_OPT
@_SERVER_OPT
def figure(figure_id, step, q_values, n, deltas, dense_edges, trees, completes,
           stars, chains, expanders, out_dir, fmt, config_path, server):
    """Write the data behind one figure: one CSV per panel, or one JSON."""
    config = _load_config(config_path)
    vals = _resolve(config, {
        "id": (figure_id, str, None),
        "step": (step, float, None),
        "q": (q_values, str, None),
        "n": (n, int, None),
        "deltas": (deltas, str, None),
        "dense_edges": (dense_edges, int, None),
        "trees": (trees, str, None),
        "completes": (completes, str, None),
        "stars": (stars, str, None),
        "chains": (chains, str, None),
        "expanders": (expanders, str, None),
        "out": (out_dir, str, "."),
        "format": (fmt, str, "csv"),
        "server": (server, str, None),
    })
    if vals["id"] is None:
        _die(2, "--id is required")
    if vals["format"] not in ("csv", "json"):
        _die(2, f"format must be csv or json, got {vals['format']!r}")
    payload = {"figure_id": vals["id"]}
    if vals["step"] is not None:
        payload["p_step"] = vals["step"]
    if vals["n"] is not None:
        payload["n"] = vals["n"]
    if vals["dense_edges"] is not None:
        payload["dense_edges"] = vals["dense_edges"]
    lists = {"q": ("q_values", _float_list), "deltas": ("deltas", _int_list),
             "trees": ("trees", _int_list), "completes": ("completes", _int_list),
             "stars": ("stars", _int_list), "chains": ("chains", _int_list),
             "expanders": ("expanders", _pair_list)}
    for key, (field_name, parse) in lists.items():
        if vals[key] is None:
            continue
        try:
            parsed = parse(vals[key])
        except ValueError:
            _die(2, f"bad value for {key}: {vals[key]!r}")
        payload[field_name] = [list(v) if isinstance(v, tuple) else v for v in parsed]
    body = _payload_or_die(_post(vals["server"], "/figure", payload))
    fig = Figure(body["figure_id"], {
        name: Panel(tuple(panel["columns"]),
                    tuple(tuple(row) for row in panel["rows"]))
        for name, panel in body["panels"].items()
    })
    try:
        paths = write_figure(fig, vals["out"], vals["format"])
    except OSError as exc:
        _die(3, f"cannot write figure data: {exc}")
    for path in paths:
        click.echo(path)


@main.command()
@_graph_options
@click.option("--p", type=float, default=None, help="edge flip probability")
@click.option("--q", type=float, default=None, help="node flip probability")
@click.option("--trials", type=int, default=None)
@click.option("--seed", type=int, default=None, help="master seed (default 0)")
@click.option("--workers", type=int, default=None,
              help="thread count (default: MRFLIMITS_WORKERS or 1)")
@click.option("--solver-limit", type=int, default=None,
              help="max n the exact solver accepts (default 26)")
@click.option("--cheeger", type=float, default=None)
@click.option("--regime", default=None,
              help="edge-only | edge-and-node; cross-checked against --q")
@click.option("--out", "out_path", default=None, metavar="PATH",
              help="write the JSON summary here instead of stdout")
@_CONFIG_OPT
@_SERVER_OPT
def simulate(family, n, d, graph_seed, edges_path, p, q, trials, seed, workers,
             solver_limit, cheeger, regime, out_path, config_path, server):
    """Run Monte Carlo recovery trials and check them against the bounds.

    Prints CONSISTENT or VIOLATION as the final line; a violation exits 4.
    The JSON summary is byte-identical for a fixed seed at any worker count.
    """
    config = _load_config(config_path)
    vals = _resolve(config, {
        **_graph_spec(family, n, d, graph_seed, edges_path),
        "p": (p, float, None),
        "q": (q, float, None),
        "trials": (trials, int, None),
        "seed": (seed, int, 0),
        "workers": (workers, int, None),
        "solver_limit": (solver_limit, int, None),
        "cheeger": (cheeger, float, None),
        "regime": (regime, str, None),
        "out": (out_path, str, None),
        "server": (server, str, None),
    })
    if vals["p"] is None:
        _die(2, "--p is required")
    if vals["trials"] is None:
        _die(2, "--trials is required")
    if vals["regime"] is not None:
        wants_q = {"edge-only": False, "edge-and-node": True}.get(vals["regime"])
        if wants_q is None:
            _die(2, f"unknown regime {vals['regime']!r}")
        if wants_q and vals["q"] is None:
            _die(2, "--regime edge-and-node needs --q")
        if not wants_q and vals["q"] is not None:
            _die(2, "--regime edge-only forbids --q")
    payload = {"graph": _graph_payload(vals), "p": vals["p"],
               "trials": vals["trials"], "seed": vals["seed"]}
    for key in ("q", "workers", "solver_limit", "cheeger"):
        if vals[key] is not None:
            payload[key] = vals[key]
    body = _payload_or_die(_post(vals["server"], "/simulate", payload))
    text = json.dumps(body, indent=2, sort_keys=True) + "\n"
    if vals["out"] is not None:
        try:
            with open(vals["out"], "w", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            _die(3, f"cannot write summary: {exc}")
    else:
        click.echo(text, nl=False)
    click.echo(body["verdict"])
    if body["verdict"] != "CONSISTENT":
        sys.exit(4)


if __name__ == "__main__":
    main()
