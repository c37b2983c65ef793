"""Graph primitives: families, exact structural metrics, edge-list round-trip.

Nodes are labeled 0..n-1. Graphs are undirected, simple, and connected;
edges are stored as a sorted tuple of (i, j) pairs with i < j.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np


class GraphError(ValueError):
    """Invalid graph input: parse error, self-loop, duplicate edge, disconnected, bad parameters."""


class EnumerationLimitError(ValueError):
    """An exact enumeration would exceed its configured size cap; refuse rather than stall."""


CHEEGER_ENUM_LIMIT = 24


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...]
    family: str | None = None

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise GraphError(f"need an integer node count n >= 2, got {self.n!r}")
        norm = []
        for e in self.edges:
            i, j = int(e[0]), int(e[1])
            if i == j:
                raise GraphError(f"self-loop at node {i}")
            if i > j:
                i, j = j, i
            if not (0 <= i < j < self.n):
                raise GraphError(f"edge ({i},{j}) out of range for n={self.n}")
            norm.append((i, j))
        norm.sort()
        for a, b in zip(norm, norm[1:]):
            if a == b:
                raise GraphError(f"duplicate edge {a}")
        object.__setattr__(self, "edges", tuple(norm))
        if not _connected(self.n, self.edges):
            raise GraphError("graph is not connected")

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def degrees(self) -> tuple[int, ...]:
        deg = [0] * self.n
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return tuple(deg)

    @property
    def delta_max(self) -> int:
        return max(self.degrees())

    def adjacency(self) -> list[list[tuple[int, int]]]:
        """Per-node list of (neighbor, edge index) pairs, neighbors ascending."""
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for e, (i, j) in enumerate(self.edges):
            adj[i].append((j, e))
            adj[j].append((i, e))
        for lst in adj:
            lst.sort()
        return adj


@dataclass(frozen=True)
class GraphMetrics:
    n: int
    num_edges: int
    degrees: tuple[int, ...]
    delta_max: int
    cheeger: Fraction | float
    cheeger_method: str  # "exact-enumeration" | "closed-form" | "user-supplied"


@dataclass(frozen=True)
class GraphFamily:
    kind: str  # "complete" | "chain" | "star" | "expander"
    n: int
    d: int | None = None
    seed: int | None = None


def _connected(n: int, edges) -> bool:
    adj = [[] for _ in range(n)]
    for i, j in edges:
        adj[i].append(j)
        adj[j].append(i)
    seen = [False] * n
    seen[0] = True
    queue = deque([0])
    count = 1
    while queue:
        v = queue.popleft()
        for u in adj[v]:
            if not seen[u]:
                seen[u] = True
                count += 1
                queue.append(u)
    return count == n


def complete(n: int) -> Graph:
    if n < 2:
        raise GraphError("complete graph needs n >= 2")
    return Graph(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)), family="complete")


def chain(n: int) -> Graph:
    if n < 2:
        raise GraphError("chain graph needs n >= 2")
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)), family="chain")


def star(n: int) -> Graph:
    """Star with internal node 0 connected to all others."""
    if n < 2:
        raise GraphError("star graph needs n >= 2")
    return Graph(n, tuple((0, i) for i in range(1, n)), family="star")


def _stub_matching(n: int, d: int, rng: np.random.Generator) -> set | None:
    """One attempt at a simple d-regular edge set by repeated stub pairing.

    Unpaired stubs are reshuffled and retried each pass instead of
    discarding the whole sample, so the acceptance rate stays practical
    at degrees where full-sample rejection essentially never succeeds.
    Returns None when the remaining stubs admit no legal edge.
    """
    edges: set[tuple[int, int]] = set()
    stubs = np.repeat(np.arange(n), d)
    while len(stubs):
        rng.shuffle(stubs)
        leftover = []
        for k in range(0, len(stubs), 2):
            i, j = int(stubs[k]), int(stubs[k + 1])
            if i > j:
                i, j = j, i
            if i == j or (i, j) in edges:
                leftover.extend((stubs[k], stubs[k + 1]))
            else:
                edges.add((i, j))
        if len(leftover) == len(stubs):
            nodes = sorted(set(int(s) for s in leftover))
            legal = any(
                (u, v) not in edges for a, u in enumerate(nodes) for v in nodes[a + 1:]
            )
            if not legal:
                return None
        stubs = np.array(leftover, dtype=np.intp)
    return edges


def random_regular(n: int, d: int, seed: int = 0, max_retries: int = 1000) -> Graph:
    """Random simple connected d-regular graph. Deterministic given (n, d, seed).

    Dense degrees (d above (n-1)/2) are sampled as complements of sparse
    regular graphs: the complement of an (n-1-d)-regular graph is
    d-regular, and pairing converges much faster on the sparse side.
    """
    if n < 2 or d < 2 or d >= n:
        raise GraphError(f"regular graph needs 2 <= d < n, got n={n} d={d}")
    if (n * d) % 2 != 0:
        raise GraphError(f"n*d must be even, got n={n} d={d}")
    build_complement = d > (n - 1) // 2
    dc = n - 1 - d if build_complement else d
    for attempt in range(max_retries):
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence((seed, attempt))))
        edges = _stub_matching(n, dc, rng) if dc > 0 else set()
        if edges is None:
            continue
        if build_complement:
            edges = {
                (i, j) for i in range(n) for j in range(i + 1, n) if (i, j) not in edges
            }
        if not _connected(n, edges):
            continue
        return Graph(n, tuple(sorted(edges)), family="expander")
    raise GraphError(f"no simple connected {d}-regular graph found in {max_retries} attempts")


def build_family(family: GraphFamily) -> Graph:
    if family.kind == "complete":
        return complete(family.n)
    if family.kind == "chain":
        return chain(family.n)
    if family.kind == "star":
        return star(family.n)
    if family.kind == "expander":
        if family.d is None:
            raise GraphError("expander family needs a degree d")
        return random_regular(family.n, family.d, seed=family.seed or 0)
    raise GraphError(f"unknown graph family {family.kind!r}")


def cheeger_closed_form(family: GraphFamily) -> Fraction | None:
    """Exact Cheeger constant where a closed form exists, else None.

    Complete: ceil(n/2) (reduces to n/2 for even n). Chain: 2/n for even n
    only; the even-n form is not exact for odd n, so odd chains return None
    and callers fall back to enumeration. Star: 1. Expander: None (only a
    lower bound of the form C*d is known, never a value).
    """
    n = family.n
    if family.kind == "complete":
        return Fraction(n - n // 2)
    if family.kind == "chain":
        return Fraction(2, n) if n % 2 == 0 else None
    if family.kind == "star":
        return Fraction(1)
    return None


def edge_boundary(g: Graph, s) -> int:
    """|E(S, S^c)|: number of edges with exactly one endpoint in s."""
    members = set()
    for v in s:
        if not (0 <= v < g.n):
            raise GraphError(f"node {v} out of range for n={g.n}")
        members.add(v)
    return sum(1 for i, j in g.edges if (i in members) != (j in members))


def cheeger_exact(g: Graph, limit: int = CHEEGER_ENUM_LIMIT) -> Fraction:
    """Exact Cheeger constant min_{0<|S|<=n/2} |E(S,S^c)|/|S| by subset enumeration.

    Enumerates the 2^(n-1) subsets that exclude node 0 — each {S, S^c}
    partition appears exactly once, and its qualifying side is the smaller
    one, so minimizing cut/min(|S|, n-|S|) over these is exact.

    Args:
        g: connected graph with g.n <= limit.
        limit: refusal threshold (default 24); raise it explicitly for bigger
            graphs rather than letting the scan stall silently.

    Returns:
        The exact value as a Fraction.
    """
    n = g.n
    if n > limit:
        raise EnumerationLimitError(
            f"cheeger_exact on n={n} needs 2^{n - 1} subsets; limit is n <= {limit}"
        )
    best_cut, best_side = None, None
    total = 1 << (n - 1)
    chunk = 1 << 20
    # node j >= 1 lives on bit j-1; node 0 is always outside S
    shifts = [(i - 1 if i else None, j - 1) for i, j in g.edges]
    for lo in range(1, total, chunk):
        masks = np.arange(lo, min(lo + chunk, total), dtype=np.uint32)
        cut = np.zeros(masks.shape, dtype=np.uint32)
        for si, sj in shifts:
            if si is None:
                cut += (masks >> sj) & 1
            else:
                cut += ((masks >> si) ^ (masks >> sj)) & 1
        sizes = np.bitwise_count(masks).astype(np.int64)
        side = np.minimum(sizes, n - sizes)
        k = int(np.argmin(cut / side))
        c, s = int(cut[k]), int(side[k])
        if best_cut is None or c * best_side < best_cut * s:
            best_cut, best_side = c, s
    return Fraction(best_cut, best_side)


def metrics(g: Graph, cheeger=None, limit: int = CHEEGER_ENUM_LIMIT) -> GraphMetrics:
    """Structural metrics with the Cheeger constant resolved by the first
    applicable method: user-supplied value, family closed form, exact enumeration."""
    degrees = g.degrees()
    if cheeger is not None:
        if cheeger <= 0:
            raise GraphError(f"supplied cheeger value must be positive, got {cheeger}")
        value, method = cheeger, "user-supplied"
    else:
        closed = None
        if g.family is not None:
            d = degrees[0] if g.family == "expander" else None
            closed = cheeger_closed_form(GraphFamily(g.family, g.n, d=d))
        if closed is not None:
            value, method = closed, "closed-form"
        else:
            value, method = cheeger_exact(g, limit=limit), "exact-enumeration"
    return GraphMetrics(
        n=g.n,
        num_edges=g.num_edges,
        degrees=degrees,
        delta_max=max(degrees),
        cheeger=value,
        cheeger_method=method,
    )


def spanning_tree(g: Graph) -> tuple[tuple[int, int], ...]:
    """BFS spanning tree from node 0, neighbors visited in ascending order.

    Returns n-1 edges as (min, max) pairs in discovery order.
    """
    adj = g.adjacency()
    seen = [False] * g.n
    seen[0] = True
    queue = deque([0])
    tree = []
    while queue:
        v = queue.popleft()
        for u, _ in adj[v]:
            if not seen[u]:
                seen[u] = True
                tree.append((min(v, u), max(v, u)))
                queue.append(u)
    return tuple(tree)


def relabel(g: Graph, perm) -> Graph:
    """Apply a node permutation (perm[v] = new label of v); family tag is kept
    since it names an isomorphism class."""
    perm = list(perm)
    if sorted(perm) != list(range(g.n)):
        raise GraphError("perm must be a permutation of 0..n-1")
    return Graph(g.n, tuple((perm[i], perm[j]) for i, j in g.edges), family=g.family)


def parse_edge_list(text: str) -> Graph:
    """Parse the edge-list text format.

    One "i j" pair per line; '#' starts a comment; an optional first
    non-comment line "n <count>" fixes the node count (otherwise inferred as
    max index + 1). A "# family: <name>" comment restores the family tag.
    """
    family = None
    n_declared = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("family:"):
                family = body.split(":", 1)[1].strip() or None
            continue
        if not line:
            continue
        parts = line.split()
        if parts[0] == "n" and n_declared is None and not edges:
            if len(parts) != 2:
                raise GraphError(f"line {lineno}: malformed node-count header {line!r}")
            try:
                n_declared = int(parts[1])
            except ValueError:
                raise GraphError(f"line {lineno}: malformed node-count header {line!r}") from None
            continue
        if len(parts) != 2:
            raise GraphError(f"line {lineno}: expected 'i j', got {line!r}")
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphError(f"line {lineno}: expected integers, got {line!r}") from None
        if i < 0 or j < 0:
            raise GraphError(f"line {lineno}: negative node index in {line!r}")
        edges.append((i, j))
    if not edges:
        raise GraphError("no edges in input")
    n = n_declared if n_declared is not None else max(max(e) for e in edges) + 1
    return Graph(n, tuple(edges), family=family)


def format_edge_list(g: Graph) -> str:
    """Serialize a graph in the format parse_edge_list reads (round-trips the family tag)."""
    lines = []
    if g.family is not None:
        lines.append(f"# family: {g.family}")
    lines.append(f"n {g.n}")
    lines.extend(f"{i} {j}" for i, j in g.edges)
    return "\n".join(lines) + "\n"
