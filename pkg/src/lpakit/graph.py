"""Finite directed multigraphs and the predicates that govern their path
algebras: vertex classification, incidence matrices, condition (L),
simplicity, pure infiniteness, and source elimination.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

from .errors import InputError, VerificationError
from .zlinalg import IntMatrix


@dataclass(frozen=True)
class Graph:
    """Vertices are ids; edges are (edge id, source vertex, range vertex)."""

    vertices: tuple
    edges: tuple

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(str(v) for v in self.vertices))
        object.__setattr__(
            self, "edges", tuple((str(e), str(s), str(r)) for e, s, r in self.edges)
        )
        if not self.vertices:
            raise InputError("a graph needs at least one vertex")
        seen = set()
        for v in self.vertices:
            if v in seen:
                raise InputError(f"duplicate vertex id {v!r}")
            seen.add(v)
        vs = set(self.vertices)
        eseen = set()
        for e, s, r in self.edges:
            if e in eseen:
                raise InputError(f"duplicate edge id {e!r}")
            eseen.add(e)
            if s not in vs:
                raise InputError(f"edge {e!r} has undeclared source {s!r}")
            if r not in vs:
                raise InputError(f"edge {e!r} has undeclared range {r!r}")

    def source(self, e):
        return _maps(self).src[e]

    def range(self, e):
        return _maps(self).rng[e]

    def out_edges(self, v):
        return _maps(self).out[v]

    def edge_ids(self):
        return tuple(e for e, _, _ in self.edges)


@dataclass(frozen=True)
class VertexClassification:
    regular: tuple
    sinks: tuple
    sources: tuple


class _GraphMaps:
    __slots__ = ("src", "rng", "out", "into", "special")

    def __init__(self, g):
        self.src = {e: s for e, s, _ in g.edges}
        self.rng = {e: r for e, _, r in g.edges}
        self.out = {v: tuple(e for e, s, _ in g.edges if s == v) for v in g.vertices}
        self.into = {v: tuple(e for e, _, r in g.edges if r == v) for v in g.vertices}
        # lowest declaration index among the edges a regular vertex emits
        self.special = {v: es[0] for v, es in self.out.items() if es}


@lru_cache(maxsize=None)
def _maps(g):
    return _GraphMaps(g)


def classify_vertices(g):
    """Partition vertices into regular vertices and sinks, and list sources."""
    m = _maps(g)
    regular = tuple(v for v in g.vertices if m.out[v])
    sinks = tuple(v for v in g.vertices if not m.out[v])
    sources = tuple(v for v in g.vertices if not m.into[v])
    return VertexClassification(regular, sinks, sources)


def incidence_matrix(g):
    """Edge-count matrix, rows over regular vertices, columns over all
    vertices, both in declaration order."""
    m = _maps(g)
    regular = [v for v in g.vertices if m.out[v]]
    rows = []
    for v in regular:
        counts = {w: 0 for w in g.vertices}
        for e in m.out[v]:
            counts[m.rng[e]] += 1
        rows.append([counts[w] for w in g.vertices])
    return IntMatrix.from_rows(rows)


def bk_matrix(g):
    """The vertex-by-regular matrix with entries delta(w,v) - #edges(v -> w).

    Its cokernel presents K0 of the path algebra and its kernel the free
    part of K1.
    """
    m = _maps(g)
    regular = [v for v in g.vertices if m.out[v]]
    a = incidence_matrix(g).data
    rows = []
    for i, w in enumerate(g.vertices):
        rows.append(
            [(1 if w == v else 0) - a[j][i] for j, v in enumerate(regular)]
        )
    return IntMatrix.from_rows(rows)


def condition_L(g):
    """True iff every cycle has an exit.

    Fails exactly when some cycle runs entirely through vertices of
    out-degree one, so it suffices to chase unique successors.
    """
    m = _maps(g)
    nxt = {v: m.rng[m.out[v][0]] for v in g.vertices if len(m.out[v]) == 1}
    done = set()
    for start in nxt:
        if start in done:
            continue
        seen = {}
        cur = start
        step = 0
        while cur in nxt and cur not in done:
            if cur in seen:
                return False
            seen[cur] = step
            step += 1
            cur = nxt[cur]
        done.update(seen)
    return True


def hereditary_saturated_closure(g, vs):
    """Smallest vertex set containing vs, closed under edge ranges and under
    adding regular vertices all of whose edge ranges already lie inside."""
    m = _maps(g)
    closed = set(vs)
    changed = True
    while changed:
        changed = False
        for v in list(closed):
            for e in m.out[v]:
                if m.rng[e] not in closed:
                    closed.add(m.rng[e])
                    changed = True
        for v in g.vertices:
            if v not in closed and m.out[v]:
                if all(m.rng[e] in closed for e in m.out[v]):
                    closed.add(v)
                    changed = True
    return frozenset(closed)


def is_simple(g):
    """Condition (L) plus: the hereditary-saturated closure of each vertex is
    the whole vertex set."""
    if not condition_L(g):
        return False
    allv = frozenset(g.vertices)
    return all(hereditary_saturated_closure(g, {v}) == allv for v in g.vertices)


def has_cycle(g):
    m = _maps(g)
    color = {}

    def dfs(v):
        color[v] = 1
        for e in m.out[v]:
            w = m.rng[e]
            c = color.get(w)
            if c == 1:
                return True
            if c is None and dfs(w):
                return True
        color[v] = 2
        return False

    return any(color.get(v) is None and dfs(v) for v in g.vertices)


def is_purely_infinite_simple(g):
    return is_simple(g) and has_cycle(g)


def matrix_algebra_size(g):
    """For a simple acyclic graph, the number of paths into its unique sink
    (the trivial path included); None otherwise."""
    if not is_simple(g) or has_cycle(g):
        return None
    m = _maps(g)
    sinks = [v for v in g.vertices if not m.out[v]]
    if len(sinks) != 1:
        raise VerificationError(
            f"simple acyclic graph must have exactly one sink, found {len(sinks)}"
        )
    paths = {}

    def count(v):
        if v not in paths:
            if not m.out[v]:
                paths[v] = 1
            else:
                paths[v] = sum(count(m.rng[e]) for e in m.out[v])
        return paths[v]

    return sum(count(v) for v in g.vertices)


def source_eliminate(g):
    """Repeatedly delete a source vertex together with its emitted edges until
    no source with outgoing edges remains."""
    cur = g
    while True:
        m = _maps(cur)
        candidates = [v for v in cur.vertices if not m.into[v] and m.out[v]]
        if not candidates:
            return cur
        v = candidates[0]
        remaining = tuple(w for w in cur.vertices if w != v)
        if not remaining:
            raise InputError("source elimination would remove every vertex")
        edges = tuple(t for t in cur.edges if t[1] != v)
        cur = Graph(remaining, edges)


# ---------------------------------------------------------------------------
# JSON interchange


def graph_from_json(text):
    """Parse the graph interchange format, rejecting unknown keys and
    duplicate ids by name."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise InputError("graph file must contain a JSON object")
    extra = set(obj) - {"vertices", "edges"}
    if extra:
        raise InputError(f"unknown keys in graph object: {sorted(extra)}")
    if "vertices" not in obj or "edges" not in obj:
        raise InputError("graph object needs 'vertices' and 'edges'")
    vertices = obj["vertices"]
    if not isinstance(vertices, list) or not all(isinstance(v, str) for v in vertices):
        raise InputError("'vertices' must be a list of strings")
    if len(set(vertices)) != len(vertices):
        dup = next(v for i, v in enumerate(vertices) if v in vertices[:i])
        raise InputError(f"duplicate vertex id {dup!r}")
    edges = []
    seen = set()
    if not isinstance(obj["edges"], list):
        raise InputError("'edges' must be a list")
    for item in obj["edges"]:
        if not isinstance(item, dict):
            raise InputError("each edge must be an object")
        extra = set(item) - {"id", "src", "dst"}
        if extra:
            raise InputError(f"unknown keys in edge object: {sorted(extra)}")
        for key in ("id", "src", "dst"):
            if key not in item or not isinstance(item[key], str):
                raise InputError(f"edge is missing string field {key!r}")
        if item["id"] in seen:
            raise InputError(f"duplicate edge id {item['id']!r}")
        seen.add(item["id"])
        edges.append((item["id"], item["src"], item["dst"]))
    return Graph(tuple(vertices), tuple(edges))


def graph_to_json(g):
    return json.dumps(
        {
            "vertices": list(g.vertices),
            "edges": [{"id": e, "src": s, "dst": r} for e, s, r in g.edges],
        },
        indent=2,
    )


def rose(n, vertex="v", prefix="e"):
    """One vertex carrying n loops."""
    return Graph((vertex,), tuple((f"{prefix}{i+1}", vertex, vertex) for i in range(n)))


def disjoint_union(*graphs):
    """Disjoint union with ids made unique by a positional prefix."""
    vertices = []
    edges = []
    for i, g in enumerate(graphs):
        tag = f"g{i+1}_"
        vertices.extend(tag + v for v in g.vertices)
        edges.extend((tag + e, tag + s, tag + r) for e, s, r in g.edges)
    return Graph(tuple(vertices), tuple(edges))
