"""Finite multidigraphs with a global sink.

A :class:`SinkedMultigraph` is immutable.  Its vertex order is fixed at
construction and defines the indexing of every configuration, chip vector and
matrix in the package: index ``i`` refers to ``g.nonsink[i]``, i.e. the stored
vertex order with the sink removed.
"""

import json
import random
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

from .errors import (BadSize, DuplicateVertex, LoopEdge, NotRegular,
                     SinkNotGlobal, UnknownLabel)


def _normalize_edge(e):
    if len(e) == 2:
        u, v = e
        m = 1
    else:
        u, v, m = e
    if not isinstance(m, int) or m < 1:
        raise ValueError(f"edge {u!r}-{v!r}: multiplicity must be a positive integer, got {m!r}")
    return u, v, m


@dataclass(frozen=True)
class BaseGraph:
    """Undirected loopless multigraph with no sink designation (input to :func:`cone`)."""
    vertices: tuple
    edges: tuple  # (u, v, mult), each undirected edge listed once

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        _check_unique(self.vertices)
        known = set(self.vertices)
        merged = {}
        for e in self.edges:
            u, v, m = _normalize_edge(e)
            for x in (u, v):
                if x not in known:
                    raise UnknownLabel(f"edge endpoint {x!r} is not a vertex")
            if u == v:
                raise LoopEdge(f"loop at {u!r}")
            key = frozenset((u, v))
            merged[key] = merged.get(key, 0) + m
        pos = {v: i for i, v in enumerate(self.vertices)}
        edges = []
        for key, m in merged.items():
            u, v = sorted(key, key=pos.__getitem__)
            edges.append((u, v, m))
        edges.sort(key=lambda e: (pos[e[0]], pos[e[1]]))
        object.__setattr__(self, "edges", tuple(edges))

    def degree(self, v):
        return sum(m for a, b, m in self.edges if v in (a, b))

    def regularity(self):
        """Common degree r if the graph is regular, else None."""
        degs = {self.degree(v) for v in self.vertices}
        return degs.pop() if len(degs) == 1 else None


def _check_unique(vertices):
    seen = set()
    for v in vertices:
        if v in seen:
            raise DuplicateVertex(f"duplicate vertex label {v!r}")
        seen.add(v)


@dataclass(frozen=True)
class SinkedMultigraph:
    vertices: tuple
    sink: object
    # ((u, v), m) pairs for directed edges u -> v, sorted by vertex index
    edges: tuple
    undirected: bool = field(default=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        _check_unique(self.vertices)
        if self.sink not in self.vertices:
            raise UnknownLabel(f"sink {self.sink!r} is not a vertex")
        if len(self.vertices) < 2:
            raise BadSize("a sinked graph needs at least one non-sink vertex")
        known = set(self.vertices)
        for (u, v), m in self.edges:
            for x in (u, v):
                if x not in known:
                    raise UnknownLabel(f"edge endpoint {x!r} is not a vertex")
            if u == v:
                raise LoopEdge(f"loop at {u!r}")
            if m < 1:
                raise ValueError(f"edge {u!r}->{v!r} has multiplicity {m}")
        # reverse reachability from the sink
        preds = {v: [] for v in self.vertices}
        for (u, v), _ in self.edges:
            preds[v].append(u)
        seen = {self.sink}
        queue = deque([self.sink])
        while queue:
            for u in preds[queue.popleft()]:
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
        missing = [v for v in self.vertices if v not in seen]
        if missing:
            raise SinkNotGlobal(f"no directed path to sink {self.sink!r} from {missing}")

    @cached_property
    def nonsink(self):
        return tuple(v for v in self.vertices if v != self.sink)

    @property
    def n(self):
        """Number of non-sink vertices."""
        return len(self.vertices) - 1

    @cached_property
    def index(self):
        return {v: i for i, v in enumerate(self.nonsink)}

    @cached_property
    def _mult(self):
        return dict(self.edges)

    def mult(self, u, v):
        return self._mult.get((u, v), 0)

    def out_degree(self, u):
        return sum(m for (a, _), m in self.edges if a == u)

    @cached_property
    def _laplacian(self):
        idx = self.index
        L = [[0] * self.n for _ in range(self.n)]
        for (u, v), m in self.edges:
            if u == self.sink:
                continue
            i = idx[u]
            L[i][i] += m
            if v != self.sink:
                L[i][idx[v]] -= m
        return tuple(tuple(row) for row in L)

    def reduced_laplacian(self):
        """Laplacian with the sink row and column deleted (fresh list copy)."""
        return [list(row) for row in self._laplacian]

    def degree_vector(self):
        return tuple(self._laplacian[i][i] for i in range(self.n))

    def sigma_max(self):
        """The maximal stable configuration, deg - 1."""
        return tuple(d - 1 for d in self.degree_vector())

    def neighbors(self, u):
        """Out-neighbours of ``u`` with multiplicities, as ``(v, m)`` pairs."""
        return [(v, m) for (a, v), m in self.edges if a == u]

    def to_dict(self):
        if self.undirected:
            pos = {v: i for i, v in enumerate(self.vertices)}
            edges = [{"from": u, "to": v, "mult": m}
                     for (u, v), m in self.edges if pos[u] < pos[v]]
        else:
            edges = [{"from": u, "to": v, "mult": m} for (u, v), m in self.edges]
        return {"vertices": list(self.vertices), "sink": self.sink,
                "undirected": self.undirected, "edges": edges}

    def to_json(self, indent=2):
        return json.dumps(self.to_dict(), indent=indent)


def build_graph(vertices, sink, edges, undirected=True):
    """Validate and build a :class:`SinkedMultigraph`.

    ``edges`` holds ``(u, v)`` or ``(u, v, mult)`` tuples.  With ``undirected``
    each edge is expanded into both directions with the same multiplicity.
    Repeated edges accumulate.
    """
    vertices = tuple(vertices)
    _check_unique(vertices)
    known = set(vertices)
    mult = {}
    for e in edges:
        u, v, m = _normalize_edge(e)
        for x in (u, v):
            if x not in known:
                raise UnknownLabel(f"edge endpoint {x!r} is not a vertex")
        if u == v:
            raise LoopEdge(f"loop at {u!r}")
        pairs = [(u, v), (v, u)] if undirected else [(u, v)]
        for p in pairs:
            mult[p] = mult.get(p, 0) + m
    pos = {v: i for i, v in enumerate(vertices)}
    ordered = tuple(sorted(mult.items(), key=lambda kv: (pos[kv[0][0]], pos[kv[0][1]])))
    return SinkedMultigraph(vertices, sink, ordered, undirected)


def graph_from_dict(data):
    edges = [(e["from"], e["to"], e.get("mult", 1)) for e in data["edges"]]
    return build_graph(data["vertices"], data["sink"], edges,
                       undirected=data.get("undirected", False))


def load_graph(path):
    with open(path, encoding="utf-8") as fh:
        return graph_from_dict(json.load(fh))


def base_from_dict(data):
    """Read a base graph for :func:`cone`; a ``sink`` key, if any, is ignored."""
    if not data.get("undirected", True):
        raise ValueError("cone base graphs must be undirected")
    edges = [(e["from"], e["to"], e.get("mult", 1)) for e in data["edges"]]
    return BaseGraph(tuple(data["vertices"]), tuple(edges))


def load_base(path):
    with open(path, encoding="utf-8") as fh:
        return base_from_dict(json.load(fh))


def cone(base, apex="apex"):
    """Add an apex joined once to every base vertex; the apex is the sink."""
    if apex in base.vertices:
        raise DuplicateVertex(f"apex label {apex!r} already used by the base graph")
    edges = list(base.edges) + [(apex, v, 1) for v in base.vertices]
    return build_graph((apex,) + base.vertices, apex, edges, undirected=True)


def cone_of_regular(base, apex="apex"):
    """:func:`cone` after checking that the base is regular; returns (cone, r)."""
    r = base.regularity()
    if r is None:
        raise NotRegular("base graph is not regular")
    return cone(base, apex), r


# -- standard families ------------------------------------------------------

def base_family(name, n=None):
    """Undirected base graphs: cycle(n), complete(n), path(n), petersen."""
    if name == "petersen":
        outer = [f"o{i}" for i in range(5)]
        inner = [f"i{i}" for i in range(5)]
        edges = [(outer[i], outer[(i + 1) % 5]) for i in range(5)]
        edges += [(inner[i], inner[(i + 2) % 5]) for i in range(5)]
        edges += [(outer[i], inner[i]) for i in range(5)]
        return BaseGraph(tuple(outer + inner), tuple(edges))
    if n is None:
        raise BadSize(f"family {name!r} needs a size")
    if name == "cycle":
        if n < 3:
            raise BadSize(f"cycle needs n >= 3, got {n}")
        vs = ["q"] + [f"v{i}" for i in range(1, n)]
        edges = [(vs[i], vs[(i + 1) % n]) for i in range(n)]
    elif name == "complete":
        if n < 1:
            raise BadSize(f"complete needs n >= 1, got {n}")
        vs = ["q"] + [f"v{i}" for i in range(1, n)]
        edges = list(combinations(vs, 2))
    elif name == "path":
        if n < 1:
            raise BadSize(f"path needs n >= 1, got {n}")
        vs = ["q"] + [f"v{i}" for i in range(1, n)]
        edges = [(vs[i], vs[i + 1]) for i in range(n - 1)]
    else:
        raise ValueError(f"unknown graph family {name!r}")
    return BaseGraph(tuple(vs), tuple(edges))


def family(name, n=None):
    """Sinked standard graphs.

    Vertices are ``q, v1, ..., v_{n-1}`` with sink ``q``.  For ``cycle`` the
    non-sink order is the path order q-v1-...-v_{n-1}-q; for ``path`` the sink
    is an end vertex.  ``petersen`` uses its first outer vertex as the sink.
    """
    if name in ("cycle", "complete", "path") and (n is None or n < (3 if name == "cycle" else 2)):
        raise BadSize(f"{name} needs n >= {3 if name == 'cycle' else 2}, got {n}")
    base = base_family(name, n)
    return build_graph(base.vertices, base.vertices[0], base.edges, undirected=True)


def random_graph(rng, n_vertices, max_mult=2, directed=False, edge_prob=0.5):
    """Random loopless multigraph on ``q, v1, ...`` with ``q`` a global sink.

    A random spanning tree (an in-tree towards ``q`` when ``directed``) keeps
    the sink global; extra edges are added independently with ``edge_prob``.
    Multiplicities are drawn from ``1..max_mult``.
    """
    if n_vertices < 2:
        raise BadSize("need at least two vertices")
    if isinstance(rng, int):
        rng = random.Random(rng)
    vs = ["q"] + [f"v{i}" for i in range(1, n_vertices)]
    rest = vs[1:]
    rng.shuffle(rest)
    reached = ["q"]
    mult = {}
    for v in rest:
        mult[(v, rng.choice(reached))] = rng.randint(1, max_mult)
        reached.append(v)
    pairs = ([(u, v) for u in vs for v in vs if u != v] if directed
             else list(combinations(vs, 2)))
    for u, v in pairs:
        if rng.random() < edge_prob:
            key = (u, v)
            if not directed and (v, u) in mult:
                key = (v, u)
            mult[key] = min(max_mult, mult.get(key, 0) + rng.randint(1, max_mult))
    edges = [(u, v, m) for (u, v), m in mult.items()]
    return build_graph(vs, "q", edges, undirected=not directed)
