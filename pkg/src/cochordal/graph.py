"""Undirected simple graphs on labeled vertices.

Labels are stored as strings; integer labels are converted with ``str``.
Every set-valued result is returned in canonical order: members sorted
lexicographically, and lists of sets sorted by their sorted member tuples.
"""

from __future__ import annotations

from collections.abc import Iterable

from .errors import DuplicateVertex, SelfLoop, UnknownEndpoint, UnknownVertex

Label = str


def as_label(x) -> Label:
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise TypeError(f"vertex labels must be str or int, got {type(x).__name__}")
    return str(x)


class Graph:
    """Immutable undirected simple graph backed by a dense adjacency matrix.

    Parameters
    ----------
    vertices : iterable of str or int
        Distinct vertex labels. Their order is kept (``g.vertices``) but has
        no mathematical meaning; positions come from a vertex ordering.
    edges : iterable of pairs
        Unordered label pairs. Duplicates are merged.
    """

    __slots__ = ("_vertices", "_index", "_adj", "_nbrs")

    def __init__(self, vertices: Iterable, edges: Iterable = ()):
        labels = [as_label(v) for v in vertices]
        index: dict[Label, int] = {}
        for i, v in enumerate(labels):
            if v in index:
                raise DuplicateVertex(f"duplicate vertex {v!r}")
            index[v] = i
        n = len(labels)
        adj = [[False] * n for _ in range(n)]
        for pair in edges:
            a, b = (as_label(x) for x in pair)
            for x in (a, b):
                if x not in index:
                    raise UnknownEndpoint(f"edge ({a!r}, {b!r}) references unknown vertex {x!r}")
            if a == b:
                raise SelfLoop(f"self-loop on {a!r}")
            i, j = index[a], index[b]
            adj[i][j] = adj[j][i] = True
        self._vertices = tuple(labels)
        self._index = index
        self._adj = tuple(tuple(row) for row in adj)
        self._nbrs = {
            v: frozenset(labels[j] for j in range(n) if adj[i][j]) for i, v in enumerate(labels)
        }

    @property
    def vertices(self) -> tuple[Label, ...]:
        return self._vertices

    @property
    def adjacency(self) -> tuple[tuple[bool, ...], ...]:
        """Boolean adjacency matrix indexed like ``vertices``."""
        return self._adj

    def __len__(self) -> int:
        return len(self._vertices)

    def __contains__(self, v) -> bool:
        return isinstance(v, (str, int)) and str(v) in self._index

    def __iter__(self):
        return iter(self._vertices)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return set(self._vertices) == set(other._vertices) and self.edges() == other.edges()

    def __hash__(self) -> int:
        return hash((frozenset(self._vertices), tuple(self.edges())))

    def __repr__(self) -> str:
        return f"Graph(vertices={list(self._vertices)!r}, edges={self.edges()!r})"

    def _check(self, v) -> Label:
        label = as_label(v)
        if label not in self._index:
            raise UnknownVertex(f"unknown vertex {label!r}")
        return label

    def has_edge(self, a, b) -> bool:
        a, b = self._check(a), self._check(b)
        return self._adj[self._index[a]][self._index[b]]

    def neighbors(self, v) -> frozenset[Label]:
        return self._nbrs[self._check(v)]

    def degree(self, v) -> int:
        return len(self.neighbors(v))

    def edges(self) -> list[tuple[Label, Label]]:
        """Edges as sorted pairs, in lexicographic order."""
        out = set()
        for a, nbrs in self._nbrs.items():
            for b in nbrs:
                out.add((a, b) if a < b else (b, a))
        return sorted(out)

    def is_clique(self, members: Iterable) -> bool:
        ms = [self._check(m) for m in members]
        return all(self.has_edge(a, b) for i, a in enumerate(ms) for b in ms[i + 1 :])


def build_graph(vertices: Iterable, edges: Iterable = ()) -> Graph:
    return Graph(vertices, edges)


def closed_neighborhood(g: Graph, v) -> frozenset[Label]:
    """``{v}`` together with every vertex adjacent to ``v``."""
    label = as_label(v)
    return g.neighbors(label) | {label}


def induced_subgraph(g: Graph, subset: Iterable) -> Graph:
    keep = {g._check(v) for v in subset}
    verts = [v for v in g.vertices if v in keep]
    return Graph(verts, [(a, b) for a, b in g.edges() if a in keep and b in keep])


def canonical(sets: Iterable[Iterable[Label]]) -> list[tuple[Label, ...]]:
    return sorted(tuple(sorted(s)) for s in sets)


def maximal_cliques(g: Graph) -> list[tuple[Label, ...]]:
    """All inclusion-maximal cliques, via Bron-Kerbosch with pivoting."""
    found: list[frozenset[Label]] = []
    nbrs = {v: g.neighbors(v) for v in g.vertices}

    def expand(r: frozenset, p: set, x: set) -> None:
        if not p and not x:
            found.append(r)
            return
        pivot = max(sorted(p | x), key=lambda u: len(p & nbrs[u]))
        for v in sorted(p - nbrs[pivot]):
            expand(r | {v}, p & nbrs[v], x & nbrs[v])
            p.discard(v)
            x.add(v)

    if len(g):
        expand(frozenset(), set(g.vertices), set())
    return canonical(found)


def connected_components(g: Graph) -> list[tuple[Label, ...]]:
    seen: set[Label] = set()
    comps = []
    for start in sorted(g.vertices):
        if start in seen:
            continue
        stack, comp = [start], {start}
        while stack:
            for b in g.neighbors(stack.pop()):
                if b not in comp:
                    comp.add(b)
                    stack.append(b)
        seen |= comp
        comps.append(comp)
    return canonical(comps)


def disjoint_union(*graphs: Graph) -> Graph:
    verts: list[Label] = []
    edges: list[tuple[Label, Label]] = []
    for h in graphs:
        verts.extend(h.vertices)
        edges.extend(h.edges())
    return Graph(verts, edges)


def complete_graph(labels: Iterable) -> Graph:
    labels = [as_label(v) for v in labels]
    return Graph(labels, [(a, b) for i, a in enumerate(labels) for b in labels[i + 1 :]])
