"""Recognition of decomposable and homogeneous graphs and their orderings.

Positions are 1-based: ``sigma[v] == 1`` is the vertex eliminated first.
A homogeneous graph's twin classes (equal closed neighborhoods) form a rooted
forest, and an ancestor-respecting ordering places every ancestor class above
all of its descendants.
"""

from __future__ import annotations

import heapq
import itertools
import random
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

from .errors import NotHomogeneous, OrderingMismatch
from .graph import Graph, Label, as_label, closed_neighborhood, induced_subgraph, maximal_cliques


@dataclass(frozen=True)
class VertexOrdering:
    """A bijection from vertex labels onto positions ``1..p``."""

    inverse: tuple[Label, ...]
    position: Mapping[Label, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        inv = tuple(as_label(v) for v in self.inverse)
        if len(set(inv)) != len(inv):
            raise OrderingMismatch("ordering repeats a label")
        object.__setattr__(self, "inverse", inv)
        object.__setattr__(self, "position", {v: i + 1 for i, v in enumerate(inv)})

    @classmethod
    def from_positions(cls, positions: Mapping) -> VertexOrdering:
        """Build from ``{label: position}``; positions must be exactly ``1..p``."""
        items = {as_label(k): int(p) for k, p in positions.items()}
        if sorted(items.values()) != list(range(1, len(items) + 1)):
            raise OrderingMismatch(f"positions must be 1..{len(items)}, got {sorted(items.values())}")
        return cls(tuple(sorted(items, key=items.__getitem__)))

    def __getitem__(self, v) -> int:
        return self.position[as_label(v)]

    def __len__(self) -> int:
        return len(self.inverse)

    def at(self, i: int) -> Label:
        """The vertex at position ``i`` (1-based)."""
        return self.inverse[i - 1]

    def check_domain(self, g: Graph) -> None:
        if set(self.inverse) != set(g.vertices) or len(self.inverse) != len(g):
            raise OrderingMismatch("ordering does not cover exactly the graph's vertices")

    def restrict(self, keep: Iterable) -> VertexOrdering:
        keep = {as_label(v) for v in keep}
        return VertexOrdering(tuple(v for v in self.inverse if v in keep))

    def to_text(self) -> str:
        return "".join(f"{v} {i + 1}\n" for i, v in enumerate(self.inverse))


@dataclass(frozen=True)
class ConflictTriple:
    """Vertices with ``u-v``, ``v-w`` edges, ``u-w`` missing, and ``w`` placed last."""

    u: Label
    v: Label
    w: Label

    def valid_for(self, g: Graph, sigma: VertexOrdering) -> bool:
        u, v, w = self.u, self.v, self.w
        if not (g.has_edge(u, v) and g.has_edge(v, w)) or g.has_edge(u, w):
            return False
        su, sv, sw = sigma[u], sigma[v], sigma[w]
        return sv < su < sw or su < sv < sw

    def case(self, sigma: VertexOrdering) -> str:
        """``"vuw"`` when sigma(v) < sigma(u) < sigma(w), else ``"uvw"``."""
        return "vuw" if sigma[self.v] < sigma[self.u] else "uvw"


# ---------------------------------------------------------------- decomposable


def is_perfect_elimination_ordering(g: Graph, sigma: VertexOrdering):
    """Check the perfect elimination property position by position.

    Returns ``(True, None)`` or ``(False, (i, j, k))`` where ``(i, j, k)`` is
    the lexicographically first triple of positions ``i < j < k`` whose
    vertices at ``j`` and ``k`` are both adjacent to the vertex at ``i`` but
    not to each other.
    """
    sigma.check_domain(g)
    p = len(sigma)
    adj = [[g.has_edge(sigma.at(a), sigma.at(b)) if a != b else False for b in range(1, p + 1)]
           for a in range(1, p + 1)]
    for i in range(p):
        later = [j for j in range(i + 1, p) if adj[j][i]]
        for x, j in enumerate(later):
            for k in later[x + 1 :]:
                if not adj[k][j]:
                    return False, (i + 1, j + 1, k + 1)
    return True, None


def find_perfect_elimination_ordering(g: Graph) -> VertexOrdering | None:
    """Maximum cardinality search; ``None`` when ``g`` is not decomposable.

    The first vertex visited receives the largest position, so the vertex at
    position 1 is eliminated first. Ties go to the smallest label.
    """
    weight = {v: 0 for v in g.vertices}
    visited: list[Label] = []
    remaining = set(g.vertices)
    while remaining:
        z = min(remaining, key=lambda v: (-weight[v], v))
        remaining.discard(z)
        visited.append(z)
        for y in g.neighbors(z):
            if y in remaining:
                weight[y] += 1
    sigma = VertexOrdering(tuple(reversed(visited)))
    ok, _ = is_perfect_elimination_ordering(g, sigma)
    return sigma if ok else None


def is_decomposable(g: Graph) -> bool:
    return find_perfect_elimination_ordering(g) is not None


# ---------------------------------------------------------------- homogeneous


def _induced_c4_or_p4(g: Graph, quad) -> bool:
    h = induced_subgraph(g, quad)
    degrees = sorted(h.degree(v) for v in h.vertices)
    # on four vertices these degree sequences force C4 and P4 respectively
    return degrees in ([2, 2, 2, 2], [1, 1, 2, 2])


def find_induced_c4_or_p4(g: Graph) -> tuple[Label, ...] | None:
    """First 4-subset (in lexicographic combination order) inducing a 4-cycle or 4-path."""
    for quad in itertools.combinations(sorted(g.vertices), 4):
        if _induced_c4_or_p4(g, quad):
            return quad
    return None


def is_homogeneous(g: Graph):
    """Neighborhood-nesting test.

    Returns ``(True, None)``, or ``(False, quad)`` where ``quad`` is a sorted
    4-subset inducing a 4-cycle or a 4-path.
    """
    closed = {v: closed_neighborhood(g, v) for v in g.vertices}
    for a, b in g.edges():
        if not (closed[a] <= closed[b] or closed[b] <= closed[a]):
            quad = find_induced_c4_or_p4(g)
            assert quad is not None, "nesting failed without an induced C4/P4"
            return False, quad
    return True, None


def arrow(g: Graph, u, v) -> bool:
    """``u -> v``: the closed neighborhood of ``v`` is inside that of ``u``."""
    return closed_neighborhood(g, v) <= closed_neighborhood(g, u)


@dataclass(frozen=True)
class HasseForest:
    """Rooted forest over twin classes of a homogeneous graph.

    ``classes[i]`` is a sorted tuple of labels with weight ``len(classes[i])``;
    ``parent[i]`` is the index of the covering class or ``None`` for a root.
    Classes are listed in canonical (sorted) order.
    """

    classes: tuple[tuple[Label, ...], ...]
    parent: tuple[int | None, ...]

    @property
    def roots(self) -> list[int]:
        return [i for i, p in enumerate(self.parent) if p is None]

    def weight(self, i: int) -> int:
        return len(self.classes[i])

    def children(self, i: int) -> list[int]:
        return [c for c, p in enumerate(self.parent) if p == i]

    def class_of(self, v) -> int:
        v = as_label(v)
        for i, cls in enumerate(self.classes):
            if v in cls:
                return i
        raise KeyError(v)

    def ancestors(self, i: int) -> list[int]:
        out = []
        p = self.parent[i]
        while p is not None:
            out.append(p)
            p = self.parent[p]
        return out

    def is_ancestor(self, a, d) -> bool:
        """Whether vertex ``a``'s class is a strict ancestor of vertex ``d``'s class."""
        return self.class_of(a) in self.ancestors(self.class_of(d))

    def signature(self) -> tuple[str, ...]:
        """Label-free canonical form: equal iff the weighted forests are isomorphic."""

        def canon(i: int) -> str:
            kids = sorted(canon(c) for c in self.children(i))
            return f"{self.weight(i)}({','.join(kids)})"

        return tuple(sorted(canon(r) for r in self.roots))

    def to_dot(self, name: str = "hasse") -> str:
        lines = [f"digraph {name} {{"]
        for i, cls in enumerate(self.classes):
            label = "{" + ",".join(cls) + "}" + f"|w={len(cls)}"
            lines.append(f'  c{i} [label="{_dot_escape(label)}"];')
        for i, p in enumerate(self.parent):
            if p is not None:
                lines.append(f"  c{p} -> c{i};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def _require_homogeneous(g: Graph) -> None:
    ok, quad = is_homogeneous(g)
    if not ok:
        raise NotHomogeneous(f"graph has an induced 4-cycle or 4-path on {list(quad)}")


def build_hasse_forest(g: Graph) -> HasseForest:
    _require_homogeneous(g)
    closed = {v: closed_neighborhood(g, v) for v in g.vertices}
    groups: dict[frozenset, list[Label]] = {}
    for v in g.vertices:
        groups.setdefault(closed[v], []).append(v)
    classes = sorted(tuple(sorted(members)) for members in groups.values())
    nb = [closed[cls[0]] for cls in classes]
    # strict ancestors of class j: classes whose neighborhood strictly contains j's
    above = [[i for i in range(len(classes)) if nb[j] < nb[i]] for j in range(len(classes))]
    parent: list[int | None] = []
    for j, anc in enumerate(above):
        # transitive reduction: the cover is the ancestor with no other ancestor below it
        covers = [i for i in anc if not any(nb[k] < nb[i] for k in anc if k != i)]
        assert len(covers) <= 1, "ancestor classes of a homogeneous graph form a chain"
        parent.append(covers[0] if covers else None)
    return HasseForest(tuple(classes), tuple(parent))


def is_hasse_elimination_ordering(g: Graph, sigma: VertexOrdering, forest: HasseForest | None = None):
    """Check that every strict ancestor sits above each of its descendants.

    Returns ``(True, None)`` or ``(False, (ancestor, descendant))`` for the
    first violating pair in lexicographic label order.
    """
    sigma.check_domain(g)
    forest = forest or build_hasse_forest(g)
    for a in sorted(g.vertices):
        anc = forest.class_of(a)
        for d in sorted(g.vertices):
            if anc in forest.ancestors(forest.class_of(d)) and sigma[a] < sigma[d]:
                return False, (a, d)
    return True, None


def find_hasse_elimination_ordering(g: Graph) -> VertexOrdering:
    """Descendants first: repeatedly place the smallest label whose descendants are all placed."""
    forest = build_hasse_forest(g)
    cls_of = {v: i for i, cls in enumerate(forest.classes) for v in cls}
    pending_desc = [0] * len(forest.classes)
    for j in range(len(forest.classes)):
        for a in forest.ancestors(j):
            pending_desc[a] += len(forest.classes[j])
    heap = [v for v in g.vertices if pending_desc[cls_of[v]] == 0]
    heapq.heapify(heap)
    order: list[Label] = []
    while heap:
        v = heapq.heappop(heap)
        order.append(v)
        for a in forest.ancestors(cls_of[v]):
            pending_desc[a] -= 1
            if pending_desc[a] == 0:
                for x in forest.classes[a]:
                    heapq.heappush(heap, x)
    sigma = VertexOrdering(tuple(order))
    assert is_hasse_elimination_ordering(g, sigma, forest)[0]
    return sigma


# ---------------------------------------------------------------- conflicts


def _triple_from_quad(g: Graph, sigma: VertexOrdering, quad) -> ConflictTriple:
    """Case analysis on an induced 4-cycle or 4-path, using sigma's relative order."""
    h = induced_subgraph(g, quad)
    ranked = sorted(quad, key=sigma.__getitem__)
    first, second, third, fourth = ranked

    def split(v):
        a, b = sorted(h.neighbors(v), key=sigma.__getitem__)
        return ConflictTriple(u=a, v=v, w=b)

    if h.degree(first) == 2:
        return split(first)
    if h.degree(second) == 2:
        nb = h.neighbors(second)
        if first in nb:
            (other,) = nb - {first}
            return ConflictTriple(u=first, v=second, w=other)
        return ConflictTriple(u=third, v=second, w=fourth)
    # both endpoints of the path come first; the third vertex is interior
    (other,) = h.neighbors(third) - {fourth}
    return ConflictTriple(u=other, v=third, w=fourth)


def find_conflict_triple(g: Graph, sigma: VertexOrdering) -> ConflictTriple | None:
    """A triple that seeds every counterexample, or ``None`` when none exists.

    Non-homogeneous graphs are handled through an induced 4-cycle/4-path. For
    homogeneous graphs the triple comes from the first ancestor pair placed
    in the wrong order.
    """
    sigma.check_domain(g)
    ok, quad = is_homogeneous(g)
    if not ok:
        triple = _triple_from_quad(g, sigma, quad)
    else:
        ok, pair = is_hasse_elimination_ordering(g, sigma)
        if ok:
            return None
        b, a = pair
        c = min(closed_neighborhood(g, b) - closed_neighborhood(g, a))
        if sigma[a] < sigma[c]:
            triple = ConflictTriple(u=a, v=b, w=c)
        else:
            triple = ConflictTriple(u=c, v=b, w=a)
    assert triple.valid_for(g, sigma), triple
    return triple


# ---------------------------------------------------------------- generators


def _random_tree(rng: random.Random, nodes: int) -> list[int | None]:
    """Parent array of a rooted tree with ``nodes`` nodes where no node has one child."""
    parent: list[int | None] = [None]
    leaves = [0]
    while len(parent) + 2 <= nodes:
        room = nodes - len(parent)
        k = rng.randint(2, min(room, 4))
        leaf = leaves.pop(rng.randrange(len(leaves)))
        for _ in range(k):
            parent.append(leaf)
            leaves.append(len(parent) - 1)
    return parent


def random_homogeneous_graph(seed: int, max_vertices: int, max_trees: int = 1):
    """Sample a weighted Hasse forest and expand it to its homogeneous graph.

    Returns ``(graph, forest)`` where ``forest`` is the generator's own
    forest; ``build_hasse_forest(graph)`` reproduces it exactly.
    """
    if max_vertices < 1:
        raise ValueError("max_vertices must be >= 1")
    rng = random.Random(seed)
    total = rng.randint(1, max_vertices)
    trees = rng.randint(1, max(1, min(max_trees, total)))
    budgets = [1] * trees
    for _ in range(total - trees):
        budgets[rng.randrange(trees)] += 1

    parent: list[int | None] = []
    weights: list[int] = []
    for budget in budgets:
        nodes = rng.randint(1, budget)
        base = len(parent)
        local = _random_tree(rng, nodes)
        parent.extend(None if p is None else p + base for p in local)
        w = [1] * len(local)
        for _ in range(budget - len(local)):
            w[rng.randrange(len(local))] += 1
        weights.extend(w)

    width = len(str(sum(weights) - 1))
    labels = [f"v{i:0{width}d}" for i in range(sum(weights))]
    members, start = [], 0
    for w in weights:
        members.append(labels[start : start + w])
        start += w

    def ancestors(i):
        while parent[i] is not None:
            i = parent[i]
            yield i

    edges = []
    for i, cls in enumerate(members):
        edges.extend(itertools.combinations(cls, 2))
        for a in ancestors(i):
            edges.extend((x, y) for x in cls for y in members[a])
    g = Graph(labels, edges)

    order = sorted(range(len(members)), key=lambda i: tuple(members[i]))
    where = {old: new for new, old in enumerate(order)}
    forest = HasseForest(
        tuple(tuple(members[i]) for i in order),
        tuple(None if parent[i] is None else where[parent[i]] for i in order),
    )
    return g, forest


def random_graph(seed: int, n: int, density: float = 0.5) -> Graph:
    rng = random.Random(seed)
    labels = [f"x{i}" for i in range(n)]
    return Graph(labels, [e for e in itertools.combinations(labels, 2) if rng.random() < density])


def random_chordal_graph(seed: int, n: int) -> Graph:
    """Grow a chordal graph by attaching each new vertex to part of a maximal clique."""
    rng = random.Random(seed)
    g = Graph(["y0"])
    for i in range(1, n):
        cliques = maximal_cliques(g)
        clique = rng.choice(cliques)
        size = rng.randint(0, len(clique))
        attach = rng.sample(clique, size)
        g = Graph(list(g.vertices) + [f"y{i}"], g.edges() + [(f"y{i}", a) for a in attach])
    return g


def random_ordering(seed: int, g: Graph) -> VertexOrdering:
    labels = sorted(g.vertices)
    random.Random(seed).shuffle(labels)
    return VertexOrdering(tuple(labels))
