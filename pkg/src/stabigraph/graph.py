"""Weighted undirected graphs and the combinatorial primitives built on them.

A graph is the off-diagonal part of a symmetric Jacobian: nodes are the
integers ``0..n-1`` and every stored edge carries a nonzero weight (a zero
weight means "no edge").  All values here are immutable and all operations
are pure functions, so concurrent use needs no synchronization.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

from .errors import (
    AsymmetricInput,
    DuplicateEdge,
    InvalidInput,
    SelfLoop,
    SubsetOutOfRange,
    TooLarge,
)

Number = Union[int, float, Fraction]
Edge = tuple[int, int]

# Relative tolerance under which a matrix still counts as symmetric.
SYMMETRY_RTOL = 1e-12
# Refuse forest enumerations whose projected candidate count exceeds this.
FOREST_CAP = 1_000_000


def is_exact(value: Number) -> bool:
    """True for values that support exact (rational) arithmetic."""
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


def _normalize_pair(i: int, j: int) -> Edge:
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class WeightedGraph:
    """Symmetric weighted graph stored as one record per unordered pair."""

    n: int
    edges: tuple[tuple[int, int, Number], ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if self.n < 0:
            raise InvalidInput("node count must be nonnegative")
        if self.labels is not None and len(self.labels) != self.n:
            raise InvalidInput("label count must equal node count")
        seen: set[Edge] = set()
        adjacency: dict[int, list[int]] = {v: [] for v in range(self.n)}
        weights: dict[Edge, Number] = {}
        for i, j, w in self.edges:
            if i == j:
                raise SelfLoop(f"self-loop at node {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise InvalidInput(f"edge ({i},{j}) outside 0..{self.n - 1}")
            if i > j:
                raise InvalidInput("edges must be stored with i < j")
            if (i, j) in seen:
                raise DuplicateEdge(f"edge ({i},{j}) listed twice")
            if w == 0:
                raise InvalidInput("zero-weight edges must be omitted")
            seen.add((i, j))
            adjacency[i].append(j)
            adjacency[j].append(i)
            weights[(i, j)] = w
        object.__setattr__(
            self, "_adjacency", {v: tuple(sorted(nb)) for v, nb in adjacency.items()}
        )
        object.__setattr__(self, "_weights", weights)

    @property
    def exact(self) -> bool:
        return all(is_exact(w) for _, _, w in self.edges)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adjacency[v]  # type: ignore[attr-defined]

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def weight(self, i: int, j: int) -> Number:
        return self._weights.get(_normalize_pair(i, j), 0)  # type: ignore[attr-defined]

    def has_edge(self, i: int, j: int) -> bool:
        return _normalize_pair(i, j) in self._weights  # type: ignore[attr-defined]

    def edge_pairs(self) -> tuple[Edge, ...]:
        return tuple((i, j) for i, j, _ in self.edges)


def build_graph(
    *,
    matrix: Sequence[Sequence[Number]] | None = None,
    edges: Iterable[tuple[int, int, Number]] | None = None,
    n: int | None = None,
    tol: float = SYMMETRY_RTOL,
    labels: Sequence[str] | None = None,
) -> WeightedGraph:
    """Build a graph from a symmetric weight matrix or an edge list.

    A matrix is accepted when ``max|M_ij - M_ji| <= tol * max|M|`` and is then
    symmetrized by averaging; its diagonal is ignored.  Edge lists may list
    each unordered pair once, in either orientation.
    """
    if (matrix is None) == (edges is None):
        raise InvalidInput("provide exactly one of matrix= or edges=")
    if matrix is not None:
        return _graph_from_matrix(matrix, tol=tol, labels=labels)
    return _graph_from_edges(edges, n=n, labels=labels)


def _graph_from_matrix(matrix, *, tol: float, labels) -> WeightedGraph:
    rows = [list(row) for row in matrix]
    m = len(rows)
    if any(len(row) != m for row in rows):
        raise InvalidInput("weight matrix must be square")
    exact = all(is_exact(x) for row in rows for x in row)
    scale = max((abs(x) for row in rows for x in row), default=0)
    edge_list: list[tuple[int, int, Number]] = []
    for i in range(m):
        for j in range(i + 1, m):
            a, b = rows[i][j], rows[j][i]
            if abs(a - b) > tol * scale:
                raise AsymmetricInput(
                    f"entries ({i},{j}) and ({j},{i}) differ beyond tolerance"
                )
            if exact:
                w: Number = Fraction(a + b, 2)
                if isinstance(w, Fraction) and w.denominator == 1:
                    w = int(w)
            else:
                w = (a + b) / 2
            if w != 0:
                edge_list.append((i, j, w))
    return WeightedGraph(m, tuple(edge_list), None if labels is None else tuple(labels))


def _graph_from_edges(edges, *, n, labels) -> WeightedGraph:
    triples = []
    for item in edges:
        i, j, w = item
        if i == j:
            raise SelfLoop(f"self-loop at node {i}")
        triples.append((*_normalize_pair(int(i), int(j)), w))
    pairs = [(i, j) for i, j, _ in triples]
    if len(set(pairs)) != len(pairs):
        dup = next(p for p in pairs if pairs.count(p) > 1)
        raise DuplicateEdge(f"edge {dup} listed twice")
    if n is None:
        n = 1 + max((j for _, j, _ in triples), default=-1)
    triples = [(i, j, w) for i, j, w in triples if w != 0]
    triples.sort(key=lambda t: (t[0], t[1]))
    return WeightedGraph(n, tuple(triples), None if labels is None else tuple(labels))


def read_edge_list(text: str, n: int | None = None) -> WeightedGraph:
    """Parse the plain-text edge format: one ``i j w`` triple per line."""
    triples = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#")[0].strip()
        if not stripped:
            continue
        parts = stripped.split()
        if len(parts) != 3:
            raise InvalidInput(f"line {lineno}: expected 'i j w'")
        i, j = int(parts[0]), int(parts[1])
        w: Number = Fraction(parts[2]) if "/" in parts[2] else float(parts[2])
        if isinstance(w, float) and w.is_integer():
            w = int(w)
        triples.append((i, j, w))
    return build_graph(edges=triples, n=n)


def write_edge_list(g: WeightedGraph) -> str:
    return "\n".join(f"{i} {j} {w}" for i, j, w in g.edges)


@dataclass(frozen=True)
class IndexSubset:
    """Sorted set of node/variable indices selecting a principal submatrix."""

    members: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.members:
            raise InvalidInput("index subset must be nonempty")
        if list(self.members) != sorted(set(self.members)):
            raise InvalidInput("index subset must be sorted and duplicate-free")
        if self.members[0] < 0:
            raise InvalidInput("indices must be nonnegative")

    @classmethod
    def coerce(cls, s: "IndexSubset" | Iterable[int]) -> "IndexSubset":
        if isinstance(s, cls):
            return s
        return cls(tuple(sorted(set(int(v) for v in s))))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __contains__(self, v: int) -> bool:
        return v in set(self.members)

    def check_range(self, n: int) -> None:
        if self.members[-1] >= n:
            raise SubsetOutOfRange(f"index {self.members[-1]} outside 0..{n - 1}")


def components(g: WeightedGraph) -> tuple[tuple[int, ...], ...]:
    """Connected components, each a sorted node tuple, ordered by least node."""
    seen: set[int] = set()
    out: list[tuple[int, ...]] = []
    for start in range(g.n):
        if start in seen:
            continue
        stack = [start]
        comp = {start}
        seen.add(start)
        while stack:
            v = stack.pop()
            for w in g.neighbors(v):
                if w not in seen:
                    seen.add(w)
                    comp.add(w)
                    stack.append(w)
        out.append(tuple(sorted(comp)))
    return tuple(out)


def induced_subgraph(g: WeightedGraph, nodes: Iterable[int]) -> tuple[WeightedGraph, tuple[int, ...]]:
    """Subgraph on ``nodes`` with relabeled vertices; returns (graph, old labels)."""
    order = tuple(sorted(set(nodes)))
    index = {v: k for k, v in enumerate(order)}
    triples = [
        (index[i], index[j], w)
        for i, j, w in g.edges
        if i in index and j in index
    ]
    return WeightedGraph(len(order), tuple(triples)), order


def bridge_edges(g: WeightedGraph) -> frozenset[Edge]:
    """Edges whose removal disconnects their component (the non-cycle links)."""
    disc = [-1] * g.n
    low = [0] * g.n
    bridges: set[Edge] = set()
    counter = itertools.count()
    for root in range(g.n):
        if disc[root] != -1:
            continue
        # Iterative DFS; (node, parent, neighbor iterator) frames.
        stack = [(root, -1, iter(g.neighbors(root)))]
        disc[root] = low[root] = next(counter)
        while stack:
            v, parent, it = stack[-1]
            advanced = False
            for w in it:
                if disc[w] == -1:
                    disc[w] = low[w] = next(counter)
                    stack.append((w, v, iter(g.neighbors(w))))
                    advanced = True
                    break
                elif w != parent:
                    low[v] = min(low[v], disc[w])
            if not advanced:
                stack.pop()
                if stack:
                    u = stack[-1][0]
                    low[u] = min(low[u], low[v])
                    if low[v] > disc[u]:
                        bridges.add(_normalize_pair(u, v))
    return frozenset(bridges)


@dataclass(frozen=True)
class UnbranchedSegment:
    """Maximal chain of degree-two nodes together with its incident links.

    ``links[k]`` joins ``interior[k-1]`` to ``interior[k]``; the first and
    last links attach to the anchoring branch nodes in ``endpoints``.  A
    component that is a single cycle is reported closed, with every node
    interior and ``endpoints`` empty.
    """

    interior: tuple[int, ...]
    links: tuple[Edge, ...]
    weights: tuple[Number, ...]
    endpoints: tuple[int, ...]
    on_cycle: bool
    closed: bool = False

    @property
    def link_count(self) -> int:
        return len(self.links)

    def negative_positions(self) -> tuple[int, ...]:
        return tuple(k for k, w in enumerate(self.weights) if w < 0)


def unbranched_segments(g: WeightedGraph) -> tuple[UnbranchedSegment, ...]:
    """All maximal unbranched segments, including single links between branch nodes."""
    bridges = bridge_edges(g)
    is_interior = [g.degree(v) == 2 for v in range(g.n)]
    visited: set[Edge] = set()
    segments: list[UnbranchedSegment] = []

    def walk(anchor: int, first: int) -> UnbranchedSegment:
        interior: list[int] = []
        links: list[Edge] = [_normalize_pair(anchor, first)]
        visited.add(links[0])
        prev, cur = anchor, first
        while is_interior[cur]:
            interior.append(cur)
            a, b = g.neighbors(cur)
            nxt = b if a == prev else a
            link = _normalize_pair(cur, nxt)
            if link in visited:  # two-node cycle cannot occur; guard anyway
                break
            links.append(link)
            visited.add(link)
            prev, cur = cur, nxt
        return UnbranchedSegment(
            interior=tuple(interior),
            links=tuple(links),
            weights=tuple(g.weight(*e) for e in links),
            endpoints=(anchor, cur),
            on_cycle=links[0] not in bridges,
        )

    for v in range(g.n):
        if is_interior[v]:
            continue
        for w in g.neighbors(v):
            if _normalize_pair(v, w) not in visited:
                segments.append(walk(v, w))

    # Leftover edges belong to components that are pure cycles.
    for i, j, _ in g.edges:
        if (i, j) in visited:
            continue
        interior = [i]
        links = [(i, j)]
        visited.add((i, j))
        prev, cur = i, j
        while cur != i:
            interior.append(cur)
            a, b = g.neighbors(cur)
            nxt = b if a == prev else a
            link = _normalize_pair(cur, nxt)
            links.append(link)
            visited.add(link)
            prev, cur = cur, nxt
        segments.append(
            UnbranchedSegment(
                interior=tuple(interior),
                links=tuple(links),
                weights=tuple(g.weight(*e) for e in links),
                endpoints=(),
                on_cycle=True,
                closed=True,
            )
        )

    segments.sort(key=lambda s: s.links)
    return tuple(segments)


@dataclass(frozen=True)
class Forest:
    """Acyclic edge set; ``trees`` are the node sets of its components."""

    edges: tuple[Edge, ...]
    trees: tuple[tuple[int, ...], ...]

    def tree_index(self) -> dict[int, int]:
        return {v: k for k, tree in enumerate(self.trees) for v in tree}


def _trees_of(edge_set: Sequence[Edge]) -> tuple[tuple[int, ...], ...]:
    adjacency: dict[int, list[int]] = {}
    for i, j in edge_set:
        adjacency.setdefault(i, []).append(j)
        adjacency.setdefault(j, []).append(i)
    seen: set[int] = set()
    trees = []
    for start in sorted(adjacency):
        if start in seen:
            continue
        stack, comp = [start], {start}
        seen.add(start)
        while stack:
            v = stack.pop()
            for w in adjacency[v]:
                if w not in seen:
                    seen.add(w)
                    comp.add(w)
                    stack.append(w)
        trees.append(tuple(sorted(comp)))
    return tuple(trees)


def _edges_admit_distinct_starts(edge_set: Sequence[Edge], members: frozenset[int]) -> bool:
    """Can each link start at a different node of the subset? (bipartite matching)"""
    assignment: dict[int, int] = {}

    def assign(k: int, taken: set[int]) -> bool:
        for v in edge_set[k]:
            if v in members and v not in taken:
                taken.add(v)
                if v not in assignment or assign(assignment[v], taken):
                    assignment[v] = k
                    return True
        return False

    return all(assign(k, set()) for k in range(len(edge_set)))


def enumerate_forests(
    g: WeightedGraph,
    s: IndexSubset | Iterable[int],
    characterization: str = "matching",
    cap: int = FOREST_CAP,
) -> tuple[Forest, ...]:
    """All forests with ``|S|`` links that pair off against the subset ``S``.

    Two equivalent acceptance rules are implemented. ``matching`` keeps an
    acyclic ``|S|``-link set when the links can be oriented so that each
    starts at a different node of S.  ``tree`` keeps it when every component
    contains exactly one node outside S.  The enumeration is the oracle for
    the determinant route in :mod:`stabigraph.forests`, not the workhorse.
    """
    subset = IndexSubset.coerce(s)
    subset.check_range(g.n)
    if characterization not in ("matching", "tree"):
        raise InvalidInput(f"unknown characterization {characterization!r}")
    q = len(subset)
    pairs = g.edge_pairs()
    if q > len(pairs):
        return ()
    if math.comb(len(pairs), q) > cap:
        raise TooLarge(
            f"projected forest candidate count exceeds cap ({cap}); "
            "use the determinant route instead"
        )
    members = frozenset(subset)
    parent = list(range(g.n))

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    accepted: list[Forest] = []
    chosen: list[Edge] = []

    def accept(edge_set: tuple[Edge, ...]) -> bool:
        if characterization == "matching":
            return _edges_admit_distinct_starts(edge_set, members)
        return all(
            sum(1 for v in tree if v not in members) == 1 for v, tree in ((None, t) for t in _trees_of(edge_set))
        )

    def recurse(idx: int) -> None:
        if len(chosen) == q:
            edge_set = tuple(chosen)
            if accept(edge_set):
                accepted.append(Forest(edge_set, _trees_of(edge_set)))
                if len(accepted) > cap:
                    raise TooLarge(f"forest count exceeds cap ({cap})")
            return
        if len(chosen) + (len(pairs) - idx) < q:
            return
        i, j = pairs[idx]
        ri, rj = find(i), find(j)
        if ri != rj:
            saved = (ri, parent[ri])
            parent[ri] = rj
            chosen.append(pairs[idx])
            recurse(idx + 1)
            chosen.pop()
            parent[saved[0]] = saved[1]
        recurse(idx + 1)

    recurse(0)
    return tuple(accepted)
