"""Balls, rooted neighborhoods, canonical neighborhood types and Hanf censuses.

For graphs the Gaifman graph is the graph itself, so balls are plain BFS
balls. A neighborhood type is the canonical encoding of the rooted induced
subgraph on a ball; two vertices share a type exactly when a root-preserving
isomorphism exists between their neighborhoods.
"""

from __future__ import annotations

import threading
import warnings
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import lru_cache

from .graph import INFINITY, Graph, VertexMap, bfs_distances, induced_subgraph

NeighborhoodType = bytes


@dataclass(frozen=True)
class RootedGraph:
    graph: Graph
    root: int

    def __post_init__(self):
        self.graph.check_vertex(self.root)


def ball(A: Graph, a: int, r: int) -> set[int]:
    if r < 0:
        raise ValueError("radius must be non-negative")
    dist = bfs_distances(A, a)
    return {b for b, d in enumerate(dist) if d != INFINITY and d <= r}


def neighborhood(A: Graph, a: int, r: int) -> RootedGraph:
    sub, mapping = induced_subgraph(A, ball(A, a, r))
    return RootedGraph(sub, mapping[a])


# -- canonical labeling ----------------------------------------------------------------

def _refine(G: Graph, cells: list[list[int]]) -> list[list[int]]:
    """Equitable refinement; cell order depends only on the isomorphism class."""
    while True:
        where = {}
        for i, cell in enumerate(cells):
            for v in cell:
                where[v] = i
        new: list[list[int]] = []
        for i, cell in enumerate(cells):
            if len(cell) == 1:
                new.append(cell)
                continue
            groups: dict[tuple, list[int]] = defaultdict(list)
            for v in cell:
                counts = [0] * len(cells)
                for w in G.neighbors(v):
                    counts[where[w]] += 1
                groups[tuple(counts)].append(v)
            for key in sorted(groups):
                new.append(groups[key])
        if len(new) == len(cells):
            return new
        cells = new


def _encode(G: Graph, order: list[int]) -> bytes:
    n = G.n
    bits = 0
    k = 0
    for i in range(n):
        for j in range(i + 1, n):
            if G.has_edge(order[i], order[j]):
                bits |= 1 << k
            k += 1
    nbytes = (n * (n - 1) // 2 + 7) // 8
    return n.to_bytes(4, "big") + bits.to_bytes(nbytes, "little")


def _canon(G: Graph, cells: list[list[int]]) -> bytes:
    cells = _refine(G, cells)
    target = next((i for i, c in enumerate(cells) if len(c) > 1), None)
    if target is None:
        return _encode(G, [c[0] for c in cells])
    best = None
    for v in cells[target]:
        rest = [w for w in cells[target] if w != v]
        split = cells[:target] + [[v], rest] + cells[target + 1:]
        enc = _canon(G, split)
        if best is None or enc < best:
            best = enc
    return best


def _initial_cells(G: Graph, root: int | None) -> list[list[int]]:
    if G.n == 0:
        return []
    if root is None:
        return [list(range(G.n))]
    rest = [v for v in range(G.n) if v != root]
    return [[root], rest] if rest else [[root]]


@lru_cache(maxsize=None)
def _canonical_cached(n: int, edges: tuple[tuple[int, int], ...], root: int | None) -> bytes:
    G = Graph(n, edges)
    return _canon(G, _initial_cells(G, root))


def canonical_form(G: Graph, root: int | None = None) -> bytes:
    """Least adjacency encoding over all refinement-compatible orderings.

    The root, when given, always takes position 0, so equal encodings mean a
    root-preserving isomorphism exists.
    """
    if root is not None:
        G.check_vertex(root)
    return _canonical_cached(G.n, G.edges, root)


def rooted_type(R: RootedGraph) -> NeighborhoodType:
    return canonical_form(R.graph, R.root)


# -- types and censuses ------------------------------------------------------------------

_type_cache: dict[tuple[Graph, int], list[NeighborhoodType]] = {}
_type_lock = threading.Lock()


def vertex_types(A: Graph, r: int) -> list[NeighborhoodType]:
    """r-type of every vertex of ``A``, cached per (graph, r)."""
    key = (A, r)
    cached = _type_cache.get(key)
    if cached is not None:
        return cached
    types = [rooted_type(neighborhood(A, a, r)) for a in range(A.n)]
    with _type_lock:
        return _type_cache.setdefault(key, types)


def r_type(A: Graph, a: int, r: int) -> NeighborhoodType:
    A.check_vertex(a)
    return vertex_types(A, r)[a]


@dataclass(frozen=True)
class TypeCensus:
    radius: int
    counts: tuple[tuple[NeighborhoodType, int], ...]

    @property
    def total(self) -> int:
        return sum(c for _, c in self.counts)

    def as_dict(self) -> dict[NeighborhoodType, int]:
        return dict(self.counts)

    def lines(self) -> list[str]:
        return [f"type {t.hex()} {c}" for t, c in self.counts]


def type_census(A: Graph, r: int) -> TypeCensus:
    counts = Counter(vertex_types(A, r))
    return TypeCensus(r, tuple(sorted(counts.items())))


def are_r_equivalent(A: Graph, B: Graph, r: int) -> bool:
    return type_census(A, r).counts == type_census(B, r).counts


def r_equivalence_bijection(A: Graph, B: Graph, r: int) -> VertexMap | None:
    """Type-preserving bijection pairing same-type vertices in increasing order."""
    if not are_r_equivalent(A, B, r):
        return None
    pool: dict[NeighborhoodType, list[int]] = defaultdict(list)
    for b, t in enumerate(vertex_types(B, r)):
        pool[t].append(b)
    for t in pool:
        pool[t].reverse()
    return {a: pool[t].pop() for a, t in enumerate(vertex_types(A, r))}


@dataclass(frozen=True)
class HanfReport:
    rank: int
    radius: int
    equivalent: bool
    conclusion: str
    census_a: TypeCensus
    census_b: TypeCensus
    warnings: tuple[str, ...] = field(default=())


def hanf_certificate(A: Graph, B: Graph, r: int) -> HanfReport:
    """Check the premise of Hanf's theorem (equal censuses at radius ``2**r``).

    The theorem only runs one way, so a failed check is inconclusive rather
    than a proof of inequivalence.
    """
    if r < 1:
        raise ValueError("rank must be at least 1")
    notes = []
    for name, X in (("A", A), ("B", B)):
        if X.n < 2:
            msg = f"structure {name} has {X.n} < 2 elements"
            warnings.warn(msg, stacklevel=2)
            notes.append(msg)
    radius = 2**r
    ca, cb = type_census(A, radius), type_census(B, radius)
    eq = ca.counts == cb.counts
    conclusion = f"FO-{r}-equivalent" if eq else "inconclusive"
    return HanfReport(r, radius, eq, conclusion, ca, cb, tuple(notes))


# -- brute-force oracle ----------------------------------------------------------------------

def brute_force_rooted_isomorphic(A: RootedGraph, B: RootedGraph) -> bool:
    from itertools import permutations

    if A.graph.n != B.graph.n or A.graph.m != B.graph.m:
        return False
    target = set(B.graph.edges)
    others = [v for v in range(A.graph.n) if v != A.root]
    b_others = [v for v in range(B.graph.n) if v != B.root]
    for perm in permutations(b_others):
        mp = dict(zip(others, perm))
        mp[A.root] = B.root
        if {tuple(sorted((mp[u], mp[v]))) for u, v in A.graph.edges} == target:
            return True
    return False
