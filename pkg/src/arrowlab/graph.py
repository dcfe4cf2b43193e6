"""Finite simple undirected graphs on vertices ``0..n-1``.

Everything else in the package is built on :class:`Graph`: the coloring
search reads its fixed edge enumeration, the locality code reads distances
and induced subgraphs, and the gadget surgery produces new graphs from old.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, permutations
from typing import Iterable, Sequence

INFINITY = math.inf

VertexMap = dict[int, int]


class GraphFormatError(ValueError):
    """Malformed graph text or JSON."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def _normalize_edge(u: int, v: int, n: int) -> tuple[int, int]:
    if u == v:
        raise ValueError(f"self-loop at vertex {u}")
    if not (0 <= u < n and 0 <= v < n):
        raise ValueError(f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph. ``edges`` is normalized to sorted ``(u, v)`` with ``u < v``."""

    n: int
    edges: tuple[tuple[int, int], ...] = field(default=())

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        norm = sorted({_normalize_edge(int(u), int(v), self.n) for u, v in self.edges})
        object.__setattr__(self, "edges", tuple(norm))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> tuple[int, ...]:
        """Per-vertex neighbor bitmasks."""
        adj = [0] * self.n
        for u, v in self.edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return tuple(adj)

    @cached_property
    def edge_index(self) -> dict[tuple[int, int], int]:
        """Position of each edge in the fixed lexicographic enumeration."""
        return {e: i for i, e in enumerate(self.edges)}

    def neighbors(self, v: int) -> list[int]:
        mask = self.adjacency[v]
        return [w for w in range(self.n) if mask >> w & 1]

    def has_edge(self, u: int, v: int) -> bool:
        return u != v and bool(self.adjacency[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.adjacency[v].bit_count()

    def degrees(self) -> list[int]:
        return [self.degree(v) for v in range(self.n)]

    def isolated_vertices(self) -> list[int]:
        return [v for v in range(self.n) if self.adjacency[v] == 0]

    def check_vertex(self, v: int) -> None:
        if not (0 <= v < self.n):
            raise ValueError(f"vertex {v} out of range 0..{self.n - 1}")

    def remove_edge(self, edge: tuple[int, int]) -> Graph:
        e = _normalize_edge(*edge, self.n)
        if e not in self.edge_index:
            raise ValueError(f"{e} is not an edge")
        return Graph(self.n, [x for x in self.edges if x != e])

    def relabel(self, perm: Sequence[int]) -> Graph:
        """Image of the graph under the vertex bijection ``v -> perm[v]``."""
        return Graph(self.n, [(perm[u], perm[v]) for u, v in self.edges])

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


# -- standard families ---------------------------------------------------

def empty_graph(n: int) -> Graph:
    return Graph(n)


def complete_graph(n: int) -> Graph:
    return Graph(n, combinations(range(n), 2))


def path_graph(n: int) -> Graph:
    """Path on ``n`` vertices (``n - 1`` edges)."""
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


# -- distances and connectivity ------------------------------------------

def bfs_distances(G: Graph, source: int) -> list[float]:
    G.check_vertex(source)
    dist: list[float] = [INFINITY] * G.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        x = queue.popleft()
        for y in G.neighbors(x):
            if dist[y] == INFINITY:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


def distance(G: Graph, u: int, v: int) -> float:
    """Shortest-path length, or ``INFINITY`` across components."""
    G.check_vertex(v)
    d = bfs_distances(G, u)[v]
    return d if d == INFINITY else int(d)


def _connected_without(G: Graph, removed: int) -> bool:
    rest = [v for v in range(G.n) if not removed >> v & 1]
    if len(rest) <= 1:
        return True
    keep = ((1 << G.n) - 1) & ~removed
    seen = 1 << rest[0]
    frontier = seen
    while frontier:
        nxt = 0
        f = frontier
        while f:
            low = f & -f
            nxt |= G.adjacency[low.bit_length() - 1]
            f ^= low
        nxt &= keep & ~seen
        seen |= nxt
        frontier = nxt
    return seen == keep


def is_connected(G: Graph) -> bool:
    return _connected_without(G, 0)


def components(G: Graph) -> list[list[int]]:
    seen: set[int] = set()
    out = []
    for s in range(G.n):
        if s in seen:
            continue
        dist = bfs_distances(G, s)
        comp = [v for v in range(G.n) if dist[v] != INFINITY]
        seen.update(comp)
        out.append(comp)
    return out


def vertex_connectivity(G: Graph) -> int:
    """Exhaustive vertex connectivity; ``K_n`` has connectivity ``n - 1`` by convention."""
    if G.n <= 1:
        return 0
    if G.m == G.n * (G.n - 1) // 2:
        return G.n - 1
    for k in range(G.n - 1):
        for cut in combinations(range(G.n), k):
            mask = sum(1 << v for v in cut)
            if not _connected_without(G, mask):
                return k
    return G.n - 1  # unreachable: a non-complete graph has a separating set


def is_k_connected(G: Graph, k: int) -> bool:
    """Exact reading: connected after removing any ``k - 1`` vertices, separable by ``k``."""
    if k < 1:
        raise ValueError("k must be at least 1")
    return vertex_connectivity(G) == k


def min_connectivity_at_least(G: Graph, k: int) -> bool:
    if k < 1:
        raise ValueError("k must be at least 1")
    return vertex_connectivity(G) >= k


# -- surgery ----------------------------------------------------------------

def delete_vertices(G: Graph, S: Iterable[int]) -> tuple[Graph, VertexMap]:
    """Induced subgraph on the remaining vertices, renumbered in increasing order."""
    removed = set(S)
    for v in removed:
        G.check_vertex(v)
    mapping = {}
    for v in range(G.n):
        if v not in removed:
            mapping[v] = len(mapping)
    edges = [(mapping[u], mapping[v]) for u, v in G.edges if u in mapping and v in mapping]
    return Graph(len(mapping), edges), mapping


def disjoint_union(G: Graph, H: Graph) -> tuple[Graph, VertexMap, VertexMap]:
    shift = G.n
    edges = list(G.edges) + [(u + shift, v + shift) for u, v in H.edges]
    return (
        Graph(G.n + H.n, edges),
        {v: v for v in range(G.n)},
        {v: v + shift for v in range(H.n)},
    )


def induced_subgraph(G: Graph, vertices: Iterable[int]) -> tuple[Graph, VertexMap]:
    keep = set(vertices)
    return delete_vertices(G, [v for v in range(G.n) if v not in keep])


# -- isomorphism --------------------------------------------------------------

def find_isomorphism(G: Graph, H: Graph) -> VertexMap | None:
    """An edge-preserving bijection ``G -> H``, or ``None``."""
    if G.n != H.n or G.m != H.m or sorted(G.degrees()) != sorted(H.degrees()):
        return None
    n = G.n
    gdeg, hdeg = G.degrees(), H.degrees()
    order = _search_order(G)
    image = [-1] * n
    used = [False] * n

    def extend(i: int) -> bool:
        if i == n:
            return True
        x = order[i]
        for y in range(n):
            if used[y] or hdeg[y] != gdeg[x]:
                continue
            if all(G.has_edge(x, order[j]) == H.has_edge(y, image[order[j]]) for j in range(i)):
                image[x], used[y] = y, True
                if extend(i + 1):
                    return True
                image[x], used[y] = -1, False
        return False

    return {v: image[v] for v in range(n)} if extend(0) else None


def are_isomorphic(G: Graph, H: Graph) -> bool:
    return find_isomorphism(G, H) is not None


def _search_order(G: Graph) -> list[int]:
    """Vertices ordered so each one (after a component's first) touches an earlier one."""
    order: list[int] = []
    placed = [False] * G.n
    for start in sorted(range(G.n), key=lambda v: (-G.degree(v), v)):
        if placed[start]:
            continue
        placed[start] = True
        order.append(start)
        i = len(order) - 1
        while i < len(order):
            for w in sorted(G.neighbors(order[i]), key=lambda v: (-G.degree(v), v)):
                if not placed[w]:
                    placed[w] = True
                    order.append(w)
            i += 1
    return order


def subgraph_copies(F: Graph, G: Graph) -> list[frozenset[tuple[int, int]]]:
    """Edge sets of all (not necessarily induced) copies of ``G`` inside ``F``.

    Embeddings with the same edge image are reported once; the list is sorted
    by the sorted edge tuples. Isolated vertices of ``G`` only require room in
    ``F`` and never change an edge image.
    """
    if G.n > F.n:
        return []
    core = [v for v in _search_order(G) if G.degree(v) > 0]
    if not core:
        return [frozenset()]
    image: dict[int, int] = {}
    used = [False] * F.n
    found: set[frozenset[tuple[int, int]]] = set()
    gdeg = G.degrees()
    fdeg = F.degrees()

    def extend(i: int) -> None:
        if i == len(core):
            found.add(frozenset(_normalize_edge(image[u], image[v], F.n) for u, v in G.edges))
            return
        x = core[i]
        mapped_nbrs = [image[w] for w in G.neighbors(x) if w in image]
        if mapped_nbrs:
            cand_mask = F.adjacency[mapped_nbrs[0]]
            for y in mapped_nbrs[1:]:
                cand_mask &= F.adjacency[y]
            candidates = [y for y in range(F.n) if cand_mask >> y & 1]
        else:
            candidates = range(F.n)
        for y in candidates:
            if used[y] or fdeg[y] < gdeg[x]:
                continue
            image[x], used[y] = y, True
            extend(i + 1)
            del image[x]
            used[y] = False

    extend(0)
    return sorted(found, key=lambda s: sorted(s))


# -- brute-force oracles (used by tests and cross-checks) --------------------------

def brute_force_isomorphic(G: Graph, H: Graph) -> bool:
    if G.n != H.n or G.m != H.m:
        return False
    target = set(H.edges)
    return any(
        {_normalize_edge(p[u], p[v], G.n) for u, v in G.edges} == target
        for p in permutations(range(G.n))
    )


def brute_force_copies(F: Graph, G: Graph) -> set[frozenset[tuple[int, int]]]:
    out = set()
    for img in permutations(range(F.n), G.n):
        try:
            edges = frozenset(_normalize_edge(img[u], img[v], F.n) for u, v in G.edges)
        except ValueError:
            continue
        if all(F.has_edge(u, v) for u, v in edges):
            out.add(edges)
    return out


# -- text and JSON formats ---------------------------------------------------------

def format_graph(G: Graph, comments: Sequence[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(f"p graph {G.n} {G.m}")
    lines.extend(f"e {u} {v}" for u, v in G.edges)
    return "\n".join(lines) + "\n"


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise GraphFormatError(f"expected an integer, got {tok!r}", lineno) from None


def parse_graph_lines(lines: Iterable[tuple[int, str]], extra=None) -> Graph:
    """Parse numbered lines; ``extra(tokens, lineno)`` may consume non-graph lines."""
    header = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, raw in lines:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        if toks[0] == "p":
            if header is not None:
                raise GraphFormatError("duplicate header", lineno)
            if len(toks) != 4 or toks[1] != "graph":
                raise GraphFormatError("header must be 'p graph <n> <m>'", lineno)
            header = (_int(toks[2], lineno), _int(toks[3], lineno))
            if header[0] < 0 or header[1] < 0:
                raise GraphFormatError("negative count in header", lineno)
        elif header is None:
            raise GraphFormatError("content before 'p graph' header", lineno)
        elif toks[0] == "e":
            if len(toks) != 3:
                raise GraphFormatError("edge line must be 'e <u> <v>'", lineno)
            u, v = _int(toks[1], lineno), _int(toks[2], lineno)
            try:
                e = _normalize_edge(u, v, header[0])
            except ValueError as exc:
                raise GraphFormatError(str(exc), lineno) from None
            if e in seen:
                raise GraphFormatError(f"duplicate edge {e}", lineno)
            seen.add(e)
            edges.append(e)
        elif extra is not None and extra(toks, lineno):
            continue
        else:
            raise GraphFormatError(f"unknown line type {toks[0]!r}", lineno)
    if header is None:
        raise GraphFormatError("missing 'p graph <n> <m>' header")
    if len(edges) != header[1]:
        raise GraphFormatError(f"header declares {header[1]} edges, found {len(edges)}")
    return Graph(header[0], edges)


def parse_graph(text: str) -> Graph:
    """Parse the text format, or the JSON ``{"n": .., "edges": [[u, v], ..]}`` form."""
    if text.lstrip().startswith("{"):
        return graph_from_json(text)
    return parse_graph_lines(enumerate(text.splitlines(), 1))


def graph_from_json(text: str) -> Graph:
    try:
        obj = json.loads(text)
        n = obj["n"]
        pairs = obj["edges"]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise GraphFormatError(f"bad JSON graph: {exc}") from None
    if not isinstance(n, int) or not all(isinstance(p, list) and len(p) == 2 for p in pairs):
        raise GraphFormatError("JSON graph needs integer 'n' and 2-element 'edges'")
    seen = set()
    for u, v in pairs:
        try:
            e = _normalize_edge(u, v, n)
        except ValueError as exc:
            raise GraphFormatError(str(exc)) from None
        if e in seen:
            raise GraphFormatError(f"duplicate edge {e}")
        seen.add(e)
    return Graph(n, seen)


def graph_to_json(G: Graph) -> str:
    return json.dumps({"n": G.n, "edges": [list(e) for e in G.edges]})


def read_graph(path: str) -> Graph:
    with open(path) as fh:
        return parse_graph(fh.read())
