"""Edge-join, self-identification, and the chain/close constructions.

Marked edges are *ordered* pairs: gluing always sends the first endpoint of
one mark onto the first endpoint of the other. Reverse a mark to glue the
other way round.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .graph import Graph, GraphFormatError, VertexMap, format_graph, parse_graph_lines


class MarkError(ValueError):
    """A label is missing, or a marked pair is not an edge."""


@dataclass(frozen=True)
class MarkedGraph:
    graph: Graph
    marked_edges: Mapping[str, tuple[int, int]] = field(default_factory=dict)
    marked_vertices: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self):
        edges = {k: (int(a), int(b)) for k, (a, b) in self.marked_edges.items()}
        for label, (a, b) in edges.items():
            if not self.graph.has_edge(a, b):
                raise MarkError(f"marked edge {label}=({a}, {b}) is not an edge")
        for label, v in self.marked_vertices.items():
            if not 0 <= v < self.graph.n:
                raise MarkError(f"marked vertex {label}={v} out of range")
        object.__setattr__(self, "marked_edges", dict(sorted(edges.items())))
        object.__setattr__(self, "marked_vertices", dict(sorted(self.marked_vertices.items())))

    def edge(self, label: str) -> tuple[int, int]:
        try:
            return self.marked_edges[label]
        except KeyError:
            raise MarkError(f"no marked edge {label!r}") from None

    def vertex(self, label: str) -> int:
        try:
            return self.marked_vertices[label]
        except KeyError:
            raise MarkError(f"no marked vertex {label!r}") from None

    def with_marks(self, edges: Mapping[str, tuple[int, int]] | None = None,
                   vertices: Mapping[str, int] | None = None) -> MarkedGraph:
        return MarkedGraph(
            self.graph,
            self.marked_edges if edges is None else edges,
            self.marked_vertices if vertices is None else vertices,
        )


@dataclass(frozen=True)
class SurgeryResult:
    """Outcome of a gluing: the new graph plus where each operand's vertices went.

    ``collapsed_edges`` counts parallel edges merged beyond the glued pair.
    """

    marked: MarkedGraph
    maps: tuple[VertexMap, ...]
    collapsed_edges: int = 0


def _carry(marks: Mapping[str, tuple[int, int]], mp: VertexMap) -> dict:
    return {k: (mp[a], mp[b]) for k, (a, b) in marks.items()}


def _carry_vertices(marks: Mapping[str, int], mp: VertexMap) -> dict:
    return {k: mp[v] for k, v in marks.items()}


def edge_join(G: MarkedGraph, g_edge: str, H: MarkedGraph, h_edge: str) -> SurgeryResult:
    """Glue ``G`` onto ``H`` along ``g_edge=(a,b)`` and ``h_edge=(c,d)``, sending a->c, b->d.

    ``H`` keeps its vertex ids; the surviving vertices of ``G`` are appended in
    increasing order. Marks of both operands are carried over; on a label
    clash ``H``'s mark wins.
    """
    a, b = G.edge(g_edge)
    c, d = H.edge(h_edge)
    g_map: VertexMap = {a: c, b: d}
    nxt = H.graph.n
    for v in range(G.graph.n):
        if v not in g_map:
            g_map[v] = nxt
            nxt += 1
    h_map = {v: v for v in range(H.graph.n)}
    edges = list(H.graph.edges) + [(g_map[u], g_map[v]) for u, v in G.graph.edges]
    graph = Graph(nxt, edges)
    collapsed = G.graph.m + H.graph.m - 1 - graph.m
    marked = MarkedGraph(
        graph,
        {**_carry(G.marked_edges, g_map), **_carry(H.marked_edges, h_map)},
        {**_carry_vertices(G.marked_vertices, g_map), **_carry_vertices(H.marked_vertices, h_map)},
    )
    return SurgeryResult(marked, (g_map, h_map), collapsed)


def self_identify(G: MarkedGraph, edge1: str, edge2: str) -> SurgeryResult:
    """Identify marked edges ``(a,b)`` and ``(a2,b2)`` of one graph: blocks {a,a2}, {b,b2}.

    Blocks are numbered by their smallest member. The two edges must be
    vertex-disjoint, and neither a-a2 nor b-b2 may be an edge (it would
    become a loop).
    """
    if edge1 == edge2:
        raise MarkError("cannot identify an edge with itself")
    a, b = G.edge(edge1)
    a2, b2 = G.edge(edge2)
    if {a, b} & {a2, b2}:
        raise MarkError(f"edges {edge1} and {edge2} share a vertex")
    if G.graph.has_edge(a, a2) or G.graph.has_edge(b, b2):
        raise MarkError(f"identifying {edge1} with {edge2} would create a loop")
    rep = {v: v for v in range(G.graph.n)}
    rep[a] = rep[a2] = min(a, a2)
    rep[b] = rep[b2] = min(b, b2)
    blocks = sorted(set(rep.values()))
    index = {r: i for i, r in enumerate(blocks)}
    q = {v: index[rep[v]] for v in range(G.graph.n)}
    graph = Graph(len(blocks), [(q[u], q[v]) for u, v in G.graph.edges])
    collapsed = G.graph.m - 1 - graph.m
    marked = MarkedGraph(graph, _carry(G.marked_edges, q), _carry_vertices(G.marked_vertices, q))
    return SurgeryResult(marked, (q,), collapsed)


def chain_senders(S: MarkedGraph, copies: int, e: str = "e", f: str = "f") -> MarkedGraph:
    """Join ``copies`` copies of ``S`` in a row, gluing ``f`` of copy i onto ``e`` of copy i+1.

    With ``e=(a,u)`` and ``f=(b,v)``, each junction sends b_i->a_{i+1} and
    v_i->u_{i+1}. The result carries ``e`` (first copy), ``f`` (last copy)
    and vertex marks ``a1, b1, ..., a{k}, b{k}`` (1-based copy index).
    """
    if copies < 1 or copies % 2 == 0:
        raise ValueError("copies must be a positive odd integer")
    if e == f:
        raise MarkError("signal edges must be distinct")
    ea, eu = S.edge(e)
    fb, fv = S.edge(f)

    def link(i: int) -> MarkedGraph:
        return MarkedGraph(
            S.graph,
            {"e": (ea, eu), "f": (fb, fv)},
            {f"a{i}": ea, f"b{i}": fb},
        )

    acc = link(1)
    for i in range(2, copies + 1):
        nxt = link(i)
        res = edge_join(acc, "f", nxt, "e")
        g_map, h_map = res.maps
        first_a, first_u = acc.edge("e")
        edges = {"e": (g_map[first_a], g_map[first_u]), "f": nxt.edge("f")}
        acc = res.marked.with_marks(edges=edges)
    return acc


def close_chain(chain: MarkedGraph, n: int, far_copy: str = "middle") -> MarkedGraph:
    """Close a ``2n+1``-link chain by identifying ``e`` (first copy) with ``f`` (last copy).

    Sends a_1 -> b_{2n+1} and u_1 -> v_{2n+1}. Marks ``u`` as the image of
    ``a1``. ``v`` is the image of ``a{n+1}`` (``far_copy="middle"``) or of
    ``a{n}`` (``far_copy="n"``, the literal index).
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    copies = 2 * n + 1
    if f"a{copies}" not in chain.marked_vertices or f"a{copies + 1}" in chain.marked_vertices:
        raise ValueError(f"chain does not have exactly {copies} links")
    a1, u1 = chain.edge("e")
    bl, vl = chain.edge("f")
    if {a1, u1} & {bl, vl}:
        raise MarkError("first and last signal edges are adjacent after chaining")
    res = self_identify(chain, "e", "f")
    q = res.maps[0]
    idx = {"middle": n + 1, "n": n}[far_copy]
    return MarkedGraph(
        res.marked.graph,
        {},
        {"u": q[chain.vertex("a1")], "v": q[chain.vertex(f"a{idx}")]},
    )


# -- text format -----------------------------------------------------------------

def format_marked(M: MarkedGraph, comments: Iterable[str] = ()) -> str:
    out = format_graph(M.graph, list(comments))
    for label, (a, b) in M.marked_edges.items():
        out += f"me {label} {a} {b}\n"
    for label, v in M.marked_vertices.items():
        out += f"mv {label} {v}\n"
    return out


def parse_marked(text: str) -> MarkedGraph:
    edges: dict[str, tuple[int, int]] = {}
    vertices: dict[str, int] = {}

    def extra(toks: list[str], lineno: int) -> bool:
        try:
            if toks[0] == "me" and len(toks) == 4:
                edges[toks[1]] = (int(toks[2]), int(toks[3]))
                return True
            if toks[0] == "mv" and len(toks) == 3:
                vertices[toks[1]] = int(toks[2])
                return True
        except ValueError:
            raise GraphFormatError("bad mark line", lineno) from None
        return False

    graph = parse_graph_lines(enumerate(text.splitlines(), 1), extra)
    try:
        return MarkedGraph(graph, edges, vertices)
    except MarkError as exc:
        raise GraphFormatError(str(exc)) from None


def read_marked(path: str) -> MarkedGraph:
    with open(path) as fh:
        return parse_marked(fh.read())
