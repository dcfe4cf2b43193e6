"""Deciding ``F -> (G, H)`` and checking sender/determiner gadgets.

A coloring is good when no copy of ``G`` is all red and no copy of ``H`` is
all blue. Each copy is a clause over the edges of ``F``: a ``G``-copy needs
one blue edge, an ``H``-copy needs one red edge. The search is a DPLL-style
backtracking over those clauses with edge bitmasks (bit ``i`` is edge ``i``
of ``F``'s lexicographic enumeration).

Colors: red is ``0``, blue is ``1``.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Mapping, Sequence

from .gadgets import MarkedGraph
from .graph import Graph, subgraph_copies

RED, BLUE = 0, 1
DEFAULT_BUDGET = 10**8
SENDER_SEARCH_CAP = 6

EdgeColoring = tuple[int, ...]


class BudgetExceeded(RuntimeError):
    """The node budget ran out before the search reached a decision."""

    def __init__(self, budget: int):
        super().__init__(f"search budget of {budget} nodes exhausted")
        self.budget = budget


@dataclass(frozen=True)
class ClauseSystem:
    graph: Graph
    g_copies: tuple[int, ...]
    h_copies: tuple[int, ...]

    @classmethod
    def build(cls, F: Graph, G: Graph, H: Graph) -> ClauseSystem:
        return cls(F, _copy_masks(F, G), _copy_masks(F, H))

    @property
    def full(self) -> int:
        return (1 << self.graph.m) - 1


def _copy_masks(F: Graph, G: Graph) -> tuple[int, ...]:
    idx = F.edge_index
    return tuple(sum(1 << idx[e] for e in copy) for copy in subgraph_copies(F, G))


def coloring_masks(coloring: Sequence[int]) -> tuple[int, int]:
    red = blue = 0
    for i, c in enumerate(coloring):
        if c == RED:
            red |= 1 << i
        elif c == BLUE:
            blue |= 1 << i
        else:
            raise ValueError(f"edge {i} has color {c!r}, expected 0 or 1")
    return red, blue


def masks_to_coloring(blue: int, m: int) -> EdgeColoring:
    return tuple((blue >> i) & 1 for i in range(m))


def is_good_coloring(F: Graph, G: Graph, H: Graph, coloring: Sequence[int],
                     system: ClauseSystem | None = None) -> bool:
    if len(coloring) != F.m:
        raise ValueError(f"coloring covers {len(coloring)} edges, graph has {F.m}")
    cs = system or ClauseSystem.build(F, G, H)
    _, blue = coloring_masks(coloring)
    red = cs.full & ~blue
    return not any(g & red == g for g in cs.g_copies) and not any(h & blue == h for h in cs.h_copies)


# -- search core ------------------------------------------------------------------

def _propagate(cs: ClauseSystem, red: int, blue: int) -> tuple[int, int] | None:
    changed = True
    while changed:
        changed = False
        for g in cs.g_copies:
            if g & blue:
                continue
            free = g & ~red
            if not free:
                return None
            if not free & (free - 1):
                blue |= free
                changed = True
        for h in cs.h_copies:
            if h & red:
                continue
            free = h & ~blue
            if not free:
                return None
            if not free & (free - 1):
                red |= free
                changed = True
    return red, blue


def _branch_edge(cs: ClauseSystem, red: int, blue: int) -> int:
    """Edge in the most unsatisfied copies; ties go to the lowest index."""
    free = cs.full & ~(red | blue)
    scores: dict[int, int] = {}
    for copies, done in ((cs.g_copies, blue), (cs.h_copies, red)):
        for c in copies:
            if c & done:
                continue
            bits = c & free
            while bits:
                low = bits & -bits
                scores[low] = scores.get(low, 0) + 1
                bits ^= low
    if not scores:
        return free & -free
    best = max(scores.values())
    return min(b for b, s in scores.items() if s == best)


class _Counter:
    def __init__(self, budget: int):
        self.budget = budget
        self.nodes = 0

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(self.budget)


def _search(cs: ClauseSystem, red: int, blue: int, counter: _Counter) -> Iterator[int]:
    """Yield blue masks of all good colorings extending (red, blue), depth-first, red first."""
    counter.tick()
    state = _propagate(cs, red, blue)
    if state is None:
        return
    red, blue = state
    if red | blue == cs.full:
        yield blue
        return
    bit = _branch_edge(cs, red, blue)
    yield from _search(cs, red | bit, blue, counter)
    yield from _search(cs, red, blue | bit, counter)


def _frontier(cs: ClauseSystem, red: int, blue: int, depth: int) -> Iterator[tuple[str, int, int]]:
    """Split the search tree ``depth`` levels down, preserving depth-first order."""
    if depth == 0:
        yield "open", red, blue
        return
    state = _propagate(cs, red, blue)
    if state is None:
        return
    red, blue = state
    if red | blue == cs.full:
        yield "done", red, blue
        return
    bit = _branch_edge(cs, red, blue)
    yield from _frontier(cs, red | bit, blue, depth - 1)
    yield from _frontier(cs, red, blue | bit, depth - 1)


def _first_from(args: tuple[ClauseSystem, int, int, int]) -> int | None:
    cs, red, blue, budget = args
    return next(_search(cs, red, blue, _Counter(budget)), None)


def _all_from(args: tuple[ClauseSystem, int, int, int]) -> list[int]:
    cs, red, blue, budget = args
    return list(_search(cs, red, blue, _Counter(budget)))


def _split_depth(workers: int) -> int:
    return max(1, (2 * workers - 1).bit_length())


def _fixed_masks(cs: ClauseSystem, fixed: Mapping[int, int] | Sequence[int | None] | None) -> tuple[int, int]:
    if fixed is None:
        return 0, 0
    items = fixed.items() if isinstance(fixed, Mapping) else enumerate(fixed)
    red = blue = 0
    for i, c in items:
        if c is None:
            continue
        if not 0 <= i < cs.graph.m:
            raise ValueError(f"edge index {i} out of range")
        if c == RED:
            red |= 1 << i
        elif c == BLUE:
            blue |= 1 << i
        else:
            raise ValueError(f"edge {i} has color {c!r}, expected 0 or 1")
    return red, blue


def find_good_coloring(F: Graph, G: Graph, H: Graph,
                       fixed: Mapping[int, int] | Sequence[int | None] | None = None,
                       budget: int = DEFAULT_BUDGET, workers: int = 1,
                       system: ClauseSystem | None = None) -> EdgeColoring | None:
    """First good coloring extending ``fixed`` in search order, or ``None``.

    With ``workers > 1`` the top of the tree is split into subproblems that
    run in separate processes, each with the full ``budget``; the earliest
    subproblem (in depth-first order) holding a solution wins, so the answer
    matches the single-worker run.
    """
    cs = system or ClauseSystem.build(F, G, H)
    red, blue = _fixed_masks(cs, fixed)
    if workers <= 1:
        found = next(_search(cs, red, blue, _Counter(budget)), None)
    else:
        found = None
        parts = list(_frontier(cs, red, blue, _split_depth(workers)))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [None if kind == "done" else pool.submit(_first_from, (cs, r, b, budget))
                       for kind, r, b in parts]
            for (kind, r, b), fut in zip(parts, futures):
                found = b if fut is None else fut.result()
                if found is not None:
                    break
            for fut in futures:
                if fut is not None:
                    fut.cancel()
    return None if found is None else masks_to_coloring(found, F.m)


def arrows(F: Graph, G: Graph, H: Graph, budget: int = DEFAULT_BUDGET, workers: int = 1) -> bool:
    return find_good_coloring(F, G, H, budget=budget, workers=workers) is None


def enumerate_good_colorings(F: Graph, G: Graph, H: Graph, limit: int | None = None,
                             budget: int = DEFAULT_BUDGET, workers: int = 1) -> list[EdgeColoring]:
    """All good colorings in depth-first order (red before blue), truncated at ``limit``."""
    cs = ClauseSystem.build(F, G, H)
    if workers <= 1:
        out = []
        for blue in _search(cs, 0, 0, _Counter(budget)):
            out.append(masks_to_coloring(blue, F.m))
            if limit is not None and len(out) >= limit:
                break
        return out
    parts = list(_frontier(cs, 0, 0, _split_depth(workers)))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [None if kind == "done" else pool.submit(_all_from, (cs, r, b, budget))
                   for kind, r, b in parts]
        blues: list[int] = []
        for (kind, r, b), fut in zip(parts, futures):
            blues.extend([b] if fut is None else fut.result())
    if limit is not None:
        blues = blues[:limit]
    return [masks_to_coloring(b, F.m) for b in blues]


def is_arrow_minimal(F: Graph, G: Graph, H: Graph, budget: int = DEFAULT_BUDGET) -> bool:
    """``F`` arrows, has no isolated vertex, and no single-edge deletion arrows.

    Arrowing is monotone under taking subgraphs, so single-edge deletions
    cover every proper subgraph that loses an edge. The isolated-vertex rule
    covers the rest when ``G`` and ``H`` have no isolated vertices themselves.
    """
    if F.isolated_vertices() or not arrows(F, G, H, budget):
        return False
    return all(not arrows(F.remove_edge(x), G, H, budget) for x in F.edges)


# -- gadgets ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GadgetVerdict:
    ok: bool
    violated_condition: int | None = None
    witness: EdgeColoring | None = None
    detail: str = ""


def _mark_index(S: MarkedGraph, label: str) -> int:
    a, b = S.edge(label)
    return S.graph.edge_index[(min(a, b), max(a, b))]


def verify_determiner(D: MarkedGraph, G: Graph, H: Graph, f: str = "f",
                      budget: int = DEFAULT_BUDGET) -> GadgetVerdict:
    cs = ClauseSystem.build(D.graph, G, H)
    fi = _mark_index(D, f)
    if find_good_coloring(D.graph, G, H, budget=budget, system=cs) is None:
        return GadgetVerdict(False, 1, detail="no good coloring")
    bad = find_good_coloring(D.graph, G, H, {fi: BLUE}, budget=budget, system=cs)
    if bad is not None:
        return GadgetVerdict(False, 2, bad, "good coloring with the signal edge blue")
    return GadgetVerdict(True)


def _verify_sender(S: MarkedGraph, G: Graph, H: Graph, negative: bool, e: str, f: str,
                   budget: int, system: ClauseSystem | None = None) -> GadgetVerdict:
    if e == f:
        raise ValueError("signal edges must be distinct")
    cs = system or ClauseSystem.build(S.graph, G, H)
    ei, fi = _mark_index(S, e), _mark_index(S, f)
    if ei == fi:
        raise ValueError("signal edges must be distinct")
    if find_good_coloring(S.graph, G, H, budget=budget, system=cs) is None:
        return GadgetVerdict(False, 1, detail="no good coloring")
    forbidden = [(RED, RED), (BLUE, BLUE)] if negative else [(RED, BLUE), (BLUE, RED)]
    for ce, cf in forbidden:
        bad = find_good_coloring(S.graph, G, H, {ei: ce, fi: cf}, budget=budget, system=cs)
        if bad is not None:
            what = "equal" if negative else "different"
            return GadgetVerdict(False, 2, bad, f"good coloring with {what} signal colors")
    for ce, name in ((RED, "red"), (BLUE, "blue")):
        if find_good_coloring(S.graph, G, H, {ei: ce}, budget=budget, system=cs) is None:
            return GadgetVerdict(False, 3, detail=f"no good coloring with e {name}")
    return GadgetVerdict(True)


def verify_negative_sender(S: MarkedGraph, G: Graph, H: Graph, e: str = "e", f: str = "f",
                           budget: int = DEFAULT_BUDGET) -> GadgetVerdict:
    return _verify_sender(S, G, H, True, e, f, budget)


def verify_positive_sender(S: MarkedGraph, G: Graph, H: Graph, e: str = "e", f: str = "f",
                           budget: int = DEFAULT_BUDGET) -> GadgetVerdict:
    return _verify_sender(S, G, H, False, e, f, budget)


def signals_nonadjacent(S: MarkedGraph, e: str = "e", f: str = "f") -> bool:
    return not set(S.edge(e)) & set(S.edge(f))


def is_sender_minimal(S: MarkedGraph, G: Graph, H: Graph, polarity: str = "negative",
                      e: str = "e", f: str = "f", budget: int = DEFAULT_BUDGET) -> bool:
    """No sender of the same polarity survives deleting a non-signal edge.

    Deleting edges only removes copies, so every good coloring of ``S`` stays
    good for ``S - x``; conditions 1 and 3 therefore carry over and ``S - x``
    fails exactly when it gains a good coloring breaking the signal relation
    (equal colors for a negative sender, different for a positive one).
    """
    negative = _polarity(polarity)
    verdict = _verify_sender(S, G, H, negative, e, f, budget)
    if not verdict.ok:
        raise ValueError(f"not a {polarity} sender (condition {verdict.violated_condition})")
    signal = {tuple(sorted(S.edge(e))), tuple(sorted(S.edge(f)))}
    breaking = [(RED, RED), (BLUE, BLUE)] if negative else [(RED, BLUE), (BLUE, RED)]
    for x in S.graph.edges:
        if x in signal:
            continue
        sub = MarkedGraph(S.graph.remove_edge(x), S.marked_edges, S.marked_vertices)
        ei, fi = _mark_index(sub, e), _mark_index(sub, f)
        cs = ClauseSystem.build(sub.graph, G, H)
        if all(find_good_coloring(sub.graph, G, H, {ei: ce, fi: cf}, budget=budget, system=cs) is None
               for ce, cf in breaking):
            return False
    return True


def _polarity(polarity: str) -> bool:
    if polarity not in ("negative", "positive"):
        raise ValueError(f"polarity must be 'negative' or 'positive', got {polarity!r}")
    return polarity == "negative"


def search_sender(G: Graph, H: Graph, polarity: str = "negative", max_vertices: int = 5,
                  require_nonadjacent_signals: bool = False, budget: int = DEFAULT_BUDGET,
                  prune_isomorphs: bool = False) -> MarkedGraph | None:
    """Smallest sender by (vertex count, edge count, sorted edge list, signal pair).

    Signals are marked ``e`` and ``f`` and always satisfy ``e < f`` in edge
    order; the sender conditions are symmetric in the two signals. Pruning
    keeps only the first member of each isomorphism class within an
    ``(n, m)`` class. It never changes whether a sender is found, though the
    labeled graph returned may be a different member of the same class.
    """
    negative = _polarity(polarity)
    if max_vertices > SENDER_SEARCH_CAP:
        raise ValueError(f"max_vertices is capped at {SENDER_SEARCH_CAP}")
    from .hanf import canonical_form

    for n in range(2, max_vertices + 1):
        pairs = list(combinations(range(n), 2))
        for m in range(2, len(pairs) + 1):
            seen: set[bytes] = set()
            for edges in combinations(pairs, m):
                graph = Graph(n, edges)
                if prune_isomorphs:
                    key = canonical_form(graph)
                    if key in seen:
                        continue
                    seen.add(key)
                cs = ClauseSystem.build(graph, G, H)
                if find_good_coloring(graph, G, H, budget=budget, system=cs) is None:
                    continue
                for x, y in combinations(graph.edges, 2):
                    if require_nonadjacent_signals and set(x) & set(y):
                        continue
                    S = MarkedGraph(graph, {"e": x, "f": y})
                    if _verify_sender(S, G, H, negative, "e", "f", budget, cs).ok:
                        return S
    return None
