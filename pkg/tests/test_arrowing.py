import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arrowlab.arrowing import (
    BLUE,
    RED,
    BudgetExceeded,
    arrows,
    enumerate_good_colorings,
    find_good_coloring,
    is_arrow_minimal,
    is_good_coloring,
    is_sender_minimal,
    search_sender,
    signals_nonadjacent,
    verify_determiner,
    verify_negative_sender,
    verify_positive_sender,
)
from arrowlab.gadgets import MarkedGraph, chain_senders
from arrowlab.graph import Graph, are_isomorphic, complete_graph, cycle_graph, disjoint_union, path_graph

from oracles import arrows_exhaustive, count_good, good_blue_masks, to_graph

K3, P3, K2 = complete_graph(3), path_graph(3), complete_graph(2)
K5, K6 = complete_graph(5), complete_graph(6)
P5_SENDER = MarkedGraph(path_graph(5), {"e": (0, 1), "f": (3, 4)})
PAIRS = [(K3, K3), (P3, P3), (P3, K3)]


@st.composite
def graphs(draw, max_n=6, min_n=0):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(n, [p for p, k in zip(pairs, keep) if k])


def shuffled(G, seed):
    perm = list(range(G.n))
    random.Random(seed).shuffle(perm)
    return G.relabel(perm)


def blue_mask(coloring):
    return sum(1 << i for i, c in enumerate(coloring) if c == BLUE)


class TestGoodColoring:
    def test_triangle_mixed(self):
        assert is_good_coloring(K3, K3, K3, (RED, BLUE, BLUE))

    def test_triangle_all_red(self):
        assert not is_good_coloring(K3, K3, K3, (RED, RED, RED))

    def test_p5_alternating(self):
        assert is_good_coloring(path_graph(5), P3, P3, (RED, BLUE, RED, BLUE))

    def test_partial_rejected(self):
        with pytest.raises(ValueError):
            is_good_coloring(K3, K3, K3, (RED, BLUE))


class TestFind:
    def test_k6_none(self):
        assert count_good(K6, K3, K3) == 0
        assert find_good_coloring(K6, K3, K3) is None

    def test_k5_found(self):
        c = find_good_coloring(K5, K3, K3)
        assert c is not None and is_good_coloring(K5, K3, K3, c)
        assert blue_mask(c) in set(good_blue_masks(K5, K3, K3).tolist())

    def test_p5_fixed_red(self):
        assert find_good_coloring(path_graph(5), P3, P3, {0: RED}) == (RED, BLUE, RED, BLUE)

    def test_fixed_sequence_form(self):
        assert find_good_coloring(path_graph(5), P3, P3, [None, RED, None, None]) == (BLUE, RED, BLUE, RED)

    def test_fixed_contradiction(self):
        assert find_good_coloring(path_graph(5), P3, P3, {0: RED, 1: RED}) is None

    def test_budget_exceeded(self):
        with pytest.raises(BudgetExceeded):
            find_good_coloring(K6, K3, K3, budget=1)

    def test_bad_fixed_color(self):
        with pytest.raises(ValueError):
            find_good_coloring(K3, K3, K3, {0: 2})


class TestArrows:
    def test_ramsey(self):
        assert arrows(K6, K3, K3)
        assert not arrows(K5, K3, K3)

    def test_cycles(self):
        assert arrows_exhaustive(cycle_graph(9), P3, P3) and arrows(cycle_graph(9), P3, P3)
        assert not arrows_exhaustive(cycle_graph(8), P3, P3)
        assert not arrows(cycle_graph(8), P3, P3)

    def test_workers_agree(self):
        for F in (K5, K6, cycle_graph(9), cycle_graph(8)):
            assert find_good_coloring(F, K3, K3, workers=3) == find_good_coloring(F, K3, K3)
            assert find_good_coloring(F, P3, P3, workers=3) == find_good_coloring(F, P3, P3)


class TestEnumerate:
    @pytest.mark.parametrize("F,G,H,count", [(P3, P3, P3, 2), (K2, K3, K3, 2), (K6, K3, K3, 0),
                                             (K5, K3, K3, 12), (complete_graph(4), K3, K3, 18)])
    def test_counts(self, F, G, H, count):
        assert count_good(F, G, H) == count
        assert len(enumerate_good_colorings(F, G, H)) == count

    def test_p3_exact(self):
        assert enumerate_good_colorings(P3, P3, P3) == [(RED, BLUE), (BLUE, RED)]

    def test_limit(self):
        assert len(enumerate_good_colorings(K5, K3, K3, limit=5)) == 5

    def test_workers_same_order(self):
        F = complete_graph(5)
        assert enumerate_good_colorings(F, K3, K3, workers=4) == enumerate_good_colorings(F, K3, K3)


class TestMinimal:
    def test_k6(self):
        assert all(not arrows_exhaustive(K6.remove_edge(e), K3, K3) for e in K6.edges)
        assert is_arrow_minimal(K6, K3, K3)

    def test_c9(self):
        assert is_arrow_minimal(cycle_graph(9), P3, P3)

    def test_isolated_vertex(self):
        assert not is_arrow_minimal(disjoint_union(K6, Graph(1))[0], K3, K3)

    def test_non_arrowing(self):
        assert not is_arrow_minimal(K5, K3, K3)

    def test_extra_edge(self):
        F = Graph(9, cycle_graph(9).edges + ((0, 4),))
        assert arrows(F, P3, P3) and not is_arrow_minimal(F, P3, P3)


class TestDeterminer:
    def test_triangle(self):
        v = verify_determiner(MarkedGraph(K3, {"f": (0, 1)}), K3, K3)
        assert (v.ok, v.violated_condition) == (False, 2)
        assert v.witness[0] == BLUE and is_good_coloring(K3, K3, K3, v.witness)

    def test_k6(self):
        v = verify_determiner(MarkedGraph(K6, {"f": (2, 5)}), K3, K3)
        assert (v.ok, v.violated_condition, v.witness) == (False, 1, None)

    def test_single_edge(self):
        assert verify_determiner(MarkedGraph(K2, {"f": (0, 1)}), P3, K2).ok


class TestSenders:
    def test_p3_negative(self):
        S = MarkedGraph(P3, {"e": (0, 1), "f": (1, 2)})
        assert verify_negative_sender(S, P3, P3).ok
        assert not signals_nonadjacent(S)

    def test_p5_negative(self):
        assert count_good(path_graph(5), P3, P3) == 2
        assert verify_negative_sender(P5_SENDER, P3, P3).ok
        assert signals_nonadjacent(P5_SENDER)

    def test_disjoint_edges(self):
        S = MarkedGraph(Graph(4, [(0, 1), (2, 3)]), {"e": (0, 1), "f": (2, 3)})
        v = verify_negative_sender(S, K3, K3)
        assert (v.ok, v.violated_condition) == (False, 2)
        assert v.witness[0] == v.witness[1]

    def test_chain_is_not_positive(self):
        chain = chain_senders(P5_SENDER, 3)
        assert chain.graph.m == 10
        v = verify_positive_sender(chain, P3, P3)
        assert (v.ok, v.violated_condition) == (False, 2)
        ei, fi = (chain.graph.edge_index[tuple(sorted(chain.edge(x)))] for x in "ef")
        assert v.witness[ei] != v.witness[fi]

    def test_p3_not_positive(self):
        v = verify_positive_sender(MarkedGraph(P3, {"e": (0, 1), "f": (1, 2)}), P3, P3)
        assert (v.ok, v.violated_condition) == (False, 2)
        assert v.witness in ((RED, BLUE), (BLUE, RED))

    def test_k6_condition_1(self):
        S = MarkedGraph(K6, {"e": (0, 1), "f": (2, 3)})
        assert verify_positive_sender(S, K3, K3).violated_condition == 1
        assert verify_negative_sender(S, K3, K3).violated_condition == 1

    def test_condition_3(self):
        # with (K3,K2) every good coloring is all red, so e is never blue
        S = MarkedGraph(P3, {"e": (0, 1), "f": (1, 2)})
        v = verify_positive_sender(S, K3, K2)
        assert v.violated_condition == 3

    def test_even_path_positive(self):
        S = MarkedGraph(path_graph(4), {"e": (0, 1), "f": (2, 3)})
        assert verify_positive_sender(S, P3, P3).ok


class TestSenderMinimal:
    def test_p3(self):
        assert is_sender_minimal(MarkedGraph(P3, {"e": (0, 1), "f": (1, 2)}), P3, P3)

    def test_p5(self):
        assert is_sender_minimal(P5_SENDER, P3, P3)

    def test_pendant(self):
        G = Graph(6, path_graph(5).edges + ((0, 5),))
        S = MarkedGraph(G, {"e": (0, 1), "f": (3, 4)})
        assert verify_negative_sender(S, P3, P3).ok
        assert not is_sender_minimal(S, P3, P3)

    def test_requires_sender(self):
        S = MarkedGraph(Graph(4, [(0, 1), (2, 3)]), {"e": (0, 1), "f": (2, 3)})
        with pytest.raises(ValueError):
            is_sender_minimal(S, K3, K3)

    def test_bad_polarity(self):
        with pytest.raises(ValueError):
            is_sender_minimal(P5_SENDER, P3, P3, polarity="neutral")


class TestSearch:
    def test_p3_smallest(self):
        S = search_sender(P3, P3, "negative", 3)
        assert S.graph == Graph(3, [(0, 1), (0, 2)])
        assert S.edge("e") == (0, 1) and S.edge("f") == (0, 2)

    def test_p3_nonadjacent(self):
        S = search_sender(P3, P3, "negative", 5, require_nonadjacent_signals=True)
        assert S.graph == Graph(5, [(0, 1), (0, 2), (1, 3), (2, 4)])
        assert (S.edge("e"), S.edge("f")) == ((1, 3), (2, 4))
        assert are_isomorphic(S.graph, path_graph(5))

    def test_k3_none(self):
        assert search_sender(K3, K3, "negative", 4) is None

    def test_pruning_same_class(self):
        plain = search_sender(P3, P3, "positive", 5, require_nonadjacent_signals=True)
        pruned = search_sender(P3, P3, "positive", 5, require_nonadjacent_signals=True, prune_isomorphs=True)
        assert are_isomorphic(plain.graph, pruned.graph)
        assert verify_positive_sender(pruned, P3, P3).ok

    def test_cap(self):
        with pytest.raises(ValueError):
            search_sender(P3, P3, "negative", 7)


@pytest.mark.parametrize("G,H", PAIRS, ids=["K3K3", "P3P3", "P3K3"])
def test_oracle_equivalence_small_atlas(G, H):
    for nxg in nx.graph_atlas_g()[:209]:  # every graph on at most 6 vertices
        F = to_graph(nxg)
        assert arrows(F, G, H) == arrows_exhaustive(F, G, H), F


@given(graphs(max_n=6), st.sampled_from(range(3)))
@settings(max_examples=60, deadline=None)
def test_enumerate_count_matches_exhaustive(F, which):
    G, H = PAIRS[which]
    got = enumerate_good_colorings(F, G, H)
    assert len(got) == count_good(F, G, H)
    assert {blue_mask(c) for c in got} == set(good_blue_masks(F, G, H).tolist())


@given(graphs(max_n=7), st.data())
@settings(max_examples=40, deadline=None)
def test_monotone(F, data):
    drop = data.draw(st.sets(st.sampled_from(F.edges))) if F.edges else set()
    sub = Graph(F.n, [e for e in F.edges if e not in drop])
    for G, H in PAIRS:
        if arrows(sub, G, H):
            assert arrows(F, G, H)


@given(graphs(max_n=6), st.sampled_from(range(3)))
@settings(max_examples=40, deadline=None)
def test_color_swap_duality(F, which):
    G, H = PAIRS[which]
    swapped = {(1 << F.m) - 1 - b for b in good_blue_masks(F, G, H).tolist()}
    assert swapped == set(good_blue_masks(F, H, G).tolist())
    assert arrows(F, G, H) == arrows(F, H, G)


@given(graphs(max_n=7), st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_relabel_invariant(F, seed):
    F2 = shuffled(F, seed)
    for G, H in PAIRS:
        assert arrows(F, G, H) == arrows(F2, G, H)


@given(st.integers(0, 10**6))
@settings(max_examples=20, deadline=None)
def test_sender_verdict_relabel_invariant(seed):
    perm = list(range(5))
    random.Random(seed).shuffle(perm)
    S = MarkedGraph(path_graph(5).relabel(perm),
                    {"e": (perm[0], perm[1]), "f": (perm[3], perm[4])})
    assert verify_negative_sender(S, P3, P3).ok
    assert verify_positive_sender(S, P3, P3).violated_condition == 2


@given(graphs(max_n=6), st.data())
@settings(max_examples=60, deadline=None)
def test_fixed_respected(F, data):
    if not F.m:
        return
    fixed = data.draw(st.dictionaries(st.integers(0, F.m - 1), st.sampled_from([RED, BLUE]), max_size=3))
    c = find_good_coloring(F, P3, K3, fixed)
    pool = good_blue_masks(F, P3, K3).tolist()
    want = [b for b in pool if all(((b >> i) & 1) == col for i, col in fixed.items())]
    if c is None:
        assert want == []
    else:
        assert all(c[i] == col for i, col in fixed.items())
        assert blue_mask(c) in want
