import warnings

import pytest

from arrowlab.arrowing import arrows
from arrowlab.gadgets import MarkedGraph
from arrowlab.graph import Graph, are_isomorphic, complete_graph, cycle_graph, disjoint_union, path_graph
from arrowlab.hanf import are_r_equivalent, r_equivalence_bijection
from arrowlab.witness import (
    PreconditionError,
    build_far_apart_minimal,
    build_witness_pair,
    certify,
    explicit_bijection,
    run_pipeline,
    verify_explicit_bijection,
)

P3, K3 = path_graph(3), complete_graph(3)
P5_SENDER = MarkedGraph(path_graph(5), {"e": (0, 1), "f": (3, 4)})


def union(*gs):
    out = Graph(0)
    for g in gs:
        out = disjoint_union(out, g)[0]
    return out


@pytest.fixture(scope="module")
def far():
    return {n: build_far_apart_minimal(P5_SENDER, P3, P3, n) for n in (1, 2, 4)}


class TestFarApart:
    @pytest.mark.parametrize("n,length", [(1, 9), (2, 15), (4, 27)])
    def test_odd_cycles(self, far, n, length):
        res = far[n]
        assert are_isomorphic(res.marked.graph, cycle_graph(length))
        assert res.distance >= n and res.distance == 3 * n
        assert res.minimal is True

    def test_adjacent_signals_rejected(self):
        with pytest.raises(PreconditionError):
            build_far_apart_minimal(MarkedGraph(P3, {"e": (0, 1), "f": (1, 2)}), P3, P3, 1)

    def test_not_a_sender(self):
        S = MarkedGraph(Graph(4, [(0, 1), (2, 3)]), {"e": (0, 1), "f": (2, 3)})
        with pytest.raises(PreconditionError):
            build_far_apart_minimal(S, K3, K3, 1)

    def test_non_minimal_sender(self):
        S = MarkedGraph(Graph(6, path_graph(5).edges + ((0, 5),)), {"e": (0, 1), "f": (3, 4)})
        with pytest.raises(PreconditionError):
            build_far_apart_minimal(S, P3, P3, 1)
        res = build_far_apart_minimal(S, P3, P3, 1, waive_sender_minimality=True)
        assert res.sender_minimality_waived

    def test_n_zero(self):
        with pytest.raises(PreconditionError):
            build_far_apart_minimal(P5_SENDER, P3, P3, 0)

    def test_budget_leaves_minimality_unknown(self):
        assert build_far_apart_minimal(P5_SENDER, P3, P3, 1, budget=2, waive_sender_minimality=True).minimal is None

    def test_distance_scaling(self):
        for n in range(1, 7):
            res = build_far_apart_minimal(P5_SENDER, P3, P3, n, budget=10**6)
            assert res.distance >= n


class TestPair:
    def test_c15(self, far):
        pair = build_witness_pair(far[2].marked)
        assert are_isomorphic(pair.F2, union(path_graph(14), path_graph(14)))
        assert are_isomorphic(pair.F1, union(cycle_graph(15), path_graph(5), path_graph(8)))

    def test_c27_sizes(self, far):
        pair = build_witness_pair(far[4].marked)
        assert pair.F1.n == pair.F2.n == 52
        assert pair.F1.m == pair.F2.m

    def test_adjacent_marks(self):
        F = MarkedGraph(cycle_graph(9), {}, {"u": 0, "v": 1})
        pair = build_witness_pair(F)
        assert are_isomorphic(pair.F1, union(cycle_graph(9), path_graph(7)))

    def test_missing_mark(self):
        from arrowlab.gadgets import MarkError

        with pytest.raises(MarkError):
            build_witness_pair(MarkedGraph(cycle_graph(9), {}, {"u": 0}))

    def test_coincident(self):
        with pytest.raises(PreconditionError):
            build_witness_pair(MarkedGraph(cycle_graph(9), {}, {"u": 3, "v": 3}))


class TestBijection:
    def test_c27_r1(self, far):
        assert verify_explicit_bijection(far[4].marked, 1)

    def test_c15_r2_precondition(self, far):
        with pytest.raises(PreconditionError):
            verify_explicit_bijection(far[2].marked, 2)

    def test_types_match_directly(self, far):
        from arrowlab.hanf import r_type

        pair, phi = explicit_bijection(far[4].marked, 1)
        assert all(r_type(pair.F1, x, 2) == r_type(pair.F2, y, 2) for x, y in phi.items())

    def test_agrees_with_census(self):
        # long cycles with u,v far apart: explicit map exists iff censuses agree
        for length, gap in [(40, 8), (41, 12), (60, 20)]:
            F = MarkedGraph(cycle_graph(length), {}, {"u": 0, "v": gap})
            pair = build_witness_pair(F)
            for r in (1, 2):
                if gap >= 2 ** (r + 1):
                    assert verify_explicit_bijection(F, r) == are_r_equivalent(pair.F1, pair.F2, 2**r)


class TestCertify:
    def test_success_c27(self, far):
        pair = build_witness_pair(far[4].marked)
        cert = certify(pair.F1, pair.F2, P3, P3, 1)
        assert cert.status == "SUCCESS"
        assert cert.hanf.equivalent and cert.hanf.radius == 2
        assert cert.arrows_f1 is True and cert.arrows_f2 is False
        assert cert.fo.separating == []

    def test_negative_control(self):
        C12 = cycle_graph(12)
        C6C6 = union(cycle_graph(6), cycle_graph(6))
        cert = certify(C12, C6C6, P3, P3, 1)
        assert cert.hanf.equivalent
        assert (cert.arrows_f1, cert.arrows_f2) == (False, False)
        assert cert.status == "NO_ARROWING_SEPARATION"

    def test_same_graph_not_witness(self, far):
        F1 = build_witness_pair(far[1].marked).F1
        cert = certify(F1, F1, P3, P3, 1)
        assert cert.hanf.equivalent and cert.status == "NO_ARROWING_SEPARATION"

    def test_not_hanf_equivalent(self):
        cert = certify(cycle_graph(12), union(cycle_graph(6), cycle_graph(6)), P3, P3, 2)
        assert cert.status == "NOT_HANF_EQUIVALENT"

    def test_partial_on_budget(self, far):
        pair = build_witness_pair(far[2].marked)
        cert = certify(pair.F1, pair.F2, P3, P3, 1, budget=1)
        assert cert.status == "PARTIAL" and cert.arrows_f1 is None

    def test_disconnected_pattern_warns(self):
        two_edges = Graph(4, [(0, 1), (2, 3)])
        with pytest.warns(UserWarning):
            cert = certify(cycle_graph(6), cycle_graph(6), two_edges, P3, 1)
        assert cert.notes

    def test_rank_zero(self):
        with pytest.raises(PreconditionError):
            certify(cycle_graph(6), cycle_graph(6), P3, P3, 0)


class TestPipeline:
    def test_r1(self):
        cert = run_pipeline(P5_SENDER, P3, P3, 1)
        assert cert.status == "SUCCESS" and cert.bijection_ok is True
        assert cert.far_apart.n == 4 and cert.far_apart.distance == 12
        assert cert.F1.n == cert.F2.n == 52
        # invariants for a definite run
        assert cert.F1.m == cert.F2.m
        assert are_r_equivalent(cert.F1, cert.F2, 2)
        assert r_equivalence_bijection(cert.F1, cert.F2, 2) is not None

    def test_explicit_small_n_records_note(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            cert = run_pipeline(P5_SENDER, P3, P3, 1, n=1)
        assert cert.bijection_ok is None and cert.notes
        # d(u,v)=3 < 4 leaves a 2-vertex path in F-{u,v}; its radius-2 type has no partner in F2
        assert cert.status == "NOT_HANF_EQUIVALENT"

    def test_arrowing_direct(self):
        cert = run_pipeline(P5_SENDER, P3, P3, 1, n=2)
        assert arrows(cert.F1, P3, P3) and not arrows(cert.F2, P3, P3)
