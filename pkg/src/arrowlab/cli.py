"""Command-line front end.

Exit codes: 0 definite positive answer, 1 definite negative answer,
2 usage or input error, 3 budget exhausted / partial certificate.

Graph arguments name a file in the text (or JSON) graph format. A name
that is not an existing file and looks like ``K5``, ``P3``, ``C9`` or
``E4`` (edgeless) is built in.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
import time

from . import arrowing, fo, gadgets, hanf, witness
from .graph import (
    Graph,
    GraphFormatError,
    complete_graph,
    cycle_graph,
    distance,
    empty_graph,
    find_isomorphism,
    format_graph,
    is_connected,
    is_k_connected,
    min_connectivity_at_least,
    path_graph,
    read_graph,
    vertex_connectivity,
)
from .report import Report, format_coloring, parse_coloring

_BUILTIN = re.compile(r"^([KPCE])(\d+)$")


def load_graph(name: str) -> Graph:
    if not os.path.exists(name):
        m = _BUILTIN.match(name)
        if m:
            kind, n = m.group(1), int(m.group(2))
            return {"K": complete_graph, "P": path_graph, "C": cycle_graph, "E": empty_graph}[kind](n)
    return read_graph(name)


def load_marked(name: str) -> gadgets.MarkedGraph:
    return gadgets.read_marked(name)


# -- graph ---------------------------------------------------------------------------

def cmd_graph_info(args) -> Report:
    F = load_graph(args.F)
    rep = Report("graph info", f"graph n={F.n} m={F.m}")
    rep.add("vertices", F.n).add("edges", F.m).add("connected", is_connected(F))
    rep.add("connectivity", vertex_connectivity(F)).add("degrees", F.degrees())
    return rep


def cmd_graph_iso(args) -> Report:
    A, B = load_graph(args.F), load_graph(args.G)
    iso = find_isomorphism(A, B)
    if iso is None:
        return Report("graph iso", "NOT-ISOMORPHIC", 1)
    rep = Report("graph iso", "ISOMORPHIC")
    rep.add("map", [f"{k}->{v}" for k, v in sorted(iso.items())])
    return rep


def cmd_graph_distance(args) -> Report:
    F = load_graph(args.F)
    d = distance(F, args.u, args.v)
    return Report("graph distance", f"distance {'inf' if d == float('inf') else d}")


def cmd_graph_kconn(args) -> Report:
    F = load_graph(args.F)
    ok = min_connectivity_at_least(F, args.k) if args.at_least else is_k_connected(F, args.k)
    rep = Report("graph kconn", "TRUE" if ok else "FALSE", 0 if ok else 1)
    return rep.add("connectivity", vertex_connectivity(F)).add("at_least", args.at_least).add("k", args.k)


# -- arrow -------------------------------------------------------------------------------

def _fgh(args) -> tuple[Graph, Graph, Graph]:
    return load_graph(args.F), load_graph(args.G), load_graph(args.H)


def cmd_arrow_decide(args) -> Report:
    F, G, H = _fgh(args)
    c = arrowing.find_good_coloring(F, G, H, budget=args.budget, workers=args.workers)
    if c is None:
        return Report("arrow decide", "ARROWS")
    return Report("arrow decide", "DOES-NOT-ARROW", 1).block("witness", format_coloring(c))


def cmd_arrow_enumerate(args) -> Report:
    F, G, H = _fgh(args)
    cols = arrowing.enumerate_good_colorings(F, G, H, args.limit, args.budget, args.workers)
    rep = Report("arrow enumerate", f"good-colorings {len(cols)}")
    rep.add("count", len(cols)).add("limit", args.limit if args.limit else "none")
    for i, c in enumerate(cols):
        rep.block(f"coloring {i}", format_coloring(c))
    return rep


def cmd_arrow_minimal(args) -> Report:
    F, G, H = _fgh(args)
    ok = arrowing.is_arrow_minimal(F, G, H, args.budget)
    return Report("arrow minimal", "MINIMAL" if ok else "NOT-MINIMAL", 0 if ok else 1)


def cmd_arrow_good(args) -> Report:
    F, G, H = _fgh(args)
    with open(args.coloring) as fh:
        c = parse_coloring(fh.read(), F.m)
    ok = arrowing.is_good_coloring(F, G, H, c)
    return Report("arrow good", "GOOD" if ok else "NOT-GOOD", 0 if ok else 1)


# -- gadget -------------------------------------------------------------------------------

def _marked_report(command: str, M: gadgets.MarkedGraph, extra: str = "") -> Report:
    rep = Report(command, f"marked-graph n={M.graph.n} m={M.graph.m}{extra}")
    return rep.block("marked-graph", gadgets.format_marked(M))


def cmd_gadget_join(args) -> Report:
    res = gadgets.edge_join(load_marked(args.left), args.left_edge, load_marked(args.right), args.right_edge)
    return _marked_report("gadget join", res.marked).add("collapsed_edges", res.collapsed_edges)


def cmd_gadget_identify(args) -> Report:
    res = gadgets.self_identify(load_marked(args.S), args.edge1, args.edge2)
    return _marked_report("gadget identify", res.marked).add("collapsed_edges", res.collapsed_edges)


def cmd_gadget_chain(args) -> Report:
    M = gadgets.chain_senders(load_marked(args.S), args.copies, args.e, args.f)
    return _marked_report("gadget chain", M)


def cmd_gadget_close(args) -> Report:
    M = gadgets.close_chain(load_marked(args.S), args.n, args.far_copy)
    rep = _marked_report("gadget close", M)
    return rep.add("distance_uv", distance(M.graph, M.vertex("u"), M.vertex("v")))


def _verdict_report(command: str, v: arrowing.GadgetVerdict, extra: list[tuple[str, object]]) -> Report:
    if v.ok:
        head = "OK" + "".join(f" {k}={'true' if val is True else 'false' if val is False else val}"
                              for k, val in extra)
        return Report(command, head)
    rep = Report(command, f"FAIL condition={v.violated_condition}", 1).add("detail", v.detail)
    if v.witness is not None:
        rep.block("witness", format_coloring(v.witness))
    return rep


def cmd_gadget_verify_determiner(args) -> Report:
    D = load_marked(args.S)
    v = arrowing.verify_determiner(D, load_graph(args.G), load_graph(args.H), args.signal, args.budget)
    return _verdict_report("gadget verify-determiner", v, [])


def _cmd_sender(args, negative: bool) -> Report:
    S = load_marked(args.S)
    G, H = load_graph(args.G), load_graph(args.H)
    fn = arrowing.verify_negative_sender if negative else arrowing.verify_positive_sender
    v = fn(S, G, H, args.e, args.f, args.budget)
    name = "gadget verify-negative-sender" if negative else "gadget verify-positive-sender"
    extra: list[tuple[str, object]] = [("non-adjacent-signals", arrowing.signals_nonadjacent(S, args.e, args.f))]
    if v.ok and args.check_minimal:
        polarity = "negative" if negative else "positive"
        extra.append(("minimal", arrowing.is_sender_minimal(S, G, H, polarity, args.e, args.f, args.budget)))
    return _verdict_report(name, v, extra)


def cmd_gadget_verify_negative(args) -> Report:
    return _cmd_sender(args, True)


def cmd_gadget_verify_positive(args) -> Report:
    return _cmd_sender(args, False)


def cmd_gadget_search(args) -> Report:
    G, H = load_graph(args.G), load_graph(args.H)
    S = arrowing.search_sender(G, H, args.polarity, args.max_vertices, args.nonadjacent, args.budget,
                               args.prune_isomorphs)
    if S is None:
        return Report("gadget search", "NONE", 1)
    return _marked_report("gadget search", S)


# -- hanf -----------------------------------------------------------------------------------

def cmd_hanf_types(args) -> Report:
    A = load_graph(args.F)
    rep = Report("hanf types", f"types radius={args.r}")
    text = "".join(f"v {a} {t.hex()}\n" for a, t in enumerate(hanf.vertex_types(A, args.r)))
    return rep.block("types", text)


def cmd_hanf_census(args) -> Report:
    census = hanf.type_census(load_graph(args.F), args.r)
    rep = Report("hanf census", f"census radius={args.r} types={len(census.counts)}")
    return rep.add("total", census.total).block("census", "\n".join(census.lines()))


def cmd_hanf_equiv(args) -> Report:
    A, B = load_graph(args.A), load_graph(args.B)
    ok = hanf.are_r_equivalent(A, B, args.r)
    rep = Report("hanf equiv", "EQUIVALENT" if ok else "NOT-EQUIVALENT", 0 if ok else 1).add("radius", args.r)
    if ok and args.bijection:
        bij = hanf.r_equivalence_bijection(A, B, args.r)
        rep.add("bijection", [f"{k}->{v}" for k, v in sorted(bij.items())])
    return rep


def _hanf_fields(rep: Report, h: hanf.HanfReport) -> Report:
    rep.add("rank", h.rank).add("radius", h.radius).add("equivalent", h.equivalent)
    rep.add("conclusion", h.conclusion)
    for w in h.warnings:
        rep.add("warning", w)
    rep.block("census A", "\n".join(h.census_a.lines()))
    return rep.block("census B", "\n".join(h.census_b.lines()))


def cmd_hanf_certificate(args) -> Report:
    h = hanf.hanf_certificate(load_graph(args.A), load_graph(args.B), args.r)
    return _hanf_fields(Report("hanf certificate", h.conclusion, 0 if h.equivalent else 1), h)


# -- fo ----------------------------------------------------------------------------------------

def cmd_fo_qr(args) -> Report:
    phi = fo.parse_formula(args.formula)
    rep = Report("fo qr", f"qr {fo.quantifier_rank(phi)}")
    return rep.add("formula", fo.format_formula(phi)).add("free", sorted(fo.free_variables(phi)) or "none")


def cmd_fo_eval(args) -> Report:
    phi = fo.parse_formula(args.formula)
    env = {}
    for item in args.assign or []:
        var, _, val = item.partition("=")
        env[var] = int(val)
    val = fo.evaluate(load_graph(args.F), phi, env)
    return Report("fo eval", "TRUE" if val else "FALSE", 0 if val else 1)


def _comparison_fields(rep: Report, cmp: fo.ComparisonReport) -> Report:
    rep.add("rank", cmp.rank).add("checked", len(cmp.rows)).add("skipped_rank", cmp.skipped)
    rep.add("separating", len(cmp.separating))
    rows = "".join(
        f"{row.rank}\t{fo_bool(row.value_a)}\t{fo_bool(row.value_b)}\t{fo_bool(row.agree)}\t{row.sentence}\n"
        for row in cmp.rows if not row.agree
    )
    return rep.block("separating sentences (qr, A, B, agree, sentence)", rows)


def fo_bool(b: bool) -> str:
    return "true" if b else "false"


def cmd_fo_compare(args) -> Report:
    A, B = load_graph(args.A), load_graph(args.B)
    if args.sentences:
        with open(args.sentences) as fh:
            corpus = fo.parse_sentences(fh.read())
    else:
        corpus = fo.default_corpus(max_rank=args.r)
    cmp = fo.compare_models(A, B, corpus, args.r, args.workers)
    ok = not cmp.separating
    return _comparison_fields(Report("fo compare", "AGREE" if ok else "SEPARATED", 0 if ok else 1), cmp)


# -- witness --------------------------------------------------------------------------------------

def cmd_witness_build(args) -> Report:
    G, H = load_graph(args.G), load_graph(args.H)
    far = witness.build_far_apart_minimal(load_marked(args.S), G, H, args.n, args.budget,
                                          args.waive_sender_minimality, args.far_copy)
    code = 0 if far.minimal else (3 if far.minimal is None else 1)
    rep = _marked_report("witness build", far.marked)
    rep.exit_code = code
    return rep.add("n", args.n).add("distance_uv", far.distance).add("arrow_minimal", far.minimal)


def cmd_witness_pair(args) -> Report:
    pair = witness.build_witness_pair(load_marked(args.F))
    rep = Report("witness pair", f"pair n1={pair.F1.n} n2={pair.F2.n}")
    rep.add("F1_vertices", pair.F1.n).add("F1_edges", pair.F1.m)
    rep.add("F2_vertices", pair.F2.n).add("F2_edges", pair.F2.m)
    return rep.block("F1", format_graph(pair.F1)).block("F2", format_graph(pair.F2))


def cmd_witness_bijection(args) -> Report:
    ok = witness.verify_explicit_bijection(load_marked(args.F), args.r)
    return Report("witness bijection", "BIJECTION-OK" if ok else "BIJECTION-FAILED", 0 if ok else 1)


_STATUS_EXIT = {"SUCCESS": 0, "PARTIAL": 3}


def _certificate_report(command: str, cert: witness.WitnessCertificate) -> Report:
    rep = Report(command, f"status {cert.status}", _STATUS_EXIT.get(cert.status, 1))
    rep.add("status", cert.status).add("r", cert.r).add("budget", cert.budget)
    if cert.far_apart is not None:
        far = cert.far_apart
        rep.add("n", far.n).add("distance_uv", far.distance).add("F_arrow_minimal", far.minimal)
        rep.add("sender_minimality_waived", far.sender_minimality_waived)
    rep.add("F1_vertices", cert.F1.n).add("F2_vertices", cert.F2.n)
    rep.add("F1_edges", cert.F1.m).add("F2_edges", cert.F2.m)
    rep.add("arrows_F1", cert.arrows_f1).add("arrows_F2", cert.arrows_f2)
    rep.add("hanf_radius", cert.hanf.radius).add("hanf_equivalent", cert.hanf.equivalent)
    rep.add("hanf_conclusion", cert.hanf.conclusion)
    if cert.far_apart is not None:
        rep.add("explicit_bijection", cert.bijection_ok)
    rep.add("fo_checked", len(cert.fo.rows)).add("fo_separating", len(cert.fo.separating))
    for note in cert.notes:
        rep.add("note", note)
    rep.block("G", format_graph(cert.G)).block("H", format_graph(cert.H))
    if cert.sender is not None:
        rep.block("S", gadgets.format_marked(cert.sender))
    if cert.far_apart is not None:
        rep.block("F", gadgets.format_marked(cert.far_apart.marked))
    rep.block("F1", format_graph(cert.F1)).block("F2", format_graph(cert.F2))
    rep.block("census F1", "\n".join(cert.hanf.census_a.lines()))
    return rep.block("census F2", "\n".join(cert.hanf.census_b.lines()))


def cmd_witness_run(args) -> Report:
    G, H = load_graph(args.G), load_graph(args.H)
    cert = witness.run_pipeline(load_marked(args.S), G, H, args.r, args.n, args.budget, args.workers,
                                args.waive_sender_minimality)
    return _certificate_report("witness run", cert)


def cmd_witness_certify(args) -> Report:
    G, H = load_graph(args.G), load_graph(args.H)
    cert = witness.certify(load_graph(args.A), load_graph(args.B), G, H, args.r, args.budget, args.workers)
    return _certificate_report("witness certify", cert)


# -- parser -------------------------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--budget", type=_positive, default=arrowing.DEFAULT_BUDGET,
                   help="search node budget (default %(default)s)")
    p.add_argument("--workers", type=_positive, default=1, help="worker count (output does not depend on it)")
    p.add_argument("--format", choices=("text", "structured"), default="text", help="output format")
    p.add_argument("--timings", action="store_true", help="append elapsed time (makes output non-reproducible)")


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def _fgh_args(p: argparse.ArgumentParser, F: bool = True) -> None:
    if F:
        p.add_argument("-F", required=True, help="host graph F")
    p.add_argument("-G", required=True, help="graph forbidden in red")
    p.add_argument("-H", required=True, help="graph forbidden in blue")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="arrowlab", description=__doc__.splitlines()[0])
    groups = parser.add_subparsers(dest="group", required=True)

    def sub(group, name, func, help_):
        p = group.add_parser(name, help=help_, description=help_)
        p.set_defaults(func=func)
        _common(p)
        return p

    g = groups.add_parser("graph", help="graph utilities").add_subparsers(dest="cmd", required=True)
    p = sub(g, "info", cmd_graph_info, "vertex/edge counts, connectivity, degrees")
    p.add_argument("-F", required=True)
    p = sub(g, "iso", cmd_graph_iso, "isomorphism test with witness map")
    p.add_argument("-F", required=True)
    p.add_argument("-G", required=True)
    p = sub(g, "distance", cmd_graph_distance, "shortest-path distance between two vertices")
    p.add_argument("-F", required=True)
    p.add_argument("u", type=int)
    p.add_argument("v", type=int)
    p = sub(g, "kconn", cmd_graph_kconn, "exact k-connectivity (or at least k with --at-least)")
    p.add_argument("-F", required=True)
    p.add_argument("-k", type=_positive, required=True)
    p.add_argument("--at-least", action="store_true")

    a = groups.add_parser("arrow", help="arrowing decisions").add_subparsers(dest="cmd", required=True)
    _fgh_args(sub(a, "decide", cmd_arrow_decide, "decide F -> (G, H)"))
    p = sub(a, "enumerate", cmd_arrow_enumerate, "list good colorings")
    _fgh_args(p)
    p.add_argument("--limit", type=_positive, default=None)
    _fgh_args(sub(a, "minimal", cmd_arrow_minimal, "check (G, H)-minimality"))
    p = sub(a, "good", cmd_arrow_good, "check one coloring file ('c <edge> <0|1>' lines)")
    _fgh_args(p)
    p.add_argument("--coloring", required=True)

    d = groups.add_parser("gadget", help="gadget surgery and verification").add_subparsers(dest="cmd", required=True)
    p = sub(d, "join", cmd_gadget_join, "edge-join two marked graphs (first endpoints glued together)")
    p.add_argument("left")
    p.add_argument("left_edge")
    p.add_argument("right")
    p.add_argument("right_edge")
    p = sub(d, "identify", cmd_gadget_identify, "identify two vertex-disjoint marked edges of one graph")
    p.add_argument("-S", required=True)
    p.add_argument("edge1")
    p.add_argument("edge2")
    p = sub(d, "chain", cmd_gadget_chain, "chain an odd number of sender copies")
    p.add_argument("-S", required=True)
    p.add_argument("--copies", type=_positive, required=True)
    p.add_argument("--e", default="e")
    p.add_argument("--f", default="f")
    p = sub(d, "close", cmd_gadget_close, "close a 2n+1-link chain and mark u, v")
    p.add_argument("-S", required=True)
    p.add_argument("-n", type=_positive, required=True)
    p.add_argument("--far-copy", choices=("middle", "n"), default="middle")
    p = sub(d, "verify-determiner", cmd_gadget_verify_determiner, "check the determiner conditions")
    p.add_argument("-S", required=True)
    _fgh_args(p, F=False)
    p.add_argument("--signal", default="f")
    for name, func in (("verify-negative-sender", cmd_gadget_verify_negative),
                       ("verify-positive-sender", cmd_gadget_verify_positive)):
        p = sub(d, name, func, f"check the {name.split('-')[1]} sender conditions")
        p.add_argument("-S", required=True)
        _fgh_args(p, F=False)
        p.add_argument("--e", default="e")
        p.add_argument("--f", default="f")
        p.add_argument("--check-minimal", action="store_true")
    p = sub(d, "search", cmd_gadget_search, "smallest sender by exhaustive search")
    _fgh_args(p, F=False)
    p.add_argument("--polarity", choices=("negative", "positive"), default="negative")
    p.add_argument("--max-vertices", type=_positive, default=5)
    p.add_argument("--nonadjacent", action="store_true")
    p.add_argument("--prune-isomorphs", action="store_true")

    h = groups.add_parser("hanf", help="neighborhood types and Hanf censuses").add_subparsers(dest="cmd", required=True)
    p = sub(h, "types", cmd_hanf_types, "r-type of every vertex")
    p.add_argument("-F", required=True)
    p.add_argument("-r", type=int, required=True)
    p = sub(h, "census", cmd_hanf_census, "r-type multiplicities")
    p.add_argument("-F", required=True)
    p.add_argument("-r", type=int, required=True)
    p = sub(h, "equiv", cmd_hanf_equiv, "r-equivalence of two graphs")
    p.add_argument("A")
    p.add_argument("B")
    p.add_argument("-r", type=int, required=True)
    p.add_argument("--bijection", action="store_true")
    p = sub(h, "certificate", cmd_hanf_certificate, "Hanf premise check at radius 2^r")
    p.add_argument("A")
    p.add_argument("B")
    p.add_argument("-r", type=_positive, required=True)

    f = groups.add_parser("fo", help="first-order formulas").add_subparsers(dest="cmd", required=True)
    p = sub(f, "qr", cmd_fo_qr, "quantifier rank")
    p.add_argument("formula")
    p = sub(f, "eval", cmd_fo_eval, "evaluate a formula on a graph")
    p.add_argument("-F", required=True)
    p.add_argument("formula")
    p.add_argument("--assign", action="append", metavar="VAR=VERTEX")
    p = sub(f, "compare", cmd_fo_compare, "look for separating sentences of rank <= r")
    p.add_argument("A")
    p.add_argument("B")
    p.add_argument("-r", type=int, required=True)
    p.add_argument("--sentences", help="one sentence per line; default corpus otherwise")

    w = groups.add_parser("witness", help="far-apart minimal graphs and witness pairs").add_subparsers(
        dest="cmd", required=True)
    for name, func, help_ in (("build", cmd_witness_build, "chain-and-close an arrow-minimal graph"),
                              ("run", cmd_witness_run, "full pipeline to a certificate")):
        p = sub(w, name, func, help_)
        p.add_argument("-S", required=True)
        _fgh_args(p, F=False)
        p.add_argument("--waive-sender-minimality", action="store_true")
        if name == "build":
            p.add_argument("-n", type=_positive, required=True)
            p.add_argument("--far-copy", choices=("middle", "n"), default="middle")
        else:
            p.add_argument("-r", type=_positive, required=True)
            p.add_argument("-n", type=_positive, default=None, help="chain parameter (default 2^(r+1))")
    p = sub(w, "pair", cmd_witness_pair, "F1 = F + (F-{u,v}), F2 = (F-{u}) + (F-{v})")
    p.add_argument("-F", required=True, help="marked graph with vertex marks u and v")
    p = sub(w, "bijection", cmd_witness_bijection, "check the explicit type-preserving bijection")
    p.add_argument("-F", required=True)
    p.add_argument("-r", type=_positive, required=True)
    p = sub(w, "certify", cmd_witness_certify, "certify an arbitrary pair of graphs")
    p.add_argument("A")
    p.add_argument("B")
    _fgh_args(p, F=False)
    p.add_argument("-r", type=_positive, required=True)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        rep = args.func(args)
    except arrowing.BudgetExceeded as exc:
        print(f"arrowlab: {exc}", file=sys.stderr)
        return 3
    except (GraphFormatError, fo.FormulaSyntaxError, gadgets.MarkError, witness.PreconditionError,
            fo.UnboundVariable, ValueError, OSError) as exc:
        print(f"arrowlab: {exc}", file=sys.stderr)
        return 2
    if args.timings:
        rep.add("elapsed_seconds", f"{time.perf_counter() - start:.3f}")
    sys.stdout.write(rep.render(args.format))
    return rep.exit_code


if __name__ == "__main__":
    sys.exit(main())
