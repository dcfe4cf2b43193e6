"""First-order formulas over the graph vocabulary ``E``.

Concrete syntax::

    forall x. phi      exists x. phi       (the body extends as far right as possible)
    phi -> psi         phi <-> psi         (sugar, expanded at parse time)
    phi | psi          phi & psi           !phi
    E(x, y)            x = y               ( phi )

Precedence from loosest to tightest: quantifier body, ``<->``, ``->``
(right associative), ``|``, ``&``, ``!``.
"""

from __future__ import annotations

import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping, Union

from .graph import Graph


@dataclass(frozen=True)
class Edge:
    left: str
    right: str


@dataclass(frozen=True)
class Equal:
    left: str
    right: str


@dataclass(frozen=True)
class Not:
    body: Formula


@dataclass(frozen=True)
class And:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Forall:
    var: str
    body: Formula


@dataclass(frozen=True)
class Exists:
    var: str
    body: Formula


Formula = Union[Edge, Equal, Not, And, Or, Forall, Exists]
Assignment = Mapping[str, int]


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.line = text.count("\n", 0, pos) + 1
        self.column = pos - (text.rfind("\n", 0, pos) + 1) + 1
        super().__init__(f"{message} at line {self.line}, column {self.column}")


class UnboundVariable(ValueError):
    pass


# -- parsing --------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(<->|->|[()&|!.,=])|([a-z][a-z0-9_]*)|(E)(?![A-Za-z0-9_]))")
_KEYWORDS = {"forall", "exists"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos == len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("op", m.group(1), start))
        elif m.group(2):
            word = m.group(2)
            tokens.append(("kw" if word in _KEYWORDS else "id", word, start))
        else:
            tokens.append(("E", "E", start))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def error(self, message: str):
        raise FormulaSyntaxError(message, self.text, self.peek()[2])

    def take(self, kind: str, value: str | None = None) -> str:
        k, v, _ = self.peek()
        if k != kind or (value is not None and v != value):
            want = value or kind
            self.error(f"expected {want!r}, found {v or 'end of input'!r}")
        self.i += 1
        return v

    def at(self, kind: str, value: str | None = None) -> bool:
        k, v, _ = self.peek()
        return k == kind and (value is None or v == value)

    def formula(self) -> Formula:
        if self.at("kw"):
            return self.quantified()
        left = self.implication()
        if self.at("op", "<->"):
            self.take("op", "<->")
            right = self.formula()
            return Or(And(left, right), And(Not(left), Not(right)))
        return left

    def quantified(self) -> Formula:
        kw = self.take("kw")
        var = self.take("id")
        self.take("op", ".")
        body = self.formula()
        return Forall(var, body) if kw == "forall" else Exists(var, body)

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.at("op", "->"):
            self.take("op", "->")
            right = self.quantified() if self.at("kw") else self.implication()
            return Or(Not(left), right)
        return left

    def disjunction(self) -> Formula:
        node = self.conjunction()
        while self.at("op", "|"):
            self.take("op", "|")
            node = Or(node, self.quantified() if self.at("kw") else self.conjunction())
        return node

    def conjunction(self) -> Formula:
        node = self.unary()
        while self.at("op", "&"):
            self.take("op", "&")
            node = And(node, self.quantified() if self.at("kw") else self.unary())
        return node

    def unary(self) -> Formula:
        if self.at("op", "!"):
            self.take("op", "!")
            return Not(self.quantified() if self.at("kw") else self.unary())
        if self.at("op", "("):
            self.take("op", "(")
            inner = self.formula()
            self.take("op", ")")
            return inner
        if self.at("E"):
            self.take("E")
            self.take("op", "(")
            a = self.take("id")
            self.take("op", ",")
            b = self.take("id")
            self.take("op", ")")
            return Edge(a, b)
        if self.at("id"):
            a = self.take("id")
            self.take("op", "=")
            return Equal(a, self.take("id"))
        if self.at("kw"):
            return self.quantified()
        self.error(f"unexpected {self.peek()[1] or 'end of input'!r}")


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    phi = p.formula()
    if not p.at("eof"):
        p.error(f"trailing input {p.peek()[1]!r}")
    return phi


def format_formula(phi: Formula) -> str:
    """Fully parenthesized rendering that parses back to the same tree."""
    if isinstance(phi, Edge):
        return f"E({phi.left},{phi.right})"
    if isinstance(phi, Equal):
        return f"{phi.left}={phi.right}"
    if isinstance(phi, Not):
        return "!" + _wrap(phi.body)
    if isinstance(phi, And):
        return f"({format_formula(phi.left)} & {format_formula(phi.right)})"
    if isinstance(phi, Or):
        return f"({format_formula(phi.left)} | {format_formula(phi.right)})"
    kw = "forall" if isinstance(phi, Forall) else "exists"
    return f"({kw} {phi.var}. {format_formula(phi.body)})"


def _wrap(phi: Formula) -> str:
    text = format_formula(phi)
    return f"({text})" if isinstance(phi, Equal) else text


# -- syntactic measures -------------------------------------------------------------

def quantifier_rank(phi: Formula) -> int:
    if isinstance(phi, (Edge, Equal)):
        return 0
    if isinstance(phi, Not):
        return quantifier_rank(phi.body)
    if isinstance(phi, (And, Or)):
        return max(quantifier_rank(phi.left), quantifier_rank(phi.right))
    return quantifier_rank(phi.body) + 1


def free_variables(phi: Formula) -> frozenset[str]:
    if isinstance(phi, (Edge, Equal)):
        return frozenset((phi.left, phi.right))
    if isinstance(phi, Not):
        return free_variables(phi.body)
    if isinstance(phi, (And, Or)):
        return free_variables(phi.left) | free_variables(phi.right)
    return free_variables(phi.body) - {phi.var}


def is_sentence(phi: Formula) -> bool:
    return not free_variables(phi)


def size(phi: Formula) -> int:
    if isinstance(phi, (Edge, Equal)):
        return 1
    if isinstance(phi, (Not, Forall, Exists)):
        return 1 + size(phi.body)
    return 1 + size(phi.left) + size(phi.right)


# -- evaluation ----------------------------------------------------------------------

def evaluate(A: Graph, phi: Formula, assignment: Assignment | None = None) -> bool:
    env = dict(assignment or {})
    missing = free_variables(phi) - env.keys()
    if missing:
        raise UnboundVariable(f"unbound free variables: {', '.join(sorted(missing))}")
    for var, v in env.items():
        if not 0 <= v < A.n:
            raise ValueError(f"{var}={v} is not a vertex")
    return _eval(A, phi, env)


def _eval(A: Graph, phi: Formula, env: dict[str, int]) -> bool:
    if isinstance(phi, Edge):
        return A.has_edge(env[phi.left], env[phi.right])
    if isinstance(phi, Equal):
        return env[phi.left] == env[phi.right]
    if isinstance(phi, Not):
        return not _eval(A, phi.body, env)
    if isinstance(phi, And):
        return _eval(A, phi.left, env) and _eval(A, phi.right, env)
    if isinstance(phi, Or):
        return _eval(A, phi.left, env) or _eval(A, phi.right, env)
    saved = env.get(phi.var)
    want = isinstance(phi, Exists)
    result = not want
    for v in range(A.n):
        env[phi.var] = v
        if _eval(A, phi.body, env) == want:
            result = want
            break
    if saved is None:
        env.pop(phi.var, None)
    else:
        env[phi.var] = saved
    return result


# -- corpus ----------------------------------------------------------------------------

CURATED = [
    "exists x. x = x",
    "exists x. exists y. !(x = y)",
    "exists x. exists y. E(x,y)",
    "forall x. !E(x,x)",
    "forall x. forall y. (E(x,y) -> E(y,x))",
    "exists x. forall y. !E(x,y)",
    "forall x. exists y. E(x,y)",
    "forall x. exists y. exists z. (E(x,y) & E(x,z) & !(y = z))",
    "exists x. exists y. exists z. (E(x,y) & E(y,z) & E(x,z))",
    "exists x. exists y. exists z. (E(x,y) & E(x,z) & !(y = z) & !E(y,z))",
    "forall x. forall y. (E(x,y) -> exists z. (E(y,z) & !(z = x)))",
    "exists x. forall y. forall z. ((E(x,y) & E(x,z)) -> y = z)",
    "forall x. forall y. forall z. (E(x,y) & E(x,z) & E(y,z) -> x = x)",
    # two vertices at distance 3 such that every neighbor of the first has a
    # common neighbor with the second: true in C6, false in C12
    "exists x. exists y. (!(x = y) & !E(x,y) & !(exists z. (E(x,z) & E(z,y)))"
    " & (exists z. (E(x,z) & exists x. (E(z,x) & E(x,y))))"
    " & (forall z. (E(x,z) -> exists x. (E(z,x) & E(x,y)))))",
]

_VARS = ("x", "y", "z")


def _enumerate_formulas(max_nodes: int, max_rank: int) -> dict[int, set[Formula]]:
    """All formulas by node count, built from atoms, !, &, | and quantifiers."""
    atoms: set[Formula] = set()
    for a, b in product(_VARS, repeat=2):
        if a <= b:
            atoms.add(Edge(a, b))
            atoms.add(Equal(a, b))
    by_size: dict[int, set[Formula]] = {1: atoms}
    for s in range(2, max_nodes + 1):
        out: set[Formula] = set()
        for phi in by_size[s - 1]:
            if not isinstance(phi, Not):
                out.add(Not(phi))
            if quantifier_rank(phi) < max_rank:
                for v in _VARS:
                    if v in free_variables(phi):
                        out.add(Exists(v, phi))
                        out.add(Forall(v, phi))
        for ls in range(1, s - 1):
            rs = s - 1 - ls
            if rs < ls:
                continue
            for left in by_size[ls]:
                for right in by_size[rs]:
                    if ls == rs and repr(right) <= repr(left):
                        continue
                    out.add(And(left, right))
                    out.add(Or(left, right))
        by_size[s] = out
    return by_size


def default_corpus(max_rank: int = 3, max_nodes: int = 6) -> list[Formula]:
    """Curated sentences plus every enumerated sentence up to ``max_nodes`` nodes.

    A spot check, not an exhaustive search over all sentences of a rank.
    """
    seen: set[Formula] = set()
    corpus: list[Formula] = []
    for text in CURATED:
        phi = parse_formula(text)
        if phi not in seen:
            seen.add(phi)
            corpus.append(phi)
    generated = _enumerate_formulas(max_nodes, max_rank)
    for s in sorted(generated):
        for phi in sorted((p for p in generated[s] if is_sentence(p)), key=format_formula):
            if phi not in seen:
                seen.add(phi)
                corpus.append(phi)
    return corpus


def parse_sentences(text: str) -> list[Formula]:
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            out.append(parse_formula(line))
        except FormulaSyntaxError as exc:
            raise FormulaSyntaxError(f"sentence on line {lineno}: {exc}", line, 0) from None
    return out


@dataclass(frozen=True)
class ComparisonRow:
    sentence: str
    rank: int
    value_a: bool
    value_b: bool

    @property
    def agree(self) -> bool:
        return self.value_a == self.value_b


@dataclass(frozen=True)
class ComparisonReport:
    rank: int
    rows: tuple[ComparisonRow, ...]
    skipped: int

    @property
    def separating(self) -> list[str]:
        return [row.sentence for row in self.rows if not row.agree]


def compare_models(A: Graph, B: Graph, corpus: Iterable[Formula], r: int,
                   workers: int = 1) -> ComparisonReport:
    """Evaluate each corpus sentence of rank at most ``r`` on both graphs."""
    corpus = list(corpus)
    for phi in corpus:
        if not is_sentence(phi):
            raise ValueError(f"not a sentence: {format_formula(phi)}")
    chosen = [phi for phi in corpus if quantifier_rank(phi) <= r]

    def row(phi: Formula) -> ComparisonRow:
        return ComparisonRow(format_formula(phi), quantifier_rank(phi), evaluate(A, phi), evaluate(B, phi))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(row, chosen))
    else:
        rows = [row(phi) for phi in chosen]
    return ComparisonReport(r, tuple(rows), len(corpus) - len(chosen))
