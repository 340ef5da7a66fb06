"""Proposition universe, formula ASTs, parsing, and truth evaluation.

The knowledge-base text format is line oriented:

    [<weight> :] <formula>      # comment

with connectives ``~`` (not), ``&`` (and), ``|`` (or), ``^`` (xor),
``<-`` / ``->`` (implication) and ``<->`` (iff).  Implications are stored
head-first: ``r <- n`` and ``n -> r`` both parse to the same AST.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .errors import ParseError


class PropositionTable:
    """Ordered registry of proposition names.

    The order of first appearance fixes the visible-unit order of every
    network compiled downstream, so it must be deterministic.
    """

    def __init__(self, names=()):
        self.names: list[str] = []
        self.index: dict[str, int] = {}
        for name in names:
            self.add(name)

    def add(self, name: str) -> int:
        if not name:
            raise ValueError("proposition name must be non-empty")
        if name in self.index:
            return self.index[name]
        self.index[name] = len(self.names)
        self.names.append(name)
        return self.index[name]

    def __len__(self) -> int:
        return len(self.names)

    def __contains__(self, name) -> bool:
        return name in self.index

    def __repr__(self):
        return f"PropositionTable({self.names!r})"


# ---------------------------------------------------------------------------
# Formula AST
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Formula:
    pass


@dataclass(frozen=True)
class Var(Formula):
    index: int


@dataclass(frozen=True)
class Not(Formula):
    operand: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    """Implication, stored as head <- body."""
    body: Formula
    head: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Xor(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Const(Formula):
    value: bool


TRUE = Const(True)
FALSE = Const(False)


def free_vars(f: Formula) -> frozenset[int]:
    if isinstance(f, Var):
        return frozenset((f.index,))
    if isinstance(f, Not):
        return free_vars(f.operand)
    if isinstance(f, Implies):
        return free_vars(f.body) | free_vars(f.head)
    if isinstance(f, (And, Or, Iff, Xor)):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, Const):
        return frozenset()
    raise TypeError(f"not a formula node: {f!r}")


# ---------------------------------------------------------------------------
# Assignments
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Assignment:
    """Total or partial truth assignment over a universe of n propositions."""

    values: dict[int, bool]
    n: int

    def __post_init__(self):
        for i in self.values:
            if not 0 <= i < self.n:
                raise ValueError(f"proposition index {i} outside universe of size {self.n}")

    @classmethod
    def total(cls, bits, n=None) -> "Assignment":
        bits = list(bits)
        n = len(bits) if n is None else n
        return cls({i: bool(v) for i, v in enumerate(bits)}, n)

    @property
    def is_total(self) -> bool:
        return len(self.values) == self.n

    def assigned(self) -> tuple[int, ...]:
        return tuple(sorted(self.values))

    def unassigned(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.n) if i not in self.values)

    def to_vector(self) -> np.ndarray:
        if not self.is_total:
            raise ValueError("partial assignment has no total vector")
        return np.array([float(self.values[i]) for i in range(self.n)])

    def __getitem__(self, i: int) -> bool:
        return self.values[i]


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def evaluate(f: Formula, a: Assignment) -> bool:
    """Truth value of f under a; a must cover the free variables of f."""
    if isinstance(f, Var):
        try:
            return a.values[f.index]
        except KeyError:
            raise ValueError(f"unassigned free variable {f.index}") from None
    if isinstance(f, Not):
        return not evaluate(f.operand, a)
    if isinstance(f, And):
        return evaluate(f.left, a) and evaluate(f.right, a)
    if isinstance(f, Or):
        return evaluate(f.left, a) or evaluate(f.right, a)
    if isinstance(f, Implies):
        return (not evaluate(f.body, a)) or evaluate(f.head, a)
    if isinstance(f, Iff):
        return evaluate(f.left, a) == evaluate(f.right, a)
    if isinstance(f, Xor):
        return evaluate(f.left, a) != evaluate(f.right, a)
    if isinstance(f, Const):
        return f.value
    raise TypeError(f"not a formula node: {f!r}")


def evaluate_batch(f: Formula, X: np.ndarray) -> np.ndarray:
    """Vectorised truth values over the rows of a 0/1 assignment matrix."""
    if isinstance(f, Var):
        return X[:, f.index] > 0.5
    if isinstance(f, Not):
        return ~evaluate_batch(f.operand, X)
    if isinstance(f, And):
        return evaluate_batch(f.left, X) & evaluate_batch(f.right, X)
    if isinstance(f, Or):
        return evaluate_batch(f.left, X) | evaluate_batch(f.right, X)
    if isinstance(f, Implies):
        return ~evaluate_batch(f.body, X) | evaluate_batch(f.head, X)
    if isinstance(f, Iff):
        return evaluate_batch(f.left, X) == evaluate_batch(f.right, X)
    if isinstance(f, Xor):
        return evaluate_batch(f.left, X) != evaluate_batch(f.right, X)
    if isinstance(f, Const):
        return np.full(len(X), f.value)
    raise TypeError(f"not a formula node: {f!r}")


# ---------------------------------------------------------------------------
# Knowledge bases
# ---------------------------------------------------------------------------

@dataclass
class KnowledgeBase:
    table: PropositionTable
    items: list[tuple[float, Formula]] = field(default_factory=list)

    def add(self, weight: float, f: Formula):
        if not np.isfinite(weight):
            raise ValueError("formula weight must be finite")
        self.items.append((float(weight), f))


def weighted_sat(kb: KnowledgeBase, a: Assignment) -> float:
    """Sum of the weights of the formulas true under a total assignment."""
    return float(sum(w for w, f in kb.items if evaluate(f, a)))


def weighted_sat_batch(kb: KnowledgeBase, X: np.ndarray) -> np.ndarray:
    out = np.zeros(len(X))
    for w, f in kb.items:
        out += w * evaluate_batch(f, X)
    return out


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op><->|<-|->|[~&|^()]))"
)


def _tokenize(text, line_no=1):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            col = pos + (len(text[pos:]) - len(stripped)) + 1
            raise ParseError(f"unexpected character {stripped[0]!r}", line_no, col)
        if m.lastgroup:  # skip pure-whitespace matches
            tokens.append((m.lastgroup, m.group(m.lastgroup), line_no, m.start(m.lastgroup) + 1))
        pos = m.end()
    return tokens


class _Parser:
    """Recursive-descent parser.

    Precedence, loosest first:  <-> / <- / ->  <  ^  <  |  <  &  <  ~
    Implication and iff associate to the right.
    """

    def __init__(self, tokens, table, line_no=1):
        self.tokens = tokens
        self.table = table
        self.i = 0
        self.line_no = line_no

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self.line_no, None)
        self.i += 1
        return tok

    def parse(self) -> Formula:
        f = self.implication()
        tok = self.peek()
        if tok is not None:
            raise ParseError(f"unexpected token {tok[1]!r}", tok[2], tok[3])
        return f

    def implication(self) -> Formula:
        left = self.xor()
        tok = self.peek()
        if tok and tok[1] in ("<-", "->", "<->"):
            self.take()
            right = self.implication()
            if tok[1] == "<-":
                return Implies(body=right, head=left)
            if tok[1] == "->":
                return Implies(body=left, head=right)
            return Iff(left, right)
        return left

    def xor(self) -> Formula:
        f = self.disjunction()
        while self.peek() and self.peek()[1] == "^":
            self.take()
            f = Xor(f, self.disjunction())
        return f

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.peek() and self.peek()[1] == "|":
            self.take()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.unary()
        while self.peek() and self.peek()[1] == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        tok = self.take()
        kind, text, ln, col = tok
        if text == "~":
            return Not(self.unary())
        if text == "(":
            f = self.implication()
            close = self.peek()
            if close is None or close[1] != ")":
                raise ParseError("expected ')'", ln, col)
            self.take()
            return f
        if kind == "name":
            return Var(self.table.add(text))
        raise ParseError(f"unexpected token {text!r}", ln, col)


def parse_formula(text: str, table: PropositionTable, line_no: int = 1) -> Formula:
    """Parse a single formula, appending new proposition names to the table."""
    tokens = _tokenize(text, line_no)
    if not tokens:
        raise ParseError("empty formula", line_no, 1)
    return _Parser(tokens, table, line_no).parse()


def parse_kb(text: str, table: PropositionTable | None = None) -> KnowledgeBase:
    """Parse a knowledge-base file; unweighted lines default to weight 1.0."""
    table = PropositionTable() if table is None else table
    kb = KnowledgeBase(table)
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        weight = 1.0
        if ":" in line:
            left, line = line.split(":", 1)
            try:
                weight = float(left)
            except ValueError:
                raise ParseError(f"bad weight {left.strip()!r}", line_no, 1) from None
        kb.add(weight, parse_formula(line, table, line_no))
    return kb


def load_kb(path) -> KnowledgeBase:
    with open(path, encoding="utf-8") as fh:
        return parse_kb(fh.read())


# ---------------------------------------------------------------------------
# Printing (inverse of the parser up to whitespace)
# ---------------------------------------------------------------------------

def format_formula(f: Formula, table: PropositionTable | None = None) -> str:
    def name(i):
        return table.names[i] if table is not None else f"x{i}"

    def atom(g):
        # parenthesise anything that is not an atom or a negation
        s = fmt(g)
        if isinstance(g, (Var, Const, Not)):
            return s
        return f"({s})"

    def fmt(g):
        if isinstance(g, Var):
            return name(g.index)
        if isinstance(g, Const):
            return "(x0 | ~x0)" if g.value else "(x0 & ~x0)"  # no literal constants in the grammar
        if isinstance(g, Not):
            return f"~{atom(g.operand)}"
        if isinstance(g, And):
            return f"{atom(g.left)} & {atom(g.right)}"
        if isinstance(g, Or):
            return f"{atom(g.left)} | {atom(g.right)}"
        if isinstance(g, Xor):
            return f"{atom(g.left)} ^ {atom(g.right)}"
        if isinstance(g, Iff):
            return f"{atom(g.left)} <-> {atom(g.right)}"
        if isinstance(g, Implies):
            return f"{atom(g.head)} <- {atom(g.body)}"
        raise TypeError(f"not a formula node: {g!r}")

    return fmt(f)
