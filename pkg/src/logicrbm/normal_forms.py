"""DNF / full-DNF / strict-DNF conversions.

A conjunctive clause is a pair of disjoint index sets (positive and negative
literals).  A DNF is *strict* when no assignment satisfies two of its
clauses; for conjunctive clauses this is exactly the condition that every
pair of clauses shares a complementary literal.  Strictness is what lets a
clause become a single hidden unit downstream.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import SizeLimitError
from . import formula as fm

DEFAULT_VAR_LIMIT = 20


@dataclass(frozen=True, order=True)
class ConjunctiveClause:
    pos: tuple[int, ...]
    neg: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "pos", tuple(sorted(self.pos)))
        object.__setattr__(self, "neg", tuple(sorted(self.neg)))
        if set(self.pos) & set(self.neg):
            raise ValueError("clause has a variable in both polarities")

    @property
    def is_true_clause(self) -> bool:
        return not self.pos and not self.neg

    def variables(self) -> frozenset[int]:
        return frozenset(self.pos) | frozenset(self.neg)

    def satisfied_by(self, x) -> bool:
        x = np.asarray(x)
        return bool(all(x[i] > 0.5 for i in self.pos) and all(x[i] < 0.5 for i in self.neg))

    def satisfied_batch(self, X: np.ndarray) -> np.ndarray:
        out = np.ones(len(X), dtype=bool)
        for i in self.pos:
            out &= X[:, i] > 0.5
        for i in self.neg:
            out &= X[:, i] < 0.5
        return out


@dataclass
class Dnf:
    clauses: list[ConjunctiveClause] = field(default_factory=list)
    strict: bool = False

    def satisfied_batch(self, X: np.ndarray) -> np.ndarray:
        out = np.zeros(len(X), dtype=bool)
        for c in self.clauses:
            out |= c.satisfied_batch(X)
        return out


def mutually_exclusive(c1: ConjunctiveClause, c2: ConjunctiveClause) -> bool:
    """True iff no assignment can satisfy both clauses."""
    return bool(set(c1.pos) & set(c2.neg)) or bool(set(c1.neg) & set(c2.pos))


def check_strict(clauses) -> bool:
    clauses = list(clauses)
    for i, c1 in enumerate(clauses):
        for c2 in clauses[i + 1:]:
            if not mutually_exclusive(c1, c2):
                return False
    return True


def all_assignments(n: int) -> np.ndarray:
    """All 0/1 vectors of length n, one per row, in binary counting order."""
    if n == 0:
        return np.zeros((1, 0))
    idx = np.arange(2 ** n)
    return ((idx[:, None] >> np.arange(n - 1, -1, -1)) & 1).astype(float)


def to_full_dnf(f: fm.Formula, limit: int = DEFAULT_VAR_LIMIT) -> Dnf:
    """One clause per satisfying assignment over the free variables.

    Every free variable appears in every clause, so the result is both full
    and strict.  Exponential in the number of free variables; guarded.
    """
    variables = sorted(fm.free_vars(f))
    if len(variables) > limit:
        raise SizeLimitError(
            f"{len(variables)} free variables exceeds the full-DNF limit of {limit}")
    n = (max(variables) + 1) if variables else 0
    grid = all_assignments(len(variables))
    X = np.zeros((len(grid), n))
    for col, v in enumerate(variables):
        X[:, v] = grid[:, col]
    sat = fm.evaluate_batch(f, X)
    clauses = []
    for row in grid[sat]:
        pos = tuple(v for col, v in enumerate(variables) if row[col] > 0.5)
        neg = tuple(v for col, v in enumerate(variables) if row[col] < 0.5)
        clauses.append(ConjunctiveClause(pos, neg))
    clauses.sort()
    return Dnf(clauses, strict=True)


def implication_to_sdnf(body_pos, body_neg, head: int, order=None,
                        head_positive: bool = True) -> Dnf:
    """Strict DNF of ``head <- body`` with T + K + 1 clauses.

    The first clause is the full conjunct (head plus the body literals);
    then the body variables are eliminated one by one, each contributing a
    clause over the not-yet-eliminated body literals with the eliminated
    variable's polarity flipped.  The elimination order is arbitrary for
    correctness; the default (descending index) keeps compilation
    deterministic.
    """
    body_pos = frozenset(body_pos)
    body_neg = frozenset(body_neg)
    if body_pos & body_neg:
        raise ValueError("body has a variable in both polarities")
    if head in body_pos or head in body_neg:
        raise ValueError("head variable occurs in the body")
    if order is None:
        order = sorted(body_pos | body_neg, reverse=True)
    else:
        order = list(order)
        if sorted(order) != sorted(body_pos | body_neg):
            raise ValueError("elimination order must be a permutation of the body variables")

    if head_positive:
        full = ConjunctiveClause(tuple(body_pos) + (head,), tuple(body_neg))
    else:
        full = ConjunctiveClause(tuple(body_pos), tuple(body_neg) + (head,))
    clauses = [full]
    rem_pos, rem_neg = set(body_pos), set(body_neg)
    for p in order:
        if p in rem_pos:
            rem_pos.remove(p)
            clauses.append(ConjunctiveClause(tuple(rem_pos), tuple(rem_neg) + (p,)))
        else:
            rem_neg.remove(p)
            clauses.append(ConjunctiveClause(tuple(rem_pos) + (p,), tuple(rem_neg)))
    return Dnf(clauses, strict=True)


def dnf_to_sdnf(d: Dnf, limit: int = DEFAULT_VAR_LIMIT) -> Dnf:
    """Make a DNF strict without changing its model set.

    Repeatedly take a pair of clauses that are not mutually exclusive and
    replace it with the full DNF of their disjunction over the union of
    their variables; clauses over an identical variable set are pairwise
    exclusive, so the process reaches a fixpoint.
    """
    clauses = sorted(set(d.clauses))
    guard = 0
    while True:
        guard += 1
        if guard > 10_000:
            raise RuntimeError("dnf_to_sdnf failed to reach a fixpoint")
        pair = None
        for i, c1 in enumerate(clauses):
            for j in range(i + 1, len(clauses)):
                if not mutually_exclusive(c1, clauses[j]):
                    pair = (i, j)
                    break
            if pair:
                break
        if pair is None:
            break
        i, j = pair
        c1, c2 = clauses[i], clauses[j]
        union = sorted(c1.variables() | c2.variables())
        if len(union) > limit:
            raise SizeLimitError(
                f"strictness patch needs a full DNF over {len(union)} variables (limit {limit})")
        grid = all_assignments(len(union))
        replacement = []
        for row in grid:
            vals = dict(zip(union, row))
            def holds(c):
                return (all(vals.get(v, 0) > 0.5 for v in c.pos)
                        and all(vals.get(v, 1) < 0.5 for v in c.neg))
            if holds(c1) or holds(c2):
                pos = tuple(v for v in union if vals[v] > 0.5)
                neg = tuple(v for v in union if vals[v] < 0.5)
                replacement.append(ConjunctiveClause(pos, neg))
        clauses = sorted(set(clauses[:i] + clauses[i + 1:j] + clauses[j + 1:] + replacement))
    return Dnf(clauses, strict=True)
