"""Knowledge base -> RBM constructions.

The core construction assigns one hidden unit to each conjunctive clause of
a strict DNF: connection weights +-c on the clause's literals and hidden
bias c * (-T + eps), where T is the number of positive literals, c the
clause's confidence value and 0 < eps < 1.  The unit's net input is then
c*eps exactly when the clause holds and at most -c*(1 - eps) otherwise, so
the minimised energy satisfies

    weighted_sat(x) = -E_rank(x) / eps

for every total assignment.  Implications get a compact K+T-unit network in
which the last eliminated body variable collapses to a visible bias.  Two
comparison baselines are provided: the Penalty-logic quadratic form for
Horn clauses and the one-unit-per-model universal-approximator network.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import SizeLimitError
from . import formula as fm
from .normal_forms import (
    ConjunctiveClause, Dnf, DEFAULT_VAR_LIMIT,
    implication_to_sdnf, to_full_dnf,
)
from .rbm import Rbm


@dataclass(frozen=True)
class WeightedClause:
    clause: ConjunctiveClause
    c: float

    def __post_init__(self):
        if self.c < 0:
            raise ValueError("confidence value must be non-negative")


@dataclass
class ClauseBase:
    table: fm.PropositionTable
    clauses: list[WeightedClause] = field(default_factory=list)


@dataclass
class CompileOptions:
    epsilon: float = 0.5
    elimination_order: str = "descending"   # "descending" | "ascending"
    subsumption_merge: bool = False
    var_limit: int = DEFAULT_VAR_LIMIT

    def __post_init__(self):
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")
        if self.elimination_order not in ("descending", "ascending"):
            raise ValueError("elimination_order must be 'descending' or 'ascending'")

    def order(self, body) -> list[int]:
        return sorted(body, reverse=self.elimination_order == "descending")


def _annotation(clause: ConjunctiveClause, c: float) -> dict:
    return {"pos": list(clause.pos), "neg": list(clause.neg), "confidence": float(c)}


def _infer_n_visible(clauses, n_visible, extra=()):
    if n_visible is not None:
        return n_visible
    top = -1
    for cl in clauses:
        if cl.variables():
            top = max(top, max(cl.variables()))
    for i in extra:
        top = max(top, i)
    return top + 1


def compile_sdnf(d: Dnf, opts: CompileOptions | None = None,
                 n_visible: int | None = None,
                 confidences=None, names=None) -> Rbm:
    """One hidden unit per clause of a strict DNF (Theorem-1 construction)."""
    opts = opts or CompileOptions()
    if not d.strict:
        raise ValueError("compile_sdnf requires a strict DNF")
    n_visible = _infer_n_visible(d.clauses, n_visible)
    if confidences is None:
        confidences = [1.0] * len(d.clauses)
    W = np.zeros((n_visible, len(d.clauses)))
    b = np.zeros(len(d.clauses))
    annotations = []
    for j, (cl, c) in enumerate(zip(d.clauses, confidences)):
        W[list(cl.pos), j] = c
        W[list(cl.neg), j] = -c
        b[j] = c * (-len(cl.pos) + opts.epsilon)
        annotations.append(_annotation(cl, c))
    return Rbm(W=W, a=np.zeros(n_visible), b=b, e0=0.0, tau=1.0,
               names=names, epsilon=opts.epsilon, clause_annotations=annotations)


def compile_implication(body_pos, body_neg, head: int,
                        opts: CompileOptions | None = None,
                        n_visible: int | None = None,
                        confidence: float = 1.0,
                        head_positive: bool = True,
                        names=None) -> Rbm:
    """Compact K+T-hidden-unit network for ``head <- body``.

    All clauses of the implication SDNF except the last eliminated
    variable's become hidden units; the final single-literal clause reduces
    to a visible bias (plus a constant when the literal is negative), which
    is pointwise identical in E_rank.
    """
    if confidence < 0:
        raise ValueError("confidence value must be non-negative")
    opts = opts or CompileOptions()
    order = opts.order(frozenset(body_pos) | frozenset(body_neg))
    sdnf = implication_to_sdnf(body_pos, body_neg, head, order=order,
                               head_positive=head_positive)
    n_visible = _infer_n_visible(sdnf.clauses, n_visible, extra=(head,))
    eps = opts.epsilon
    c = confidence

    unit_clauses = sdnf.clauses if not order else sdnf.clauses[:-1]
    W = np.zeros((n_visible, len(unit_clauses)))
    b = np.zeros(len(unit_clauses))
    a = np.zeros(n_visible)
    e0 = 0.0
    annotations = []
    for j, cl in enumerate(unit_clauses):
        W[list(cl.pos), j] = c
        W[list(cl.neg), j] = -c
        b[j] = c * (-len(cl.pos) + eps)
        annotations.append(_annotation(cl, c))
    if order:
        last = sdnf.clauses[-1]
        if last.pos:                      # clause {p}: energy term -c*eps*x_p
            a[last.pos[0]] = c * eps
        else:                             # clause {~p}: -c*eps*(1 - x_p)
            a[last.neg[0]] = -c * eps
            e0 = -c * eps
    return Rbm(W=W, a=a, b=b, e0=e0, tau=1.0, names=names,
               epsilon=eps, clause_annotations=annotations)


def match_implication(f: fm.Formula):
    """(body_pos, body_neg, head, head_positive) if f is a literal implication."""
    if not isinstance(f, fm.Implies):
        return None

    def literal(g):
        if isinstance(g, fm.Var):
            return g.index, True
        if isinstance(g, fm.Not) and isinstance(g.operand, fm.Var):
            return g.operand.index, False
        return None

    head = literal(f.head)
    if head is None:
        return None
    pos, neg = set(), set()
    stack = [f.body]
    while stack:
        g = stack.pop()
        if isinstance(g, fm.And):
            stack += [g.left, g.right]
            continue
        lit = literal(g)
        if lit is None:
            return None
        (pos if lit[1] else neg).add(lit[0])
    if pos & neg or head[0] in pos or head[0] in neg:
        return None
    return frozenset(pos), frozenset(neg), head[0], head[1]


def formula_to_sdnf_clauses(f: fm.Formula, opts: CompileOptions) -> list[ConjunctiveClause]:
    """Strict-DNF clauses of a formula: implication fast path, else full DNF."""
    imp = match_implication(f)
    if imp is not None:
        body_pos, body_neg, head, head_positive = imp
        order = opts.order(body_pos | body_neg)
        return list(implication_to_sdnf(body_pos, body_neg, head, order=order,
                                        head_positive=head_positive).clauses)
    return list(to_full_dnf(f, limit=opts.var_limit).clauses)


def merge_clauses(clauses, subsumption: bool = False) -> list[WeightedClause]:
    """Merge identical clauses by summing confidences; optional subsumption.

    With subsumption on, a clause whose literal set is a strict superset of
    another's is removed and its confidence added to the more general
    clause.  This changes weighted-satisfiability semantics, which is why
    it is off by default.
    """
    merged: dict[ConjunctiveClause, float] = {}
    for wc in clauses:
        merged[wc.clause] = merged.get(wc.clause, 0.0) + wc.c
    if subsumption:
        changed = True
        while changed:
            changed = False
            order = sorted(merged, key=lambda cl: (len(cl.pos) + len(cl.neg), cl))
            for specific in reversed(order):
                for general in order:
                    if general is specific:
                        continue
                    if set(general.pos) <= set(specific.pos) \
                            and set(general.neg) <= set(specific.neg) \
                            and general != specific:
                        merged[general] += merged.pop(specific)
                        changed = True
                        break
                if changed:
                    break
    return [WeightedClause(cl, merged[cl]) for cl in sorted(merged)]


def compile_kb(kb: fm.KnowledgeBase, opts: CompileOptions | None = None
               ) -> tuple[Rbm, ClauseBase]:
    """Weighted KB -> RBM with weighted_sat(x) = -E_rank(x) / eps."""
    opts = opts or CompileOptions()
    weighted = []
    for w, f in kb.items:
        if w < 0:
            raise ValueError("negative formula weights are not compilable")
        for cl in formula_to_sdnf_clauses(f, opts):
            weighted.append(WeightedClause(cl, w))
    merged = merge_clauses(weighted, subsumption=opts.subsumption_merge)

    n = len(kb.table)
    units = [wc for wc in merged if not wc.clause.is_true_clause]
    e0 = -opts.epsilon * sum(wc.c for wc in merged if wc.clause.is_true_clause)
    W = np.zeros((n, len(units)))
    b = np.zeros(len(units))
    annotations = []
    for j, wc in enumerate(units):
        W[list(wc.clause.pos), j] = wc.c
        W[list(wc.clause.neg), j] = -wc.c
        b[j] = wc.c * (-len(wc.clause.pos) + opts.epsilon)
        annotations.append(_annotation(wc.clause, wc.c))
    m = Rbm(W=W, a=np.zeros(n), b=b, e0=e0, tau=1.0,
            names=list(kb.table.names), epsilon=opts.epsilon,
            clause_annotations=annotations)
    return m, ClauseBase(kb.table, merged)


def compile_penalty_horn(body_pos, head: int, epsilon: float = 0.5,
                         n_visible: int | None = None,
                         confidence: float = 1.0, names=None,
                         opts: CompileOptions | None = None) -> Rbm:
    """Penalty-logic quadratic network for a Horn clause ``head <- body``.

    Every clause of the implication SDNF becomes a hidden unit with doubled
    parameters, plus a constant offset of +1, which realises
    E_penalty(x) = 2 * E_sdnf(x) + 1 pointwise at epsilon = 0.5.
    """
    body_pos = frozenset(body_pos)
    opts = opts or CompileOptions(epsilon=epsilon)
    order = opts.order(body_pos)
    sdnf = implication_to_sdnf(body_pos, (), head, order=order)
    n_visible = _infer_n_visible(sdnf.clauses, n_visible, extra=(head,))
    W = np.zeros((n_visible, len(sdnf.clauses)))
    b = np.zeros(len(sdnf.clauses))
    for j, cl in enumerate(sdnf.clauses):
        W[list(cl.pos), j] = 2.0 * confidence
        W[list(cl.neg), j] = -2.0 * confidence
        b[j] = 2.0 * confidence * (-len(cl.pos) + opts.epsilon)
    return Rbm(W=W, a=np.zeros(n_visible), b=b, e0=1.0 * confidence, tau=1.0,
               names=names, epsilon=opts.epsilon)


def compile_universal(d: Dnf, lam: float = 0.5,
                      n_visible: int | None = None, names=None) -> Rbm:
    """One hidden unit per preferred model of a full DNF.

    Each clause is a total model v; its unit gets weights v - 1/2 and bias
    -w.v + lam.  For 0 < lam <= 1/2 the net input is lam exactly on v and
    strictly negative elsewhere, so s(x) = -E_rank(x) / lam.
    """
    if not d.clauses:
        raise ValueError("universal construction needs at least one model")
    varset = d.clauses[0].variables()
    for cl in d.clauses:
        if cl.variables() != varset:
            raise ValueError("compile_universal requires a full DNF (total-model clauses)")
    n_visible = _infer_n_visible(d.clauses, n_visible)
    W = np.zeros((n_visible, len(d.clauses)))
    b = np.zeros(len(d.clauses))
    for j, cl in enumerate(d.clauses):
        W[list(cl.pos), j] = 0.5
        W[list(cl.neg), j] = -0.5
        b[j] = -0.5 * len(cl.pos) + lam
    return Rbm(W=W, a=np.zeros(n_visible), b=b, e0=0.0, tau=1.0,
               names=names, epsilon=lam)


def attach_hidden_units(m: Rbm, count: int, init_scale: float, rng) -> Rbm:
    """Append free hidden units with uniform random parameters."""
    if count < 0:
        raise ValueError("count must be >= 0")
    out = m.copy()
    if count == 0:
        return out
    extraW = rng.uniform(-init_scale, init_scale, size=(m.n_visible, count))
    extrab = rng.uniform(-init_scale, init_scale, size=count)
    out.W = np.hstack([out.W, extraW])
    out.b = np.concatenate([out.b, extrab])
    if out.clause_annotations is not None:
        out.clause_annotations = list(out.clause_annotations) + [None] * count
    return out
