"""Shared oracles and random-instance generators for the test suite.

The oracles deliberately re-derive quantities by brute force (hidden-state
enumeration, truth tables) so the library code is checked against an
independent implementation rather than against itself.
"""
from pathlib import Path

import numpy as np
import pytest

import logicrbm as L
from logicrbm import formula as fm
from logicrbm.normal_forms import all_assignments

KB_DIR = Path(__file__).resolve().parent.parent / "kb"


@pytest.fixture
def kb_dir():
    return KB_DIR


# ---------------------------------------------------------------------------
# Brute-force oracles
# ---------------------------------------------------------------------------

def oracle_min_energy(m, x):
    """min_h E(x, h) by enumerating every hidden configuration."""
    best = np.inf
    for h in all_assignments(m.n_hidden):
        best = min(best, L.energy(m, x, h))
    return best


def oracle_truth_table(f, n):
    """Truth value of f on every total assignment over n propositions."""
    X = all_assignments(n)
    return X, np.array([fm.evaluate(f, fm.Assignment.total(row)) for row in X])


# ---------------------------------------------------------------------------
# Random instances
# ---------------------------------------------------------------------------

def random_rbm(rng, n_visible, n_hidden, scale=1.0, tau=1.0):
    return L.Rbm(
        W=rng.normal(0, scale, (n_visible, n_hidden)),
        a=rng.normal(0, scale, n_visible),
        b=rng.normal(0, scale, n_hidden),
        e0=float(rng.normal(0, scale)),
        tau=tau,
    )


def random_formula(rng, n_vars, depth=3):
    if depth == 0 or rng.random() < 0.3:
        v = fm.Var(int(rng.integers(n_vars)))
        return fm.Not(v) if rng.random() < 0.3 else v
    kind = rng.integers(6)
    left = random_formula(rng, n_vars, depth - 1)
    right = random_formula(rng, n_vars, depth - 1)
    if kind == 0:
        return fm.And(left, right)
    if kind == 1:
        return fm.Or(left, right)
    if kind == 2:
        return fm.Xor(left, right)
    if kind == 3:
        return fm.Iff(left, right)
    if kind == 4:
        return fm.Implies(body=left, head=right)
    return fm.Not(left)


def random_kb(rng, n_vars=6, n_formulas=5, w_low=0.1, w_high=1000.0):
    table = fm.PropositionTable([f"v{i}" for i in range(n_vars)])
    kb = fm.KnowledgeBase(table)
    for _ in range(int(rng.integers(1, n_formulas + 1))):
        kb.add(float(rng.uniform(w_low, w_high)), random_formula(rng, n_vars))
    return kb


def random_implication(rng, max_body=6, n_extra_vars=0):
    """(body_pos, body_neg, head, head_positive) over a fresh universe."""
    size = int(rng.integers(1, max_body + 1))
    variables = rng.permutation(size + 1 + n_extra_vars)[: size + 1]
    head = int(variables[0])
    body = [int(v) for v in variables[1:]]
    mask = rng.random(size) < 0.5
    body_pos = frozenset(v for v, m in zip(body, mask) if m)
    body_neg = frozenset(v for v, m in zip(body, mask) if not m)
    return body_pos, body_neg, head, bool(rng.random() < 0.8)


def implication_formula(body_pos, body_neg, head, head_positive):
    lits = [fm.Var(i) for i in sorted(body_pos)]
    lits += [fm.Not(fm.Var(i)) for i in sorted(body_neg)]
    body = lits[0]
    for lit in lits[1:]:
        body = fm.And(body, lit)
    head_f = fm.Var(head) if head_positive else fm.Not(fm.Var(head))
    return fm.Implies(body=body, head=head_f)
