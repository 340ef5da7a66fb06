"""Query answering over compiled networks.

Minimising E_rank over completions of the evidence is the same search as
maximising weighted satisfiability, so the module offers: an exhaustive
MaxSAT oracle, annealed Gibbs search, zero-temperature coordinate descent,
exact conditional inference over a small target set, and an enumeration
check that a network really is equivalent to its knowledge base.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import SizeLimitError
from . import formula as fm
from .formula import Assignment, KnowledgeBase, weighted_sat_batch
from .normal_forms import all_assignments
from .rbm import Rbm, energy_rank, free_energy, net_hidden, net_visible, _sigmoid

BRUTE_LIMIT = 24
VERIFY_LIMIT = 16
CONDITIONAL_LIMIT = 16


@dataclass
class Query:
    evidence: Assignment
    targets: tuple[int, ...] = ()
    mode: str = "gibbs"          # gibbs | deterministic | conditional | exact

    def __post_init__(self):
        self.targets = tuple(self.targets)
        if set(self.targets) & set(self.evidence.values):
            raise ValueError("targets and evidence must be disjoint")


@dataclass
class GibbsConfig:
    steps: int = 200
    restarts: int = 10
    tau_start: float = 1.0
    tau_end: float = 0.05
    seed: int = 0


@dataclass
class DeterministicConfig:
    sweeps: int = 100
    restarts: int = 10
    seed: int = 0


@dataclass
class InferenceReport:
    assignment: dict[int, bool] | None = None
    probabilities: dict | None = None
    energy_rank: float | None = None
    weighted_sat: float | None = None
    steps: int = 0
    restarts: int = 0
    energy_trace: list = field(default_factory=list)

    def vector(self, n) -> np.ndarray:
        return np.array([float(self.assignment[i]) for i in range(n)])


def _completions(evidence: Assignment) -> np.ndarray:
    free = evidence.unassigned()
    grid = all_assignments(len(free))
    X = np.zeros((len(grid), evidence.n))
    for i, v in evidence.values.items():
        X[:, i] = float(v)
    for col, i in enumerate(free):
        X[:, i] = grid[:, col]
    return X


def brute_force_maxsat(kb: KnowledgeBase, evidence: Assignment,
                       limit: int = BRUTE_LIMIT):
    """Exhaustive argmax of weighted_sat over completions; returns all ties."""
    if len(evidence.unassigned()) > limit:
        raise SizeLimitError(
            f"{len(evidence.unassigned())} unassigned variables exceeds limit {limit}")
    X = _completions(evidence)
    scores = weighted_sat_batch(kb, X)
    best = scores.max()
    winners = X[np.isclose(scores, best, rtol=0, atol=1e-9)]
    winners = sorted(tuple(int(v) for v in row) for row in winners)
    return winners, float(best)


def _report_from_state(m: Rbm, x, steps, restarts, trace) -> InferenceReport:
    er = energy_rank(m, x)
    ws = None if m.epsilon is None else -er / m.epsilon
    return InferenceReport(
        assignment={i: bool(v > 0.5) for i, v in enumerate(x)},
        energy_rank=er, weighted_sat=ws,
        steps=steps, restarts=restarts, energy_trace=trace)


def _init_states(m: Rbm, evidence: Assignment, restarts, rng) -> np.ndarray:
    X = (rng.random((restarts, m.n_visible)) < 0.5).astype(float)
    for i, v in evidence.values.items():
        X[:, i] = float(v)
    return X


def _best(X, energies):
    """Lowest energy; ties broken by lexicographically smallest state."""
    order = np.lexsort(tuple(X[:, c] for c in range(X.shape[1] - 1, -1, -1)))
    ordered = order[np.argsort(energies[order], kind="stable")]
    k = ordered[0]
    return X[k].copy(), float(energies[k])


def infer_gibbs(m: Rbm, q: Query, config: GibbsConfig | None = None) -> InferenceReport:
    """Clamped Gibbs chains with a geometric temperature anneal.

    Runs all restarts in lockstep and reports the best-energy visible state
    visited by any chain at any step.
    """
    config = config or GibbsConfig()
    rng = np.random.default_rng(config.seed)
    evidence = q.evidence
    free = [i for i in range(m.n_visible) if i not in evidence.values]
    X = _init_states(m, evidence, config.restarts, rng)
    best_x, best_e = _best(X, energy_rank(m, X))
    trace = [best_e]
    taus = np.geomspace(config.tau_start, config.tau_end, max(config.steps, 1))
    for step in range(config.steps):
        tau = taus[step]
        ph = _sigmoid(net_hidden(m, X) / tau)
        H = (rng.random(ph.shape) < ph).astype(float)
        if free:
            pv = _sigmoid(net_visible(m, H)[:, free] / tau)
            X[:, free] = (rng.random(pv.shape) < pv).astype(float)
        cand_x, cand_e = _best(X, energy_rank(m, X))
        if cand_e < best_e - 1e-12 or (abs(cand_e - best_e) <= 1e-12
                                       and tuple(cand_x) < tuple(best_x)):
            best_x, best_e = cand_x, cand_e
        trace.append(best_e)
    return _report_from_state(m, best_x, config.steps, config.restarts, trace)


def infer_deterministic(m: Rbm, q: Query,
                        config: DeterministicConfig | None = None) -> InferenceReport:
    """tau = 0 coordinate descent from random restarts.

    Each sweep sets h_j = [net_j > 0] and then every unclamped visible to
    [net_i > 0]; both are exact conditional minimisations, so E_rank never
    increases along a run.
    """
    config = config or DeterministicConfig()
    rng = np.random.default_rng(config.seed)
    evidence = q.evidence
    free = [i for i in range(m.n_visible) if i not in evidence.values]
    starts = _init_states(m, evidence, config.restarts, rng)
    best_x, best_e, traces = None, np.inf, []
    for x in starts:
        trace = [float(energy_rank(m, x))]
        for _ in range(config.sweeps):
            h = (net_hidden(m, x) > 0).astype(float)
            new = x.copy()
            if free:
                new[free] = (net_visible(m, h)[free] > 0).astype(float)
            e = float(energy_rank(m, new))
            if np.array_equal(new, x):
                break
            x = new
            trace.append(e)
        traces.append(trace)
        e = float(energy_rank(m, x))
        if e < best_e - 1e-12 or (abs(e - best_e) <= 1e-12
                                  and (best_x is None or tuple(x) < tuple(best_x))):
            best_x, best_e = x.copy(), e
    report = _report_from_state(m, best_x, config.sweeps, config.restarts, traces)
    return report


@dataclass
class ConditionalReport:
    targets: tuple[int, ...]
    configs: list[tuple[int, ...]]
    probabilities: np.ndarray
    marginals: dict[int, float]
    decision: dict[int, bool]
    map_config: tuple[int, ...]


def infer_conditional(m: Rbm, evidence: Assignment, targets) -> ConditionalReport:
    """Exact p(targets | evidence) when the evidence covers all other visibles."""
    targets = tuple(targets)
    if set(targets) & set(evidence.values):
        raise ValueError("targets and evidence must be disjoint")
    if set(targets) | set(evidence.values) != set(range(m.n_visible)):
        raise ValueError("evidence plus targets must cover every visible unit")
    if len(targets) > CONDITIONAL_LIMIT:
        raise SizeLimitError(f"{len(targets)} targets exceeds limit {CONDITIONAL_LIMIT}")
    if m.tau <= 0:
        raise ValueError("conditional inference needs tau > 0")
    grid = all_assignments(len(targets))
    X = np.zeros((len(grid), m.n_visible))
    for i, v in evidence.values.items():
        X[:, i] = float(v)
    for col, i in enumerate(targets):
        X[:, i] = grid[:, col]
    logp = -free_energy(m, X) / m.tau
    logp -= logp.max()
    p = np.exp(logp)
    p /= p.sum()
    configs = [tuple(int(v) for v in row) for row in grid]
    marginals = {t: float(p[grid[:, col] > 0.5].sum()) for col, t in enumerate(targets)}
    decision = {t: marginals[t] >= 0.5 for t in targets}
    return ConditionalReport(targets=targets, configs=configs, probabilities=p,
                             marginals=marginals, decision=decision,
                             map_config=configs[int(np.argmax(p))])


@dataclass
class VerificationReport:
    max_deviation: float
    witness: dict[int, bool]
    n_assignments: int

    def ok(self, tol: float = 1e-9) -> bool:
        return self.max_deviation <= tol


def verify_equivalence(m: Rbm, kb: KnowledgeBase, epsilon: float,
                       limit: int = VERIFY_LIMIT) -> VerificationReport:
    """Enumerate every assignment and report max |weighted_sat + E_rank/eps|."""
    n = len(kb.table)
    if n > limit:
        raise SizeLimitError(f"universe of {n} variables exceeds limit {limit}")
    if n != m.n_visible:
        raise ValueError("model and knowledge base have different universes")
    X = all_assignments(n)
    dev = np.abs(weighted_sat_batch(kb, X) + energy_rank(m, X) / epsilon)
    k = int(np.argmax(dev))
    witness = {i: bool(X[k, i] > 0.5) for i in range(n)}
    return VerificationReport(max_deviation=float(dev[k]), witness=witness,
                              n_assignments=len(X))
