"""Confidence-value / full-parameter training on binary data.

The objective mixes a generative and a discriminative negative
log-likelihood,  alpha * (-log p(x, y)) + beta * (-log p(y | x)):
the generative term is estimated with CD-k, the discriminative term is
exact because the target configurations can be enumerated.

Two parameterisations are supported.  Full-parameter training updates W, a
and b freely.  With ``freeze_structure`` every clause-annotated hidden unit
keeps its +-1 literal pattern and only its scalar confidence value moves
(weights stay c_j * sign pattern, bias stays c_j * (-T_j + eps)); free
hidden units still train fully, and visible biases stay fixed so compiled
constant terms are preserved.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import SizeLimitError
from . import formula as fm
from .compiler import match_implication
from .normal_forms import all_assignments
from .rbm import Rbm, net_hidden, net_visible, free_energy, _sigmoid


@dataclass
class Dataset:
    table: fm.PropositionTable
    rows: np.ndarray                       # (N, n) 0/1
    target_indices: tuple[int, ...] = ()

    def __post_init__(self):
        self.rows = np.asarray(self.rows, dtype=float)
        self.target_indices = tuple(self.target_indices)
        if self.rows.ndim != 2 or self.rows.shape[1] != len(self.table):
            raise ValueError("row length must equal the universe size")
        if not np.isin(self.rows, (0.0, 1.0)).all():
            raise ValueError("dataset rows must be binary")

    @classmethod
    def from_csv(cls, path, targets=()) -> "Dataset":
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            rows = [[float(v) for v in row] for row in reader if row]
        table = fm.PropositionTable(header)
        idx = tuple(table.index[t] for t in targets)
        return cls(table, np.array(rows) if rows else np.zeros((0, len(header))), idx)

    def to_csv(self, path):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(self.table.names)
            for row in self.rows:
                writer.writerow([int(v) for v in row])


def dataset_from_kb(kb: fm.KnowledgeBase, targets=()) -> Dataset:
    """One preferred model per formula: both sides of the implication true.

    Unmentioned propositions are left at 0.  Non-implication formulas fall
    back to their first satisfying assignment.
    """
    from .normal_forms import to_full_dnf
    n = len(kb.table)
    rows = []
    for _, f in kb.items:
        row = np.zeros(n)
        imp = match_implication(f)
        if imp is not None:
            body_pos, body_neg, head, head_positive = imp
            for i in body_pos:
                row[i] = 1.0
            row[head] = 1.0 if head_positive else 0.0
        else:
            dnf = to_full_dnf(f)
            if not dnf.clauses:
                continue
            for i in dnf.clauses[0].pos:
                row[i] = 1.0
        rows.append(row)
    idx = tuple(kb.table.index[t] if isinstance(t, str) else t for t in targets)
    return Dataset(kb.table, np.array(rows) if rows else np.zeros((0, n)), idx)


@dataclass
class TrainConfig:
    alpha: float = 0.0
    beta: float = 1.0
    lr: float = 0.1
    epochs: int = 100
    batch_size: int = 0            # 0 = full batch
    cd_k: int = 1
    seed: int = 0
    momentum: float = 0.0
    freeze_structure: bool = False

    def __post_init__(self):
        if self.alpha < 0 or self.beta < 0 or self.alpha + self.beta <= 0:
            raise ValueError("need alpha, beta >= 0 with alpha + beta > 0")
        if self.cd_k < 1:
            raise ValueError("cd_k must be >= 1")


@dataclass
class Grads:
    W: np.ndarray
    a: np.ndarray
    b: np.ndarray

    @classmethod
    def zeros(cls, m: Rbm) -> "Grads":
        return cls(np.zeros_like(m.W), np.zeros_like(m.a), np.zeros_like(m.b))

    def scaled_add(self, other: "Grads", scale: float):
        self.W += scale * other.W
        self.a += scale * other.a
        self.b += scale * other.b


def _target_grid(m: Rbm, x, targets) -> np.ndarray:
    grid = all_assignments(len(targets))
    X = np.tile(np.asarray(x, dtype=float), (len(grid), 1))
    for col, t in enumerate(targets):
        X[:, t] = grid[:, col]
    return X


def conditional_nll(m: Rbm, x, y_true, targets) -> float:
    """Exact -log p(y_true | x) over enumerated target configurations."""
    targets = tuple(targets)
    X = _target_grid(m, x, targets)
    logp = -free_energy(m, X) / m.tau
    logp -= np.logaddexp.reduce(logp)
    true = int("".join(str(int(v)) for v in y_true), 2) if targets else 0
    return float(-logp[true])


def discriminative_gradient(m: Rbm, x, y_true, targets) -> Grads:
    """Exact gradient of -log p(y_true | x) via free-energy differences."""
    targets = tuple(targets)
    if len(targets) > 16:
        raise SizeLimitError("too many target units for exact enumeration")
    X = _target_grid(m, x, targets)
    logp = -free_energy(m, X) / m.tau
    logp -= np.logaddexp.reduce(logp)
    p = np.exp(logp)
    true = int("".join(str(int(v)) for v in y_true), 2) if targets else 0
    coeff = -p
    coeff[true] += 1.0
    sig = _sigmoid(net_hidden(m, X) / m.tau)
    # dNLL/dtheta = (1/tau) sum_c coeff_c * dF(c)/dtheta, with dF/dW = -x sig^T
    gW = -(X.T * coeff) @ sig / m.tau
    ga = -(coeff @ X) / m.tau
    gb = -(coeff @ sig) / m.tau
    return Grads(gW, ga, gb)


def cd_gradient(m: Rbm, x_batch, cd_k: int, rng) -> Grads:
    """CD-k estimate of the gradient of mean -log p(x) over the batch."""
    if cd_k < 1:
        raise ValueError("cd_k must be >= 1")
    X0 = np.atleast_2d(np.asarray(x_batch, dtype=float))
    B = len(X0)
    ph0 = _sigmoid(net_hidden(m, X0) / m.tau)
    Xk = X0
    for _ in range(cd_k):
        ph = _sigmoid(net_hidden(m, Xk) / m.tau)
        H = (rng.random(ph.shape) < ph).astype(float)
        pv = _sigmoid(net_visible(m, H) / m.tau)
        Xk = (rng.random(pv.shape) < pv).astype(float)
    phk = _sigmoid(net_hidden(m, Xk) / m.tau)
    gW = -(X0.T @ ph0 - Xk.T @ phk) / B
    ga = -(X0 - Xk).mean(axis=0)
    gb = -(ph0 - phk).mean(axis=0)
    return Grads(gW, ga, gb)


def _clause_patterns(m: Rbm):
    """(unit index, sign pattern, bias pattern) for annotated hidden units."""
    if m.clause_annotations is None:
        return []
    eps = m.epsilon if m.epsilon is not None else 0.5
    out = []
    for j, ann in enumerate(m.clause_annotations):
        if not ann:
            continue
        s = np.zeros(m.n_visible)
        s[ann["pos"]] = 1.0
        s[ann["neg"]] = -1.0
        out.append((j, s, -len(ann["pos"]) + eps))
    return out


def train(m: Rbm, d: Dataset, cfg: TrainConfig) -> tuple[Rbm, list[dict]]:
    """SGD on the hybrid objective; returns a new network and a loss trace.

    The trace records, per epoch, the exact mean discriminative NLL (when
    beta > 0) and the mean squared one-step reconstruction error as a proxy
    for the generative term.
    """
    if cfg.beta > 0 and not d.target_indices:
        raise ValueError("discriminative training needs target indices")
    if d.rows.shape[1] != m.n_visible:
        raise ValueError("dataset and model dimensions differ")
    out = m.copy()
    rng = np.random.default_rng(cfg.seed)
    targets = d.target_indices
    patterns = _clause_patterns(out) if cfg.freeze_structure else []
    conf = {j: float(out.clause_annotations[j]["confidence"]) for j, _, _ in patterns}
    vel = Grads.zeros(out)
    trace = []
    N = len(d.rows)
    batch = N if cfg.batch_size in (0, None) else cfg.batch_size
    for epoch in range(cfg.epochs):
        perm = rng.permutation(N) if batch < N else np.arange(N)
        recon_err = 0.0
        for start in range(0, N, max(batch, 1)):
            rows = d.rows[perm[start:start + batch]]
            if len(rows) == 0:
                continue
            g = Grads.zeros(out)
            if cfg.alpha > 0:
                g.scaled_add(cd_gradient(out, rows, cfg.cd_k, rng), cfg.alpha)
            if cfg.beta > 0:
                for row in rows:
                    dg = discriminative_gradient(out, row, row[list(targets)], targets)
                    g.scaled_add(dg, cfg.beta / len(rows))
            if cfg.freeze_structure:
                for j, s, bias_pat in patterns:
                    dc = float(s @ g.W[:, j] + bias_pat * g.b[j])
                    conf[j] = max(conf[j] - cfg.lr * dc, 0.0)
                    g.W[:, j] = 0.0
                    g.b[j] = 0.0
                g.a[:] = 0.0
            vel.W = cfg.momentum * vel.W - cfg.lr * g.W
            vel.a = cfg.momentum * vel.a - cfg.lr * g.a
            vel.b = cfg.momentum * vel.b - cfg.lr * g.b
            out.W += vel.W
            out.a += vel.a
            out.b += vel.b
            for j, s, bias_pat in patterns:
                out.W[:, j] = conf[j] * s
                out.b[j] = conf[j] * bias_pat
            if out.clause_annotations is not None:
                for j, s, _ in patterns:
                    out.clause_annotations[j]["confidence"] = conf[j]
        entry = {"epoch": epoch}
        if cfg.beta > 0:
            entry["nll"] = float(np.mean([
                conditional_nll(out, row, row[list(targets)], targets)
                for row in d.rows])) if N else 0.0
        ph = _sigmoid(net_hidden(out, d.rows) / out.tau)
        pv = _sigmoid(net_visible(out, ph) / out.tau)
        recon_err = float(np.mean((d.rows - pv) ** 2)) if N else 0.0
        entry["reconstruction_error"] = recon_err
        trace.append(entry)
    return out, trace
