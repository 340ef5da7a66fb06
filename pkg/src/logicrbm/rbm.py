"""RBM parameter container and energy/probability kernels.

Energy convention (visible x, hidden h, both binary):

    E(x, h) = -sum_ij W[i,j] x_i h_j - sum_i a_i x_i - sum_j b_j h_j + e0

The constant offset e0 lets compiled networks carry energy terms that have
no corresponding unit.  Because hidden units decouple given x, the energy
minimised over h has the closed form used throughout:

    E_rank(x) = e0 - a.x - sum_j max(0, net_j),   net_j = (x W)_j + b_j
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import SizeLimitError

PARTITION_LIMIT = 24


@dataclass
class Rbm:
    W: np.ndarray                       # (n_visible, n_hidden)
    a: np.ndarray                       # visible biases
    b: np.ndarray                       # hidden biases
    e0: float = 0.0
    tau: float = 1.0
    names: list[str] | None = None
    epsilon: float | None = None
    clause_annotations: list | None = None   # per hidden unit: dict or None

    def __post_init__(self):
        self.W = np.asarray(self.W, dtype=float)
        self.a = np.asarray(self.a, dtype=float)
        self.b = np.asarray(self.b, dtype=float)
        if self.W.ndim != 2 or self.a.shape != (self.W.shape[0],) \
                or self.b.shape != (self.W.shape[1],):
            raise ValueError("inconsistent parameter shapes")
        if not (np.isfinite(self.W).all() and np.isfinite(self.a).all()
                and np.isfinite(self.b).all() and np.isfinite(self.e0)):
            raise ValueError("RBM parameters must be finite")
        if self.tau < 0:
            raise ValueError("temperature must be >= 0")

    @property
    def n_visible(self) -> int:
        return self.W.shape[0]

    @property
    def n_hidden(self) -> int:
        return self.W.shape[1]

    def copy(self) -> "Rbm":
        return replace(
            self, W=self.W.copy(), a=self.a.copy(), b=self.b.copy(),
            clause_annotations=None if self.clause_annotations is None
            else [dict(ann) if ann else ann for ann in self.clause_annotations])


def energy(m: Rbm, x, h) -> float:
    x = np.asarray(x, dtype=float)
    h = np.asarray(h, dtype=float)
    if x.shape != (m.n_visible,) or h.shape != (m.n_hidden,):
        raise ValueError("dimension mismatch")
    return float(-x @ m.W @ h - m.a @ x - m.b @ h + m.e0)


def net_hidden(m: Rbm, X) -> np.ndarray:
    return np.asarray(X, dtype=float) @ m.W + m.b


def net_visible(m: Rbm, H) -> np.ndarray:
    return np.asarray(H, dtype=float) @ m.W.T + m.a


def energy_rank(m: Rbm, X) -> np.ndarray | float:
    """min_h E(x, h); accepts a single vector or a batch of rows."""
    X = np.asarray(X, dtype=float)
    single = X.ndim == 1
    net = net_hidden(m, np.atleast_2d(X))
    out = m.e0 - np.atleast_2d(X) @ m.a - np.maximum(net, 0.0).sum(axis=1)
    return float(out[0]) if single else out


def _sigmoid(z):
    return 0.5 * (1.0 + np.tanh(0.5 * z))


def p_hidden_given_visible(m: Rbm, x) -> np.ndarray:
    if m.tau <= 0:
        raise ValueError("sampling distributions need tau > 0")
    return _sigmoid(net_hidden(m, x) / m.tau)


def p_visible_given_hidden(m: Rbm, h) -> np.ndarray:
    if m.tau <= 0:
        raise ValueError("sampling distributions need tau > 0")
    return _sigmoid(net_visible(m, h) / m.tau)


def free_energy(m: Rbm, X) -> np.ndarray | float:
    """-tau * log sum_h exp(-E(x,h)/tau); equals E_rank in the tau -> 0 limit."""
    X = np.asarray(X, dtype=float)
    single = X.ndim == 1
    X2 = np.atleast_2d(X)
    net = net_hidden(m, X2)
    if m.tau > 0:
        soft = m.tau * np.logaddexp(0.0, net / m.tau).sum(axis=1)
    else:
        soft = np.maximum(net, 0.0).sum(axis=1)
    out = m.e0 - X2 @ m.a - soft
    return float(out[0]) if single else out


def gibbs_step(m: Rbm, clamp, state, rng) -> np.ndarray:
    """One alternating update: h from p(h|x), then the unclamped visibles.

    ``clamp`` is a partial Assignment; clamped coordinates are left alone.
    With tau > 0 both layers are sampled; with tau == 0 the update is the
    deterministic sweep (activate iff net > 0, ties broken toward 0).
    Visible units are conditionally independent given h, so the block
    update is exact coordinate descent at tau == 0.
    """
    x = np.asarray(state, dtype=float).copy()
    free = [i for i in range(m.n_visible) if i not in clamp.values]
    for i, v in clamp.values.items():
        x[i] = float(v)
    if m.tau > 0:
        h = (rng.random(m.n_hidden) < p_hidden_given_visible(m, x)).astype(float)
        if free:
            p = p_visible_given_hidden(m, h)[free]
            x[free] = (rng.random(len(free)) < p).astype(float)
    else:
        h = (net_hidden(m, x) > 0).astype(float)
        if free:
            x[free] = (net_visible(m, h)[free] > 0).astype(float)
    return x


def partition_brute(m: Rbm) -> float:
    """Exact partition function by enumeration (small networks only)."""
    if m.n_visible + m.n_hidden > PARTITION_LIMIT:
        raise SizeLimitError(
            f"{m.n_visible}+{m.n_hidden} units exceeds partition limit {PARTITION_LIMIT}")
    if m.tau <= 0:
        raise ValueError("partition function needs tau > 0")
    from .normal_forms import all_assignments
    X = all_assignments(m.n_visible)
    return float(np.exp(-free_energy(m, X) / m.tau).sum())


# ---------------------------------------------------------------------------
# Model file I/O
# ---------------------------------------------------------------------------

def model_to_dict(m: Rbm) -> dict:
    return {
        "n_visible": m.n_visible,
        "n_hidden": m.n_hidden,
        "names": list(m.names) if m.names is not None
                 else [f"x{i}" for i in range(m.n_visible)],
        "W": m.W.tolist(),
        "a": m.a.tolist(),
        "b": m.b.tolist(),
        "e0": m.e0,
        "tau": m.tau,
        "epsilon": m.epsilon,
        "clause_annotations": m.clause_annotations
                              or [None] * m.n_hidden,
    }


def save_model(m: Rbm, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_dict(m), fh, indent=1)
        fh.write("\n")


def model_from_dict(doc: dict) -> Rbm:
    m = Rbm(
        W=np.array(doc["W"], dtype=float).reshape(doc["n_visible"], doc["n_hidden"]),
        a=np.array(doc["a"], dtype=float),
        b=np.array(doc["b"], dtype=float),
        e0=float(doc.get("e0", 0.0)),
        tau=float(doc.get("tau", 1.0)),
        names=doc.get("names"),
        epsilon=doc.get("epsilon"),
        clause_annotations=doc.get("clause_annotations"),
    )
    return m


def load_model(path) -> Rbm:
    with open(path, encoding="utf-8") as fh:
        return model_from_dict(json.load(fh))
