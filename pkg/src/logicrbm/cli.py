"""Command-line surface: compile, reason, train, extract, verify, ingest.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 resource limit exceeded.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass

import numpy as np

from .errors import ParseError, SizeLimitError
from . import formula as fm
from .normal_forms import to_full_dnf
from .compiler import (
    CompileOptions, attach_hidden_units, compile_kb,
    compile_penalty_horn, compile_universal, formula_to_sdnf_clauses,
    match_implication,
)
from .rbm import Rbm, load_model, save_model, energy_rank
from .reasoner import (
    GibbsConfig, DeterministicConfig, Query,
    infer_conditional, infer_deterministic, infer_gibbs, verify_equivalence,
)
from .trainer import Dataset, TrainConfig, dataset_from_kb, train
from .extractor import extract_clauses, format_listing, listing_to_json, reliability_ratio

VERIFY_TOL = 1e-9


# ---------------------------------------------------------------------------
# compile
# ---------------------------------------------------------------------------

def _hstack_models(parts, names, epsilon) -> Rbm:
    n = len(names)
    W = np.hstack([p.W for p in parts]) if parts else np.zeros((n, 0))
    b = np.concatenate([p.b for p in parts]) if parts else np.zeros(0)
    a = sum((p.a for p in parts), np.zeros(n))
    e0 = sum(p.e0 for p in parts)
    return Rbm(W=W, a=a, b=b, e0=float(e0), tau=1.0, names=list(names),
               epsilon=epsilon)


def cmd_compile(args) -> int:
    kb = fm.load_kb(args.kb_file)
    opts = CompileOptions(epsilon=args.epsilon)
    n = len(kb.table)
    if args.baseline == "sdnf":
        m, _base = compile_kb(kb, opts)
        per_formula = [len(formula_to_sdnf_clauses(f, opts)) for _, f in kb.items]
    elif args.baseline == "penalty":
        parts, per_formula = [], []
        for w, f in kb.items:
            imp = match_implication(f)
            if imp is None or imp[1] or not imp[3]:
                raise ValueError(
                    "penalty baseline requires Horn clauses (positive body and head)")
            body_pos, _, head, _ = imp
            parts.append(compile_penalty_horn(body_pos, head, epsilon=args.epsilon,
                                              n_visible=n, confidence=w, opts=opts))
            per_formula.append(parts[-1].n_hidden)
        m = _hstack_models(parts, kb.table.names, args.epsilon)
    else:  # universal
        parts, per_formula = [], []
        for w, f in kb.items:
            dnf = to_full_dnf(f, limit=opts.var_limit)
            part = compile_universal(dnf, lam=args.epsilon, n_visible=n)
            part.W *= w
            part.b *= w
            parts.append(part)
            per_formula.append(part.n_hidden)
        m = _hstack_models(parts, kb.table.names, args.epsilon)
    if args.extra_hidden:
        rng = np.random.default_rng(args.seed)
        m = attach_hidden_units(m, args.extra_hidden, args.init_scale, rng)
    save_model(m, args.output)
    print(f"hidden units: {m.n_hidden}")
    print(f"clauses per formula: {per_formula}")
    return 0


# ---------------------------------------------------------------------------
# reason
# ---------------------------------------------------------------------------

def _evidence_from_doc(doc, names) -> fm.Assignment:
    index = {nm: i for i, nm in enumerate(names)}
    values = {}
    for nm, val in doc.get("evidence", {}).items():
        if nm not in index:
            raise ValueError(f"unknown proposition {nm!r} in evidence")
        values[index[nm]] = bool(val)
    return fm.Assignment(values, len(names))


def cmd_reason(args) -> int:
    m = load_model(args.model_file)
    with open(args.query_file, encoding="utf-8") as fh:
        doc = json.load(fh)
    names = m.names or [f"x{i}" for i in range(m.n_visible)]
    index = {nm: i for i, nm in enumerate(names)}
    evidence = _evidence_from_doc(doc, names)
    targets = tuple(index[t] for t in doc.get("targets", []))
    mode = doc.get("mode", "gibbs")
    seed = int(doc.get("seed", 0))
    steps = int(doc.get("steps", 200))
    restarts = int(doc.get("restarts", 10))

    if mode == "conditional":
        rep = infer_conditional(m, evidence, targets)
        out = {
            "mode": mode,
            "marginals": {names[t]: rep.marginals[t] for t in targets},
            "decision": {names[t]: bool(rep.decision[t]) for t in targets},
            "map_config": {names[t]: bool(v)
                           for t, v in zip(targets, rep.map_config)},
        }
    elif mode == "exact":
        from .reasoner import _completions, _best
        X = _completions(evidence)
        if len(X) > 2 ** 24:
            raise SizeLimitError("too many completions for exact mode")
        best_x, best_e = _best(X, energy_rank(m, X))
        out = {
            "mode": mode,
            "assignment": {names[i]: bool(v > 0.5) for i, v in enumerate(best_x)},
            "energy_rank": best_e,
            "weighted_sat": None if m.epsilon is None else -best_e / m.epsilon,
        }
    else:
        query = Query(evidence=evidence, targets=targets, mode=mode)
        if mode == "deterministic":
            rep = infer_deterministic(
                m, query, DeterministicConfig(sweeps=steps, restarts=restarts, seed=seed))
        elif mode == "gibbs":
            rep = infer_gibbs(
                m, query, GibbsConfig(steps=steps, restarts=restarts, seed=seed))
        else:
            raise ValueError(f"unknown mode {mode!r}")
        out = {
            "mode": mode,
            "assignment": {names[i]: bool(v) for i, v in rep.assignment.items()},
            "energy_rank": rep.energy_rank,
            "weighted_sat": rep.weighted_sat,
            "steps": rep.steps,
            "restarts": rep.restarts,
        }
    print(json.dumps(out, indent=1))
    return 0


# ---------------------------------------------------------------------------
# train
# ---------------------------------------------------------------------------

def cmd_train(args) -> int:
    m = load_model(args.model_file)
    targets = [t for t in (args.targets.split(",") if args.targets else []) if t]
    if args.from_clauses:
        kb = fm.load_kb(args.from_clauses)
        d = dataset_from_kb(kb, targets=targets)
    else:
        if not args.data:
            raise ValueError("need a data CSV or --from-clauses")
        d = Dataset.from_csv(args.data, targets=targets)
    if d.rows.shape[1] != m.n_visible:
        raise ValueError("dataset columns do not match the model's visible units")
    cfg = TrainConfig(alpha=args.alpha, beta=args.beta, lr=args.lr,
                      epochs=args.epochs, batch_size=args.batch_size,
                      cd_k=args.cd_k, seed=args.seed,
                      freeze_structure=args.freeze_structure)
    trained, trace = train(m, d, cfg)
    save_model(trained, args.output)
    if args.loss_log:
        with open(args.loss_log, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["epoch", "nll", "reconstruction_error"])
            for entry in trace:
                writer.writerow([entry["epoch"], entry.get("nll", ""),
                                 entry["reconstruction_error"]])
    if trace:
        last = trace[-1]
        print(f"epochs: {len(trace)}  final recon err: "
              f"{last['reconstruction_error']:.6f}"
              + (f"  final nll: {last['nll']:.6f}" if "nll" in last else ""))
    return 0


# ---------------------------------------------------------------------------
# extract
# ---------------------------------------------------------------------------

def _class_indices(names, attr):
    idx = [i for i, nm in enumerate(names)
           if nm == attr or nm.startswith(attr + "_")]
    if not idx:
        raise ValueError(f"no propositions for class attribute {attr!r}")
    return idx


def cmd_extract(args) -> int:
    m = load_model(args.model_file)
    names = m.names or [f"x{i}" for i in range(m.n_visible)]
    extracted = extract_clauses(m)
    if args.data:
        if not args.class_attr:
            raise ValueError("reliability scoring needs --class")
        d = Dataset.from_csv(args.data)
        if d.table.names != list(names):
            raise ValueError("dataset columns do not match the model")
        cls = _class_indices(names, args.class_attr)
        for ec in extracted:
            mentions = len(set(ec.clause.pos) & set(cls)) \
                + len(set(ec.clause.neg) & set(cls))
            if mentions == 1:
                ec.reliability = reliability_ratio(ec.clause, d, cls)
    print(format_listing(extracted, names))
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(listing_to_json(extracted, names))
            fh.write("\n")
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def cmd_verify(args) -> int:
    m = load_model(args.model_file)
    kb = fm.load_kb(args.kb_file)
    epsilon = args.epsilon if args.epsilon is not None else (m.epsilon or 0.5)
    report = verify_equivalence(m, kb, epsilon)
    names = kb.table.names
    out = {
        "max_deviation": report.max_deviation,
        "witness": {names[i]: v for i, v in report.witness.items()},
        "n_assignments": report.n_assignments,
        "ok": report.ok(VERIFY_TOL),
    }
    print(json.dumps(out, indent=1))
    return 0 if report.ok(VERIFY_TOL) else 1


# ---------------------------------------------------------------------------
# ingest
# ---------------------------------------------------------------------------

@dataclass
class OneHotSpec:
    attributes: list[tuple[str, list[str]]]
    class_attr: str | None = None

    @classmethod
    def from_json(cls, path) -> "OneHotSpec":
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
        return cls([(att["name"], list(att["values"])) for att in doc["attributes"]],
                   doc.get("class"))

    @classmethod
    def infer(cls, header, rows, class_attr=None) -> "OneHotSpec":
        attrs = []
        for col, name in enumerate(header):
            values = sorted({row[col] for row in rows})
            attrs.append((name, values))
        return cls(attrs, class_attr)

    def proposition_names(self) -> list[str]:
        names = []
        for attr, values in self.attributes:
            for v in values:
                names.append(f"{attr}_{v}")
        if len(set(names)) != len(names):
            raise ValueError("one-hot proposition names collide")
        return names


def ingest_categorical(rows, header, spec: OneHotSpec) -> Dataset:
    """Categorical rows -> one-hot binary Dataset (one true unit per attribute)."""
    col_of = {name: i for i, name in enumerate(header)}
    names = spec.proposition_names()
    table = fm.PropositionTable(names)
    out = np.zeros((len(rows), len(names)))
    for r, row in enumerate(rows):
        for attr, values in spec.attributes:
            if attr not in col_of:
                raise ValueError(f"attribute {attr!r} missing from the CSV header")
            val = row[col_of[attr]]
            if val not in values:
                raise ValueError(
                    f"row {r + 1}: unknown value {val!r} for attribute {attr!r}")
            out[r, table.index[f"{attr}_{val}"]] = 1.0
    targets = ()
    if spec.class_attr:
        targets = tuple(table.index[f"{spec.class_attr}_{v}"]
                        for a, vs in spec.attributes if a == spec.class_attr
                        for v in vs)
    return Dataset(table, out, targets)


def cmd_ingest(args) -> int:
    with open(args.csv, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [row for row in reader if row]
    if args.spec:
        spec = OneHotSpec.from_json(args.spec)
    else:
        spec = OneHotSpec.infer(header, rows, args.class_attr)
    if args.class_attr:
        spec.class_attr = args.class_attr
    d = ingest_categorical(rows, header, spec)
    d.to_csv(args.output)
    print(f"wrote {len(d.rows)} rows x {len(d.table)} propositions")
    return 0


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="logicrbm")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="compile a KB file to a model file")
    p.add_argument("kb_file")
    p.add_argument("--epsilon", type=float, default=0.5)
    p.add_argument("--baseline", choices=("sdnf", "penalty", "universal"),
                   default="sdnf")
    p.add_argument("--extra-hidden", type=int, default=0)
    p.add_argument("--init-scale", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("reason", help="answer a JSON query against a model")
    p.add_argument("model_file")
    p.add_argument("query_file")
    p.set_defaults(func=cmd_reason)

    p = sub.add_parser("train", help="tune a model on 0/1 CSV data")
    p.add_argument("model_file")
    p.add_argument("data", nargs="?", default=None)
    p.add_argument("--from-clauses", default=None,
                   help="materialise one preferred model per clause of this KB")
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--lr", type=float, default=0.1)
    p.add_argument("--epochs", type=int, default=100)
    p.add_argument("--batch-size", type=int, default=0)
    p.add_argument("--cd-k", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--freeze-structure", action="store_true")
    p.add_argument("--targets", default="")
    p.add_argument("--loss-log", default=None)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("extract", help="read conjunctive clauses out of a model")
    p.add_argument("model_file")
    p.add_argument("data", nargs="?", default=None)
    p.add_argument("--class", dest="class_attr", default=None)
    p.add_argument("--json", default=None)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("verify", help="check model/KB equivalence by enumeration")
    p.add_argument("model_file")
    p.add_argument("kb_file")
    p.add_argument("--epsilon", type=float, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("ingest", help="one-hot encode a categorical CSV")
    p.add_argument("csv")
    p.add_argument("--spec", default=None)
    p.add_argument("--class", dest="class_attr", default=None)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_ingest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except SizeLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ParseError, ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
