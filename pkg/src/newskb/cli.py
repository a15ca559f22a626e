"""Command-line entry point wiring the whole pipeline.

Subcommands: extract, graph, pool, train, eval, stats. Exit codes: 0 success,
2 input/validation error, 3 numeric failure (NaN encountered).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields

import numpy as np

from . import clauses, gcn, kb, pooling
from .conllu import load_scheme, parse_conllu
from .errors import DimMismatch, PipelineError
from .extract import extract_document_frames, frame_to_dict


@dataclass
class Config:
    scheme: str = "clearnlp"
    linking_lexicon: str | None = None
    lenient: bool = False
    hidden: int = 768
    layers: int = 4
    lr: float = 1e-5
    batch_size: int = 16
    epochs: int = 10
    seed: int = 42
    dummy: str = "zero"


def resolve_config(args) -> Config:
    """Flag > config file > built-in default, per field."""
    cfg = Config()
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as f:
            file_values = json.load(f)
        for f_ in fields(Config):
            if f_.name in file_values:
                setattr(cfg, f_.name, file_values[f_.name])
    for f_ in fields(Config):
        value = getattr(args, f_.name, None)
        if value is not None:
            setattr(cfg, f_.name, value)
    for name in ("hidden", "layers", "batch_size", "epochs"):
        if getattr(cfg, name) <= 0:
            raise PipelineError(f"config field {name} must be positive")
    if cfg.lr < 0:
        raise PipelineError("config field lr must not be negative")
    return cfg


def _atomic_write(path, text: str) -> None:
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    os.replace(tmp, path)


def _load_documents(args, cfg: Config):
    with open(args.conllu, encoding="utf-8") as f:
        text = f.read()
    return parse_conllu(text, load_scheme(cfg.scheme), lenient=cfg.lenient)


def _lexicon(cfg: Config):
    if cfg.linking_lexicon:
        return clauses.load_lexicon(cfg.linking_lexicon)
    return clauses.builtin_lexicon()


def cmd_extract(args) -> int:
    cfg = resolve_config(args)
    docs = _load_documents(args, cfg)
    lines = []
    for doc in docs:
        for frame in extract_document_frames(doc):
            lines.append(json.dumps(frame_to_dict(frame, doc.doc_id), ensure_ascii=False))
    out = "".join(line + "\n" for line in lines)
    if args.out:
        _atomic_write(args.out, out)
    else:
        sys.stdout.write(out)
    return 0


def _safe_name(doc_id: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]", "_", doc_id)


def _build_kb(doc, cfg: Config) -> tuple[str, str]:
    lex = _lexicon(cfg)
    frames = extract_document_frames(doc)
    typed = [(f, clauses.classify(f, lex)) for f in frames]
    graph = kb.aggregate(typed, doc_id=doc.doc_id, label=doc.label)
    return doc.doc_id, kb.dumps(graph)


def _build_kb_task(payload):
    return _build_kb(*payload)


def cmd_graph(args) -> int:
    cfg = resolve_config(args)
    docs = _load_documents(args, cfg)
    if not docs:
        raise PipelineError(f"{args.conllu}: no documents")
    os.makedirs(args.out_dir, exist_ok=True)
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_build_kb_task, [(doc, cfg) for doc in docs]))
    else:
        results = [_build_kb(doc, cfg) for doc in docs]
    for doc_id, payload in results:
        _atomic_write(os.path.join(args.out_dir, f"{_safe_name(doc_id)}.json"), payload)
    return 0


def cmd_pool(args) -> int:
    cfg = resolve_config(args)
    with open(args.kb, encoding="utf-8") as f:
        graph = kb.loads(f.read())
    table = pooling.load_table(args.emb, args.offsets)
    features = pooling.pool_nodes(graph, table, dummy_policy=cfg.dummy)
    tmp = f"{args.out}.tmp"
    pooling.write_emb(tmp, features)
    os.replace(tmp, args.out)
    return 0


def _load_dataset(graphs_dir, features_dir):
    names = sorted(n for n in os.listdir(graphs_dir) if n.endswith(".json"))
    if not names:
        raise PipelineError(f"{graphs_dir}: no KB JSON files")
    items = []
    for name in names:
        with open(os.path.join(graphs_dir, name), encoding="utf-8") as f:
            graph = kb.loads(f.read())
        emb_path = os.path.join(features_dir, name[: -len(".json")] + ".emb")
        if not os.path.exists(emb_path):
            raise PipelineError(f"missing features file {emb_path}")
        features = pooling.read_emb(emb_path)
        if features.shape[0] != len(graph.nodes):
            raise DimMismatch(
                f"{emb_path}: {features.shape[0]} rows for {len(graph.nodes)} nodes"
            )
        items.append((graph, features))
    return items


def _make_batches(items, label_map, batch_size):
    batches = []
    for start in range(0, len(items), batch_size):
        part = items[start : start + batch_size]
        batches.append(
            pooling.batch_from_arrays(
                [features for _, features in part],
                [kb.to_edge_list(graph)[0] for graph, _ in part],
                [label_map[graph.label] for graph, _ in part],
            )
        )
    return batches


def _require_labels(items):
    missing = [graph.doc_id for graph, _ in items if graph.label is None]
    if missing:
        raise PipelineError(f"unlabeled documents: {missing}")


def cmd_train(args) -> int:
    cfg = resolve_config(args)
    items = _load_dataset(args.graphs, args.features)
    _require_labels(items)
    label_map = {lab: i for i, lab in enumerate(sorted({g.label for g, _ in items}))}
    batches = _make_batches(items, label_map, cfg.batch_size)
    in_dim = items[0][1].shape[1]
    model = gcn.init_model(
        in_dim, hidden_dim=cfg.hidden, n_layers=cfg.layers,
        n_classes=len(label_map), seed=cfg.seed,
    )
    adam = gcn.init_adam(model, lr=cfg.lr)
    log = gcn.train(model, batches, epochs=cfg.epochs, adam=adam, seed=cfg.seed)
    if any(math.isnan(loss) or math.isinf(loss) for _, loss, _ in log):
        print("training diverged: non-finite loss", file=sys.stderr)
        return 3
    tmp = f"{args.out}.tmp"
    gcn.save_checkpoint(
        tmp, model, adam,
        extra={"label_map": label_map, "in_dim": in_dim,
               "hidden": cfg.hidden, "layers": cfg.layers},
    )
    os.replace(tmp, args.out)
    if args.log:
        tmp = f"{args.log}.tmp"
        gcn.write_log_csv(tmp, log)
        os.replace(tmp, args.log)
    return 0


def cmd_eval(args) -> int:
    cfg = resolve_config(args)
    model, _, extra = gcn.load_checkpoint(args.checkpoint)
    items = _load_dataset(args.graphs, args.features)
    _require_labels(items)
    label_map = extra["label_map"]
    batches = _make_batches(items, label_map, cfg.batch_size)
    metrics = gcn.evaluate(model, batches)
    if any(math.isnan(v) for v in metrics.values()):
        print("evaluation produced NaN metrics", file=sys.stderr)
        return 3
    payload = json.dumps(
        {"f1_macro": metrics["f1_macro"], "accuracy": metrics["accuracy"],
         "precision_macro": metrics["precision_macro"]},
        ensure_ascii=False, indent=2,
    ) + "\n"
    if args.out:
        _atomic_write(args.out, payload)
    else:
        sys.stdout.write(payload)
    return 0


def cmd_stats(args) -> int:
    names = sorted(n for n in os.listdir(args.kb_dir) if n.endswith(".json"))
    if not names:
        raise PipelineError(f"{args.kb_dir}: no KB JSON files")
    n_nodes = n_edges = 0
    histogram: dict[str, int] = {}
    for name in names:
        with open(os.path.join(args.kb_dir, name), encoding="utf-8") as f:
            graph = kb.loads(f.read())
        n_nodes += len(graph.nodes)
        n_edges += len(graph.edges)
        for ctype, count in graph.clause_types.items():
            histogram[ctype] = histogram.get(ctype, 0) + count
    summary = {
        "documents": len(names),
        "nodes": n_nodes,
        "edges": n_edges,
        "clause_types": dict(sorted(histogram.items())),
    }
    sys.stdout.write(json.dumps(summary, ensure_ascii=False, indent=2) + "\n")
    return 0


def _add_config_flags(p, training=False):
    p.add_argument("--config", help="JSON config file; flags override it")
    p.add_argument("--scheme", help="builtin tag scheme name or JSON path")
    p.add_argument("--linking-lexicon", dest="linking_lexicon",
                   help="linking-verb lexicon file, one lemma per line")
    p.add_argument("--lenient", action="store_const", const=True, default=None,
                   help="map unknown labels to OTHER instead of failing")
    if training:
        p.add_argument("--hidden", type=int)
        p.add_argument("--layers", type=int)
        p.add_argument("--lr", type=float)
        p.add_argument("--batch-size", dest="batch_size", type=int)
        p.add_argument("--epochs", type=int)
        p.add_argument("--seed", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="newskb")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract", help="dump clause frames as JSON lines")
    p.add_argument("conllu")
    p.add_argument("--frames", action="store_true", default=True,
                   help="emit the frame dump (the default and only mode)")
    p.add_argument("--out")
    _add_config_flags(p)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("graph", help="build one knowledge-base JSON per document")
    p.add_argument("conllu")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--jobs", type=int, default=1)
    _add_config_flags(p)
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("pool", help="pool token embeddings into node features")
    p.add_argument("--kb", required=True)
    p.add_argument("--emb", required=True)
    p.add_argument("--offsets", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--dummy", choices=["zero"])
    p.set_defaults(func=cmd_pool)

    p = sub.add_parser("train", help="train the graph classifier")
    p.add_argument("--graphs", required=True)
    p.add_argument("--features", required=True)
    p.add_argument("--out", required=True, help="checkpoint path")
    p.add_argument("--log", help="training log CSV path")
    _add_config_flags(p, training=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="score a checkpoint on labeled graphs")
    p.add_argument("--graphs", required=True)
    p.add_argument("--features", required=True)
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--out")
    _add_config_flags(p, training=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("stats", help="node/edge counts and clause-type histogram")
    p.add_argument("kb_dir")
    p.set_defaults(func=cmd_stats)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PipelineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FloatingPointError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
