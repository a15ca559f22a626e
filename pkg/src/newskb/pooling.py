"""Token-embedding pooling and graph batching.

Per-node features are the arithmetic mean of the subword embedding rows of
every word in the node's provenance; batches stack graphs as disjoint unions
with cumulative node-id offsets.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DimMismatch, EmptyBatch, MissingOffset
from .kb import DUMMY, KnowledgeBase, to_edge_list


@dataclass(frozen=True)
class EmbeddingTable:
    """Subword embedding rows plus the (sentence, word) -> rows alignment."""

    rows: np.ndarray
    offsets: dict[tuple[int, int], tuple[int, ...]]

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=np.float64)
        object.__setattr__(self, "rows", rows)
        if rows.ndim != 2 or rows.shape[1] < 1:
            raise DimMismatch(f"embedding rows must be n x dim, got shape {rows.shape}")
        if not np.all(np.isfinite(rows)):
            raise DimMismatch("embedding rows contain NaN or Inf")
        n = rows.shape[0]
        for key, idxs in self.offsets.items():
            if len(idxs) == 0:
                raise MissingOffset(f"offsets entry {key} is empty")
            if any(not 0 <= i < n for i in idxs):
                raise MissingOffset(f"offsets entry {key} references rows outside 0..{n - 1}")

    @property
    def n_tokens(self) -> int:
        return self.rows.shape[0]

    @property
    def dim(self) -> int:
        return self.rows.shape[1]


@dataclass(frozen=True)
class GraphBatch:
    """Stacked node features of several graphs with relabeled edges.

    Graph i owns one contiguous id block offset by the node counts of graphs
    0..i-1; `graph_of` maps each global node id back to its graph index.
    """

    features: np.ndarray
    edges: list[tuple[int, int]]
    graph_of: np.ndarray
    sizes: tuple[int, ...]
    labels: np.ndarray | None = None

    @property
    def n_graphs(self) -> int:
        return len(self.sizes)

    @property
    def n_nodes(self) -> int:
        return self.features.shape[0]


def pool_nodes(kb: KnowledgeBase, emb: EmbeddingTable, dummy_policy: str = "zero") -> np.ndarray:
    """K x dim matrix; row k averages all subword rows of node k's words.

    DUMMY nodes carry no information and get the zero vector (the additive
    identity of mean aggregation).
    """
    if dummy_policy != "zero":
        raise ValueError(f"dummy policy {dummy_policy!r} not implemented; use 'zero'")
    out = np.zeros((len(kb.nodes), emb.dim), dtype=np.float64)
    for node in kb.nodes:
        if node.kind == DUMMY:
            continue
        row_ids: list[int] = []
        for sent, word_ids in node.provenance:
            for word in word_ids:
                idxs = emb.offsets.get((sent, word))
                if idxs is None:
                    raise MissingOffset(
                        f"node {node.id} ({node.text!r}): no subword alignment for "
                        f"sentence {sent} word {word}"
                    )
                row_ids.extend(idxs)
        out[node.id] = emb.rows[row_ids].mean(axis=0)
    return out


def batch_from_arrays(feature_mats, edge_lists, labels=None) -> GraphBatch:
    """Disjoint-union batch from per-graph feature matrices and edge pairs."""
    feature_mats = [np.asarray(m, dtype=np.float64) for m in feature_mats]
    if not feature_mats:
        raise EmptyBatch("cannot assemble a batch from zero graphs")
    dim = feature_mats[0].shape[1]
    for m in feature_mats:
        if m.shape[1] != dim:
            raise DimMismatch(f"feature dims differ: {m.shape[1]} vs {dim}")
    sizes = tuple(m.shape[0] for m in feature_mats)
    offsets = np.concatenate(([0], np.cumsum(sizes)))
    edges: list[tuple[int, int]] = []
    for i, pairs in enumerate(edge_lists):
        off = int(offsets[i])
        for src, dst in pairs:
            if not (0 <= src < sizes[i] and 0 <= dst < sizes[i]):
                raise DimMismatch(
                    f"graph {i}: edge ({src}, {dst}) outside its {sizes[i]}-node block"
                )
            edges.append((src + off, dst + off))
    graph_of = np.concatenate([np.full(k, i, dtype=np.int64) for i, k in enumerate(sizes)])
    label_arr = None if labels is None else np.asarray(labels, dtype=np.int64)
    return GraphBatch(
        features=np.vstack(feature_mats),
        edges=edges,
        graph_of=graph_of,
        sizes=sizes,
        labels=label_arr,
    )


def assemble_batch(items, label_map=None, dummy_policy: str = "zero") -> GraphBatch:
    """Pool and stack (KnowledgeBase, EmbeddingTable) pairs into one batch.

    `label_map` turns document labels into class ids; without it the batch
    carries no labels.
    """
    items = list(items)
    if not items:
        raise EmptyBatch("cannot assemble a batch from zero items")
    mats, edge_lists, labels = [], [], []
    for graph, emb in items:
        mats.append(pool_nodes(graph, emb, dummy_policy))
        edge_lists.append(to_edge_list(graph)[0])
        if label_map is not None:
            labels.append(label_map[graph.label])
    return batch_from_arrays(mats, edge_lists, labels if label_map is not None else None)


def split_features(batch: GraphBatch) -> list[np.ndarray]:
    """Recover each graph's feature matrix from the stacked batch."""
    out = []
    start = 0
    for k in batch.sizes:
        out.append(batch.features[start : start + k])
        start += k
    return out


def write_emb(path, matrix) -> None:
    """`EMB 1 <n> <dim>` header then one row of decimal floats per line.

    repr() round-trips 64-bit floats exactly, keeping files bit-exact.
    """
    matrix = np.asarray(matrix, dtype=np.float64)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(f"EMB 1 {matrix.shape[0]} {matrix.shape[1]}\n")
        for row in matrix:
            f.write(" ".join(repr(float(x)) for x in row) + "\n")


def read_emb(path) -> np.ndarray:
    with open(path, encoding="utf-8") as f:
        header = f.readline().split()
        if len(header) != 4 or header[0] != "EMB" or header[1] != "1":
            raise DimMismatch(f"{path}: not an EMB v1 file")
        n, dim = int(header[2]), int(header[3])
        rows = np.empty((n, dim), dtype=np.float64)
        for i in range(n):
            parts = f.readline().split()
            if len(parts) != dim:
                raise DimMismatch(f"{path}: row {i} has {len(parts)} values, expected {dim}")
            rows[i] = [float(p) for p in parts]
    return rows


def write_offsets(path, offsets: dict[tuple[int, int], tuple[int, ...]]) -> None:
    raw = {f"{sent}:{word}": list(idxs) for (sent, word), idxs in sorted(offsets.items())}
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(raw, f, ensure_ascii=False, indent=2)
        f.write("\n")


def read_offsets(path) -> dict[tuple[int, int], tuple[int, ...]]:
    with open(path, encoding="utf-8") as f:
        raw = json.load(f)
    out = {}
    for key, idxs in raw.items():
        sent, word = key.split(":")
        out[(int(sent), int(word))] = tuple(idxs)
    return out


def load_table(emb_path, offsets_path) -> EmbeddingTable:
    return EmbeddingTable(rows=read_emb(emb_path), offsets=read_offsets(offsets_path))
