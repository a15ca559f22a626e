"""Minimal graph convolutional network over pooled knowledge-base graphs.

Layer rule: H_{l+1} = relu(A_hat H_l W_l + b_l) with
A_hat = D^{-1/2} (A + I) D^{-1/2}; graphs are read out by per-graph mean
pooling followed by a linear classifier. Everything runs in 64-bit floats
with analytic gradients so training is deterministic per seed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimMismatch,
    EmptyEvalSet,
    IndexOutOfRange,
    MissingLabels,
)
from .pooling import GraphBatch


@dataclass
class GcnModel:
    weights: list[np.ndarray]
    biases: list[np.ndarray]
    w_out: np.ndarray
    b_out: np.ndarray

    @property
    def n_layers(self) -> int:
        return len(self.weights)

    @property
    def in_dim(self) -> int:
        return self.weights[0].shape[0]

    @property
    def n_classes(self) -> int:
        return self.w_out.shape[1]

    def params(self) -> list[np.ndarray]:
        out = []
        for w, b in zip(self.weights, self.biases):
            out.extend((w, b))
        out.extend((self.w_out, self.b_out))
        return out


def _glorot(rng, fan_in: int, fan_out: int) -> np.ndarray:
    limit = math.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_in, fan_out))


def init_model(
    in_dim: int,
    hidden_dim: int = 768,
    n_layers: int = 4,
    n_classes: int = 2,
    seed: int = 42,
) -> GcnModel:
    """Uniform +-sqrt(6/(fan_in+fan_out)) weights from a seeded generator."""
    rng = np.random.default_rng(seed)
    dims = [in_dim] + [hidden_dim] * n_layers
    weights = [_glorot(rng, dims[i], dims[i + 1]) for i in range(n_layers)]
    biases = [np.zeros(dims[i + 1]) for i in range(n_layers)]
    w_out = _glorot(rng, dims[-1], n_classes)
    b_out = np.zeros(n_classes)
    return GcnModel(weights=weights, biases=biases, w_out=w_out, b_out=b_out)


def normalize_adjacency(edges, k: int) -> np.ndarray:
    """D^{-1/2} (A + I) D^{-1/2} with A symmetrized and duplicates collapsed."""
    a = np.zeros((k, k), dtype=np.float64)
    for src, dst in edges:
        if not (0 <= src < k and 0 <= dst < k):
            raise IndexOutOfRange(f"edge ({src}, {dst}) outside 0..{k - 1}")
        a[src, dst] = 1.0
        a[dst, src] = 1.0
    np.fill_diagonal(a, 1.0)
    d_inv_sqrt = 1.0 / np.sqrt(a.sum(axis=1))
    return a * d_inv_sqrt[:, None] * d_inv_sqrt[None, :]


def _pool_matrix(batch: GraphBatch) -> np.ndarray:
    """G x N matrix averaging each graph's node block."""
    pool = np.zeros((batch.n_graphs, batch.n_nodes), dtype=np.float64)
    for node, graph in enumerate(batch.graph_of):
        pool[graph, node] = 1.0 / batch.sizes[graph]
    return pool


def forward(model: GcnModel, batch: GraphBatch):
    """(per-graph logits, cache for the backward pass)."""
    if batch.features.shape[1] != model.in_dim:
        raise DimMismatch(
            f"feature dim {batch.features.shape[1]} != model input dim {model.in_dim}"
        )
    a_hat = normalize_adjacency(batch.edges, batch.n_nodes)
    h = batch.features
    layer_inputs = []  # the AH products, reused for weight gradients
    activations = [h]
    for w, b in zip(model.weights, model.biases):
        ah = a_hat @ h
        z = ah @ w + b
        h = np.maximum(z, 0.0)
        layer_inputs.append(ah)
        activations.append(h)
    pool = _pool_matrix(batch)
    pooled = pool @ h
    logits = pooled @ model.w_out + model.b_out
    cache = {
        "a_hat": a_hat,
        "layer_inputs": layer_inputs,
        "activations": activations,
        "pool": pool,
        "pooled": pooled,
        "logits": logits,
    }
    return logits, cache


def _softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def loss_and_grad(model: GcnModel, batch: GraphBatch):
    """Mean softmax cross-entropy and analytic gradients for every parameter.

    Returned gradients follow model.params() ordering:
    [W_0, b_0, ..., W_{L-1}, b_{L-1}, W_out, b_out].
    """
    if batch.labels is None:
        raise MissingLabels("batch carries no labels")
    logits, cache = forward(model, batch)
    loss, grads = _backward(model, batch, logits, cache)
    return loss, grads


def _backward(model: GcnModel, batch: GraphBatch, logits, cache):
    n_graphs = batch.n_graphs
    probs = _softmax(logits)
    loss = -float(
        np.mean(np.log(probs[np.arange(n_graphs), batch.labels]))
    )

    d_logits = probs.copy()
    d_logits[np.arange(n_graphs), batch.labels] -= 1.0
    d_logits /= n_graphs

    g_w_out = cache["pooled"].T @ d_logits
    g_b_out = d_logits.sum(axis=0)
    d_h = cache["pool"].T @ (d_logits @ model.w_out.T)

    grads_rev = []
    a_hat = cache["a_hat"]
    for layer in range(model.n_layers - 1, -1, -1):
        h_out = cache["activations"][layer + 1]
        d_z = d_h * (h_out > 0.0)
        grads_rev.append(d_z.sum(axis=0))  # bias
        grads_rev.append(cache["layer_inputs"][layer].T @ d_z)  # weight
        d_h = a_hat @ (d_z @ model.weights[layer].T)

    grads = list(reversed(grads_rev))
    grads.extend((g_w_out, g_b_out))
    return loss, grads


@dataclass
class AdamState:
    lr: float = 1e-5
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step: int = 0
    m: list[np.ndarray] = field(default_factory=list)
    v: list[np.ndarray] = field(default_factory=list)


def init_adam(model: GcnModel, lr: float = 1e-5) -> AdamState:
    params = model.params()
    return AdamState(
        lr=lr,
        m=[np.zeros_like(p) for p in params],
        v=[np.zeros_like(p) for p in params],
    )


def adam_step(model: GcnModel, grads, state: AdamState) -> None:
    """One bias-corrected Adam update, in place."""
    state.step += 1
    t = state.step
    for i, (param, grad) in enumerate(zip(model.params(), grads)):
        state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * grad
        state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * grad * grad
        m_hat = state.m[i] / (1.0 - state.beta1**t)
        v_hat = state.v[i] / (1.0 - state.beta2**t)
        param -= state.lr * m_hat / (np.sqrt(v_hat) + state.eps)


def train(model: GcnModel, batches, epochs: int, adam: AdamState, seed: int = 42):
    """Adam training loop; returns [(epoch, mean loss, accuracy), ...].

    Batch order is reshuffled per epoch from the seed, so identical seed and
    data reproduce the log byte for byte.
    """
    batches = list(batches)
    rng = np.random.default_rng(seed)
    log = []
    for epoch in range(1, epochs + 1):
        order = rng.permutation(len(batches))
        loss_sum = 0.0
        correct = 0
        total = 0
        for idx in order:
            batch = batches[idx]
            if batch.labels is None:
                raise MissingLabels("training batch carries no labels")
            logits, cache = forward(model, batch)
            loss, grads = _backward(model, batch, logits, cache)
            preds = logits.argmax(axis=1)
            correct += int((preds == batch.labels).sum())
            total += batch.n_graphs
            loss_sum += loss * batch.n_graphs
            adam_step(model, grads, adam)
        log.append((epoch, loss_sum / total, correct / total))
    return log


def predict(model: GcnModel, batch: GraphBatch) -> np.ndarray:
    logits, _ = forward(model, batch)
    return logits.argmax(axis=1)


def classification_metrics(y_true, y_pred, n_classes: int) -> dict:
    """Accuracy, macro precision, macro F1 over classes 0..n_classes-1.

    Precision is TP/(TP+FP); a class with zero predicted instances contributes
    precision 0 (likewise recall for a class absent from the truth); F1 is the
    per-class harmonic mean, macro-averaged.
    """
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    if y_true.size == 0:
        raise EmptyEvalSet("no predictions to score")
    precisions, f1s = [], []
    for cls in range(n_classes):
        tp = int(((y_pred == cls) & (y_true == cls)).sum())
        fp = int(((y_pred == cls) & (y_true != cls)).sum())
        fn = int(((y_pred != cls) & (y_true == cls)).sum())
        precision = tp / (tp + fp) if tp + fp else 0.0
        recall = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        precisions.append(precision)
        f1s.append(f1)
    return {
        "accuracy": float((y_true == y_pred).sum() / y_true.size),
        "precision_macro": sum(precisions) / n_classes,
        "f1_macro": sum(f1s) / n_classes,
    }


def evaluate(model: GcnModel, batches) -> dict:
    """Score labeled batches: {accuracy, precision_macro, f1_macro}."""
    batches = list(batches)
    if not batches:
        raise EmptyEvalSet("no batches to evaluate")
    y_true, y_pred = [], []
    for batch in batches:
        if batch.labels is None:
            raise MissingLabels("evaluation batch carries no labels")
        y_true.extend(int(y) for y in batch.labels)
        y_pred.extend(int(y) for y in predict(model, batch))
    return classification_metrics(y_true, y_pred, model.n_classes)


def save_checkpoint(path, model: GcnModel, adam: AdamState | None = None, extra: dict | None = None):
    """Versioned JSON checkpoint: shapes + row-major arrays + optimizer state."""

    def dump(arr):
        return {"shape": list(arr.shape), "data": [float(x) for x in np.ravel(arr)]}

    payload = {
        "format": "newskb-gcn",
        "version": 1,
        "weights": [dump(w) for w in model.weights],
        "biases": [dump(b) for b in model.biases],
        "w_out": dump(model.w_out),
        "b_out": dump(model.b_out),
    }
    if adam is not None:
        payload["adam"] = {
            "lr": adam.lr,
            "beta1": adam.beta1,
            "beta2": adam.beta2,
            "eps": adam.eps,
            "step": adam.step,
            "m": [dump(a) for a in adam.m],
            "v": [dump(a) for a in adam.v],
        }
    if extra:
        payload["extra"] = extra
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        json.dump(payload, f, ensure_ascii=False, indent=2)
        f.write("\n")


def load_checkpoint(path) -> tuple[GcnModel, AdamState | None, dict]:
    with open(path, encoding="utf-8") as f:
        payload = json.load(f)
    if payload.get("format") != "newskb-gcn" or payload.get("version") != 1:
        raise DimMismatch(f"{path}: not a v1 GCN checkpoint")

    def load(raw):
        return np.asarray(raw["data"], dtype=np.float64).reshape(raw["shape"])

    model = GcnModel(
        weights=[load(w) for w in payload["weights"]],
        biases=[load(b) for b in payload["biases"]],
        w_out=load(payload["w_out"]),
        b_out=load(payload["b_out"]),
    )
    adam = None
    if "adam" in payload:
        raw = payload["adam"]
        adam = AdamState(
            lr=raw["lr"],
            beta1=raw["beta1"],
            beta2=raw["beta2"],
            eps=raw["eps"],
            step=raw["step"],
            m=[load(a) for a in raw["m"]],
            v=[load(a) for a in raw["v"]],
        )
    return model, adam, payload.get("extra", {})


def write_log_csv(path, log) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write("epoch,loss,acc\n")
        for epoch, loss, acc in log:
            f.write(f"{epoch},{repr(loss)},{repr(acc)}\n")
