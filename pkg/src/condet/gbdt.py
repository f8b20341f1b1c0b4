"""Multiclass gradient-boosted trees: softmax objective, Newton leaves, exact greedy splits."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, fields
from typing import Sequence

import numpy as np

from ._kernels import predict_forest
from .corpus_io import Corpus, Label
from .features import (
    FEATURE_NAMES,
    FEATURE_SCHEMA_VERSION,
    N_FEATURES,
    VerbPolicy,
    Vocabulary,
    featurize_corpus,
)

N_CLASSES = len(Label)
CLASS_LABELS = tuple(lab.tag for lab in Label)
HESS_FLOOR = 1e-16


class SchemaMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class Hyperparams:
    learning_rate: float = 0.2
    max_depth: int = 8
    n_estimators: int = 500
    max_delta_step: float = 4.0
    min_child_weight: float = 1.0
    lambda_reg: float = 1.0
    gamma: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.learning_rate <= 1.0:
            raise ValueError(f"learning_rate must be in (0, 1], got {self.learning_rate}")
        if self.max_depth < 1:
            raise ValueError(f"max_depth must be >= 1, got {self.max_depth}")
        if self.n_estimators < 1:
            raise ValueError(f"n_estimators must be >= 1, got {self.n_estimators}")
        for name in ("max_delta_step", "min_child_weight", "lambda_reg", "gamma"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "Hyperparams":
        known = {f.name: f.type for f in fields(cls)}
        unknown = set(d) - set(known)
        if unknown:
            raise ValueError(f"unknown hyperparameters: {sorted(unknown)}")
        kw = {}
        for k, v in d.items():
            kw[k] = int(v) if k in ("max_depth", "n_estimators", "seed") else float(v)
        return cls(**kw)

    def replace(self, **changes) -> "Hyperparams":
        return Hyperparams.from_dict({**self.to_dict(), **changes})


# Best settings reported for the four corpus/loss combinations.
PRESETS = {
    "pdtb": Hyperparams(0.2, 8, 500, 4.0, 1.0),
    "pdtb-weighted": Hyperparams(0.3, 8, 400, 4.0, 1.0),
    "tdb": Hyperparams(0.15, 10, 500, 4.0, 1.0),
    "tdb-weighted": Hyperparams(0.15, 8, 400, 4.0, 1.0),
}


@dataclass(frozen=True)
class ClassWeights:
    w: tuple[float, ...]

    def __post_init__(self):
        if any(not (x > 0 and math.isfinite(x)) for x in self.w):
            raise ValueError("class weights must be positive and finite")

    def sample_weights(self, labels: np.ndarray) -> np.ndarray:
        return np.asarray(self.w, dtype=np.float64)[labels]


def compute_class_weights(labels, n_classes: int = N_CLASSES) -> ClassWeights:
    """Inverse-frequency weights ``N / (C * n_i)``."""
    labels = np.asarray(labels, dtype=np.int64)
    counts = np.bincount(labels, minlength=n_classes) if labels.size else np.zeros(n_classes, int)
    if len(counts) > n_classes:
        raise ValueError(f"label {len(counts) - 1} out of range for {n_classes} classes")
    for i, n in enumerate(counts):
        if n == 0:
            raise ValueError(f"class {i} has zero instances")
    N = int(counts.sum())
    return ClassWeights(tuple(N / (n_classes * int(n)) for n in counts))


def softmax(scores: np.ndarray) -> np.ndarray:
    z = scores - scores.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def softmax_grad_hess(scores: np.ndarray, targets: np.ndarray,
                      sample_weights: np.ndarray | None = None):
    scores = np.asarray(scores, dtype=np.float64)
    n = scores.shape[0]
    w = np.ones(n) if sample_weights is None else np.asarray(sample_weights, dtype=np.float64)
    p = softmax(scores)
    onehot = np.zeros_like(p)
    onehot[np.arange(n), targets] = 1.0
    grad = w[:, None] * (p - onehot)
    hess = np.maximum(w[:, None] * p * (1.0 - p), HESS_FLOOR)
    return grad, hess


def weighted_log_loss(scores: np.ndarray, targets: np.ndarray,
                      sample_weights: np.ndarray | None = None) -> float:
    """Weighted mean of ``-log softmax(scores)[target]``."""
    scores = np.asarray(scores, dtype=np.float64)
    n = scores.shape[0]
    if n == 0:
        return 0.0
    w = np.ones(n) if sample_weights is None else np.asarray(sample_weights, dtype=np.float64)
    m = scores.max(axis=1)
    lse = m + np.log(np.exp(scores - m[:, None]).sum(axis=1))
    nll = lse - scores[np.arange(n), targets]
    return float(np.dot(w, nll) / w.sum())


@dataclass
class TreeNode:
    """Leaf when ``feature`` is -1. Rows with ``x[feature] < threshold`` go left."""

    feature: int = -1
    threshold: float = 0.0
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None
    value: float = 0.0
    gain: float = 0.0
    cover: float = 0.0

    @property
    def is_leaf(self) -> bool:
        return self.feature < 0

    def depth(self) -> int:
        if self.is_leaf:
            return 0
        return 1 + max(self.left.depth(), self.right.depth())

    def iter_nodes(self):
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            if not node.is_leaf:
                stack.append(node.right)
                stack.append(node.left)

    def predict_one(self, x) -> float:
        node = self
        while not node.is_leaf:
            node = node.left if x[node.feature] < node.threshold else node.right
        return node.value


@dataclass(frozen=True)
class Split:
    feature: int
    threshold: float
    gain: float


def _midpoint(a: float, b: float) -> float:
    mid = a + (b - a) / 2.0
    # adjacent floats can round the midpoint down onto ``a``
    return mid if a < mid <= b else b


def _best_split(srt: np.ndarray, X: np.ndarray, grad: np.ndarray, hess: np.ndarray,
                hp: Hyperparams, G: float, H: float) -> Split | None:
    n, F = srt.shape
    if n < 2:
        return None
    vals = X[srt, np.arange(F)]
    GL = np.cumsum(grad[srt], axis=0)[:-1]
    HL = np.cumsum(hess[srt], axis=0)[:-1]
    GR = G - GL
    HR = H - HL
    lam = hp.lambda_reg
    with np.errstate(divide="ignore", invalid="ignore"):
        gain = 0.5 * (GL * GL / (HL + lam) + GR * GR / (HR + lam) - G * G / (H + lam)) - hp.gamma
    ok = (vals[1:] != vals[:-1]) & (HL >= hp.min_child_weight) & (HR >= hp.min_child_weight)
    ok &= gain > 0
    if not ok.any():
        return None
    # feature-major flattening: argmax's first hit is the lowest feature, then lowest threshold
    masked = np.where(ok, gain, -np.inf).T
    f, pos = divmod(int(np.argmax(masked)), n - 1)
    return Split(f, _midpoint(float(vals[pos, f]), float(vals[pos + 1, f])), float(masked[f, pos]))


def _presort(rows: np.ndarray, X: np.ndarray) -> np.ndarray:
    rows = np.asarray(rows, dtype=np.int64)
    order = np.argsort(X[rows], axis=0, kind="stable")
    return rows[order]


def find_best_split(rows, X: np.ndarray, grad: np.ndarray, hess: np.ndarray,
                    hp: Hyperparams) -> Split | None:
    """Exact greedy search over all features for the highest second-order gain."""
    rows = np.asarray(rows, dtype=np.int64)
    if rows.size < 2:
        return None
    return _best_split(_presort(rows, X), X, grad, hess, hp,
                       float(grad[rows].sum()), float(hess[rows].sum()))


def _leaf_value(G: float, H: float, hp: Hyperparams) -> float:
    v = -G / (H + hp.lambda_reg)
    if hp.max_delta_step > 0:
        v = min(max(v, -hp.max_delta_step), hp.max_delta_step)
    return v


def _grow(srt, X, grad, hess, hp, depth, out):
    rows = srt[:, 0]
    G = float(grad[rows].sum())
    H = float(hess[rows].sum())
    split = None
    if depth < hp.max_depth and len(rows) >= 2:
        split = _best_split(srt, X, grad, hess, hp, G, H)
    if split is None:
        value = _leaf_value(G, H, hp)
        if out is not None:
            out[rows] = value
        return TreeNode(value=value, cover=H)
    go_left = X[srt, split.feature] < split.threshold
    n_left = int(go_left[:, 0].sum())
    F = srt.shape[1]
    left_srt = srt.T[go_left.T].reshape(F, n_left).T
    right_srt = srt.T[~go_left.T].reshape(F, len(rows) - n_left).T
    return TreeNode(
        feature=split.feature,
        threshold=split.threshold,
        left=_grow(left_srt, X, grad, hess, hp, depth + 1, out),
        right=_grow(right_srt, X, grad, hess, hp, depth + 1, out),
        value=_leaf_value(G, H, hp),
        gain=split.gain,
        cover=H,
    )


def build_tree(rows, X: np.ndarray, grad: np.ndarray, hess: np.ndarray,
               hp: Hyperparams) -> TreeNode:
    rows = np.asarray(rows, dtype=np.int64)
    if rows.size == 0:
        raise ValueError("cannot build a tree on zero rows")
    return _grow(_presort(rows, X), X, grad, hess, hp, 0, None)


class _Forest:
    """Flat arrays for the compiled prediction kernel."""

    def __init__(self, trees: Sequence[Sequence[TreeNode]], n_classes: int):
        feature, threshold, left, right, value, roots = [], [], [], [], [], []
        for rnd in trees:
            for tree in rnd:
                roots.append(len(feature))
                self._flatten(tree, feature, threshold, left, right, value)
        self.n_classes = n_classes
        self.n_rounds = len(trees)
        self.feature = np.asarray(feature, dtype=np.int64)
        self.threshold = np.asarray(threshold, dtype=np.float64)
        self.left = np.asarray(left, dtype=np.int64)
        self.right = np.asarray(right, dtype=np.int64)
        self.value = np.asarray(value, dtype=np.float64)
        self.roots = np.asarray(roots, dtype=np.int64)

    @staticmethod
    def _flatten(root, feature, threshold, left, right, value):
        stack = [(root, -1, False)]
        while stack:
            node, parent, is_right = stack.pop()
            idx = len(feature)
            if parent >= 0:
                (right if is_right else left)[parent] = idx
            feature.append(node.feature)
            threshold.append(node.threshold)
            left.append(-1)
            right.append(-1)
            value.append(node.value)
            if not node.is_leaf:
                stack.append((node.right, idx, True))
                stack.append((node.left, idx, False))


@dataclass
class GbdtModel:
    trees: list[list[TreeNode]]
    hyperparams: Hyperparams
    vocab: Vocabulary
    class_weights: ClassWeights | None = None
    verb_policy: VerbPolicy = field(default_factory=VerbPolicy)
    feature_schema_version: str = FEATURE_SCHEMA_VERSION
    class_labels: tuple[str, ...] = CLASS_LABELS
    base_score: tuple[float, ...] = (0.0,) * N_CLASSES
    loss_history: list[float] = field(default_factory=list, compare=False, repr=False)
    _forest: _Forest | None = field(default=None, init=False, compare=False, repr=False)

    def __post_init__(self):
        C = len(self.class_labels)
        if len(self.base_score) != C:
            raise ValueError("base_score must have one entry per class")
        for t, rnd in enumerate(self.trees):
            if len(rnd) != C:
                raise ValueError(f"round {t} has {len(rnd)} trees, expected {C}")
        if len(self.trees) > self.hyperparams.n_estimators:
            raise ValueError("more rounds than n_estimators")
        if self.class_weights is not None and len(self.class_weights.w) != C:
            raise ValueError("class_weights must have one entry per class")

    @property
    def n_classes(self) -> int:
        return len(self.class_labels)

    @property
    def n_rounds(self) -> int:
        return len(self.trees)

    def forest(self) -> _Forest:
        if self._forest is None:
            self._forest = _Forest(self.trees, self.n_classes)
        return self._forest


def train(X: np.ndarray, y: np.ndarray, hp: Hyperparams, weighted: bool = False,
          vocab: Vocabulary | None = None, verb_policy: VerbPolicy | None = None,
          callback=None) -> GbdtModel:
    """Fit ``hp.n_estimators`` rounds of one tree per class.

    ``callback(round_index, loss)`` is invoked after every round with the
    weighted training log-loss.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValueError("training requires at least one row")
    if X.shape[0] != y.shape[0]:
        raise ValueError("features and labels differ in length")
    C = N_CLASSES
    if y.min() < 0 or y.max() >= C:
        raise ValueError(f"labels must lie in 0..{C - 1}")

    cw = compute_class_weights(y, C) if weighted else None
    w = cw.sample_weights(y) if cw is not None else np.ones(len(y))
    base = np.zeros(C)
    scores = np.tile(base, (len(y), 1))
    presorted = np.argsort(X, axis=0, kind="stable")
    lr = hp.learning_rate
    history = [weighted_log_loss(scores, y, w)]
    trees = []
    delta = np.empty(len(y))
    for t in range(hp.n_estimators):
        grad, hess = softmax_grad_hess(scores, y, w)
        grad = np.ascontiguousarray(grad.T)
        hess = np.ascontiguousarray(hess.T)
        rnd = []
        updates = []
        for c in range(C):
            rnd.append(_grow(presorted, X, grad[c], hess[c], hp, 0, delta))
            updates.append(lr * delta)
        for c in range(C):
            scores[:, c] += updates[c]
        trees.append(rnd)
        history.append(weighted_log_loss(scores, y, w))
        if callback is not None:
            callback(t, history[-1])

    return GbdtModel(
        trees=trees,
        hyperparams=hp,
        vocab=vocab if vocab is not None else Vocabulary(),
        class_weights=cw,
        verb_policy=verb_policy if verb_policy is not None else VerbPolicy(),
        base_score=tuple(float(b) for b in base),
        loss_history=history,
    )


def predict_scores(model: GbdtModel, X: np.ndarray, n_rounds: int | None = None) -> np.ndarray:
    """Raw class scores; ``n_rounds`` truncates the ensemble to its first rounds."""
    if model.feature_schema_version != FEATURE_SCHEMA_VERSION:
        raise SchemaMismatchError(
            f"model feature schema {model.feature_schema_version!r} does not match "
            f"{FEATURE_SCHEMA_VERSION!r}"
        )
    X = np.ascontiguousarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != N_FEATURES:
        raise SchemaMismatchError(f"expected {N_FEATURES} features per row, got shape {X.shape}")
    forest = model.forest()
    rounds = forest.n_rounds if n_rounds is None else min(n_rounds, forest.n_rounds)
    out = np.empty((X.shape[0], model.n_classes))
    predict_forest(X, forest.feature, forest.threshold, forest.left, forest.right,
                   forest.value, forest.roots, model.n_classes, rounds,
                   model.hyperparams.learning_rate, np.asarray(model.base_score), out)
    return out


def predict_labels(model: GbdtModel, corpus: Corpus, n_rounds: int | None = None) -> list[Label]:
    X, _ = featurize_corpus(corpus, model.vocab, model.verb_policy)
    scores = predict_scores(model, X, n_rounds)
    return [Label(int(k)) for k in np.argmax(scores, axis=1)] if len(scores) else []


def feature_importance(model: GbdtModel, kind: str = "gain") -> list[tuple[str, float]]:
    """Per-feature total split gain (``gain``) or number of splits (``split_count``)."""
    if kind not in ("gain", "split_count"):
        raise ValueError(f"unknown importance kind {kind!r}")
    if model.n_rounds == 0:
        raise ValueError("model has no trees")
    totals = [0.0] * N_FEATURES
    for rnd in model.trees:
        for tree in rnd:
            for node in tree.iter_nodes():
                if not node.is_leaf:
                    totals[node.feature] += node.gain if kind == "gain" else 1
    ranked = sorted(zip(FEATURE_NAMES, totals), key=lambda kv: (-kv[1], kv[0]))
    if kind == "split_count":
        return [(name, int(v)) for name, v in ranked]
    return ranked
