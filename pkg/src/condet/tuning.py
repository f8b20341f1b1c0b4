"""Grid search over boosting hyperparameters with document-level k-fold CV."""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .corpus_io import Corpus, Document
from .evaluation import score_corpus
from .features import VerbPolicy, build_vocabulary, featurize_corpus
from .gbdt import Hyperparams, predict_labels, train

GRID_KEYS = ("learning_rate", "max_depth", "n_estimators", "max_delta_step", "min_child_weight")


@dataclass(frozen=True)
class ParamGrid:
    learning_rate: tuple[float, ...] = (0.15, 0.2, 0.25, 0.3)
    max_depth: tuple[int, ...] = (8, 10)
    n_estimators: tuple[int, ...] = (400, 500)
    max_delta_step: tuple[float, ...] = (4.0,)
    min_child_weight: tuple[float, ...] = (1.0,)

    def __post_init__(self):
        for k in GRID_KEYS:
            values = tuple(getattr(self, k))
            if not values:
                raise ValueError(f"grid entry {k!r} is empty")
            object.__setattr__(self, k, values)

    def combinations(self, base: Hyperparams = Hyperparams()) -> list[Hyperparams]:
        lists = [getattr(self, k) for k in GRID_KEYS]
        return [base.replace(**dict(zip(GRID_KEYS, combo))) for combo in itertools.product(*lists)]

    def to_dict(self) -> dict:
        return {k: list(getattr(self, k)) for k in GRID_KEYS}

    @classmethod
    def from_dict(cls, d: dict) -> "ParamGrid":
        unknown = set(d) - set(GRID_KEYS)
        if unknown:
            raise ValueError(f"unknown grid keys: {sorted(unknown)}")
        return cls(**{k: tuple(v if isinstance(v, list) else [v]) for k, v in d.items()})


@dataclass
class CvResult:
    params: Hyperparams
    fold_f1: list[float]
    rank: int = 0
    mean_f1: float = field(init=False)

    def __post_init__(self):
        self.mean_f1 = float(sum(self.fold_f1) / len(self.fold_f1))


def make_folds(corpus: Corpus, k: int = 3, seed: int = 0) -> list[list[int]]:
    """Shuffle document indices with ``seed`` and deal them round-robin into ``k`` folds."""
    n = len(corpus.documents)
    if k < 2:
        raise ValueError("k must be at least 2")
    if k > n:
        raise ValueError(f"cannot make {k} folds from {n} documents")
    order = np.random.default_rng(seed).permutation(n)
    folds = [[] for _ in range(k)]
    for pos, doc in enumerate(order):
        folds[pos % k].append(int(doc))
    return [sorted(f) for f in folds]


def split_single_document(corpus: Corpus, k: int) -> Corpus:
    """Cut a one-document corpus into ``k`` contiguous sentence blocks."""
    (doc,) = corpus.documents
    sents = doc.sentences
    if k > len(sents):
        raise ValueError(f"cannot make {k} folds from {len(sents)} sentences")
    bounds = np.linspace(0, len(sents), k + 1).round().astype(int)
    return Corpus(tuple(
        Document(f"{doc.doc_id}#{i}", sents[bounds[i]:bounds[i + 1]]) for i in range(k)
    ))


def _selection_key(r: CvResult):
    p = r.params
    return (-r.mean_f1, p.n_estimators, p.max_depth, p.learning_rate,
            p.max_delta_step, p.min_child_weight, p.lambda_reg, p.gamma)


def resolve_threads(n_threads: int | None = None) -> int:
    if n_threads is None:
        n_threads = int(os.environ.get("CONDET_THREADS", "0") or 0)
    return n_threads if n_threads > 0 else (os.cpu_count() or 1)


def _fold_scores(train_c: Corpus, test_c: Corpus, group: list[Hyperparams], weighted: bool,
                 policy: VerbPolicy) -> list[float]:
    # one fit at the largest n_estimators; smaller settings are its prefixes
    vocab = build_vocabulary(train_c)
    X, y = featurize_corpus(train_c, vocab, policy)
    longest = max(group, key=lambda hp: hp.n_estimators)
    model = train(X, y, longest, weighted=weighted, vocab=vocab, verb_policy=policy)
    out = []
    for hp in group:
        pred = predict_labels(model, test_c, n_rounds=hp.n_estimators)
        out.append(score_corpus(test_c, pred).f1)
    return out


def grid_search(corpus: Corpus, grid: ParamGrid = ParamGrid(), k: int = 3, weighted: bool = False,
                seed: int = 0, base: Hyperparams = Hyperparams(),
                policy: VerbPolicy = VerbPolicy(), n_threads: int | None = None,
                ) -> tuple[Hyperparams, list[CvResult]]:
    """Cross-validated span F1 for every grid point; returns the winner and the full table
    (in grid order, each row carrying its rank)."""
    if len(corpus.documents) == 1:
        corpus = split_single_document(corpus, k)
    folds = make_folds(corpus, k, seed)
    combos = grid.combinations(base.replace(seed=seed))

    groups: dict[tuple, list[int]] = {}
    for i, hp in enumerate(combos):
        key = tuple(v for name, v in hp.to_dict().items() if name != "n_estimators")
        groups.setdefault(key, []).append(i)

    jobs = []
    for fi, held_out in enumerate(folds):
        rest = [d for j, f in enumerate(folds) if j != fi for d in f]
        for members in groups.values():
            jobs.append((fi, members, corpus.subset(rest), corpus.subset(held_out)))

    def run(job):
        fi, members, train_c, test_c = job
        try:
            return _fold_scores(train_c, test_c, [combos[i] for i in members], weighted, policy)
        except Exception as e:
            bad = combos[members[-1]].to_dict()
            raise RuntimeError(f"training failed for {bad} on fold {fi}: {e}") from e

    threads = resolve_threads(n_threads)
    if threads == 1:
        results = [run(j) for j in jobs]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, jobs))

    fold_f1 = [[0.0] * k for _ in combos]
    for (fi, members, _, _), scores in zip(jobs, results):
        for i, s in zip(members, scores):
            fold_f1[i][fi] = s

    table = [CvResult(hp, fold_f1[i]) for i, hp in enumerate(combos)]
    for rank, r in enumerate(sorted(table, key=_selection_key), 1):
        r.rank = rank
    best = min(table, key=_selection_key)
    return best.params, table
