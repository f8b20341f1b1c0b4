"""Exact-span scoring, per-connective error counts and inference timing."""

from __future__ import annotations

import statistics
import time
from collections import defaultdict
from dataclasses import dataclass
from typing import Sequence

from ._kernels import warmup
from .corpus_io import Corpus, Label
from .features import featurize_corpus
from .gbdt import GbdtModel, predict_scores


@dataclass(frozen=True, order=True)
class Span:
    start: int
    end: int  # inclusive
    form: str = ""


@dataclass(frozen=True)
class ScoreReport:
    tp: int
    fp: int
    fn: int
    inference_seconds: float | None = None

    @property
    def precision(self) -> float:
        d = self.tp + self.fp
        return self.tp / d if d else 0.0

    @property
    def recall(self) -> float:
        d = self.tp + self.fn
        return self.tp / d if d else 0.0

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if p + r else 0.0


@dataclass(frozen=True)
class ConnectiveErrorRow:
    form: str
    tp: int
    tn: int
    fp: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn

    @property
    def accuracy(self) -> float:
        return (self.tp + self.tn) / self.total if self.total else 0.0


def extract_spans(labels: Sequence[Label], forms: Sequence[str] | None = None,
                  offset: int = 0) -> list[Span]:
    """Maximal B-Conn I-Conn* runs; an I-Conn with no open span starts a new one."""
    spans = []
    start = None
    for i, lab in enumerate(labels):
        if lab == Label.BConn or (lab == Label.IConn and start is None):
            if start is not None:
                spans.append((start, i - 1))
            start = i
        elif lab == Label.O and start is not None:
            spans.append((start, i - 1))
            start = None
    if start is not None:
        spans.append((start, len(labels) - 1))
    return [
        Span(s + offset, e + offset, " ".join(forms[s:e + 1]) if forms is not None else "")
        for s, e in spans
    ]


def _segments(n: int, sentence_lengths: Sequence[int] | None):
    if sentence_lengths is None:
        yield 0, n
        return
    if sum(sentence_lengths) != n:
        raise ValueError("sentence lengths do not add up to the sequence length")
    pos = 0
    for length in sentence_lengths:
        yield pos, pos + length
        pos += length


def spans_by_sentence(labels: Sequence[Label], sentence_lengths: Sequence[int] | None = None,
                      forms: Sequence[str] | None = None) -> list[Span]:
    out = []
    for a, b in _segments(len(labels), sentence_lengths):
        out += extract_spans(labels[a:b], forms[a:b] if forms is not None else None, offset=a)
    return out


def score_spans(gold: Sequence[Label], pred: Sequence[Label],
                sentence_lengths: Sequence[int] | None = None) -> ScoreReport:
    """Micro-averaged exact-span match counts. Spans never cross sentence boundaries
    when ``sentence_lengths`` is given."""
    if len(gold) != len(pred):
        raise ValueError(f"gold has {len(gold)} labels, prediction has {len(pred)}")
    g = {(s.start, s.end) for s in spans_by_sentence(gold, sentence_lengths)}
    p = {(s.start, s.end) for s in spans_by_sentence(pred, sentence_lengths)}
    tp = len(g & p)
    return ScoreReport(tp=tp, fp=len(p) - tp, fn=len(g) - tp)


def score_corpus(gold: Corpus, pred: Sequence[Label]) -> ScoreReport:
    return score_spans(gold.labels(), pred, gold.sentence_lengths())


def error_report(corpus: Corpus, gold: Sequence[Label], pred: Sequence[Label]) -> list[ConnectiveErrorRow]:
    """Per surface form: exact-match TP, unmatched predictions (FP), missed gold spans (FN)
    and occurrences of the form that touch no gold or predicted span (TN)."""
    if not (len(gold) == len(pred) == corpus.n_tokens):
        raise ValueError("gold, prediction and corpus differ in length")
    forms = [t.form for t in corpus.tokens()]
    lengths = corpus.sentence_lengths()
    gold_spans = spans_by_sentence(gold, lengths, forms)
    pred_spans = spans_by_sentence(pred, lengths, forms)
    gold_keys = {(s.start, s.end) for s in gold_spans}
    pred_keys = {(s.start, s.end) for s in pred_spans}

    counts = defaultdict(lambda: [0, 0, 0, 0])  # tp, tn, fp, fn
    for s in gold_spans:
        counts[s.form][0 if (s.start, s.end) in pred_keys else 3] += 1
    for s in pred_spans:
        if (s.start, s.end) not in gold_keys:
            counts[s.form][2] += 1

    covered = [False] * len(forms)
    for s in gold_spans + pred_spans:
        for i in range(s.start, s.end + 1):
            covered[i] = True
    by_length = defaultdict(set)
    for form in counts:
        words = tuple(form.split(" "))
        by_length[len(words)].add(words)
    for a, b in _segments(len(forms), lengths):
        for k, wanted in by_length.items():
            for i in range(a, b - k + 1):
                words = tuple(forms[i:i + k])
                if words in wanted and not any(covered[i:i + k]):
                    counts[" ".join(words)][1] += 1

    rows = [ConnectiveErrorRow(f, *c) for f, c in counts.items()]
    rows.sort(key=lambda r: (-r.total, r.form))
    return rows


def time_inference(model: GbdtModel, corpus: Corpus, repetitions: int = 5) -> tuple[float, float]:
    """Median wall-clock seconds of featurize + predict, and tokens per second."""
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    warmup()
    model.forest()
    times = []
    for _ in range(repetitions):
        t0 = time.perf_counter()
        X, _ = featurize_corpus(corpus, model.vocab, model.verb_policy)
        scores = predict_scores(model, X)
        scores.argmax(axis=1)
        times.append(time.perf_counter() - t0)
    seconds = statistics.median(times)
    return seconds, corpus.n_tokens / seconds
