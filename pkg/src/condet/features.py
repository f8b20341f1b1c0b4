"""Per-token feature vectors: verb context, word shape/identity, sentence position."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .corpus_io import Corpus, Sentence

FEATURE_SCHEMA_VERSION = "condet-features/1"

FEATURE_NAMES = (
    "is_verb_prev3",
    "is_verb_prev2",
    "is_verb_prev1",
    "is_verb_curr",
    "is_verb_next1",
    "is_verb_next2",
    "is_verb_next3",
    "dist_prev_verb",
    "dist_next_verb",
    "is_capitalized",
    "word_length",
    "word_id",
    "position_in_sentence",
    "sentence_length",
)
N_FEATURES = len(FEATURE_NAMES)
VERB_FEATURES = frozenset(range(9))

WINDOW = 3
OOV_ID = 0


class Vocabulary(Mapping[str, int]):
    """Lowercased form -> id. Ids are 1..V by descending frequency, ties lexicographic; 0 is OOV."""

    def __init__(self, forms: Iterable[str] = ()):
        self._forms = tuple(forms)
        self._ids = {f: i for i, f in enumerate(self._forms, 1)}
        if len(self._ids) != len(self._forms):
            raise ValueError("vocabulary forms must be unique")

    @classmethod
    def from_counts(cls, counts: Mapping[str, int]) -> "Vocabulary":
        ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
        return cls(f for f, _ in ranked)

    @property
    def forms(self) -> tuple[str, ...]:
        """Forms in id order; ``forms[k]`` has id ``k + 1``."""
        return self._forms

    def lookup(self, form: str) -> int:
        return self._ids.get(form.lower(), OOV_ID)

    def __getitem__(self, form: str) -> int:
        return self._ids[form]

    def __iter__(self):
        return iter(self._forms)

    def __len__(self) -> int:
        return len(self._forms)

    def __eq__(self, other):
        if isinstance(other, Vocabulary):
            return self._forms == other._forms
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return f"Vocabulary(size={len(self)})"


@dataclass(frozen=True)
class VerbPolicy:
    verb_tags: frozenset[str] = field(default_factory=lambda: frozenset({"VERB"}))
    include_aux: bool = False
    effective_tags: frozenset[str] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        tags = frozenset(self.verb_tags)
        if not tags:
            raise ValueError("verb_tags must be non-empty")
        object.__setattr__(self, "verb_tags", tags)
        object.__setattr__(self, "effective_tags", tags | {"AUX"} if self.include_aux else tags)

    def is_verb(self, upos: str) -> bool:
        return upos in self.effective_tags


def build_vocabulary(corpus: Corpus) -> Vocabulary:
    return Vocabulary.from_counts(Counter(t.form.lower() for t in corpus.tokens()))


def extract_features(sentence: Sentence, vocab: Vocabulary,
                     policy: VerbPolicy = VerbPolicy()) -> np.ndarray:
    """Feature matrix of shape (len(sentence), N_FEATURES) for one sentence.

    Windows and verb distances never look past the sentence. A side with no
    verb gets distance ``len(sentence)``.
    """
    n = len(sentence)
    is_verb = policy.is_verb
    verbs = [1 if is_verb(t.upos) else 0 for t in sentence.tokens]

    prev_dist = [n] * n
    last = None
    for i in range(n):
        if last is not None:
            prev_dist[i] = i - last
        if verbs[i]:
            last = i
    next_dist = [n] * n
    last = None
    for i in range(n - 1, -1, -1):
        if last is not None:
            next_dist[i] = last - i
        if verbs[i]:
            last = i

    padded = [0] * WINDOW + verbs + [0] * WINDOW
    out = np.empty((n, N_FEATURES), dtype=np.float64)
    for i, tok in enumerate(sentence.tokens):
        form = tok.form
        out[i] = (
            *padded[i:i + 2 * WINDOW + 1],
            prev_dist[i],
            next_dist[i],
            1 if form[0].isupper() else 0,
            len(form),
            vocab.lookup(form),
            i,
            n,
        )
    return out


def featurize_corpus(corpus: Corpus, vocab: Vocabulary,
                     policy: VerbPolicy = VerbPolicy()) -> tuple[np.ndarray, np.ndarray]:
    """Stack sentence features in corpus order; labels as class indices."""
    blocks = [extract_features(s, vocab, policy) for s in corpus.sentences()]
    if blocks:
        X = np.concatenate(blocks, axis=0)
    else:
        X = np.empty((0, N_FEATURES), dtype=np.float64)
    y = np.fromiter((int(t.label) for t in corpus.tokens()), dtype=np.int64, count=X.shape[0])
    return X, y
