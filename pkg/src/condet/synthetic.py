"""Synthetic corpora for tests and experiments.

Connectives from a fixed lexicon are planted within two tokens of a verb and
labeled B-Conn/I-Conn; the same forms also occur as distractors at least five
tokens away from any verb and are labeled O.
"""

from __future__ import annotations

import numpy as np

from .corpus_io import Corpus, Document, Label, Sentence, Token

CONNECTIVES = (
    ("because",),
    ("however",),
    ("although",),
    ("but",),
    ("then",),
    ("and",),
    ("while",),
    ("since",),
    ("even", "though"),
    ("in", "addition"),
)
CONNECTIVE_POS = {
    "because": "SCONJ", "however": "ADV", "although": "SCONJ", "but": "CCONJ",
    "then": "ADV", "and": "CCONJ", "while": "SCONJ", "since": "SCONJ",
    "even": "ADV", "though": "SCONJ", "in": "ADP", "addition": "NOUN",
}
NOUNS = ("market", "company", "river", "teacher", "report", "city", "price", "garden",
         "window", "engine", "student", "letter", "bank", "island", "paper", "winter")
ADJS = ("large", "quiet", "new", "old", "bright", "early", "strong", "small")
DETS = ("the", "a", "this", "every")
PRONS = ("he", "she", "they", "it", "we")
VERBS = ("said", "runs", "opened", "fell", "wrote", "grows", "closed", "left", "saw", "moved")

MIN_DISTRACTOR_GAP = 5


def _filler(rng) -> tuple[str, str]:
    r = rng.random()
    if r < 0.45:
        return rng.choice(NOUNS), "NOUN"
    if r < 0.65:
        return rng.choice(ADJS), "ADJ"
    if r < 0.85:
        return rng.choice(DETS), "DET"
    return rng.choice(PRONS), "PRON"


def _fillers(rng, n) -> list[tuple[str, str, Label]]:
    return [(*_filler(rng), Label.O) for _ in range(n)]


def _connective(rng, discourse: bool) -> list[tuple[str, str, Label]]:
    form = CONNECTIVES[rng.integers(len(CONNECTIVES))]
    out = []
    for k, w in enumerate(form):
        lab = (Label.BConn if k == 0 else Label.IConn) if discourse else Label.O
        out.append((w, CONNECTIVE_POS[w], lab))
    return out


def _verb(rng):
    return (rng.choice(VERBS), "VERB", Label.O)


def _sentence(rng) -> Sentence:
    chunks = []
    if rng.random() < 0.6:
        conn = _connective(rng, True)
        gap = _fillers(rng, int(rng.integers(0, 2)))
        if rng.random() < 0.5:
            chunks.append(conn + gap + [_verb(rng)])
        else:
            chunks.append([_verb(rng)] + gap + conn)
    else:
        chunks.append(_fillers(rng, int(rng.integers(0, 3))) + [_verb(rng)])
    if rng.random() < 0.5:
        ndc = _connective(rng, False)
        pad = _fillers(rng, MIN_DISTRACTOR_GAP + int(rng.integers(0, 3)))
        if rng.random() < 0.5:
            chunks.append(pad + ndc)
        else:
            chunks.insert(0, ndc + pad)
    toks = _fillers(rng, int(rng.integers(0, 3)))
    for ch in chunks:
        toks += ch
    if rng.random() < 0.5 or len(toks) < 3:
        toks += _fillers(rng, 2)
    form, pos, lab = toks[0]
    toks[0] = (form[0].upper() + form[1:], pos, lab)
    return Sentence(tuple(Token(f, p, lab) for f, p, lab in toks))


def make_corpus(n_docs: int = 20, sentences_per_doc: int = 15, seed: int = 0,
                prefix: str = "doc") -> Corpus:
    rng = np.random.default_rng(seed)
    docs = []
    for d in range(n_docs):
        sents = tuple(_sentence(rng) for _ in range(sentences_per_doc))
        docs.append(Document(f"{prefix}{d:04d}", sents))
    return Corpus(tuple(docs))


def corpus_from_counts(count_b: int, count_i: int, count_o: int,
                       sentence_length: int = 50) -> str:
    """TSV text with exactly the given label counts (single document)."""
    labels = ["B-Conn\tSCONJ"] * count_b + ["I-Conn\tSCONJ"] * count_i + ["O\tNOUN"] * count_o
    lines = ["# doc = counts"]
    for k, item in enumerate(labels):
        tag, pos = item.split("\t")
        lines.append(f"w\t{pos}\t{tag}")
        if (k + 1) % sentence_length == 0:
            lines.append("")
    if lines[-1] != "":
        lines.append("")
    return "\n".join(lines) + "\n"
