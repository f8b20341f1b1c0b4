"""Token-level corpus files: CoNLL-U (gold label in MISC ``Conn=``) and 3-column TSV."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

ID, FORM, LEMMA, UPOS, XPOS, FEATS, HEAD, DEPREL, DEPS, MISC = range(10)

FORMATS = ("conllu", "tsv")


class CorpusFormatError(ValueError):
    """Raised for malformed corpus files; carries the offending line number."""

    def __init__(self, message: str, lineno: int | None = None, path=None):
        self.lineno = lineno
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if lineno is not None:
            where += f"{lineno}:"
        super().__init__(f"{where} {message}" if where else message)


class Label(enum.IntEnum):
    O = 0
    BConn = 1
    IConn = 2

    @property
    def tag(self) -> str:
        return _TAGS[self]

    @classmethod
    def parse(cls, text: str) -> "Label":
        try:
            return _BY_TAG[text]
        except KeyError:
            raise ValueError(f"unknown label {text!r}") from None

    def __str__(self) -> str:
        return self.tag


_TAGS = {Label.O: "O", Label.BConn: "B-Conn", Label.IConn: "I-Conn"}
_BY_TAG = {v: k for k, v in _TAGS.items()}


@dataclass(frozen=True)
class Token:
    form: str
    upos: str
    label: Label = Label.O
    # original CoNLL-U columns, kept so predictions can be written back unchanged
    columns: tuple[str, ...] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not self.form:
            raise ValueError("token form must be non-empty")
        if not isinstance(self.label, Label):
            object.__setattr__(self, "label", Label(self.label))


@dataclass(frozen=True)
class Sentence:
    tokens: tuple[Token, ...]

    def __post_init__(self):
        if not self.tokens:
            raise ValueError("sentence must contain at least one token")
        if not isinstance(self.tokens, tuple):
            object.__setattr__(self, "tokens", tuple(self.tokens))

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)

    @property
    def forms(self) -> list[str]:
        return [t.form for t in self.tokens]

    @property
    def labels(self) -> list[Label]:
        return [t.label for t in self.tokens]


@dataclass(frozen=True)
class Document:
    doc_id: str
    sentences: tuple[Sentence, ...]

    def __post_init__(self):
        if not self.sentences:
            raise ValueError(f"document {self.doc_id!r} has no sentences")
        if not isinstance(self.sentences, tuple):
            object.__setattr__(self, "sentences", tuple(self.sentences))


@dataclass(frozen=True)
class Corpus:
    documents: tuple[Document, ...] = ()

    def __post_init__(self):
        if not isinstance(self.documents, tuple):
            object.__setattr__(self, "documents", tuple(self.documents))
        seen = set()
        for doc in self.documents:
            if doc.doc_id in seen:
                raise ValueError(f"duplicate document id {doc.doc_id!r}")
            seen.add(doc.doc_id)

    def sentences(self) -> Iterable[Sentence]:
        for doc in self.documents:
            yield from doc.sentences

    def tokens(self) -> Iterable[Token]:
        for sent in self.sentences():
            yield from sent.tokens

    @property
    def n_tokens(self) -> int:
        return sum(len(s) for s in self.sentences())

    @property
    def n_sentences(self) -> int:
        return sum(len(d.sentences) for d in self.documents)

    def labels(self) -> list[Label]:
        return [t.label for t in self.tokens()]

    def sentence_lengths(self) -> list[int]:
        return [len(s) for s in self.sentences()]

    def subset(self, doc_indices: Iterable[int]) -> "Corpus":
        return Corpus(tuple(self.documents[i] for i in sorted(doc_indices)))

    def relabel(self, labels: Sequence[Label]) -> "Corpus":
        """Copy of the corpus with ``labels`` substituted token by token."""
        if len(labels) != self.n_tokens:
            raise ValueError(
                f"got {len(labels)} labels for a corpus of {self.n_tokens} tokens"
            )
        it = iter(labels)
        docs = []
        for doc in self.documents:
            sents = []
            for sent in doc.sentences:
                sents.append(Sentence(tuple(
                    Token(t.form, t.upos, Label(next(it)), t.columns) for t in sent.tokens
                )))
            docs.append(Document(doc.doc_id, tuple(sents)))
        return Corpus(tuple(docs))


@dataclass(frozen=True)
class LabelStats:
    count_b: int
    count_i: int
    count_o: int

    @property
    def total(self) -> int:
        return self.count_b + self.count_i + self.count_o

    @property
    def connective_proportion(self) -> float:
        if self.total == 0:
            return 0.0
        return (self.count_b + self.count_i) / self.total


def infer_format(path) -> str:
    suffix = Path(path).suffix.lower()
    return "conllu" if suffix in (".conllu", ".conll") else "tsv"


DEFAULT_DOC_ID = "default"


class _Builder:
    """Accumulates sentences into documents while a file is parsed."""

    def __init__(self, path):
        self.path = path
        self.docs: list[Document] = []
        self.doc_ids: set[str] = set()
        self.doc_id: str | None = None
        self.doc_line = 0
        self.sents: list[Sentence] = []
        self.tokens: list[Token] = []

    def end_sentence(self):
        if self.tokens:
            self.sents.append(Sentence(tuple(self.tokens)))
            self.tokens = []

    def end_document(self):
        self.end_sentence()
        if self.doc_id is None and not self.sents:
            return
        doc_id = DEFAULT_DOC_ID if self.doc_id is None else self.doc_id
        if not self.sents:
            raise CorpusFormatError(f"document {doc_id!r} is empty", self.doc_line, self.path)
        if doc_id in self.doc_ids:
            raise CorpusFormatError(f"duplicate document id {doc_id!r}", self.doc_line, self.path)
        self.doc_ids.add(doc_id)
        self.docs.append(Document(doc_id, tuple(self.sents)))
        self.sents = []

    def start_document(self, doc_id: str, lineno: int):
        self.end_document()
        self.doc_id = doc_id
        self.doc_line = lineno


def _conllu_label(misc: str, lineno: int, path) -> Label:
    if misc == "_":
        return Label.O
    for item in misc.split("|"):
        key, sep, value = item.partition("=")
        if sep and key == "Conn":
            try:
                return Label.parse(value)
            except ValueError:
                raise CorpusFormatError(f"unknown label {value!r}", lineno, path) from None
    return Label.O


def _parse_conllu(lines, path) -> Corpus:
    b = _Builder(path)
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            b.end_sentence()
            continue
        if line.startswith("#"):
            key, sep, value = line[1:].partition("=")
            if sep and key.strip() == "newdoc id":
                b.start_document(value.strip(), lineno)
            continue
        cols = line.split("\t")
        if len(cols) != 10:
            raise CorpusFormatError(f"expected 10 columns, found {len(cols)}", lineno, path)
        if "-" in cols[ID] or "." in cols[ID]:
            continue
        if not cols[ID].isdigit():
            raise CorpusFormatError(f"bad token id {cols[ID]!r}", lineno, path)
        if not cols[FORM]:
            raise CorpusFormatError("empty token form", lineno, path)
        label = _conllu_label(cols[MISC], lineno, path)
        b.tokens.append(Token(cols[FORM], cols[UPOS], label, tuple(cols)))
    b.end_document()
    return Corpus(tuple(b.docs))


def _parse_tsv(lines, path) -> Corpus:
    b = _Builder(path)
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            b.end_sentence()
            continue
        if line.startswith("# doc ="):
            b.start_document(line[len("# doc ="):].strip(), lineno)
            continue
        cols = line.split("\t")
        if len(cols) != 3:
            raise CorpusFormatError(f"expected 3 columns, found {len(cols)}", lineno, path)
        form, upos, tag = cols
        if not form:
            raise CorpusFormatError("empty token form", lineno, path)
        try:
            label = Label.parse(tag)
        except ValueError:
            raise CorpusFormatError(f"unknown label {tag!r}", lineno, path) from None
        b.tokens.append(Token(form, upos, label))
    b.end_document()
    return Corpus(tuple(b.docs))


def parse_corpus(text: str, format: str = "tsv", path=None) -> Corpus:
    if format not in FORMATS:
        raise ValueError(f"unknown corpus format {format!r}; expected one of {FORMATS}")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    lines = [ln.rstrip("\r") for ln in lines]
    if format == "conllu":
        return _parse_conllu(lines, path)
    return _parse_tsv(lines, path)


def load_corpus(path, format: str | None = None) -> Corpus:
    """Read a corpus file. ``format`` defaults to one inferred from the suffix."""
    format = format or infer_format(path)
    with open(path, encoding="utf-8") as f:
        text = f.read()
    return parse_corpus(text, format, path=path)


def _set_conn(misc: str, label: Label) -> str:
    items = [] if misc == "_" else [it for it in misc.split("|") if it.partition("=")[0] != "Conn"]
    if label != Label.O:
        items.append(f"Conn={label.tag}")
    return "|".join(items) if items else "_"


def format_corpus(corpus: Corpus, format: str = "tsv") -> str:
    if format not in FORMATS:
        raise ValueError(f"unknown corpus format {format!r}; expected one of {FORMATS}")
    out: list[str] = []
    for doc in corpus.documents:
        if format == "conllu":
            out.append(f"# newdoc id = {doc.doc_id}")
        else:
            out.append(f"# doc = {doc.doc_id}")
        for sent in doc.sentences:
            for i, tok in enumerate(sent.tokens, 1):
                if format == "tsv":
                    out.append(f"{tok.form}\t{tok.upos}\t{tok.label.tag}")
                    continue
                if tok.columns is not None:
                    cols = list(tok.columns)
                    cols[FORM], cols[UPOS] = tok.form, tok.upos
                else:
                    cols = [str(i), tok.form, "_", tok.upos, "_", "_", "_", "_", "_", "_"]
                cols[MISC] = _set_conn(cols[MISC], tok.label)
                out.append("\t".join(cols))
            out.append("")
    return "\n".join(out) + "\n" if out else ""


def write_predictions(corpus: Corpus, predictions: Sequence[Label], path,
                      format: str | None = None) -> None:
    """Write ``corpus`` with ``predictions`` substituted for the gold labels."""
    if len(predictions) != corpus.n_tokens:
        raise ValueError(
            f"{len(predictions)} predictions for a corpus of {corpus.n_tokens} tokens"
        )
    format = format or infer_format(path)
    text = format_corpus(corpus.relabel(predictions), format)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)


def corpus_stats(corpus: Corpus) -> LabelStats:
    counts = [0, 0, 0]
    for tok in corpus.tokens():
        counts[tok.label] += 1
    return LabelStats(count_b=counts[Label.BConn], count_i=counts[Label.IConn],
                      count_o=counts[Label.O])
