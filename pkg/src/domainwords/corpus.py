"""Corpus ingestion: JSONL loading, tokenization, vocabulary construction.

A corpus is a set of binary-labeled documents. Tokenization lowercases and
treats every character outside [0-9a-z] as a separator; no traditional stop
word filtering is applied anywhere in the pipeline. Counting is exact and
deterministic, so two ingestions of the same file produce identical
vocabularies.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field

import numpy as np

from .errors import IngestionError

__all__ = [
    "RawDocument",
    "Document",
    "Vocabulary",
    "tokenize",
    "build_corpus",
    "load_corpus",
    "save_corpus",
]

_TOKEN_RE = re.compile(r"[0-9a-z]+")


@dataclass(frozen=True)
class RawDocument:
    id: str
    text: str
    label: str


@dataclass(frozen=True)
class Document:
    id: str
    tokens: tuple[str, ...]
    label: str


def tokenize(text: str) -> list[str]:
    """Lowercase, replace every non-alphanumeric character with a space, split.

    Digits are kept; the token alphabet is exactly [0-9a-z]. Empty pieces are
    dropped, so the result contains no empty tokens.
    """
    return _TOKEN_RE.findall(text.lower())


@dataclass
class Vocabulary:
    """Immutable word statistics over a built corpus.

    Words are sorted lexicographically and word ids are their positions in
    that order. ``class_labels`` holds the two corpus labels sorted
    lexicographically; the first is designated class A throughout the
    pipeline, the second class B.
    """

    words: list[str]
    total_counts: np.ndarray
    doc_counts: np.ndarray  # shape (len(words), 2), columns follow class_labels
    class_labels: tuple[str, str]
    class_doc_totals: dict[str, int]
    word_ids: dict[str, int] = field(init=False, repr=False)
    _hash: str | None = field(default=None, init=False, repr=False)

    def __post_init__(self) -> None:
        self.word_ids = {w: i for i, w in enumerate(self.words)}

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self.word_ids

    def id_of(self, word: str) -> int:
        try:
            return self.word_ids[word]
        except KeyError:
            raise KeyError(f"word {word!r} not in vocabulary") from None

    def total_count(self, word: str) -> int:
        return int(self.total_counts[self.id_of(word)])

    def doc_count(self, word: str, label: str) -> int:
        return int(self.doc_counts[self.id_of(word), self._class_index(label)])

    def class_words(self, label: str) -> list[str]:
        """Words occurring in at least one document of the class, sorted."""
        col = self._class_index(label)
        return [self.words[i] for i in np.flatnonzero(self.doc_counts[:, col])]

    def _class_index(self, label: str) -> int:
        try:
            return self.class_labels.index(label)
        except ValueError:
            raise KeyError(f"unknown class label {label!r}") from None

    @property
    def vocab_hash(self) -> str:
        """SHA-256 over the ordered word list; binds models to vocabularies."""
        if self._hash is None:
            h = hashlib.sha256()
            for w in self.words:
                h.update(w.encode("utf-8"))
                h.update(b"\n")
            object.__setattr__(self, "_hash", h.hexdigest())
        return self._hash

    def save_csv(self, path) -> None:
        """Write ``word,word_id,total_count,doc_count_a,doc_count_b``."""
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write("word,word_id,total_count,doc_count_a,doc_count_b\n")
            for i, w in enumerate(self.words):
                fh.write(
                    f"{w},{i},{int(self.total_counts[i])},"
                    f"{int(self.doc_counts[i, 0])},{int(self.doc_counts[i, 1])}\n"
                )


def build_corpus(
    raw_docs: list[RawDocument], min_count: int
) -> tuple[list[Document], Vocabulary]:
    """Tokenize documents and build the vocabulary.

    Words with total count below ``min_count`` are removed from both the
    vocabulary and the documents. Documents left empty by the cut are
    retained; downstream evaluation counts and reports them. Requires exactly
    two distinct labels, each with at least one document.
    """
    if not raw_docs:
        raise IngestionError("corpus contains no documents")
    labels = sorted({d.label for d in raw_docs})
    if len(labels) != 2:
        raise IngestionError(
            f"corpus must contain exactly two labels, found {len(labels)}: {labels}"
        )
    seen_ids: set[str] = set()
    for d in raw_docs:
        if d.id in seen_ids:
            raise IngestionError(f"duplicate document id {d.id!r}")
        seen_ids.add(d.id)

    tokenized = [(d.id, tokenize(d.text), d.label) for d in raw_docs]

    totals: dict[str, int] = {}
    for _, toks, _ in tokenized:
        for t in toks:
            totals[t] = totals.get(t, 0) + 1

    kept = sorted(w for w, c in totals.items() if c >= min_count)
    kept_set = set(kept)

    docs: list[Document] = []
    doc_counts = np.zeros((len(kept), 2), dtype=np.int64)
    ids = {w: i for i, w in enumerate(kept)}
    class_index = {labels[0]: 0, labels[1]: 1}
    for doc_id, toks, label in tokenized:
        filtered = tuple(t for t in toks if t in kept_set)
        docs.append(Document(id=doc_id, tokens=filtered, label=label))
        col = class_index[label]
        for w in set(filtered):
            doc_counts[ids[w], col] += 1

    total_counts = np.array([totals[w] for w in kept], dtype=np.int64)
    class_doc_totals = {
        lab: sum(1 for d in raw_docs if d.label == lab) for lab in labels
    }
    vocab = Vocabulary(
        words=kept,
        total_counts=total_counts,
        doc_counts=doc_counts,
        class_labels=(labels[0], labels[1]),
        class_doc_totals=class_doc_totals,
    )
    return docs, vocab


def load_corpus(path) -> list[RawDocument]:
    """Read a JSONL corpus: one object per line with text, label, optional id.

    Unknown fields are ignored. A document without an id gets its 1-based
    line number as id. Blank lines are skipped; any other unparseable line
    raises IngestionError with its line number.
    """
    docs: list[RawDocument] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise IngestionError(f"{path}: malformed JSON on line {lineno}: {exc}")
            if not isinstance(obj, dict):
                raise IngestionError(f"{path}: line {lineno} is not an object")
            if "text" not in obj or "label" not in obj:
                raise IngestionError(
                    f"{path}: line {lineno} missing required field 'text' or 'label'"
                )
            if not isinstance(obj["text"], str) or not isinstance(obj["label"], str):
                raise IngestionError(
                    f"{path}: line {lineno}: 'text' and 'label' must be strings"
                )
            doc_id = obj.get("id")
            if doc_id is None:
                doc_id = str(lineno)
            docs.append(RawDocument(id=str(doc_id), text=obj["text"], label=obj["label"]))
    if not docs:
        raise IngestionError(f"{path}: no documents")
    return docs


def save_corpus(raw_docs: list[RawDocument], path) -> None:
    """Write documents as JSONL with sorted keys (byte-stable for fixed input)."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for d in raw_docs:
            fh.write(json.dumps({"id": d.id, "label": d.label, "text": d.text},
                                sort_keys=True))
            fh.write("\n")
