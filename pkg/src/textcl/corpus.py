"""Corpus ingestion: tokenization, vocabulary building and label files.

File formats
------------
Corpus file: UTF-8 text, one document per line.
Label file: one line per labeled document, ``<doc_index>\\t<class_name>\\t<train|test>``.
Documents absent from the label file are treated as unlabeled.
"""

from __future__ import annotations

import string
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError

_PUNCT_TABLE = str.maketrans({c: " " for c in string.punctuation})


@dataclass
class TokenizeConfig:
    """Tokenizer settings. min_df is the document-frequency cutoff applied
    when a corpus is built (2 is a sane default for real corpora, use 1 to
    keep everything)."""

    min_df: int = 2


@dataclass
class Vocabulary:
    """Dense word-id mapping with per-word document frequencies."""

    word_to_id: dict[str, int]
    id_to_word: list[str]
    doc_freq: np.ndarray

    def __len__(self) -> int:
        return len(self.id_to_word)


@dataclass
class Corpus:
    """Tokenized documents plus the label/train-mask side information.

    labels holds a class id per document, -1 where unlabeled. train_mask is
    True only for labeled documents that belong to the training split.
    """

    documents: list[list[str]]
    labels: np.ndarray
    n_classes: int
    train_mask: np.ndarray
    class_names: list[str] = field(default_factory=list)

    @property
    def n_docs(self) -> int:
        return len(self.documents)

    @property
    def test_mask(self) -> np.ndarray:
        """Labeled documents held out of training (the evaluation split)."""
        return (self.labels >= 0) & ~self.train_mask

    def validate(self) -> None:
        if len(self.labels) != self.n_docs or len(self.train_mask) != self.n_docs:
            raise DataError(
                f"labels/train_mask length mismatch: {len(self.labels)}/"
                f"{len(self.train_mask)} vs {self.n_docs} documents"
            )
        labeled = self.labels >= 0
        if np.any(self.labels[labeled] >= self.n_classes):
            bad = int(np.argmax(labeled & (self.labels >= self.n_classes)))
            raise DataError(f"document {bad} has class id {self.labels[bad]} "
                            f"outside [0, {self.n_classes})")
        if np.any(self.train_mask & ~labeled):
            bad = int(np.argmax(self.train_mask & ~labeled))
            raise DataError(f"document {bad} is in the train mask but has no label")
        for i, doc in enumerate(self.documents):
            if not doc:
                raise DataError(f"document {i} has an empty token sequence")


def tokenize(raw_text: str, config: TokenizeConfig | None = None) -> list[str]:
    """Lowercase, strip punctuation and split on whitespace.

    Document-frequency filtering needs corpus-wide counts and therefore
    happens in build_corpus, not here. Raises DataError on empty input.
    """
    if not raw_text or not raw_text.strip():
        raise DataError("cannot tokenize an empty document")
    tokens = raw_text.lower().translate(_PUNCT_TABLE).split()
    if not tokens:
        raise DataError(f"no tokens survive normalization of {raw_text!r}")
    return tokens


def build_corpus(
    texts: list[str],
    labels: np.ndarray | None = None,
    train_mask: np.ndarray | None = None,
    n_classes: int | None = None,
    config: TokenizeConfig | None = None,
    class_names: list[str] | None = None,
) -> tuple[Corpus, Vocabulary]:
    """Tokenize raw texts, apply the min-df cutoff and build the vocabulary.

    Word ids are assigned in order of first occurrence, so the mapping is
    deterministic for a fixed corpus. A document whose tokens are all
    filtered out is an error naming that document.
    """
    cfg = config or TokenizeConfig()
    docs: list[list[str]] = []
    for i, text in enumerate(texts):
        try:
            docs.append(tokenize(text, cfg))
        except DataError as exc:
            raise DataError(f"document {i}: {exc}") from exc

    df = Counter()
    for doc in docs:
        df.update(set(doc))
    keep = {w for w, c in df.items() if c >= cfg.min_df}

    word_to_id: dict[str, int] = {}
    filtered: list[list[str]] = []
    for i, doc in enumerate(docs):
        kept = [w for w in doc if w in keep]
        if not kept:
            raise DataError(
                f"document {i} has no tokens left after min_df={cfg.min_df} filtering"
            )
        for w in kept:
            if w not in word_to_id:
                word_to_id[w] = len(word_to_id)
        filtered.append(kept)

    id_to_word = list(word_to_id)
    doc_freq = np.array([df[w] for w in id_to_word], dtype=np.int64)
    vocab = Vocabulary(word_to_id, id_to_word, doc_freq)

    n = len(filtered)
    if labels is None:
        labels = np.full(n, -1, dtype=np.int64)
    labels = np.asarray(labels, dtype=np.int64)
    if train_mask is None:
        train_mask = labels >= 0
    train_mask = np.asarray(train_mask, dtype=bool)
    if n_classes is None:
        n_classes = int(labels.max()) + 1 if np.any(labels >= 0) else 0

    corpus = Corpus(filtered, labels, n_classes, train_mask, class_names or [])
    corpus.validate()
    return corpus, vocab


def load_corpus_file(path) -> list[str]:
    """Read one document per line; empty lines are malformed input."""
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise DataError(f"{path}: corpus file is empty")
    for i, line in enumerate(lines):
        if not line.strip():
            raise DataError(f"{path}: document {i} is an empty line")
    return lines


def load_labels_file(path, n_docs: int):
    """Parse ``<doc_index>\\t<class_name>\\t<train|test>`` lines.

    Returns (labels, train_mask, class_names) with class ids assigned by
    sorted class-name order. Documents missing from the file get label -1.
    """
    entries: dict[int, tuple[str, str]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise DataError(f"{path}:{lineno}: expected 3 tab-separated fields, "
                                f"got {len(parts)}")
            idx_s, name, split = parts
            try:
                idx = int(idx_s)
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: bad doc index {idx_s!r}") from exc
            if not 0 <= idx < n_docs:
                raise DataError(f"{path}:{lineno}: doc index {idx} outside "
                                f"[0, {n_docs})")
            if split not in ("train", "test"):
                raise DataError(f"{path}:{lineno}: split must be train or test, "
                                f"got {split!r}")
            if idx in entries:
                raise DataError(f"{path}:{lineno}: duplicate entry for doc {idx}")
            entries[idx] = (name, split)

    class_names = sorted({name for name, _ in entries.values()})
    name_to_id = {name: i for i, name in enumerate(class_names)}
    labels = np.full(n_docs, -1, dtype=np.int64)
    train_mask = np.zeros(n_docs, dtype=bool)
    for idx, (name, split) in entries.items():
        labels[idx] = name_to_id[name]
        train_mask[idx] = split == "train"
    return labels, train_mask, class_names
