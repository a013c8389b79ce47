"""Seeded synthetic corpus generator for desk-scale experiments.

Each class owns a disjoint topic vocabulary; documents mix topic words with
a shared noise vocabulary. Document embeddings are a one-hot class
direction plus Gaussian noise, so with zero noise the classes are exactly
linearly separable in embedding space. Everything is deterministic for a
fixed seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .graph import write_embeddings


@dataclass
class SyntheticData:
    texts: list[str]
    class_ids: np.ndarray
    train_mask: np.ndarray
    embeddings: np.ndarray
    class_names: list[str]


def generate_synthetic(
    n_docs: int,
    n_classes: int,
    vocab_per_class: int = 30,
    doc_len: int = 30,
    label_rate: float = 0.1,
    seed: int = 0,
    emb_dim: int = 32,
    noise: float = 0.35,
    topic_prob: float = 0.7,
) -> SyntheticData:
    """Build a balanced corpus (class of doc i is i mod n_classes) with a
    stratified train split of roughly label_rate per class."""
    if n_docs < 1 or n_classes < 1 or vocab_per_class < 1 or doc_len < 1:
        raise ConfigError("n_docs, n_classes, vocab_per_class and doc_len must be positive")
    if not 0.0 < label_rate <= 1.0:
        raise ConfigError(f"label_rate must be in (0, 1], got {label_rate}")
    if emb_dim < n_classes:
        raise ConfigError(f"emb_dim {emb_dim} too small for {n_classes} one-hot directions")

    rng = np.random.default_rng(seed)
    topic_vocab = [
        [f"w{c}x{k}" for k in range(vocab_per_class)] for c in range(n_classes)
    ]
    shared_vocab = [f"shared{k}" for k in range(max(2, vocab_per_class // 2))]

    class_ids = np.arange(n_docs) % n_classes
    texts = []
    for c in class_ids:
        words = []
        for _ in range(doc_len):
            if rng.random() < topic_prob:
                words.append(topic_vocab[c][rng.integers(vocab_per_class)])
            else:
                words.append(shared_vocab[rng.integers(len(shared_vocab))])
        texts.append(" ".join(words))

    embeddings = noise * rng.standard_normal((n_docs, emb_dim))
    embeddings[np.arange(n_docs), class_ids] += 1.0

    train_mask = np.zeros(n_docs, dtype=bool)
    for c in range(n_classes):
        docs = np.flatnonzero(class_ids == c)
        n_train = max(1, int(round(label_rate * len(docs))))
        picked = rng.permutation(docs)[:n_train]
        train_mask[picked] = True

    class_names = [f"class{c}" for c in range(n_classes)]
    return SyntheticData(texts, class_ids.astype(np.int64), train_mask, embeddings, class_names)


def write_synthetic(data: SyntheticData, out_dir) -> dict[str, Path]:
    """Write corpus.txt, labels.tsv and embeddings.txt into out_dir.

    All documents appear in the label file (true labels are known for the
    synthetic corpus); the third column separates train from test."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "corpus": out / "corpus.txt",
        "labels": out / "labels.tsv",
        "embeddings": out / "embeddings.txt",
    }
    with open(paths["corpus"], "w", encoding="utf-8") as fh:
        for text in data.texts:
            fh.write(text + "\n")
    with open(paths["labels"], "w", encoding="utf-8") as fh:
        for i, c in enumerate(data.class_ids):
            split = "train" if data.train_mask[i] else "test"
            fh.write(f"{i}\t{data.class_names[c]}\t{split}\n")
    write_embeddings(paths["embeddings"], data.embeddings)
    return paths
