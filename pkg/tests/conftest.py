import numpy as np
import pytest

from textcl import TokenizeConfig, build_corpus


def make_corpus(texts, labels=None, train_mask=None, n_classes=None, min_df=1):
    """Single-call corpus + vocabulary for test inputs (min_df=1 keeps
    every word)."""
    return build_corpus(
        texts,
        labels=labels,
        train_mask=train_mask,
        n_classes=n_classes,
        config=TokenizeConfig(min_df=min_df),
    )


def random_corpus_texts(rng, max_docs=10, max_vocab=30, max_len=12):
    """Random small corpus over a bounded vocabulary."""
    vocab = [f"w{i}" for i in range(rng.integers(2, max_vocab + 1))]
    n_docs = int(rng.integers(1, max_docs + 1))
    texts = []
    for _ in range(n_docs):
        length = int(rng.integers(1, max_len + 1))
        texts.append(" ".join(rng.choice(vocab, size=length)))
    return texts


@pytest.fixture
def random_embedding_file(tmp_path):
    """Seeded Gaussian embedding file in the exchange format; stands in for
    the exporter so the suite needs no second package."""

    def _write(n_doc, dim, seed=0, name="emb.txt"):
        rng = np.random.default_rng(seed)
        emb = rng.standard_normal((n_doc, dim))
        path = tmp_path / name
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"{n_doc} {dim}\n")
            for row in emb:
                fh.write(" ".join(f"{v:.17g}" for v in row) + "\n")
        return path, emb

    return _write
