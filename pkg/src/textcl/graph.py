"""Heterogeneous text graph: PMI word-word edges, TF-IDF doc-word edges.

Node ordering is fixed: all word nodes first (ids 0..n_word-1), then
document nodes (n_word..n_word+n_doc-1), so document rows of any node-level
matrix are a contiguous slice. The adjacency carries a unit diagonal; the
doc-doc off-diagonal block is identically zero.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .corpus import Corpus, Vocabulary
from .errors import DataError

DEFAULT_WINDOW_SIZE = 20


@dataclass
class TextGraph:
    """Sparse symmetric weighted adjacency over word + document nodes."""

    n_word: int
    n_doc: int
    adjacency: sp.csr_array

    @property
    def n_nodes(self) -> int:
        return self.n_word + self.n_doc

    @property
    def doc_slice(self) -> slice:
        return slice(self.n_word, self.n_word + self.n_doc)

    def doc_node(self, doc_index: int) -> int:
        return self.n_word + doc_index


def iter_windows(tokens: list[str], window_size: int):
    """Sliding windows of the given width, stride 1. A document shorter
    than the window contributes exactly one window."""
    if len(tokens) <= window_size:
        yield tokens
        return
    for start in range(len(tokens) - window_size + 1):
        yield tokens[start : start + window_size]


def compute_pmi(corpus: Corpus, vocab: Vocabulary, window_size: int = DEFAULT_WINDOW_SIZE):
    """Window-based pointwise mutual information between word pairs.

    Counts are presence-based per window: with W total windows, W(i)
    windows containing word i and W(i,j) windows containing both,
    PMI(i,j) = ln( W(i,j) * W / (W(i) * W(j)) ). Only co-occurring pairs
    with strictly positive PMI are returned, keyed by (min_id, max_id).
    """
    if window_size < 1:
        raise DataError(f"window_size must be >= 1, got {window_size}")
    n_windows = 0
    word_windows = Counter()
    pair_windows = Counter()
    for doc in corpus.documents:
        for window in iter_windows(doc, window_size):
            n_windows += 1
            ids = sorted({vocab.word_to_id[w] for w in window})
            word_windows.update(ids)
            for a in range(len(ids)):
                for b in range(a + 1, len(ids)):
                    pair_windows[(ids[a], ids[b])] += 1

    weights: dict[tuple[int, int], float] = {}
    for (i, j), wij in pair_windows.items():
        pmi = math.log(wij * n_windows / (word_windows[i] * word_windows[j]))
        if pmi > 0:
            weights[(i, j)] = pmi
    return weights


def compute_tfidf(corpus: Corpus, vocab: Vocabulary):
    """Raw term count times ln(n_doc / df); zero-weight entries omitted.

    Keys are (doc_index, word_id) with doc_index in corpus order.
    """
    n_doc = corpus.n_docs
    weights: dict[tuple[int, int], float] = {}
    for d, doc in enumerate(corpus.documents):
        for w, tf in Counter(doc).items():
            wid = vocab.word_to_id[w]
            idf = math.log(n_doc / vocab.doc_freq[wid])
            if tf * idf > 0:
                weights[(d, wid)] = tf * idf
    return weights


def build_graph(
    corpus: Corpus, vocab: Vocabulary, window_size: int = DEFAULT_WINDOW_SIZE
) -> TextGraph:
    """Assemble the symmetric adjacency: unit diagonal, PMI on the
    word-word block, TF-IDF on the doc-word block."""
    n_word = len(vocab)
    n_doc = corpus.n_docs
    n = n_word + n_doc

    rows, cols, vals = [], [], []

    for (i, j), w in compute_pmi(corpus, vocab, window_size).items():
        rows += [i, j]
        cols += [j, i]
        vals += [w, w]

    for (d, wid), w in compute_tfidf(corpus, vocab).items():
        doc_node = n_word + d
        rows += [doc_node, wid]
        cols += [wid, doc_node]
        vals += [w, w]

    rows += list(range(n))
    cols += list(range(n))
    vals += [1.0] * n

    adjacency = sp.csr_array(
        (np.array(vals, dtype=np.float64), (np.array(rows), np.array(cols))),
        shape=(n, n),
    )
    return TextGraph(n_word=n_word, n_doc=n_doc, adjacency=adjacency)


def assemble_features(graph: TextGraph, doc_embeddings: np.ndarray) -> np.ndarray:
    """Stack zero word rows over the ingested document embedding rows.

    Raises DataError on row-count/dimension mismatch or non-finite values.
    """
    emb = np.asarray(doc_embeddings, dtype=np.float64)
    if emb.ndim != 2:
        raise DataError(f"embeddings must be 2-d, got shape {emb.shape}")
    if emb.shape[0] != graph.n_doc:
        raise DataError(
            f"embedding row count mismatch: expected {graph.n_doc} documents, "
            f"found {emb.shape[0]} rows"
        )
    finite = np.isfinite(emb).all(axis=1)
    if not finite.all():
        bad = int(np.argmin(finite))
        raise DataError(f"non-finite embedding value in row {bad}")
    x = np.zeros((graph.n_nodes, emb.shape[1]), dtype=np.float64)
    x[graph.doc_slice] = emb
    return x


def load_embeddings(path) -> np.ndarray:
    """Read the embedding file: header ``<n_doc> <dim>`` then one row of
    space-separated floats per document, corpus order."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise DataError(f"{path}: header must be '<n_doc> <dim>', got "
                            f"{' '.join(header)!r}")
        try:
            n_doc, dim = int(header[0]), int(header[1])
        except ValueError as exc:
            raise DataError(f"{path}: non-integer header fields") from exc
        rows = []
        for lineno, line in enumerate(fh, start=2):
            if not line.strip():
                continue
            values = line.split()
            if len(values) != dim:
                raise DataError(f"{path}:{lineno}: expected {dim} values, "
                                f"got {len(values)}")
            rows.append([float(v) for v in values])
    if len(rows) != n_doc:
        raise DataError(f"{path}: header promises {n_doc} rows, found {len(rows)}")
    return np.array(rows, dtype=np.float64).reshape(n_doc, dim)


def write_embeddings(path, embeddings: np.ndarray) -> None:
    """Write the embedding file format read back by load_embeddings.

    %.17g formatting makes the float64 round-trip exact."""
    emb = np.asarray(embeddings, dtype=np.float64)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{emb.shape[0]} {emb.shape[1]}\n")
        for row in emb:
            fh.write(" ".join(f"{v:.17g}" for v in row) + "\n")


def dump_graph(path, graph: TextGraph) -> None:
    """Debug dump: ``<i> <j> <weight>`` triplets, upper triangle + diagonal."""
    upper = sp.triu(graph.adjacency, k=0).tocoo()
    order = np.lexsort((upper.col, upper.row))
    with open(path, "w", encoding="utf-8") as fh:
        for i, j, w in zip(upper.row[order], upper.col[order], upper.data[order]):
            fh.write(f"{i} {j} {w:.17g}\n")
