"""Edge-dropped contrastive views and the fused graph encoder.

Two independently corrupted copies of the graph feed the same encoder; the
fused document representations blend the graph branch with the raw
embedding branch. Run: python3 demos/02_views_and_encoder.py
"""

import numpy as np
import scipy.sparse as sp

from textcl import (
    TokenizeConfig,
    assemble_features,
    build_corpus,
    build_graph,
    classify,
    drop_edges,
    encode,
    init_params,
    normalize_adjacency,
)

rng = np.random.default_rng(0)

texts = [
    "alpha beta gamma delta",
    "beta gamma epsilon",
    "alpha delta epsilon",
    "gamma delta alpha beta",
]
corpus, vocab = build_corpus(texts, config=TokenizeConfig(min_df=1))
graph = build_graph(corpus, vocab, window_size=4)

# Pretrained document embeddings are ingested as features; word rows are zero.
embeddings = rng.standard_normal((corpus.n_docs, 6))
x = assemble_features(graph, embeddings)
print("feature matrix:", x.shape, "(word rows are all zero)")

# Same seed -> same view; different seeds -> different corruption.
view_a = drop_edges(graph, p=0.3, seed=1)
view_b = drop_edges(graph, p=0.3, seed=2)
edges = lambda adj: (adj.nnz - graph.n_nodes) // 2
print(f"original edges: {edges(graph.adjacency)}, "
      f"view a: {edges(view_a.adjacency)}, view b: {edges(view_b.adjacency)}")

# Symmetric degree normalization; the unit diagonal doubles as a self-loop.
a_norm = normalize_adjacency(graph.adjacency)
print("normalized entries lie in [0, 1]:",
      bool(sp.csr_array(a_norm).max() <= 1.0))

# Encode: two graph convolutions, then fuse with the raw embedding branch.
params = init_params(
    emb_dim=6, hidden_dim=8, out_dim=8, n_classes=2, lam=0.7, seed=3
)
z, _ = encode(a_norm, x, params, graph.n_word)
print("document representations:", z.shape)

p = classify(z)
print("class probabilities (rows sum to 1):")
for i, row in enumerate(p):
    print(f"  doc {i}: {row.round(3)}")

# The same encoder applied to each view yields the pair the contrastive
# loss will pull together.
z_a, _ = encode(normalize_adjacency(view_a.adjacency), x, params, graph.n_word)
z_b, _ = encode(normalize_adjacency(view_b.adjacency), x, params, graph.n_word)
cos = (z_a * z_b).sum(1) / (
    np.linalg.norm(z_a, axis=1) * np.linalg.norm(z_b, axis=1)
)
print("cross-view cosine per document:", cos.round(3))
