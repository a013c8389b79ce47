"""Build the heterogeneous text graph from a handful of documents.

Word-word edges carry positive PMI over sliding windows, doc-word edges
carry TF-IDF, and every node keeps a unit self-loop. Run from the repo
root: python3 demos/01_build_graph.py
"""

import numpy as np

from textcl import (
    TokenizeConfig,
    build_corpus,
    build_graph,
    compute_pmi,
    compute_tfidf,
)

texts = [
    "the market rallied after the earnings report",
    "earnings beat expectations and the market surged",
    "the team won the final match",
    "a late goal decided the match",
]

# min_df=1 keeps every word; real corpora usually drop hapaxes with min_df=2.
corpus, vocab = build_corpus(texts, config=TokenizeConfig(min_df=1))
print(f"{corpus.n_docs} documents, {len(vocab)} distinct words")

# The two weight families can be inspected separately...
pmi = compute_pmi(corpus, vocab, window_size=5)
tfidf = compute_tfidf(corpus, vocab)

print("\nstrongest word-word (PMI) edges:")
for (i, j), w in sorted(pmi.items(), key=lambda kv: -kv[1])[:5]:
    print(f"  {vocab.id_to_word[i]:>10s} -- {vocab.id_to_word[j]:<10s} {w:.3f}")

print("\nstrongest doc-word (TF-IDF) edges:")
for (d, i), w in sorted(tfidf.items(), key=lambda kv: -kv[1])[:5]:
    print(f"  doc {d} -- {vocab.id_to_word[i]:<12s} {w:.3f}")

# ... or assembled into one symmetric adjacency: words first, then docs.
graph = build_graph(corpus, vocab, window_size=5)
a = graph.adjacency
print(f"\nadjacency: {graph.n_nodes} x {graph.n_nodes}, "
      f"{(a.nnz - graph.n_nodes) // 2} undirected edges")
print("symmetric:", abs(a - a.T).max() == 0)
print("unit diagonal:", bool(np.all(a.diagonal() == 1.0)))
