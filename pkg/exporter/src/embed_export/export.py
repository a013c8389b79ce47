"""Turn a corpus file into a fixed embedding table, one row per document.

Two encoder families are supported:

* ``random`` — seeded Gaussian rows, no ML stack required.  Each row is
  keyed by the document's text (hashed) together with the global seed,
  so identical documents always receive identical rows and a re-run over
  the same corpus reproduces the file byte for byte.
* any other encoder id — treated as a pretrained transformer checkpoint
  and loaded lazily, so the base install stays numpy-only.  Token
  vectors are pooled to one vector per document (masked mean by default,
  or the leading classification token).

The output is the plain-text exchange format the classifier ingests:
a ``<n_doc> <dim>`` header followed by one row of space-separated
floats per document, in corpus order.  A JSON manifest with encoder
provenance and a corpus checksum is written alongside.
"""

from __future__ import annotations

import hashlib
from pathlib import Path

import numpy as np

from .manifest import ExportManifest, POOLING_MODES, corpus_checksum, write_manifest

RANDOM_ENCODER = "random"
DEFAULT_MAX_TOKENS = 512


class ExportError(ValueError):
    """Bad corpus contents or export parameters."""


class EncoderLoadError(RuntimeError):
    """The requested encoder could not be loaded."""


def read_corpus(path) -> list[str]:
    """One document per line; blank lines are malformed, not skipped,
    because row order must mirror line order exactly."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ExportError(f"cannot read corpus {path}: {exc}") from exc
    lines = text.splitlines()
    if not lines:
        raise ExportError(f"corpus {path} is empty")
    for i, line in enumerate(lines):
        if not line.strip():
            raise ExportError(f"document {i} is an empty line")
    return lines


def _text_rng(text: str, seed: int) -> np.random.Generator:
    # Entropy = global seed + text digest, so the row depends on the
    # document's content, not its position in the file.
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    words = np.frombuffer(digest[:16], dtype=np.uint32)
    return np.random.default_rng(np.random.SeedSequence([seed, *words.tolist()]))


class RandomEncoder:
    """Content-keyed Gaussian rows; a stand-in when no pretrained model
    is wanted or available."""

    def __init__(self, dim: int, seed: int = 0):
        if dim < 1:
            raise ExportError(f"embedding dim must be positive, got {dim}")
        self.dim = dim
        self.seed = seed

    def encode(self, texts, pooling: str):
        emb = np.empty((len(texts), self.dim), dtype=np.float64)
        for i, text in enumerate(texts):
            emb[i] = _text_rng(text, self.seed).standard_normal(self.dim)
        return emb, []


class TransformerEncoder:
    """Pretrained checkpoint wrapper (loaded lazily on first use)."""

    def __init__(self, model_id: str, max_tokens: int = DEFAULT_MAX_TOKENS):
        self.model_id = model_id
        self.max_tokens = max_tokens
        try:
            from transformers import AutoModel, AutoTokenizer  # noqa: PLC0415
        except ImportError as exc:
            raise EncoderLoadError(
                f"encoder {model_id!r} needs the 'transformers' package; "
                "install embed-export[bert]"
            ) from exc
        try:
            self.tokenizer = AutoTokenizer.from_pretrained(model_id)
            self.model = AutoModel.from_pretrained(model_id)
        except Exception as exc:
            raise EncoderLoadError(f"cannot load encoder {model_id!r}: {exc}") from exc
        self.model.eval()

    def encode(self, texts, pooling: str):
        import torch  # noqa: PLC0415

        warnings: list[str] = []
        rows = []
        with torch.no_grad():
            for i, text in enumerate(texts):
                n_tokens = len(self.tokenizer(text)["input_ids"])
                if n_tokens > self.max_tokens:
                    warnings.append(
                        f"document {i} truncated: {n_tokens} tokens "
                        f"> limit {self.max_tokens}"
                    )
                batch = self.tokenizer(
                    text,
                    return_tensors="pt",
                    truncation=True,
                    max_length=self.max_tokens,
                )
                hidden = self.model(**batch).last_hidden_state[0]
                if pooling == "cls":
                    vec = hidden[0]
                else:
                    mask = batch["attention_mask"][0].unsqueeze(-1)
                    vec = (hidden * mask).sum(0) / mask.sum()
                rows.append(vec.double().numpy())
        return np.stack(rows), warnings


def write_embedding_file(path, emb: np.ndarray) -> None:
    """Exchange format: ``<n_doc> <dim>`` header, then one %.17g row per
    document (exact float64 round-trip)."""
    emb = np.asarray(emb, dtype=np.float64)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{emb.shape[0]} {emb.shape[1]}\n")
        for row in emb:
            fh.write(" ".join(f"{v:.17g}" for v in row) + "\n")


def export(
    corpus_path,
    out_path,
    encoder: str = RANDOM_ENCODER,
    pooling: str = "mean",
    dim: int = 32,
    seed: int = 0,
    max_tokens: int = DEFAULT_MAX_TOKENS,
    encoder_factory=None,
) -> ExportManifest:
    """Encode every document and write the embedding file plus manifest.

    ``encoder_factory``, when given, is called as ``factory(encoder_id)``
    and must return an object with ``encode(texts, pooling)``; tests use
    it to substitute a stub for the transformer stack.

    Returns the manifest that was written alongside ``out_path``.
    """
    if pooling not in POOLING_MODES:
        raise ExportError(f"pooling must be one of {POOLING_MODES}, got {pooling!r}")
    texts = read_corpus(corpus_path)
    if encoder_factory is not None:
        enc = encoder_factory(encoder)
    elif encoder == RANDOM_ENCODER:
        enc = RandomEncoder(dim, seed=seed)
    else:
        enc = TransformerEncoder(encoder, max_tokens=max_tokens)
    emb, warnings = enc.encode(texts, pooling)
    emb = np.asarray(emb, dtype=np.float64)
    if emb.shape[0] != len(texts):
        raise ExportError(
            f"encoder produced {emb.shape[0]} rows for {len(texts)} documents"
        )
    if not np.isfinite(emb).all():
        bad = int(np.argmin(np.isfinite(emb).all(axis=1)))
        raise ExportError(f"encoder produced a non-finite value in row {bad}")
    write_embedding_file(out_path, emb)
    manifest = ExportManifest(
        encoder=encoder,
        pooling=pooling,
        dim=int(emb.shape[1]),
        n_docs=len(texts),
        corpus_sha256=corpus_checksum(corpus_path),
        warnings=list(warnings),
    )
    write_manifest(manifest, out_path)
    return manifest
