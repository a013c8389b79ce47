"""Provenance manifest written alongside every exported embedding file.

The embedding exchange format is a bare numeric table; it says nothing
about where the vectors came from.  The manifest fills that gap: which
encoder produced them, how token vectors were pooled, the embedding
width, and a checksum of the exact corpus file that was encoded, so a
consumer can detect a stale or mismatched pairing before training on it.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

POOLING_MODES = ("mean", "cls")


class ManifestError(ValueError):
    """An invalid manifest, or one that does not match its corpus."""


@dataclass
class ExportManifest:
    encoder: str
    pooling: str
    dim: int
    n_docs: int
    corpus_sha256: str
    warnings: list[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.pooling not in POOLING_MODES:
            raise ManifestError(
                f"pooling must be one of {POOLING_MODES}, got {self.pooling!r}"
            )
        if self.dim < 1:
            raise ManifestError(f"embedding dim must be positive, got {self.dim}")
        if self.n_docs < 1:
            raise ManifestError(f"n_docs must be positive, got {self.n_docs}")


def corpus_checksum(path) -> str:
    """SHA-256 hex digest of a corpus file's raw bytes."""
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def manifest_path(out_path) -> Path:
    """Where the manifest for a given embedding file lives."""
    out_path = Path(out_path)
    return out_path.with_name(out_path.name + ".manifest.json")


def write_manifest(manifest: ExportManifest, out_path) -> Path:
    path = manifest_path(out_path)
    path.write_text(json.dumps(asdict(manifest), indent=2) + "\n")
    return path


def read_manifest(out_path) -> ExportManifest:
    path = manifest_path(out_path)
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ManifestError(f"{path} is not valid JSON: {exc}") from exc
    try:
        return ExportManifest(**raw)
    except TypeError as exc:
        raise ManifestError(f"{path} has missing or unknown fields: {exc}") from exc


def verify_manifest(manifest: ExportManifest, corpus_path) -> None:
    """Check that a manifest still describes the given corpus file.

    Raises ManifestError when the corpus was edited (or swapped) after
    the export, which would silently misalign rows with documents.
    """
    actual = corpus_checksum(corpus_path)
    if actual != manifest.corpus_sha256:
        raise ManifestError(
            "corpus checksum mismatch: manifest records "
            f"{manifest.corpus_sha256[:12]}..., file has {actual[:12]}..."
        )
