"""Document-embedding exporter for the textcl exchange format."""

from .export import (
    EncoderLoadError,
    ExportError,
    RandomEncoder,
    TransformerEncoder,
    export,
    read_corpus,
    write_embedding_file,
)
from .manifest import (
    ExportManifest,
    ManifestError,
    corpus_checksum,
    manifest_path,
    read_manifest,
    verify_manifest,
    write_manifest,
)

__all__ = [
    "EncoderLoadError",
    "ExportError",
    "ExportManifest",
    "ManifestError",
    "RandomEncoder",
    "TransformerEncoder",
    "corpus_checksum",
    "export",
    "manifest_path",
    "read_corpus",
    "read_manifest",
    "verify_manifest",
    "write_embedding_file",
    "write_manifest",
]
