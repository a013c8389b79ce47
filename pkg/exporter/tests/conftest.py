import pytest


@pytest.fixture
def corpus_file(tmp_path):
    """Write a one-document-per-line corpus file and return its path."""

    def _write(texts, name="corpus.txt"):
        path = tmp_path / name
        path.write_text("\n".join(texts) + "\n", encoding="utf-8")
        return path

    return _write
