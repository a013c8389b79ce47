"""Command-line interface: exit codes and end-to-end flows, all in-process."""

import pytest

from textcl.cli import main


@pytest.fixture()
def dataset(tmp_path):
    out = tmp_path / "data"
    code = main(
        [
            "synth", "--out-dir", str(out),
            "--n-docs", "30", "--n-classes", "2",
            "--vocab-per-class", "8", "--doc-len", "10",
            "--label-rate", "0.4", "--seed", "5", "--dim", "8",
        ]
    )
    assert code == 0
    return {
        "corpus": str(out / "corpus.txt"),
        "labels": str(out / "labels.tsv"),
        "embeddings": str(out / "embeddings.txt"),
    }


def data_args(dataset, **extra):
    args = [
        "--corpus", dataset["corpus"],
        "--labels", dataset["labels"],
        "--embeddings", dataset["embeddings"],
        "--window-size", "10", "--min-df", "1",
    ]
    for flag, value in extra.items():
        args += [flag, value]
    return args


class TestExitCodes:
    def test_bad_flag_value_is_config_error(self, dataset, capsys):
        code = main(
            ["train", *data_args(dataset), "--drop-prob", "1.5", "--epochs", "1"]
        )
        assert code == 1
        assert "config error" in capsys.readouterr().err

    def test_unknown_subcommand_is_config_error(self):
        assert main(["frobnicate"]) == 1

    def test_missing_required_flag_is_config_error(self):
        assert main(["train", "--corpus", "x.txt"]) == 1

    def test_missing_file_is_data_error(self, tmp_path, capsys):
        code = main(["build-graph", "--corpus", str(tmp_path / "nope.txt")])
        assert code == 2
        assert "data error" in capsys.readouterr().err

    def test_malformed_labels_is_data_error(self, dataset, tmp_path):
        bad = tmp_path / "bad.tsv"
        bad.write_text("0\tclass0\n")  # missing split column
        code = main(
            ["train",
             "--corpus", dataset["corpus"],
             "--labels", str(bad),
             "--embeddings", dataset["embeddings"],
             "--min-df", "1", "--epochs", "1"]
        )
        assert code == 2

    def test_divergence_is_numeric_error(self, dataset, capsys):
        code = main(
            ["train", *data_args(dataset), "--lr", "1e12", "--epochs", "6", "--no-gcl"]
        )
        assert code == 3
        assert "numeric failure" in capsys.readouterr().err


class TestBuildGraph:
    def test_reports_counts(self, dataset, capsys):
        code = main(
            ["build-graph", "--corpus", dataset["corpus"],
             "--labels", dataset["labels"], "--window-size", "10", "--min-df", "1"]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "word nodes" in out and "30 doc nodes" in out

    def test_dump_file(self, dataset, tmp_path, capsys):
        dump = tmp_path / "graph.txt"
        code = main(
            ["build-graph", "--corpus", dataset["corpus"], "--min-df", "1",
             "--window-size", "10", "--dump", str(dump)]
        )
        assert code == 0
        lines = dump.read_text().splitlines()
        assert lines
        for line in lines[:10]:
            i, j, w = line.split()
            assert int(i) <= int(j)
            float(w)


class TestTrainEvaluate:
    def test_train_writes_outputs(self, dataset, tmp_path, capsys):
        metrics = tmp_path / "metrics.tsv"
        ckpt = tmp_path / "model.ckpt"
        negs = tmp_path / "negatives.tsv"
        code = main(
            ["train", *data_args(dataset),
             "--epochs", "3", "--hidden-dim", "8", "--seed", "1",
             "--metrics-out", str(metrics),
             "--checkpoint-out", str(ckpt),
             "--dump-negatives", str(negs)]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "best test acc" in out
        assert metrics.read_text().startswith("epoch\t")
        assert ckpt.exists()
        assert len(negs.read_text().splitlines()) == 30

    def test_evaluate_roundtrip(self, dataset, tmp_path, capsys):
        ckpt = tmp_path / "model.ckpt"
        assert (
            main(
                ["train", *data_args(dataset), "--epochs", "3",
                 "--hidden-dim", "8", "--checkpoint-out", str(ckpt)]
            )
            == 0
        )
        capsys.readouterr()
        code = main(["evaluate", *data_args(dataset), "--checkpoint", str(ckpt)])
        assert code == 0
        out = capsys.readouterr().out
        assert "train_acc" in out and "test_acc" in out

    def test_evaluate_rejects_mismatched_checkpoint(self, dataset, tmp_path, capsys):
        ckpt = tmp_path / "model.ckpt"
        other = tmp_path / "other"
        assert main(["synth", "--out-dir", str(other), "--n-docs", "20",
                     "--n-classes", "2", "--dim", "6", "--label-rate", "0.5",
                     "--vocab-per-class", "8", "--doc-len", "10"]) == 0
        assert (
            main(
                ["train", "--corpus", str(other / "corpus.txt"),
                 "--labels", str(other / "labels.tsv"),
                 "--embeddings", str(other / "embeddings.txt"),
                 "--min-df", "1", "--window-size", "10",
                 "--epochs", "2", "--hidden-dim", "8",
                 "--checkpoint-out", str(ckpt)]
            )
            == 0
        )
        code = main(["evaluate", *data_args(dataset), "--checkpoint", str(ckpt)])
        assert code == 2
        assert "emb_dim" in capsys.readouterr().err

    def test_repeats_summary(self, dataset, capsys):
        code = main(
            ["train", *data_args(dataset), "--epochs", "2",
             "--hidden-dim", "8", "--repeats", "2"]
        )
        assert code == 0
        assert "repeats=2" in capsys.readouterr().out


class TestAblate:
    def test_four_row_report(self, dataset, tmp_path, capsys):
        report = tmp_path / "report.tsv"
        code = main(
            ["ablate", *data_args(dataset), "--epochs", "2",
             "--hidden-dim", "8", "--report-out", str(report)]
        )
        assert code == 0
        lines = report.read_text().splitlines()
        assert len(lines) == 5
        assert lines[0].split("\t")[0].strip() == "config"
        names = [l.split("\t")[0].strip() for l in lines[1:]]
        assert names == ["full", "w/o correction", "w/o clustering", "w/o GCL"]
        shown = capsys.readouterr().out
        assert "w/o GCL" in shown


class TestSynth:
    def test_writes_three_files(self, tmp_path, capsys):
        out = tmp_path / "synthdir"
        code = main(["synth", "--out-dir", str(out), "--n-docs", "10",
                     "--n-classes", "2", "--dim", "4", "--label-rate", "0.5",
                     "--vocab-per-class", "5", "--doc-len", "6"])
        assert code == 0
        for name in ("corpus.txt", "labels.tsv", "embeddings.txt"):
            assert (out / name).exists()
        assert (out / "corpus.txt").read_text().count("\n") == 10

    def test_version_flag(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--version"])
        assert exc.value.code == 0
        assert "textcl" in capsys.readouterr().out
