import json
from pathlib import Path

import pytest

from longsumm.cli import main


@pytest.fixture()
def config_file(tmp_path, vectors_path):
    path = tmp_path / "run.cfg"
    path.write_text(f"provider=static-word-vectors:{vectors_path}\n")
    return path


def corpus_file(name):
    return str(Path(__file__).parent / "fixtures" / "corpus" / f"{name}.json")


class TestSummarizeCommand:
    def test_writes_summary_files(self, tmp_path, config_file):
        out = tmp_path / "out"
        code = main(
            [
                "summarize",
                "--config",
                str(config_file),
                "--out",
                str(out),
                corpus_file("graphrank"),
            ]
        )
        assert code == 0
        assert (out / "graphrank.summary.txt").exists()
        report = json.loads((out / "graphrank.report.json").read_text())
        assert report["id"] == "graphrank"
        assert report["total_words"] <= 600

    def test_rerun_is_idempotent(self, tmp_path, config_file):
        out = tmp_path / "out"
        argv = [
            "summarize",
            "--config",
            str(config_file),
            "--out",
            str(out),
            corpus_file("wordfuse"),
        ]
        assert main(argv) == 0
        first = (out / "wordfuse.summary.txt").read_bytes()
        assert main(argv) == 0
        assert (out / "wordfuse.summary.txt").read_bytes() == first

    def test_batch_output_independent_of_order(self, tmp_path, config_file):
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        files = [corpus_file("graphrank"), corpus_file("speccluster")]
        assert main(["summarize", "--config", str(config_file), "--out", str(out_a), *files]) == 0
        assert main(["summarize", "--config", str(config_file), "--out", str(out_b), *reversed(files)]) == 0
        for name in ("graphrank", "speccluster"):
            assert (out_a / f"{name}.summary.txt").read_bytes() == (
                out_b / f"{name}.summary.txt"
            ).read_bytes()

    def test_unreadable_input_continues_batch(self, tmp_path, config_file):
        out = tmp_path / "out"
        code = main(
            [
                "summarize",
                "--config",
                str(config_file),
                "--out",
                str(out),
                str(tmp_path / "missing.json"),
                corpus_file("graphrank"),
            ]
        )
        assert code == 1
        assert (out / "graphrank.summary.txt").exists()

    def test_flag_overrides(self, tmp_path, config_file):
        out = tmp_path / "out"
        code = main(
            [
                "summarize",
                "--config",
                str(config_file),
                "--out",
                str(out),
                "--mode",
                "extractive",
                "--cap-words",
                "120",
                corpus_file("speccluster"),
            ]
        )
        assert code == 0
        report = json.loads((out / "speccluster.report.json").read_text())
        assert report["cap_words"] == 120
        assert report["config"]["mode"] == "extractive"

    def test_trace_flag_writes_trace(self, tmp_path, config_file):
        out = tmp_path / "out"
        main(
            [
                "summarize",
                "--config",
                str(config_file),
                "--out",
                str(out),
                "--trace",
                corpus_file("graphrank"),
            ]
        )
        trace = json.loads((out / "graphrank.trace.json").read_text())
        assert {"kept", "edges", "k", "clusters"} <= set(trace)

    def test_provider_flag_without_config(self, tmp_path, vectors_path):
        out = tmp_path / "out"
        code = main(
            [
                "summarize",
                "--provider",
                f"static-word-vectors:{vectors_path}",
                "--out",
                str(out),
                corpus_file("wordfuse"),
            ]
        )
        assert code == 0

    def test_missing_provider_and_config(self, tmp_path):
        code = main(["summarize", "--out", str(tmp_path), corpus_file("wordfuse")])
        assert code == 1


class TestEvaluateCommand:
    @pytest.fixture()
    def cand_dir(self, tmp_path, config_file, fixtures_dir):
        out = tmp_path / "cand"
        main(
            [
                "summarize",
                "--config",
                str(config_file),
                "--out",
                str(out),
                *(corpus_file(n) for n in ("graphrank", "wordfuse", "speccluster")),
            ]
        )
        return out

    def test_report_files_written(self, tmp_path, cand_dir, fixtures_dir):
        out = tmp_path / "eval"
        code = main(
            [
                "evaluate",
                "--cand",
                str(cand_dir),
                "--ref",
                str(fixtures_dir / "refs"),
                "--out",
                str(out),
            ]
        )
        assert code == 0
        report = json.loads((out / "eval.report.json").read_text())
        assert set(report["per_document"]) == {"graphrank", "wordfuse", "speccluster"}
        assert (out / "eval.report.txt").exists()
        assert (out / "histogram_rouge_1.csv").exists()

    def test_unmatched_id_listed_exit_zero(self, tmp_path, cand_dir, fixtures_dir, capsys):
        (cand_dir / "orphan.summary.txt").write_text("lonely summary\n")
        out = tmp_path / "eval"
        code = main(
            [
                "evaluate",
                "--cand",
                str(cand_dir),
                "--ref",
                str(fixtures_dir / "refs"),
                "--out",
                str(out),
            ]
        )
        assert code == 0
        report = json.loads((out / "eval.report.json").read_text())
        assert "orphan" in report["unmatched_candidates"]
        assert "orphan" in capsys.readouterr().out

    def test_bertscore_with_vectors(self, tmp_path, cand_dir, fixtures_dir, vectors_path):
        out = tmp_path / "eval"
        code = main(
            [
                "evaluate",
                "--cand",
                str(cand_dir),
                "--ref",
                str(fixtures_dir / "refs"),
                "--out",
                str(out),
                "--vectors",
                str(vectors_path),
                "--gnuplot",
            ]
        )
        assert code == 0
        report = json.loads((out / "eval.report.json").read_text())
        assert "bertscore" in report["means"]
        assert (out / "histogram_bertscore.gp").exists()

    def test_missing_directories(self, tmp_path):
        code = main(
            ["evaluate", "--cand", str(tmp_path / "nope"), "--ref", str(tmp_path)]
        )
        assert code == 1


class TestStatsCommand:
    def test_stats_table(self, tmp_path, capsys, fixtures_dir):
        out = tmp_path / "stats"
        code = main(
            [
                "stats",
                "--refs",
                str(fixtures_dir / "refs"),
                "--out",
                str(out),
                *(corpus_file(n) for n in ("graphrank", "wordfuse")),
            ]
        )
        assert code == 0
        assert "corpus size" in capsys.readouterr().out
        report = json.loads((out / "stats.report.json").read_text())
        assert report["papers"]["n_documents"] == 2
        assert report["references"]["n_documents"] == 3

    def test_unreadable_input_exit_one(self, tmp_path):
        code = main(["stats", str(tmp_path / "missing.json")])
        assert code == 1


class TestProviderCheck:
    def test_down_service_exits_two(self):
        assert main(["provider-check", "--url", "http://127.0.0.1:9"]) == 2
