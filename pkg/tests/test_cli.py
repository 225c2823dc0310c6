import json
import os
import subprocess
import sys

import pytest

from fluid.cli import main
from fluid.ingest import format_quad
from fluid.rdfs import chain_graph
from fluid.synthetic import random_graph

from conftest import PUBLICATION_NT


@pytest.fixture
def pub_file(tmp_path):
    p = tmp_path / "pub.nt"
    p.write_text(PUBLICATION_NT)
    return str(p)


def write_graph(path, g):
    path.write_text("".join(format_quad(q, False) + "\n" for q in g.quads()))
    return str(path)


def report_of(capsys):
    err = capsys.readouterr().err.strip().splitlines()
    return json.loads(err[-1])


class TestSummarize:
    def test_schemex_publication_graph(self, pub_file, tmp_path, capsys):
        out = tmp_path / "out.nt"
        assert main(["summarize", "--preset", "schemex", "-i", pub_file, "-o", str(out)]) == 0
        rep = report_of(capsys)
        assert (rep["classes"], rep["vertices"]) == (2, 2)
        assert "wall_seconds" in rep
        assert out.read_text().count("<urn:fluid:VertexSummary>") == 2

    def test_definition_file(self, pub_file, tmp_path, capsys):
        d = tmp_path / "d.fluid"
        d.write_text("summary\n  cse(top, id, PC)\npayload [vcp]\n")
        assert main(["summarize", "--definition-file", str(d), "-i", pub_file, "--format", "json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert [s["payloads"]["vcp"] for s in doc["summaries"]] == [1, 1]

    def test_glob_inputs(self, tmp_path, capsys):
        for i in range(3):
            write_graph(tmp_path / f"part{i}.nt", random_graph(i))
        assert main(["summarize", "--preset", "semsets", "-i", str(tmp_path / "part*.nt")]) == 0
        assert report_of(capsys)["lines_read"] > 0

    def test_streaming_equals_in_memory(self, tmp_path, capsys):
        src = write_graph(tmp_path / "g.nt", random_graph(5))
        main(["summarize", "--preset", "class-collection", "-i", src])
        a = capsys.readouterr().out
        main(["summarize", "--preset", "class-collection", "-i", src, "--in-memory"])
        assert capsys.readouterr().out == a

    @pytest.mark.parametrize("preset", ["schemex", "attribute-collection", "typed-weak"])
    def test_thread_count_invariant(self, tmp_path, capsys, preset):
        paths = [write_graph(tmp_path / f"p{i}.nt", random_graph(i)) for i in range(4)]
        outputs = []
        for threads in ("1", "3"):
            args = ["summarize", "--preset", preset, "--threads", threads, "--format", "json"]
            for p in paths:
                args += ["-i", p]
            assert main(args) == 0
            outputs.append(capsys.readouterr().out)
        assert outputs[0] == outputs[1]


class TestExitCodes:
    def test_usage(self, capsys):
        with pytest.raises(SystemExit) as e:
            main(["summarize", "--preset", "schemex", "--definition", "x"])
        assert e.value.code == 1

    def test_unknown_command(self):
        with pytest.raises(SystemExit) as e:
            main(["frobnicate"])
        assert e.value.code == 1

    def test_no_inputs(self, capsys):
        assert main(["summarize", "--preset", "schemex", "-i", "/nonexistent/*.nt"]) == 1

    def test_ingest_failure(self, tmp_path, capsys):
        assert main(["summarize", "--preset", "schemex", "-i", str(tmp_path / "missing.nt")]) == 2
        assert main(["summarize", "--preset", "semsets", "-i", str(tmp_path / "missing.nt")]) == 2
        assert main(["stats", "-i", str(tmp_path / "missing.nt")]) == 2

    def test_bad_definition(self, pub_file, capsys):
        assert main(["summarize", "--definition", "summary cse(PC, payload [vip]", "-i", pub_file]) == 3
        assert main(["summarize", "--preset", "nope", "-i", pub_file]) == 3
        assert main(["summarize", "--definition", "summary sp(cse(PC, top, top), {}) payload [vip]", "-i", pub_file]) == 3

    def test_oracle_mismatch(self, monkeypatch, capsys):
        import fluid.cli as cli

        monkeypatch.setattr(cli, "naive_partition", lambda *a, **k: set())
        assert main(["oracle-check", "--graphs", "1"]) == 4


def test_presets_listing(capsys):
    assert main(["presets"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 19
    assert lines[0].startswith("attribute-collection\t")


def test_stats_chain(tmp_path, capsys):
    src = write_graph(tmp_path / "chain8.nt", chain_graph(8))
    assert main(["stats", "-i", src]) == 0
    full = capsys.readouterr().out
    assert json.loads(full)["increase_factor_properties"] == 4.0
    assert main(["stats", "--stats-only", "-i", src]) == 0
    assert capsys.readouterr().out == full


def test_oracle_check(capsys):
    assert main(["oracle-check", "--graphs", "3", "--seed", "100"]) == 0
    assert "0 mismatches" in capsys.readouterr().out


def test_bench_small(capsys):
    assert main(["bench", "--sizes", "1000,2000", "--repeats", "1"]) == 0
    out = capsys.readouterr()
    assert len(out.out.strip().splitlines()) == 5
    assert "R^2" in out.err


def test_module_entry_point(pub_file):
    env = dict(os.environ, FLUID_LOG="debug")
    res = subprocess.run(
        [sys.executable, "-m", "fluid", "summarize", "--preset", "semsets", "-i", pub_file],
        capture_output=True,
        text=True,
        env=env,
    )
    assert res.returncode == 0
    assert res.stdout.count("VertexSummary") == 2
