import pytest

import norms.grid
import norms.params
from main import main
from storage import read_results


@pytest.fixture
def stream_file(tmp_path):
    path = tmp_path / "stream.txt"
    assert main(["gen", "--variant=appendix-c", "--m=256", "--n=1024", "--seed=2", f"--out={path}"]) == 0
    return path


def test_gen_writes_a_reproducible_file(tmp_path):
    first, second = tmp_path / "a.txt", tmp_path / "b.txt"
    for path in (first, second):
        args = ["gen", "--variant=appendix-c", "--m=1024", "--n=65536", "--seed=7", f"--out={path}"]
        assert main(args) == 0
    lines = first.read_text().splitlines()
    assert len(lines) == 1025
    assert lines[0] == "#n=65536 m=1024 seed=7"
    assert first.read_bytes() == second.read_bytes()


def test_gen_rejects_bad_length(tmp_path):
    assert main(["gen", "--variant=appendix-c", "--m=1000", f"--out={tmp_path / 'x.txt'}"]) == 2


def test_usage_error():
    assert main(["run", "bogus"]) == 2


def test_missing_input_file(tmp_path):
    assert main(["run", "hh", str(tmp_path / "missing.txt"), f"--out={tmp_path / 'r.csv'}"]) == 2


def test_run_hh(stream_file, tmp_path, capsys):
    out = tmp_path / "hh.csv"
    assert main(["run", "hh", str(stream_file), "--W=64", "--eta=0.1", f"--out={out}"]) == 0
    assert capsys.readouterr().out.strip() == str(out)
    rows = read_results(str(out))
    assert rows and all(row["algo"] == "sliding-hh" for row in rows)
    assert all(row["nonconforming"] == "1" for row in rows)


def test_run_norm(stream_file, tmp_path, monkeypatch):
    monkeypatch.setattr(norms.params, "MAX_REPS", 2)
    monkeypatch.setattr(norms.grid, "MAX_REPS", 2)
    out = tmp_path / "norm.csv"
    args = ["run", "norm", str(stream_file), "--norm=l1,l2", "--rate=0.5,1", "--reps=2", f"--out={out}"]
    assert main(args) == 0
    rows = read_results(str(out))
    symnorm = [row for row in rows if row["algo"] == "symnorm"]
    assert {row["norm"] for row in symnorm} == {"l1", "l2"}
    assert {row["seed"] for row in symnorm} == {"0", "1"}
    assert {row["algo"] for row in rows} >= {"uniform-stream@0.5", "uniform-universe@1"}
    exact_baseline = [row for row in rows if row["algo"] == "uniform-stream@1"]
    assert all(float(row["rel_error"]) == 0.0 for row in exact_baseline)


def test_run_norm_over_capacity(stream_file, tmp_path):
    assert main(["run", "norm", str(stream_file), "--norm=l2", "--mmc=2", f"--out={tmp_path / 'r.csv'}"]) == 3


def test_run_norm_rejects_bad_mode(stream_file, tmp_path):
    assert main(["run", "norm", str(stream_file), "--mode=heuristic", f"--out={tmp_path / 'r.csv'}"]) == 2


def test_run_orlicz_with_responses(tmp_path):
    rows_path = tmp_path / "rows.txt"
    gen = ["gen", "--variant=gaussian", "--m=64", "--d=2", "--response", "--seed=1", f"--out={rows_path}"]
    assert main(gen) == 0
    out = tmp_path / "orlicz.csv"
    assert main(["run", "orlicz", str(rows_path), "--eps=0.5", f"--out={out}"]) == 0
    rows = read_results(str(out))
    assert [row["algo"] for row in rows] == ["orlicz-embedding", "orlicz-regression"]
    assert float(rows[0]["estimate"]) < 1.5
    assert float(rows[1]["estimate"]) <= 2.5 * float(rows[1]["exact"])


def test_run_orlicz_writes_the_coreset(tmp_path):
    rows_path = tmp_path / "rows.txt"
    gen = ["gen", "--variant=gaussian", "--m=32", "--d=2", "--response", "--seed=2", f"--out={rows_path}"]
    assert main(gen) == 0
    coreset_path = tmp_path / "coreset.csv"
    argv = ["run", "orlicz", str(rows_path), "--eps=0.5", "--reps=2",
            f"--out={tmp_path / 'r.csv'}", f"--coreset-out={coreset_path}"]
    assert main(argv) == 0
    lines = coreset_path.read_text().splitlines()
    assert lines[0] == "index,p,weight,a0,a1,response"
    assert len(lines) > 3
    assert lines[1].split(",")[0] == "1"
