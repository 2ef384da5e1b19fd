import json
from pathlib import Path
from typing import List

import pytest

from deepgraph import REGISTRY, Claim, fail
from deepgraph.cli import EXIT_BUDGET, EXIT_CLAIM_FAILURE, EXIT_OK, EXIT_USAGE, main


def run(tmp_path: Path, *args: str) -> int:
    argv: List[str] = ["--cache-dir", str(tmp_path / "cache"), *args]
    return main(argv)


@pytest.mark.cli
def test_multiplier(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    assert run(tmp_path, "multiplier", "6", "2", "6", "5") == EXIT_OK
    assert capsys.readouterr().out == "2\n"
    assert run(tmp_path, "multiplier", "9", "3", "9", "4") == EXIT_OK
    assert capsys.readouterr().out == "1\n"
    assert run(tmp_path, "multiplier", "4", "2", "4", "2") == EXIT_USAGE
    assert "error" in capsys.readouterr().err


@pytest.mark.cli
def test_build_all_json(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    out = tmp_path / "graphs"
    assert run(tmp_path, "build", "cyc:7", "all", "--format", "json", "--out", str(out)) == EXIT_OK
    written = capsys.readouterr().out.split()
    assert len(written) == 4
    for kind in ("power", "enhanced", "deep", "commuting"):
        doc = json.loads((out / f"cyc_7.{kind}.json").read_text())
        assert doc["graph_kind"] == kind
        assert doc["spec"] == "cyc:7"
        assert len(doc["edges"]) == 21


@pytest.mark.cli
def test_build_dot(tmp_path: Path) -> None:
    assert run(tmp_path, "build", "sym:5", "deep", "--out", str(tmp_path)) == EXIT_OK
    text = (tmp_path / "sym_5.deep.dot").read_text()
    assert text.count("label=") == 120


@pytest.mark.cli
def test_build_engine_group(tmp_path: Path) -> None:
    args = ["build", "heis:3:1", "deep", "--format", "json", "--out", str(tmp_path)]
    assert run(tmp_path, *args) == EXIT_OK
    doc = json.loads((tmp_path / "heis_3_1.deep.json").read_text())
    assert doc["n"] == 27
    assert any((tmp_path / "cache" / "covers").iterdir())


@pytest.mark.cli
def test_build_report(tmp_path: Path) -> None:
    report = tmp_path / "rows.csv"
    args = ["build", "dih:8", "deep", "--out", str(tmp_path), "--report", str(report)]
    assert run(tmp_path, *args) == EXIT_OK
    assert run(tmp_path, *args) == EXIT_OK
    lines = report.read_text().splitlines()
    assert lines[0].startswith("spec,graph_kind,vertices")
    assert len(lines) == 3
    assert lines[1].startswith("dih:8,deep,8,")


@pytest.mark.cli
def test_build_errors(tmp_path: Path) -> None:
    assert run(tmp_path, "build", "tor:3", "deep") == EXIT_USAGE
    assert run(tmp_path, "build", "dih:7", "deep") == EXIT_USAGE
    assert run(tmp_path, "--max-vertices", "10", "build", "sym:4", "deep") == EXIT_BUDGET
    assert run(tmp_path, "--max-vertices", "0", "build", "sym:4", "deep") == EXIT_USAGE
    with pytest.raises(SystemExit):
        run(tmp_path, "build", "sym:4", "cayley")


@pytest.mark.cli
def test_verify(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    out = tmp_path / "report"
    assert run(tmp_path, "verify", "--filter", r"dihedral\.equality", "--out", str(out)) == EXIT_OK
    assert "PASS dihedral.equality" in capsys.readouterr().out
    assert (out / "report.csv").read_text().startswith("claim_id,status")
    assert (out / "report.txt").exists()
    assert not (out / "replay.json").exists()
    assert run(tmp_path, "verify", "--filter", "nothing") == EXIT_USAGE
    assert run(tmp_path, "verify", "--filter", "(") == EXIT_USAGE


@pytest.mark.cli
def test_verify_reports_repeat(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    runs = []
    for name in ("first", "second"):
        out = tmp_path / name
        assert run(tmp_path, "verify", "--filter", r"dihedral\.equality", "--out", str(out), "--no-color") == EXIT_OK
        runs.append((out, capsys.readouterr().out))
    (a, out_a), (b, out_b) = runs
    assert out_a == out_b
    for name in ("report.csv", "report.txt"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    for out in (a, b):
        header, row = (out / "timings.csv").read_text().splitlines()
        assert header == "claim_id,seconds" and row.startswith("dihedral.equality,")


@pytest.mark.cli
def test_verify_failure(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setitem(REGISTRY, "zz.broken", Claim("zz.broken", "ref", "full", lambda ctx: fail("nope", k=1)))
    out = tmp_path / "report"
    assert run(tmp_path, "verify", "--filter", r"zz\..*", "--out", str(out), "--seed", "5") == EXIT_CLAIM_FAILURE
    replay = json.loads((out / "replay.json").read_text())
    assert replay["seed"] == 5
    assert replay["failures"][0]["counterexample"] == {"k": 1}


@pytest.mark.cli
def test_cache_commands(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    assert run(tmp_path, "cache", "warm", "sym:4") == EXIT_OK
    assert "sym:4 degree=48" in capsys.readouterr().out
    assert run(tmp_path, "cache", "list") == EXIT_OK
    assert "sym:4" in capsys.readouterr().out
    assert run(tmp_path, "cache", "clear") == EXIT_OK
    assert capsys.readouterr().out == "removed 1 files\n"
    assert run(tmp_path, "cache", "warm", "cyc:3") == EXIT_USAGE
    assert run(tmp_path, "cache", "warm") == EXIT_USAGE


@pytest.mark.cli
def test_cache_dir_is_a_file(tmp_path: Path) -> None:
    blocker = tmp_path / "cache"
    blocker.write_text("")
    assert main(["--cache-dir", str(blocker), "cache", "list"]) == EXIT_USAGE


@pytest.mark.cli
def test_embed(tmp_path: Path, capsys: pytest.CaptureFixture) -> None:
    assert run(tmp_path, "embed", "3:0-1,1-2") == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].endswith("order=900")
    assert [line.split()[0] for line in lines[1:]] == ["0", "1", "2"]
    assert run(tmp_path, "embed", "2:", "--kind", "nonabelian") == EXIT_OK
    assert capsys.readouterr().out.splitlines()[0].endswith("order=216")
    assert run(tmp_path, "embed", "3:0-5") == EXIT_USAGE
    assert run(tmp_path, "embed", "5:0-1") == EXIT_BUDGET
