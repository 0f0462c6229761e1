import json
from pathlib import Path

import pytest

from gsys.main import build_parser, main

A3 = "[[0,1,-1],[-1,0,1],[1,-1,0]]"


def run(capsys: pytest.CaptureFixture[str], *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_trace_prints_each_seed(capsys: pytest.CaptureFixture[str]) -> None:
    code, out, _ = run(capsys, "trace", "--b", A3, "--seq", "2,3,1,2")
    lines = out.splitlines()

    assert code == 0
    assert lines[:4] == [
        "step 0",
        "B: [[0,1,-1],[-1,0,1],[1,-1,0]]",
        "C: [[1,0,0],[0,1,0],[0,0,1]]",
        "G: [[1,0,0],[0,1,0],[0,0,1]]",
    ]
    assert lines[4] == "step 1: mutate 2"
    assert lines[-4] == "step 4: mutate 2"
    assert len(lines) == 20


def test_trace_reads_matrix_file(capsys: pytest.CaptureFixture[str], tmp_path: Path) -> None:
    path = tmp_path / "b.json"
    path.write_text(A3, encoding="utf-8")

    code, out, _ = run(capsys, "trace", "--file", str(path), "--cluster")

    assert code == 0
    assert out.splitlines() == [
        "step 0",
        "B: [[0,1,-1],[-1,0,1],[1,-1,0]]",
        "C: [[1,0,0],[0,1,0],[0,0,1]]",
        "G: [[1,0,0],[0,1,0],[0,0,1]]",
        "cluster: (x1, x2, x3)",
    ]


def test_complete_with_cluster(capsys: pytest.CaptureFixture[str]) -> None:
    code, out, _ = run(capsys, "complete", "--b", A3, "--seq", "2,3,1,2", "--u", "3", "--cluster")

    assert code == 0
    assert "retained: (0,1,0) (1,0,0)" in out
    assert "replay: 2,1" in out
    assert "cluster: ((x1+x2+x3)/(x1*x2), (x1+x3)/x2, x3)" in out


def test_complete_json(capsys: pytest.CaptureFixture[str]) -> None:
    code, out, _ = run(capsys, "complete", "--b", A3, "--seq", "2,3,1,2", "--u", "3", "--json")
    payload = json.loads(out)

    assert code == 0
    assert payload["replay"] == [2, 1]
    assert payload["retained"] == [[0, 1, 0], [1, 0, 0]]


def test_enumerate_writes_dot(capsys: pytest.CaptureFixture[str], tmp_path: Path) -> None:
    dot = tmp_path / "graph.dot"
    code, out, _ = run(capsys, "enumerate", "--b", A3, "--dot", str(dot))

    assert code == 0
    assert out.strip() == "14 clusters, 21 edges, closed"
    assert dot.read_text(encoding="utf-8").startswith("digraph exchange_graph {")


def test_verify(capsys: pytest.CaptureFixture[str]) -> None:
    code, out, _ = run(capsys, "verify", "--b", "[[0,1],[-2,0]]")

    assert code == 0
    assert out.splitlines() == ["mutation: pass", "completion: pass", "uniqueness: pass"]


def test_verify_json(capsys: pytest.CaptureFixture[str]) -> None:
    code, out, _ = run(capsys, "verify", "--b", A3, "--json")

    assert code == 0
    assert json.loads(out)["passed"] is True


def test_formula_is_reproducible(capsys: pytest.CaptureFixture[str]) -> None:
    first = run(capsys, "formula", "--b", A3, "--seq", "2,3,1,2", "--seed", "5")
    second = run(capsys, "formula", "--b", A3, "--seq", "2,3,1,2", "--seed", "5")

    assert first == second
    assert first[0] == 0
    assert first[1].startswith("cluster formula: pass")


def test_surface_commands(capsys: pytest.CaptureFixture[str]) -> None:
    polygon = ["--m", "6", "--tri", "0-2,2-4,0-4"]

    assert run(capsys, "surface", "gvec", *polygon, "--arc", "1-3")[:2] == (0, "(-1,0,0)\n")
    assert run(capsys, "surface", "adjacency", *polygon)[1].splitlines() == ["[0,1,-1]", "[-1,0,1]", "[1,-1,0]"]
    assert run(capsys, "surface", "flip", *polygon, "--arc", "0-4")[1] == "0-2,2-4,2-5\n"

    code, out, _ = run(capsys, "surface", "complete", *polygon, "--arcs", "1-3", "--json")
    assert code == 0
    assert "1-3" in json.loads(out)["arcs"]


def test_describe(capsys: pytest.CaptureFixture[str]) -> None:
    code, out, _ = run(capsys, "describe", "trace")
    assert code == 0
    assert "Source: builtin" in out

    code, out, _ = run(capsys, "describe")
    assert code == 0
    assert "surface-complete" in out

    code, _, err = run(capsys, "describe", "nope")
    assert code == 2
    assert "unknown command: nope" in err


def test_validation_errors_name_the_flag(capsys: pytest.CaptureFixture[str]) -> None:
    code, out, err = run(capsys, "trace", "--b", A3, "--seq", "4")
    assert code == 2
    assert out == ""
    assert "error: --seq:" in err

    code, _, err = run(capsys, "surface", "gvec", "--m", "6", "--tri", "0-2,1-3,0-4", "--arc", "1-3")
    assert code == 2
    assert "--tri:" in err

    code, _, err = run(capsys, "trace", "--b", "[[0,1],[1,0]]")
    assert code == 2
    assert "--b:" in err


def test_json_error_payload(capsys: pytest.CaptureFixture[str]) -> None:
    code, _, err = run(capsys, "complete", "--b", A3, "--u", "0", "--json")
    payload = json.loads(err)

    assert code == 2
    assert payload["error"] == "ValidationError"
    assert payload["message"].startswith("--u:")


def test_node_cap_prints_partial_graph(capsys: pytest.CaptureFixture[str]) -> None:
    code, out, err = run(capsys, "enumerate", "--b", A3, "--max-nodes", "5")

    assert code == 4
    assert out.startswith("5 clusters, ")
    assert out.strip().endswith("open")
    assert "node cap 5" in err


def test_env_caps(capsys: pytest.CaptureFixture[str], monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("GSYS_MAX_DEPTH", "1")
    code, _, err = run(capsys, "enumerate", "--b", A3)
    assert code == 4
    assert "depth cap 1" in err

    monkeypatch.setenv("GSYS_MAX_DEPTH", "zero")
    code, _, err = run(capsys, "enumerate", "--b", A3)
    assert code == 2
    assert "GSYS_MAX_DEPTH" in err


def test_missing_arguments_exit_through_argparse() -> None:
    with pytest.raises(SystemExit) as info:
        build_parser().parse_args(["trace"])
    assert info.value.code == 2
    with pytest.raises(SystemExit):
        main(["surface", "gvec", "--m", "6"])
