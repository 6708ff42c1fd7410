import io
import json
import subprocess
import sys

import pytest

from exactmatch import cli, fileformat
from exactmatch.graph import ColoredWeightedGraph

from test_fileformat import C4_TEXT


def run(*argv):
    buf = io.StringIO()
    code = cli.main([str(a) for a in argv], buf)
    return code, buf.getvalue()


@pytest.fixture
def c4_file(tmp_path):
    path = tmp_path / "c4.txt"
    path.write_text(C4_TEXT)
    return path


def test_solve_success(c4_file):
    code, out = run("solve", "em-relaxed", c4_file)
    assert code == cli.EXIT_OK
    assert "status ok" in out and "red_count 2" in out
    assert "m 1 3 2 r" in out and "m 2 4 3 r" in out


@pytest.mark.parametrize("kind, extra", [
    ("ewpm-relaxed", ["--W", 5]),
    ("tkpm-0.5", ["--k", 1]),
    ("tkpm-0.8", ["--k", 1, "--epsilon", "1/4"]),
    ("tkpm-fpt-alpha", ["--k", 1, "--alpha", 2]),
    ("tkpm-fpt-beta", ["--k", 1, "--beta", 1, "--mode", "exhaustive"]),
    ("em-fpt-circ", ["--circ", 4]),
    ("min-tkpm", ["--k", 1]),
])
def test_every_solver(c4_file, kind, extra):
    code, out = run("solve", kind, c4_file, *extra)
    assert code == cli.EXIT_OK, out
    assert f"solver {kind}" in out


def test_parse_error(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("p em 4 1\ne 1 3 r\n")
    assert run("solve", "em-relaxed", path)[0] == cli.EXIT_PARSE


def test_infeasible(tmp_path):
    path = tmp_path / "nopm.txt"
    path.write_text("p em 4 2\ne 1 3 1 r\ne 2 3 1 b\npart 0011\nk 1\n")
    code, out = run("solve", "em-relaxed", path)
    assert code == cli.EXIT_INFEASIBLE
    assert "status infeasible" in out
    assert run("oracle", "tkpm", path)[0] == cli.EXIT_INFEASIBLE


def test_unsupported(tmp_path):
    g = ColoredWeightedGraph.from_edges(24, [(i, i + 1, 1) for i in range(0, 24, 2)])
    path = tmp_path / "big.txt"
    fileformat.write(path, g)
    assert run("verify-params", path, "--alpha", 12)[0] == cli.EXIT_UNSUPPORTED
    assert run("oracle", "count", path)[0] == cli.EXIT_UNSUPPORTED


def test_invalid_and_usage(c4_file):
    assert run("solve", "tkpm-0.5", c4_file, "--k", 5)[0] == cli.EXIT_INVALID
    assert run("solve", "tkpm-0.5", c4_file, "--k", 0)[0] == cli.EXIT_INVALID
    assert run("solve", "ewpm-relaxed", c4_file)[0] == cli.EXIT_USAGE
    assert run("frobnicate")[0] == cli.EXIT_USAGE
    assert run("solve", "em-relaxed", c4_file.parent / "missing.txt")[0] == cli.EXIT_USAGE


def test_no_result(c4_file):
    code, out = run("oracle", "em", c4_file, "--k", 1)
    assert code == cli.EXIT_NO_RESULT and out == "answer no\n"
    code, out = run("oracle", "em", c4_file)
    assert code == cli.EXIT_OK and out.startswith("answer yes\n")


def test_oracle_outputs(c4_file):
    assert run("oracle", "count", c4_file) == (0, "perfect_matchings 2\n")
    code, out = run("oracle", "tkpm", c4_file, "--k", 1)
    assert "cert.optimum 3" in out


def test_reduce(tmp_path, c4_file):
    target = tmp_path / "em.txt"
    cert = tmp_path / "cert.json"
    code, _ = run("reduce", c4_file, "--direction", "ewpm-to-em", "--W", 5, "-o", target, "--cert", cert)
    assert code == 0
    g, prob = fileformat.read(target)
    assert prob.kind == "em" and g.bipartition is not None
    assert json.loads(cert.read_text())
    for direction in ("tkpm-to-mwem", "mwem-to-ewpm", "truncate"):
        code, out = run("reduce", c4_file, "--direction", direction, "--k", 1, "--W", 5)
        assert code == 0
        g, _ = fileformat.parse(out, allow_zero=True)
        assert g.m == 4


def test_zero_weights_from_reduction(tmp_path, c4_file):
    # weights past the guessed edge become 0; oracle reads them back, solve stays strict
    target = tmp_path / "mwem.txt"
    assert run("reduce", c4_file, "--direction", "tkpm-to-mwem", "--k", 1, "--guess-edge", 4, "-o", target)[0] == 0
    assert " 0 " in target.read_text()
    code, out = run("oracle", "mwem", target)
    assert code == cli.EXIT_OK and "cert.optimum 3" in out
    run("reduce", c4_file, "--direction", "tkpm-to-mwem", "--k", 1, "--guess-edge", 1, "-o", target)
    assert run("oracle", "mwem", target) == (cli.EXIT_NO_RESULT, "answer no\n")
    assert run("solve", "tkpm-0.5", target, "--k", 1)[0] == cli.EXIT_PARSE


def test_gen_and_verify(tmp_path):
    path = tmp_path / "k33.txt"
    assert run("gen", "complete-bipartite", "--n", 6, "--seed", 4, "-o", path)[0] == 0
    code, out = run("verify-params", path)
    assert code == 0
    assert "beta 1" in out and "sound true" in out
    assert run("verify-params", path, "--alpha", 1)[0] == cli.EXIT_NO_RESULT


def test_bench(tmp_path):
    code, out = run("bench", "--solvers", "tkpm-0.5", "--n", 6, "--count", 3, "--no-timing", "--seed", 2)
    assert code == 0
    assert out.splitlines()[0].startswith("instance,family")
    assert len(out.splitlines()) == 1 + 3 + 1
    cfg = tmp_path / "suite.json"
    cfg.write_text(json.dumps({"solvers": ["em-relaxed"], "instances": [
        {"family": "random-bipartite-with-planted-pm", "n": 6, "count": 2}]}))
    assert run("bench", "--config", cfg, "--no-timing")[0] == 0


def test_repeat_is_byte_identical(c4_file, tmp_path):
    cmds = [
        ["gen", "random-general-with-planted-pm", "--n", "8", "--seed", "5"],
        ["solve", "tkpm-fpt-alpha", str(c4_file), "--k", "1", "--alpha", "2", "--mode", "random", "--seed", "3"],
        ["bench", "--solvers", "tkpm-0.8,em-relaxed", "--n", "6", "--count", "3", "--no-timing", "--seed", "1"],
    ]
    for argv in cmds:
        outs = [subprocess.run([sys.executable, "-m", "exactmatch", *argv], capture_output=True, check=True).stdout
                for _ in range(2)]
        assert outs[0] == outs[1] and outs[0]
