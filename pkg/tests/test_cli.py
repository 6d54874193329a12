from __future__ import annotations

import io
import subprocess
import sys

import pytest

import matchscale.approx
import matchscale.exact
from corpora import general_corpus
from matchscale.cli import (EXIT_INVARIANT, EXIT_NO_PERFECT, EXIT_USAGE, main,
                            with_bipartition)
from matchscale.errors import NotBipartite
from matchscale.generate import unit_odd_cycle
from matchscale.graph import validate_graph
from matchscale.instance import format_instance, parse_instance

SINGLE = "p edge 2 1\ne 1 2 5\n"
SQUARE = "p bipartite 2 2 4\ne 1 3 3\ne 1 4 1\ne 2 3 2\ne 2 4 4\n"
BLOCKED = "p bipartite 2 2 2\ne 1 3 5\ne 2 3 5\n"


def run(argv, capsys, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    (out, err) = capsys.readouterr()
    return code, out, err


def write(tmp_path, text, name="g.txt"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_approx_single_edge(tmp_path, capsys):
    assert run(["approx", "--eps", "0.1", write(tmp_path, SINGLE)],
               capsys) == (0, "s 5\nm 1 2\n", "")


def test_reads_stdin(capsys, monkeypatch):
    (code, out, _err) = run(["exact"], capsys, SQUARE, monkeypatch)
    assert (code, out) == (0, "s 7\nm 1 3\nm 2 4\n")


@pytest.mark.parametrize("cmd", [["exact"], ["mwpm"],
                                 ["oracle", "--method", "hungarian"],
                                 ["oracle", "--method", "brute"],
                                 ["approx", "--eps", "0.5", "--mode", "linear"]])
def test_every_solver_on_square(cmd, tmp_path, capsys):
    (code, out, _err) = run(cmd + [write(tmp_path, SQUARE)], capsys)
    assert code == 0
    assert out.startswith("s 7\n")


def test_greedy_oracle(tmp_path, capsys):
    (code, out, _err) = run(["oracle", "--method", "greedy",
                             write(tmp_path, SQUARE)], capsys)
    assert (code, out) == (0, "s 7\nm 1 3\nm 2 4\n")


def test_mwpm_without_perfect_matching(tmp_path, capsys):
    (code, out, err) = run(["mwpm", write(tmp_path, BLOCKED)], capsys)
    assert code == EXIT_NO_PERFECT
    assert out == "" and "perfect" in err


def test_exact_on_odd_cycle_is_usage_error(tmp_path, capsys):
    text = format_instance(unit_odd_cycle(1))
    (code, _out, err) = run(["exact", write(tmp_path, text)], capsys)
    assert code == EXIT_USAGE and "odd cycle" in err


def test_exact_two_colours_general_header(tmp_path, capsys):
    # a path given with a "p edge" header is 2-coloured before solving
    text = "p edge 4 3\ne 1 2 2\ne 2 3 3\ne 3 4 2\n"
    (code, out, _err) = run(["exact", write(tmp_path, text)], capsys)
    assert (code, out) == (0, "s 4\nm 1 2\nm 3 4\n")


@pytest.mark.parametrize("argv", [
    [], ["approx"], ["approx", "--eps", "x"], ["frobnicate"],
    ["oracle", "--method", "magic"], ["bench", "--sizes", "10-20"]])
def test_usage_errors(argv, capsys):
    assert run(argv, capsys)[0] == EXIT_USAGE


def test_parse_error_and_missing_file(tmp_path, capsys):
    (code, _out, err) = run(["approx", "--eps", "0.1",
                             write(tmp_path, "e 1 2 5\n")], capsys)
    assert code == EXIT_USAGE and "line 1" in err
    missing = str(tmp_path / "absent.txt")
    assert run(["exact", missing], capsys)[0] == EXIT_USAGE


def test_bad_eps_is_usage_error(tmp_path, capsys):
    assert run(["approx", "--eps", "1.5", write(tmp_path, SINGLE)],
               capsys)[0] == EXIT_USAGE


def test_invariant_violation_exit_code(tmp_path, capsys, monkeypatch):
    monkeypatch.setattr(matchscale.approx, "check_approx_duals",
                        lambda snap: ["forced failure"])
    (code, out, err) = run(["approx", "--eps", "0.5", "--check-invariants",
                            write(tmp_path, SINGLE)], capsys)
    assert code == EXIT_INVARIANT
    assert out == "" and "forced failure" in err
    monkeypatch.setattr(matchscale.exact, "check_exact_duals",
                        lambda snap: ["forced failure"])
    assert run(["--check-invariants", "exact", write(tmp_path, SQUARE)],
               capsys)[0] == EXIT_INVARIANT


def test_trace_goes_to_stderr(tmp_path, capsys):
    (code, out, err) = run(["approx", "--eps", "0.5", "--trace",
                            write(tmp_path, SQUARE)], capsys)
    assert code == 0 and out.startswith("s 7")
    assert "approx scale=" in err
    (code, out, err) = run(["exact", "--trace", write(tmp_path, SQUARE)],
                           capsys)
    assert "exact phase1" in err and "exact phase3-end" in err


def test_gen_is_seeded(tmp_path, capsys, monkeypatch):
    argv = ["gen", "random-general", "--n", "12", "--m", "20", "-N", "50"]
    (_c, a, _e) = run(argv + ["--seed", "4"], capsys)
    (_c, b, _e) = run(argv + ["--seed", "4"], capsys)
    (_c, c, _e) = run(argv + ["--seed", "5"], capsys)
    assert a == b != c
    monkeypatch.setenv("MATCHSCALE_SEED", "4")
    assert run(argv, capsys)[1] == a
    g = parse_instance(a)
    assert (g.n, g.m) == (12, 20)
    out = tmp_path / "gen.txt"
    assert run(argv + ["-o", str(out)], capsys)[0] == 0
    assert parse_instance(out.read_text()).edges == g.edges


def test_gen_infeasible(capsys):
    assert run(["gen", "random-general", "--n", "3", "--m", "9"],
               capsys)[0] == EXIT_USAGE


def test_checked_approx_over_corpus(tmp_path, capsys):
    """approx --eps 0.1 --check-invariants exits 0 on every corpus graph."""
    for (j, g) in enumerate(general_corpus()):
        path = write(tmp_path, format_instance(g), f"g{j}.txt")
        (code, out, _err) = run(["approx", "--eps", "0.1",
                                 "--check-invariants", path], capsys)
        assert code == 0, j
        assert out.startswith("s ")


def test_with_bipartition():
    g = validate_graph([(0, 1, 1), (1, 2, 1), (3, 4, 1)], 5)
    assert with_bipartition(g).side == (0, 1, 0, 0, 1)
    with pytest.raises(NotBipartite):
        with_bipartition(unit_odd_cycle(2))


def test_console_script_module():
    proc = subprocess.run([sys.executable, "-m", "matchscale.cli", "approx",
                           "--eps", "0.1"], input=SINGLE, text=True,
                          capture_output=True)
    assert (proc.returncode, proc.stdout) == (0, "s 5\nm 1 2\n")
