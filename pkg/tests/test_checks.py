from __future__ import annotations

from dataclasses import replace
from fractions import Fraction

from matchscale.approx import ApproxSolver
from matchscale.checks import (ExactSnapshot, check_approx_duals, check_exact_duals,
                               check_perfect_duals, edge_yz, free_dual_value,
                               matched_slack_ratio)
from matchscale.graph import make_scale_params, validate_graph


def approx_state():
    # N = 64, eps = 0.5: delta_0 = 4 and every dual starts at 30
    g = validate_graph([(0, 1, 60), (2, 3, 64)], 4)
    return ApproxSolver(g, 0.5)


def with_y(snap, values):
    y = list(snap.y)
    for (v, val) in values.items():
        y[v] = snap.params.raw(val)
    return replace(snap, y=y)


def matched(snap, k, j=0):
    (u, v, _w) = snap.graph.edges[k]
    mate = list(snap.mate_edge)
    mate[u] = mate[v] = k
    types = list(snap.edge_type)
    types[k] = j
    return replace(snap, mate_edge=mate, edge_type=types)


def has(problems, clause):
    return any(p.startswith(clause) for p in problems)


# ------------------------------------------------------- approximate solver

def test_fresh_approx_state_is_clean():
    snap = approx_state().snapshot()
    assert check_approx_duals(snap) == []
    assert free_dual_value(snap) == 30


def test_granularity_violation():
    snap = approx_state().snapshot()
    y = list(snap.y)
    y[0] += 1
    assert has(check_approx_duals(replace(snap, y=y)), "granularity")


def test_near_domination_violation():
    snap = with_y(approx_state().snapshot(), {0: 20, 1: 20})
    problems = check_approx_duals(snap)
    assert has(problems, "near domination")


def test_free_duals_must_agree():
    snap = with_y(approx_state().snapshot(), {0: 32})
    assert has(check_approx_duals(snap), "free duals")


def test_matched_vertex_above_free_dual():
    snap = matched(approx_state().snapshot(), 0)
    # matched ends sharing the free dual are only allowed mid-search
    assert has(check_approx_duals(snap), "free duals")
    assert not has(check_approx_duals(replace(snap, stage="search")),
                   "free duals")
    # with an isolated free vertex below them the state is clean
    g = validate_graph([(0, 1, 60)], 3)
    snap = matched(ApproxSolver(g, 0.5).snapshot(), 0)
    snap = with_y(snap, {0: 30, 1: 30, 2: 28})
    assert check_approx_duals(snap) == []


def test_near_tightness_violation():
    snap = with_y(matched(approx_state().snapshot(), 0), {0: 32, 1: 32})
    assert has(check_approx_duals(snap), "near tightness")


def test_matched_slack_ratio():
    snap = with_y(matched(approx_state().snapshot(), 0), {0: 32, 1: 30})
    assert matched_slack_ratio(snap) == Fraction(2, 60)
    assert matched_slack_ratio(approx_state().snapshot()) == 0


def test_edge_yz_counts_shared_blossoms():
    g = validate_graph([(0, 1, 8), (1, 2, 8), (0, 2, 8), (2, 3, 8)], 4)
    s = ApproxSolver(g, 0.5)
    f = s.forest
    f.mate_edge[1] = f.mate_edge[2] = 1
    b = f.contract([0, 1, 2], [(0, 1, 0), (1, 2, 1), (2, 0, 2)])
    f.z[b] = 6
    base = 2 * s.y[0]
    assert edge_yz(s.snapshot()) == [base + 6, base + 6, base + 6, base]


# ------------------------------------------------------------ exact solver

def exact_snapshot(y, mate, stage="scale", scale=0):
    # N = 4, n = 1: delta_0 = 4 in raw units of 1
    g = validate_graph([(0, 1, 4)], 2, ([0], [1]))
    p = make_scale_params(4, mode="exact-mwm", n=1)
    assert p.raw_delta(0) == 4
    return ExactSnapshot(g, p, scale, list(y), list(mate), stage)


def test_exact_clean_states():
    assert check_exact_duals(exact_snapshot([4, 0], [0, 0])) == []
    assert check_exact_duals(exact_snapshot([12, 4], [0, 0])) == []
    assert check_exact_duals(exact_snapshot([4, 0], [-1, -1], "phase1")) == []


def test_exact_near_tightness_by_stage():
    loose = [12, 4]
    assert has(check_exact_duals(exact_snapshot(loose, [0, 0], "end")),
               "near tightness")
    assert has(check_exact_duals(exact_snapshot(loose, [0, 0], "phase1")),
               "near tightness")
    assert has(check_exact_duals(exact_snapshot([16, 4], [0, 0])),
               "near tightness")


def test_exact_domination_and_granularity():
    assert has(check_exact_duals(exact_snapshot([0, 0], [0, 0])), "domination")
    assert has(check_exact_duals(exact_snapshot([2, 2], [0, 0])), "granularity")
    assert has(check_exact_duals(exact_snapshot([8, -4], [0, 0])),
               "granularity")


def test_exact_free_duals():
    assert has(check_exact_duals(exact_snapshot([4, 4], [-1, -1])),
               "free duals")
    # during the first scale only right free vertices must be zero
    assert has(check_exact_duals(exact_snapshot([0, 4], [-1, -1], "phase1")),
               "free duals")


def test_perfect_solver_invariants():
    assert check_perfect_duals(exact_snapshot([8, -4], [0, 0])) == []
    problems = check_perfect_duals(exact_snapshot([4, 0], [-1, -1]))
    assert has(problems, "perfect matching")
