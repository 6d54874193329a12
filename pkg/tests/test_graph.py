from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from matchscale.errors import (EpsOutOfRange, NonBipartiteEdge,
                               NonIntegerWeight, NonPositiveWeight, SelfLoop,
                               VertexOutOfRange)
from matchscale.graph import (FixedDual, Matching, make_scale_params,
                              normalize_real_weights, truncated_weight,
                              validate_graph)
from matchscale.oracle import brute_force_weighted_edges


# ---------------------------------------------------------------- validate

def test_single_edge_graph():
    g = validate_graph([(0, 1, 5)], 2)
    assert g.m == 1
    assert g.N == 5
    assert g.adjacency == ((0,), (0,))


def test_self_loop_rejected():
    with pytest.raises(SelfLoop):
        validate_graph([(0, 0, 3)], 1)


def test_parallel_edges_keep_heaviest():
    g = validate_graph([(0, 1, 2), (0, 1, 7)], 2)
    assert g.edges == ((0, 1, 7),)
    g = validate_graph([(1, 0, 7), (0, 1, 2)], 2)
    assert g.edges == ((0, 1, 7),)


@pytest.mark.parametrize("w", [0, -3])
def test_nonpositive_weight_rejected(w):
    with pytest.raises(NonPositiveWeight):
        validate_graph([(0, 1, w)], 2)


def test_fractional_weight_rejected():
    with pytest.raises(NonIntegerWeight):
        validate_graph([(0, 1, 2.5)], 2)


def test_vertex_out_of_range():
    with pytest.raises(VertexOutOfRange):
        validate_graph([(0, 2, 1)], 2)


def test_bipartition_enforced():
    with pytest.raises(NonBipartiteEdge):
        validate_graph([(0, 1, 1)], 3, ([0, 1], [2]))
    g = validate_graph([(0, 2, 1), (1, 2, 4)], 3, ([0, 1], [2]))
    assert g.side == (0, 0, 1)
    assert (g.n_left, g.n_right) == (2, 1)


edge_lists = st.integers(2, 9).flatmap(lambda n: st.tuples(
    st.just(n),
    st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1),
                       st.integers(1, 50)), max_size=30)))


@given(edge_lists)
def test_validated_graph_invariants(data):
    (n, raw) = data
    raw = [(u, v, w) for (u, v, w) in raw if u != v]
    g = validate_graph(raw, n)
    assert all(u < v for (u, v, _w) in g.edges)
    assert len({(u, v) for (u, v, _w) in g.edges}) == g.m
    assert g.N == max((w for (_u, _v, w) in raw), default=0)
    for (k, (u, v, _w)) in enumerate(g.edges):
        assert k in g.adjacency[u] and k in g.adjacency[v]
    assert sum(len(a) for a in g.adjacency) == 2 * g.m
    best = {}
    for (u, v, w) in raw:
        key = (min(u, v), max(u, v))
        best[key] = max(best.get(key, 0), w)
    assert {(u, v): w for (u, v, w) in g.edges} == best


def test_matching_weight_and_mates():
    g = validate_graph([(0, 1, 3), (1, 2, 4), (2, 3, 5)], 4)
    m = Matching(g, [0, 2])
    assert m.weight == 8 == m.recompute_weight()
    assert m.mate == [1, 0, 3, 2]
    assert m.pairs() == [(0, 1), (2, 3)]
    assert m.is_perfect()
    with pytest.raises(ValueError):
        Matching(g, [0, 1])


# ----------------------------------------------------------- normalization

def test_normalize_single_edge():
    (g, gamma) = normalize_real_weights(2, [(0, 1, 100.0)], 0.5)
    assert gamma == Fraction(25, 2)
    assert g.edges == ((0, 1, 8),)


def test_normalize_equal_weights():
    edges = [(0, 1, 8.0), (1, 2, 8.0), (2, 3, 8.0), (0, 3, 8.0)]
    (g, gamma) = normalize_real_weights(4, edges, 0.5)
    assert gamma == Fraction(1, 2)
    assert [w for (_u, _v, w) in g.edges] == [16] * 4


def test_normalize_weight_equal_to_gamma():
    # gamma = 0.25 * 10 / 5 = 0.5; the edge of weight 0.5 maps to 1
    (g, gamma) = normalize_real_weights(5, [(0, 1, 10.0), (2, 3, 0.5)], 0.5)
    assert gamma == Fraction(1, 2)
    assert g.edges[1] == (2, 3, 1)


def test_normalize_rejects_bad_eps():
    with pytest.raises(EpsOutOfRange):
        normalize_real_weights(2, [(0, 1, 1.0)], 1.0)


def test_normalization_soundness_on_random_graphs():
    rng = random.Random(11)
    for _ in range(200):
        n = rng.randint(2, 10)
        pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
        rng.shuffle(pairs)
        m = rng.randint(1, min(len(pairs), 18))
        real = [(u, v, rng.uniform(0.01, 100.0)) for (u, v) in pairs[:m]]
        eps = rng.choice((0.5, 0.2, 0.1))
        (g, gamma) = normalize_real_weights(n, real, eps)
        (_wi, chosen) = brute_force_weighted_edges(g.n, g.edges)
        lookup = {(min(u, v), max(u, v)): w for (u, v, w) in real}
        original_of_int = sum(lookup[g.edges[k][:2]] for k in chosen)
        (best_real, _ids) = brute_force_weighted_edges(n, real)
        assert original_of_int >= (1 - eps) * best_real - 1e-9


# -------------------------------------------------------- truncated weight

def test_truncated_weight_examples():
    assert truncated_weight(13, 4) == 12
    assert truncated_weight(16, 4) == 16
    assert (truncated_weight(13, 4), truncated_weight(13, 2)) == (12, 12)
    assert (truncated_weight(15, 4), truncated_weight(15, 2)) == (12, 14)


def test_truncated_weight_fractional_granularity():
    assert truncated_weight(7, Fraction(1, 4)) == 7
    assert truncated_weight(Fraction(7, 3), Fraction(1, 2)) == 2


@given(st.integers(1, 10**6), st.integers(0, 12), st.integers(1, 10**6))
def test_truncated_weight_properties(w, e, w2):
    d = 1 << e
    t = truncated_weight(w, d)
    assert truncated_weight(t, d) == t
    assert t <= w < t + d
    assert t % d == 0
    if w <= w2:
        assert t <= truncated_weight(w2, d)
    # halving the granularity adds zero or exactly the new granularity
    if e >= 1:
        assert truncated_weight(w, d // 2) - t in (0, d // 2)


# ------------------------------------------------------------- parameters

def test_scale_params_approx_example():
    p = make_scale_params(5, 0.3, "approx")
    assert p.N_pow2 == 8
    assert p.eps_prime == Fraction(1, 32)
    assert p.delta_0 == Fraction(1, 4)
    assert p.L == 3


def test_scale_params_power_of_two_unchanged():
    assert make_scale_params(8, 0.3, "approx").N_pow2 == 8


def test_scale_params_exact_mwm_example():
    p = make_scale_params(9, mode="exact-mwm", n=16)
    assert p.delta_0 == 2
    assert p.L == 4
    assert p.delta(p.L) == Fraction(1, 8)
    assert p.delta(p.L) ** 2 <= Fraction(1, 16)


def test_scale_params_bad_eps():
    for eps in (0, 1, 1.5, -0.1):
        with pytest.raises(EpsOutOfRange):
            make_scale_params(4, eps, "approx")


@given(st.integers(1, 10**9), st.fractions(Fraction(1, 10**4), Fraction(99, 100)))
def test_approx_params_properties(N, eps):
    p = make_scale_params(N, eps, "approx")
    e = p.eps_prime
    assert e.numerator == 1 and e.denominator & (e.denominator - 1) == 0
    assert e <= Fraction(1, 4) and e <= eps / 7
    assert 2 * e > min(Fraction(1, 4), eps / 7)
    assert p.N_pow2 >= N and p.N_pow2 < 2 * N + (N == 1)
    assert p.delta_0 == e * p.N_pow2
    for i in range(p.L + 1):
        assert (p.delta(i) / 2 / p.unit).denominator == 1
    assert (1 / p.unit).denominator == 1


@given(st.integers(1, 10**7), st.integers(1, 400))
def test_exact_params_properties(N, n):
    p = make_scale_params(N, mode="exact-mwm", n=n)
    # delta_0 = 2^floor(log(N / sqrt n))
    assert p.delta_0 ** 2 * n <= N * N < (2 * p.delta_0) ** 2 * n
    assert p.L == math.ceil(math.log2(N)) if N > 1 else p.L == 0
    assert p.delta(p.L) ** 2 * n <= 1
    assert p.raw_delta(p.L) == 1
    q = make_scale_params(N, mode="exact-mwpm", n=n)
    assert q.delta_0 <= N < 2 * q.delta_0
    assert 4 ** q.L >= n * N * N
    assert q.L == 0 or 4 ** (q.L - 1) < n * N * N
    assert q.raw_delta(q.L) == 1


def test_fixed_dual_divisibility():
    unit = Fraction(1, 8)
    y = FixedDual(12, unit)
    assert y.value == Fraction(3, 2)
    assert y.divisible_by(Fraction(1, 2))
    assert not y.divisible_by(Fraction(1))
    with pytest.raises(ValueError):
        y.divisible_by(Fraction(1, 16))
