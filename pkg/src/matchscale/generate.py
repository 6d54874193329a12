"""
Seeded instance generators.
"""

from __future__ import annotations

import random
from typing import Optional

from .errors import Infeasible
from .graph import WeightedGraph, validate_graph


KINDS = ("random-general", "random-bipartite", "worst-path", "unit-odd-cycle")


def _distinct_pairs(rng: random.Random, m: int, total: int, pick) -> list:
    """m distinct pairs drawn by pick(), or by enumeration when dense."""
    if 2 * m > total:
        pool = [pick(j) for j in range(total)]
        return rng.sample(pool, m)
    seen: set = set()
    out = []
    while len(out) < m:
        pair = pick(None)
        if pair not in seen:
            seen.add(pair)
            out.append(pair)
    return out


def random_general(n: int, m: int, N: int, seed: int) -> WeightedGraph:
    """m distinct edges chosen uniformly, weights uniform on [1, N]."""
    if n < 0 or m < 0 or N < 1 or m > n * (n - 1) // 2:
        raise Infeasible(f"no simple graph with n={n}, m={m}, N={N}")
    rng = random.Random(seed)

    def pick(j: Optional[int]) -> tuple[int, int]:
        if j is None:
            while True:
                u = rng.randrange(n)
                v = rng.randrange(n)
                if u != v:
                    return (min(u, v), max(u, v))
        # j-th pair in lexicographic order
        u = 0
        while j >= n - 1 - u:
            j -= n - 1 - u
            u += 1
        return (u, u + 1 + j)

    pairs = _distinct_pairs(rng, m, n * (n - 1) // 2, pick)
    return validate_graph([(u, v, rng.randint(1, N)) for (u, v) in pairs], n)


def random_bipartite(n_left: int, n_right: int, m: int, N: int,
                     seed: int) -> WeightedGraph:
    """m distinct left-right edges, left = 0..n_left-1."""
    if min(n_left, n_right, m) < 0 or N < 1 or m > n_left * n_right:
        raise Infeasible(f"no bipartite graph with sides {n_left}, {n_right} "
                         f"and m={m}")
    rng = random.Random(seed)
    n = n_left + n_right

    def pick(j: Optional[int]) -> tuple[int, int]:
        if j is None:
            return (rng.randrange(n_left), n_left + rng.randrange(n_right))
        return (j // n_right, n_left + j % n_right)

    pairs = _distinct_pairs(rng, m, n_left * n_right, pick)
    edges = [(u, v, rng.randint(1, N)) for (u, v) in pairs]
    return validate_graph(edges, n, (range(n_left), range(n_left, n)))


def worst_path(n: int, N: int) -> WeightedGraph:
    """Path on n vertices whose inner edges are one heavier than the outer
    ones, so heaviest-first greedy picks the wrong parity throughout."""
    if n < 2 or N < 1:
        raise Infeasible(f"worst-path needs n >= 2 and N >= 1 (got n={n})")
    light = max(1, N // 2)
    heavy = min(N, light + 1)
    edges = [(j, j + 1, light if j % 2 == 0 else heavy) for j in range(n - 1)]
    side = [j % 2 for j in range(n)]
    return validate_graph(edges, n, ([x for x in range(n) if side[x] == 0],
                                     [x for x in range(n) if side[x] == 1]))


def unit_odd_cycle(k: int) -> WeightedGraph:
    """Unit-weight cycle on 2k + 1 vertices (optimum k, half-integral LP
    optimum k + 1/2)."""
    if k < 1:
        raise Infeasible(f"odd cycle needs k >= 1 (got {k})")
    n = 2 * k + 1
    return validate_graph([(j, (j + 1) % n, 1) for j in range(n)], n)


def generate(kind: str, n: int, m: Optional[int] = None, N: int = 1,
             seed: int = 0, n_right: Optional[int] = None) -> WeightedGraph:
    """Build an instance of the given kind.

    For random-bipartite, n is the left side and n_right defaults to n.
    worst-path has n vertices and unit-odd-cycle has n = 2k + 1 vertices;
    both fix m themselves and reject a conflicting m.

    Raises:
        Infeasible: the parameters admit no such graph.
    """
    if kind == "random-general":
        return random_general(n, n if m is None else m, N, seed)
    if kind == "random-bipartite":
        nr = n if n_right is None else n_right
        return random_bipartite(n, nr, n if m is None else m, N, seed)
    if kind == "worst-path":
        if m is not None and m != n - 1:
            raise Infeasible(f"worst-path on {n} vertices has {n - 1} edges")
        return worst_path(n, N)
    if kind == "unit-odd-cycle":
        if n < 3 or n % 2 == 0:
            raise Infeasible(f"unit-odd-cycle needs an odd n >= 3 (got {n})")
        if m is not None and m != n:
            raise Infeasible(f"unit-odd-cycle on {n} vertices has {n} edges")
        return unit_odd_cycle(n // 2)
    raise ValueError(f"unknown generator kind {kind!r}")
