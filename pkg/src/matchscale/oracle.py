"""
Independent reference solvers used to validate the scaling algorithms.

None of these share code with the solvers beyond the graph container.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import NoPerfectMatching, NotBipartite, TooLarge, UnequalSides
from .graph import Matching, WeightedGraph


BRUTE_FORCE_MAX_EDGES = 32
MWPM_MAX_SIDE = 16


@dataclass(frozen=True)
class OracleResult:
    weight: int
    matching: Matching
    method: str


def brute_force_weighted_edges(
        n: int,
        edges: Sequence[tuple[int, int, object]]
        ) -> tuple[object, list[int]]:
    """Exact maximum weight matching by branch and bound over the edges.

    Works for any numeric weight type (used on real weights by the
    normalization tests).  Returns (weight, chosen edge indices).
    """
    if len(edges) > BRUTE_FORCE_MAX_EDGES:
        raise TooLarge(f"{len(edges)} edges exceeds brute-force limit "
                       f"{BRUTE_FORCE_MAX_EDGES}")
    order = sorted((k for k in range(len(edges)) if edges[k][2] > 0),
                   key=lambda k: edges[k][2], reverse=True)
    m = len(order)
    used = [False] * n
    chosen: list[int] = []
    zero = edges[order[0]][2] * 0 if order else 0
    best_weight = zero
    best_set: list[int] = []

    def optimistic(pos: int) -> object:
        total = zero
        for q in range(pos, m):
            (u, v, w) = edges[order[q]]
            if not used[u] and not used[v]:
                total += w
        return total

    def branch(pos: int, current: object) -> None:
        nonlocal best_weight, best_set
        if current > best_weight:
            best_weight = current
            best_set = list(chosen)
        if pos == m or current + optimistic(pos) <= best_weight:
            return
        k = order[pos]
        (u, v, w) = edges[k]
        if not used[u] and not used[v]:
            used[u] = used[v] = True
            chosen.append(k)
            branch(pos + 1, current + w)
            chosen.pop()
            used[u] = used[v] = False
        branch(pos + 1, current)

    branch(0, zero)
    return best_weight, sorted(best_set)


def brute_force_mwm(graph: WeightedGraph) -> OracleResult:
    """Exact maximum weight matching of a small general graph.

    Raises:
        TooLarge: more than BRUTE_FORCE_MAX_EDGES edges.
    """
    (weight, ids) = brute_force_weighted_edges(graph.n, graph.edges)
    return OracleResult(int(weight), Matching(graph, ids), "brute-force")


def _sides(graph: WeightedGraph) -> tuple[list[int], list[int]]:
    if graph.side is None:
        raise NotBipartite("graph has no bipartition")
    left = [x for x in range(graph.n) if graph.side[x] == 0]
    right = [x for x in range(graph.n) if graph.side[x] == 1]
    return left, right


def brute_force_mwpm(graph: WeightedGraph) -> OracleResult:
    """Exact maximum weight perfect matching of a small bipartite graph.

    Enumerates assignments of right vertices to left vertices, memoized on
    the set of right vertices already used.

    Raises:
        UnequalSides, NoPerfectMatching, TooLarge.
    """
    (left, right) = _sides(graph)
    if len(left) != len(right):
        raise UnequalSides(f"{len(left)} left vs {len(right)} right vertices")
    k = len(left)
    if k > MWPM_MAX_SIDE:
        raise TooLarge(f"side size {k} exceeds {MWPM_MAX_SIDE}")
    rpos = {x: j for (j, x) in enumerate(right)}
    options: list[list[tuple[int, int, int]]] = []
    for x in left:
        opts = []
        for e in graph.adjacency[x]:
            r = graph.other(e, x)
            opts.append((rpos[r], graph.edges[e][2], e))
        options.append(opts)

    memo: dict[int, tuple[int, tuple[int, ...]] | None] = {}

    def solve(row: int, mask: int) -> tuple[int, tuple[int, ...]] | None:
        if row == k:
            return (0, ())
        if mask in memo:
            return memo[mask]
        best: tuple[int, tuple[int, ...]] | None = None
        for (j, w, e) in options[row]:
            if mask >> j & 1:
                continue
            sub = solve(row + 1, mask | (1 << j))
            if sub is not None and (best is None or sub[0] + w > best[0]):
                best = (sub[0] + w, (e,) + sub[1])
        memo[mask] = best
        return best

    result = solve(0, 0)
    if result is None:
        raise NoPerfectMatching("graph has no perfect matching")
    return OracleResult(result[0], Matching(graph, result[1]), "brute-force")


def _hungarian_max(profit: np.ndarray) -> np.ndarray:
    """Maximum-profit assignment on a square matrix, O(n^3).

    Classical potential-based Hungarian method; returns col_of_row.
    """
    n = profit.shape[0]
    cost = -profit
    inf = np.iinfo(np.int64).max // 4
    u = np.zeros(n + 1, dtype=np.int64)
    v = np.zeros(n + 1, dtype=np.int64)
    row_of = np.zeros(n + 1, dtype=np.int64)    # column j -> row (1-based)
    way = np.zeros(n + 1, dtype=np.int64)
    for i in range(1, n + 1):
        row_of[0] = i
        j0 = 0
        minv = np.full(n + 1, inf, dtype=np.int64)
        used = np.zeros(n + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = row_of[j0]
            free = ~used
            free[0] = False
            cur = cost[i0 - 1, :] - u[i0] - v[1:]
            cand = np.concatenate(([inf], cur))
            better = free & (cand < minv)
            minv[better] = cand[better]
            way[better] = j0
            masked = np.where(free, minv, inf)
            j1 = int(np.argmin(masked))
            delta = masked[j1]
            u[row_of[used]] += delta
            v[used] -= delta
            minv[free] -= delta
            j0 = j1
            if row_of[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            row_of[j0] = row_of[j1]
            j0 = j1
    col_of = np.zeros(n, dtype=np.int64)
    for j in range(1, n + 1):
        col_of[row_of[j] - 1] = j - 1
    return col_of


def cubic_hungarian(graph: WeightedGraph) -> OracleResult:
    """Exact maximum weight matching of a bipartite graph in O(n^3).

    The non-perfect problem is turned into an assignment problem by giving
    every vertex a zero-profit dummy partner; missing edges get a profit so
    negative that they are never worth using.

    Raises:
        NotBipartite.
    """
    (left, right) = _sides(graph)
    nl = len(left)
    nr = len(right)
    size = nl + nr
    if size == 0 or graph.m == 0:
        return OracleResult(0, Matching(graph, ()), "cubic-hungarian")
    lpos = {x: i for (i, x) in enumerate(left)}
    rpos = {x: j for (j, x) in enumerate(right)}
    forbid = -(1 + sum(w for (_u, _v, w) in graph.edges))
    # rows: left vertices, then one dummy row per right vertex
    # columns: right vertices, then one dummy column per left vertex
    profit = np.full((size, size), forbid, dtype=np.int64)
    edge_at: dict[tuple[int, int], int] = {}
    for (k, (a, b, w)) in enumerate(graph.edges):
        (l, r) = (a, b) if graph.side[a] == 0 else (b, a)
        (i, j) = (lpos[l], rpos[r])
        profit[i, j] = w
        edge_at[(i, j)] = k
    for i in range(nl):
        profit[i, nr + i] = 0
    for j in range(nr):
        profit[nl + j, j] = 0
    profit[nl:, nr:] = 0
    col_of = _hungarian_max(profit)
    ids = [edge_at[(i, int(col_of[i]))] for i in range(nl)
           if col_of[i] < nr and (i, int(col_of[i])) in edge_at]
    m = Matching(graph, ids)
    return OracleResult(m.weight, m, "cubic-hungarian")


def greedy_half(graph: WeightedGraph) -> OracleResult:
    """Heaviest-edge-first greedy matching (at least half the optimum)."""
    used = [False] * graph.n
    ids = []
    order = sorted(range(graph.m), key=lambda k: (-graph.edges[k][2], k))
    for k in order:
        (u, v, _w) = graph.edges[k]
        if not used[u] and not used[v]:
            used[u] = used[v] = True
            ids.append(k)
    m = Matching(graph, ids)
    return OracleResult(m.weight, m, "greedy")


def hungarian_mwpm(graph: WeightedGraph) -> OracleResult:
    """Exact maximum weight perfect matching via cubic_hungarian.

    Adding k*N + 1 to every weight (k = side size) makes any larger matching
    outweigh any smaller one, so the maximum weight matching of the shifted
    graph is perfect whenever a perfect matching exists.

    Raises:
        UnequalSides, NoPerfectMatching, NotBipartite.
    """
    (left, right) = _sides(graph)
    if len(left) != len(right):
        raise UnequalSides(f"{len(left)} left vs {len(right)} right vertices")
    k = len(left)
    shift = k * max(graph.N, 1) + 1
    shifted = WeightedGraph(graph.n, [(u, v, w + shift)
                                      for (u, v, w) in graph.edges],
                            graph.side)
    res = cubic_hungarian(shifted)
    m = Matching(graph, res.matching.edge_ids)
    if m.size != k:
        raise NoPerfectMatching("graph has no perfect matching")
    return OracleResult(m.weight, m, "cubic-hungarian")
