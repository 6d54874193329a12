"""
Graph representation, input validation, weight normalization and the
fixed-point scale parameters shared by both solvers.

All dual arithmetic in the solvers is done on integers ("raw" values) that
stand for multiples of a power-of-two unit.  ScaleParams holds that unit and
the per-scale granularities, so every quantity can be converted exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import (
    EpsOutOfRange,
    GraphError,
    NonBipartiteEdge,
    NonIntegerWeight,
    NonPositiveWeight,
    Overflow,
    SelfLoop,
    VertexOutOfRange,
)


# Raw dual values must fit in a signed 64-bit integer (the approximate
# solver keeps them in numpy int64 arrays).
RAW_LIMIT = 1 << 62


class WeightedGraph:
    """Immutable undirected graph with positive integer edge weights.

    Edges are stored as (u, v, w) with u < v.  "adjacency[x]" lists the
    indices of edges incident to x.  A bipartite graph additionally carries
    "side", with side[x] == 0 for left vertices and 1 for right vertices.
    """

    __slots__ = ("n", "edges", "adjacency", "N", "side", "n_left", "n_right")

    def __init__(
            self,
            n: int,
            edges: Sequence[tuple[int, int, int]],
            side: Optional[Sequence[int]] = None
            ) -> None:
        self.n = n
        self.edges: tuple[tuple[int, int, int], ...] = tuple(edges)
        adj: list[list[int]] = [[] for _ in range(n)]
        for k, (u, v, _w) in enumerate(self.edges):
            adj[u].append(k)
            adj[v].append(k)
        self.adjacency: tuple[tuple[int, ...], ...] = tuple(
            tuple(a) for a in adj)
        self.N = max((w for (_u, _v, w) in self.edges), default=0)
        if side is None:
            self.side: Optional[tuple[int, ...]] = None
            self.n_left = 0
            self.n_right = 0
        else:
            self.side = tuple(side)
            self.n_right = sum(self.side)
            self.n_left = n - self.n_right

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def is_bipartite(self) -> bool:
        return self.side is not None

    def other(self, k: int, x: int) -> int:
        (u, v, _w) = self.edges[k]
        return v if x == u else u

    def __repr__(self) -> str:
        kind = "bipartite" if self.side is not None else "general"
        return f"WeightedGraph({kind}, n={self.n}, m={self.m}, N={self.N})"


def validate_graph(
        raw_edges: Iterable[tuple[int, int, int]],
        n: int,
        bipartition: Optional[tuple[Iterable[int], Iterable[int]]] = None
        ) -> WeightedGraph:
    """Check raw edge data and build a WeightedGraph.

    Parallel edges are merged, keeping the heaviest copy (only that copy can
    appear in an optimal matching).  Edges keep the position of their first
    occurrence.

    Raises:
        SelfLoop, NonPositiveWeight, NonIntegerWeight, VertexOutOfRange,
        NonBipartiteEdge.
    """
    if n < 0:
        raise GraphError("vertex count must be non-negative")

    side: Optional[list[int]] = None
    if bipartition is not None:
        (left, right) = bipartition
        side = [-1] * n
        for (label, part) in ((0, left), (1, right)):
            for x in part:
                if not 0 <= x < n:
                    raise VertexOutOfRange(f"vertex {x} not in [0, {n})")
                if side[x] != -1:
                    raise GraphError(f"vertex {x} is on both sides")
                side[x] = label
        if -1 in side:
            raise GraphError("bipartition does not cover every vertex")

    slot: dict[tuple[int, int], int] = {}
    edges: list[tuple[int, int, int]] = []
    for (u, v, w) in raw_edges:
        if isinstance(w, bool) or not isinstance(w, int):
            if isinstance(w, float) and w.is_integer():
                w = int(w)
            else:
                raise NonIntegerWeight(f"edge ({u}, {v}) has weight {w!r}")
        if not (0 <= u < n and 0 <= v < n):
            raise VertexOutOfRange(f"edge ({u}, {v}) outside [0, {n})")
        if u == v:
            raise SelfLoop(f"self-loop at vertex {u}")
        if w <= 0:
            raise NonPositiveWeight(f"edge ({u}, {v}) has weight {w}")
        if side is not None and side[u] == side[v]:
            raise NonBipartiteEdge(f"edge ({u}, {v}) does not cross sides")
        key = (u, v) if u < v else (v, u)
        k = slot.get(key)
        if k is None:
            slot[key] = len(edges)
            edges.append((key[0], key[1], w))
        elif edges[k][2] < w:
            edges[k] = (key[0], key[1], w)

    return WeightedGraph(n, edges, side)


class Matching:
    """A set of vertex-disjoint edges of a graph.

    "mate[x]" is the vertex matched to x, or None.  Edges are referenced by
    their index in the graph edge list.
    """

    __slots__ = ("graph", "edge_ids", "mate", "weight")

    def __init__(self, graph: WeightedGraph, edge_ids: Iterable[int]) -> None:
        self.graph = graph
        self.edge_ids: tuple[int, ...] = tuple(sorted(set(edge_ids)))
        mate: list[Optional[int]] = [None] * graph.n
        weight = 0
        for k in self.edge_ids:
            (u, v, w) = graph.edges[k]
            if mate[u] is not None or mate[v] is not None:
                raise ValueError(f"edge {k} shares a vertex with another edge")
            mate[u] = v
            mate[v] = u
            weight += w
        self.mate = mate
        self.weight = weight

    @classmethod
    def from_mate_edges(cls, graph: WeightedGraph,
                        mate_edge: Iterable[int]) -> "Matching":
        """Build from a per-vertex array of matched edge indices (-1 = free)."""
        return cls(graph, (int(k) for k in mate_edge if k >= 0))

    @property
    def size(self) -> int:
        return len(self.edge_ids)

    def pairs(self) -> list[tuple[int, int]]:
        """Matched pairs (u, v) with u < v, sorted."""
        return sorted((self.graph.edges[k][0], self.graph.edges[k][1])
                      for k in self.edge_ids)

    def is_perfect(self) -> bool:
        return 2 * self.size == self.graph.n

    def recompute_weight(self) -> int:
        return sum(self.graph.edges[k][2] for k in self.edge_ids)

    def __repr__(self) -> str:
        return f"Matching(size={self.size}, weight={self.weight})"


@dataclass(frozen=True)
class FixedDual:
    """A dual value stored as an integer count of "unit"."""
    raw: int
    unit: Fraction

    @property
    def value(self) -> Fraction:
        return self.raw * self.unit

    def divisible_by(self, granularity: Fraction) -> bool:
        step = granularity / self.unit
        if step.denominator != 1:
            raise ValueError("granularity is not a multiple of the unit")
        return self.raw % step.numerator == 0

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class ScaleParams:
    """Scale schedule and fixed-point unit for one solver run.

    delta(i) is the granularity of scale i; every delta(i) and every integer
    weight is an exact multiple of "unit".
    """
    mode: str
    N: int
    N_pow2: int
    L: int
    delta_0: Fraction
    unit: Fraction
    eps_user: Optional[Fraction] = None
    eps_prime: Optional[Fraction] = None
    n: int = 0
    scale_of: dict = field(default_factory=dict, compare=False, repr=False)

    def delta(self, i: int) -> Fraction:
        return self.delta_0 / (1 << i)

    def raw(self, x: Fraction | int) -> int:
        """Convert an exact value to raw units.  Fails if not representable."""
        q = Fraction(x) / self.unit
        if q.denominator != 1:
            raise ValueError(f"{x} is not a multiple of the unit {self.unit}")
        return q.numerator

    def raw_delta(self, i: int) -> int:
        return self.raw(self.delta(i))

    @property
    def weight_factor(self) -> int:
        """Raw value of an integer weight of 1."""
        return self.raw(1)

    @property
    def gamma(self) -> int:
        """log2 of 1/eps_prime (approximate mode only)."""
        assert self.eps_prime is not None
        return self.eps_prime.denominator.bit_length() - 1


def truncated_weight(w: int | Fraction, delta: int | Fraction) -> int | Fraction:
    """Round w down to a multiple of delta."""
    return delta * math.floor(Fraction(w) / Fraction(delta))


def _next_pow2(x: int) -> int:
    return 1 if x <= 1 else 1 << (x - 1).bit_length()


def _floor_log2_ratio_sqrt(N: int, n: int) -> int:
    """Largest integer t with 2^t <= N / sqrt(n), computed exactly."""
    def fits(t: int) -> bool:
        # 2^t <= N/sqrt(n)  <=>  4^t * n <= N^2
        if t >= 0:
            return n << (2 * t) <= N * N
        return n <= (N * N) << (-2 * t)
    t = N.bit_length()
    while not fits(t):
        t -= 1
    while fits(t + 1):
        t += 1
    return t


def _ceil_log2(x: int) -> int:
    return 0 if x <= 1 else (x - 1).bit_length()


def _ceil_log2_sqrt_n_times(N: int, n: int) -> int:
    """Smallest integer L >= 0 with 2^L >= sqrt(n) * N."""
    L = 0
    while (1 << (2 * L)) < n * N * N:
        L += 1
    return L


def approx_eps_prime(eps: float | Fraction) -> Fraction:
    """Largest power of two not above min(1/4, eps/7)."""
    e = Fraction(eps)
    if not 0 < e < 1:
        raise EpsOutOfRange(f"eps must lie in (0, 1), got {eps}")
    k = 2
    while Fraction(1, 1 << k) > e / 7:
        k += 1
    return Fraction(1, 1 << k)


def make_scale_params(N: int, eps: Optional[float | Fraction] = None,
                      mode: str = "approx", n: int = 1) -> ScaleParams:
    """Build the scale schedule for a solver run.

    mode is "approx", "exact-mwm" or "exact-mwpm".  For the exact modes "n"
    is the number of vertices on one side of the bipartition.

    Raises:
        EpsOutOfRange: approx mode with eps outside (0, 1).
        Overflow: raw dual values would not fit in 64 bits.
    """
    if N < 1:
        N = 1
    n = max(n, 1)
    N_pow2 = _next_pow2(N)
    if mode == "approx":
        if eps is None:
            raise EpsOutOfRange("approx mode needs eps")
        eps_prime = approx_eps_prime(eps)
        L = N_pow2.bit_length() - 1
        delta_0 = eps_prime * N_pow2
        unit = eps_prime / 2
        params = ScaleParams(mode, N, N_pow2, L, delta_0, unit,
                             Fraction(eps), eps_prime, n)
        if 4 * N_pow2 / unit >= RAW_LIMIT:
            raise Overflow(f"N={N} with eps={eps} exceeds the 64-bit range")
        return params
    if mode == "exact-mwm":
        t = _floor_log2_ratio_sqrt(N, n)
        delta_0 = Fraction(2) ** t
        L = _ceil_log2(N)
    elif mode == "exact-mwpm":
        delta_0 = Fraction(1 << (N.bit_length() - 1))
        L = _ceil_log2_sqrt_n_times(N, n)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    unit = delta_0 / (1 << L)
    return ScaleParams(mode, N, N_pow2, L, delta_0, unit, None, None, n)


def normalize_real_weights(
        n: int,
        edges: Sequence[tuple[int, int, float]],
        eps: float
        ) -> tuple[WeightedGraph, Fraction]:
    """Reduce a real-weighted graph to integer weights.

    With gamma = (eps/2) * w_max / n, each weight becomes floor(w / gamma).
    A (1 - eps/2)-approximate matching of the integer graph is then a
    (1 - eps)-approximate matching of the original.  Edges that round to zero
    (and non-positive edges) are dropped.

    Returns:
        (integer graph, gamma)
    """
    if not 0 < eps < 1:
        raise EpsOutOfRange(f"eps must lie in (0, 1), got {eps}")
    if not edges:
        raise GraphError("normalization needs at least one edge")
    w_max = max(Fraction(w) for (_u, _v, w) in edges)
    if w_max <= 0:
        raise NonPositiveWeight("no positive edge weight")
    gamma = Fraction(eps) / 2 * w_max / max(n, 1)
    scaled = []
    for (u, v, w) in edges:
        fw = Fraction(w)
        if fw <= 0:
            continue
        iw = math.floor(fw / gamma)
        if iw >= 1:
            scaled.append((u, v, iw))
    return validate_graph(scaled, n), gamma
