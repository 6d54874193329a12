"""
Exact maximum weight matching and maximum weight perfect matching on
bipartite graphs by scaling.

Duals are raw integers in units of delta_L (see ScaleParams), so every
delta_i is a power of two in raw units.  Left vertices have side 0.

Orientation convention for the directed windows: an unmatched edge points
from its left end to its right end, a matched edge from right to left.  A
directed path is then an alternating path.  The window G[a, b] holds the
unmatched edges with y(e) = w_i(e) and the matched edges with
w_i(e) + a delta_i <= y(e) <= w_i(e) + b delta_i.

MWM runs three phases:

    Phase I     scale 0; Hungarian-style search on G[1, 1] until left free
                vertices reach zero dual.
    Phase II    scales 1 .. L; drives the badness of M inside G[2, 3] to
                zero by alternating augmentation with chain or antichain
                dual adjustments.
    Phase III   scale L; removes the remaining non-tight matched edges.

MWPM starts from an arbitrary perfect matching instead and keeps M perfect.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .checks import ExactSnapshot, check_exact_duals, check_perfect_duals
from .errors import (CyclicInput, InvariantViolation, NoPerfectMatching,
                     NotBipartite, UnequalSides)
from .graph import Matching, ScaleParams, WeightedGraph, make_scale_params


Trace = Callable[[str, int, int, int], None]

INF = float("inf")


@dataclass
class ExactStats:
    phase1_iterations: int = 0
    # Phase II dual adjustment rounds, one entry per scale 1 .. L
    phase2_rounds: list[int] = field(default_factory=list)
    phase3_rounds: int = 0
    phase3_augmentations: int = 0
    cycles: int = 0
    paths: int = 0
    chain_steps: int = 0
    antichain_steps: int = 0
    checks_run: int = 0
    # (scale, w(M), delta_i) at every scale boundary
    scale_ends: list[tuple[int, int, Fraction]] = field(default_factory=list)


@dataclass
class ExactResult:
    matching: Matching
    params: ScaleParams
    stats: ExactStats
    mode: str


@dataclass
class Chain:
    """Alternating path of edge ids starting and ending with bad edges."""
    path: list[int]
    bad: list[int]


@dataclass
class Antichain:
    bad: list[int]


def ceil_sqrt_ratio(b: int, c: int) -> int:
    """Smallest integer t with t >= sqrt(b / c)."""
    t = math.isqrt(b // c) if c else 0
    while t * t * c < b:
        t += 1
    while t > 0 and (t - 1) * (t - 1) * c >= b:
        t -= 1
    return t


def dial_shortest_paths(
        n: int,
        source: int,
        adj: Sequence[Sequence[tuple[int, int, int]]],
        limit: Optional[int] = None
        ) -> tuple[list[float], list[int], list[int]]:
    """Single-source shortest paths with small integer lengths.

    adj[z] lists (neighbor, length, edge id) with nonnegative integer
    lengths.  The queue is an array of buckets indexed by distance; with a
    limit, distances beyond it are reported as unreachable.

    Returns (dist, predecessor vertex, predecessor edge).
    """
    dist: list[float] = [INF] * n
    pred = [-1] * n
    pred_edge = [-1] * n
    dist[source] = 0
    buckets: list[list[int]] = [[source]]
    d = 0
    pending = 1
    while pending:
        if d >= len(buckets):
            break
        bucket = buckets[d]
        while bucket:
            z = bucket.pop()
            pending -= 1
            if dist[z] != d:
                continue
            for (x, length, k) in adj[z]:
                nd = d + length
                if limit is not None and nd > limit:
                    continue
                if nd < dist[x]:
                    dist[x] = nd
                    pred[x] = z
                    pred_edge[x] = k
                    while len(buckets) <= nd:
                        buckets.append([])
                    buckets[nd].append(x)
                    pending += 1
        d += 1
    return dist, pred, pred_edge


class ExactSolver:
    """One run of the exact bipartite scaling algorithm."""

    def __init__(
            self,
            graph: WeightedGraph,
            mode: str = "mwm",
            check: bool = False,
            callback: Optional[Trace] = None
            ) -> None:
        if mode not in ("mwm", "mwpm"):
            raise ValueError(f"unknown mode {mode!r}")
        if graph.side is None:
            raise NotBipartite("exact solver needs a bipartite graph")
        self.graph = graph
        self.mode = mode
        self.perfect = mode == "mwpm"
        self.check = check
        self.callback = callback
        self.stats = ExactStats()
        n = graph.n
        self.n = n
        self.side = list(graph.side)
        self.half_n = max(graph.n_left, graph.n_right, 1)
        if self.perfect and graph.n_left != graph.n_right:
            raise UnequalSides(f"{graph.n_left} left vs {graph.n_right} "
                               f"right vertices")
        pmode = "exact-mwpm" if self.perfect else "exact-mwm"
        self.params = make_scale_params(max(graph.N, 1), None, pmode,
                                        self.half_n)
        p = self.params
        self.wf = p.weight_factor
        self.left_end: list[int] = []
        self.right_end: list[int] = []
        for (u, v, _w) in graph.edges:
            if self.side[u] == 0:
                self.left_end.append(u)
                self.right_end.append(v)
            else:
                self.left_end.append(v)
                self.right_end.append(u)
        self.wraw = [w * self.wf for (_u, _v, w) in graph.edges]
        self.adj = graph.adjacency
        self.mate = [-1] * n
        self.y = [0] * n
        self.scale = 0
        self.delta = p.raw_delta(0)
        self.wi = list(self.wraw)
        self.stage = "phase1"

    # ------------------------------------------------------------ basics

    def _set_scale(self, i: int) -> None:
        self.scale = i
        self.delta = self.params.raw_delta(i)
        d = self.delta
        self.wi = [w - w % d for w in self.wraw]

    def slack(self, k: int) -> int:
        return self.y[self.left_end[k]] + self.y[self.right_end[k]] - self.wi[k]

    def is_matched(self, k: int) -> bool:
        return self.mate[self.left_end[k]] == k

    def weight(self) -> int:
        return sum(self.graph.edges[k][2] for k in self._matched_edges())

    def weight_i(self) -> int:
        return sum(self.wi[k] for k in self._matched_edges())

    def _matched_edges(self) -> list[int]:
        return [self.mate[x] for x in range(self.n)
                if self.side[x] == 0 and self.mate[x] != -1]

    def matching(self) -> Matching:
        return Matching(self.graph, self._matched_edges())

    def _flip(self, ks: Sequence[int]) -> None:
        """Augment along an alternating path or cycle given by edge ids."""
        gone = [k for k in ks if self.is_matched(k)]
        new = [k for k in ks if not self.is_matched(k)]
        for k in gone:
            self.mate[self.left_end[k]] = -1
            self.mate[self.right_end[k]] = -1
        for k in new:
            self.mate[self.left_end[k]] = k
            self.mate[self.right_end[k]] = k

    def snapshot(self, stage: Optional[str] = None) -> ExactSnapshot:
        return ExactSnapshot(self.graph, self.params, self.scale,
                             list(self.y), list(self.mate),
                             stage or self.stage)

    def _verify(self, where: str, stage: Optional[str] = None) -> None:
        if not self.check:
            return
        self.stats.checks_run += 1
        snap = self.snapshot(stage)
        if self.perfect:
            problems = check_perfect_duals(snap)
        else:
            problems = check_exact_duals(snap)
        if problems:
            raise InvariantViolation(f"scale {self.scale} {where}", problems)

    def _trace(self, event: str, badness: int) -> None:
        if self.callback is not None:
            self.callback(event, self.scale, badness, self.weight())

    # ----------------------------------------------------------- windows

    def window(self, a: int, b: int) -> list[list[tuple[int, int]]]:
        """Out-adjacency (head, edge id) of the directed window G[a, b]."""
        out: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        d = self.delta
        lo = a * d
        hi = b * d
        for k in range(len(self.wraw)):
            l = self.left_end[k]
            r = self.right_end[k]
            s = self.y[l] + self.y[r] - self.wi[k]
            if self.mate[l] == k:
                if lo <= s <= hi:
                    out[r].append((l, k))
            elif s == 0:
                out[l].append((r, k))
        return out

    @staticmethod
    def transpose(out: list[list[tuple[int, int]]]) -> list[list[tuple[int, int]]]:
        inn: list[list[tuple[int, int]]] = [[] for _ in out]
        for (x, lst) in enumerate(out):
            for (z, k) in lst:
                inn[z].append((x, k))
        return inn

    @staticmethod
    def _reach(sources: Sequence[int], out) -> list[bool]:
        seen = [False] * len(out)
        queue = deque()
        for s in sources:
            if not seen[s]:
                seen[s] = True
                queue.append(s)
        while queue:
            x = queue.popleft()
            for (z, _k) in out[x]:
                if not seen[z]:
                    seen[z] = True
                    queue.append(z)
        return seen

    def even_odd(self, sources: Sequence[int], out, inn=None
                 ) -> tuple[list[bool], list[bool]]:
        """V_even and V_odd of a vertex set: vertices reached from it by
        alternating paths of even / odd length starting with an unmatched
        edge.  Left sources walk the window forwards, right sources walk it
        backwards."""
        left = [x for x in sources if self.side[x] == 0]
        right = [x for x in sources if self.side[x] == 1]
        even = [False] * self.n
        odd = [False] * self.n
        if left:
            seen = self._reach(left, out)
            for x in range(self.n):
                if seen[x]:
                    if self.side[x] == 0:
                        even[x] = True
                    else:
                        odd[x] = True
        if right:
            if inn is None:
                inn = self.transpose(out)
            seen = self._reach(right, inn)
            for x in range(self.n):
                if seen[x]:
                    if self.side[x] == 1:
                        even[x] = True
                    else:
                        odd[x] = True
        return even, odd

    def _adjust(self, even: list[bool], odd: list[bool], step: int) -> None:
        for x in range(self.n):
            if even[x]:
                self.y[x] -= step
            elif odd[x]:
                self.y[x] += step

    def topological_order(self, out) -> list[int]:
        """Kahn order of a directed window.  Raises CyclicInput."""
        indeg = [0] * self.n
        for lst in out:
            for (z, _k) in lst:
                indeg[z] += 1
        order = [x for x in range(self.n) if indeg[x] == 0]
        pos = 0
        while pos < len(order):
            x = order[pos]
            pos += 1
            for (z, _k) in out[x]:
                indeg[z] -= 1
                if indeg[z] == 0:
                    order.append(z)
        if len(order) != self.n:
            raise CyclicInput("directed window contains a cycle")
        return order

    # -------------------------------------------------------- path finding

    def free_augmenting_paths(self, out) -> list[list[int]]:
        """Maximal set of vertex-disjoint augmenting paths from left free
        vertices to right free vertices (DFS with permanent marks)."""
        visited = [False] * self.n
        paths = []
        for s in range(self.n):
            if self.side[s] != 0 or self.mate[s] != -1 or visited[s]:
                continue
            visited[s] = True
            stack = [s]
            estack: list[int] = []
            ptr = {s: 0}
            while stack:
                x = stack[-1]
                if self.side[x] == 1 and self.mate[x] == -1:
                    paths.append(list(estack))
                    break
                lst = out[x]
                j = ptr.get(x, 0)
                while j < len(lst) and visited[lst[j][0]]:
                    j += 1
                if j == len(lst):
                    stack.pop()
                    if estack:
                        estack.pop()
                    continue
                ptr[x] = j + 1
                (z, k) = lst[j]
                visited[z] = True
                stack.append(z)
                estack.append(k)
        return paths

    def cycle_search(self, out) -> list[list[int]]:
        """Maximal set of vertex-disjoint directed cycles of a window."""
        marked = [False] * self.n
        pos = [-1] * self.n
        ptr = [0] * self.n
        cycles = []
        for u0 in range(self.n):
            if marked[u0]:
                continue
            stack = [u0]
            estack = [-1]
            pos[u0] = 0
            while stack:
                u = stack[-1]
                lst = out[u]
                j = ptr[u]
                while j < len(lst) and marked[lst[j][0]]:
                    j += 1
                ptr[u] = j
                if j == len(lst):
                    marked[u] = True
                    pos[u] = -1
                    stack.pop()
                    estack.pop()
                    continue
                (v, k) = lst[j]
                if pos[v] != -1:
                    start = pos[v]
                    cycles.append(estack[start + 1:] + [k])
                    for x in stack[start:]:
                        marked[x] = True
                        pos[x] = -1
                    del stack[start:]
                    del estack[start:]
                else:
                    pos[v] = len(stack)
                    stack.append(v)
                    estack.append(k)
        return cycles

    def _start_end_sets(self) -> tuple[list[bool], list[bool]]:
        start = [False] * self.n
        end = [False] * self.n
        for x in range(self.n):
            if self.y[x] != 0:
                continue
            free = self.mate[x] == -1
            if (self.side[x] == 0) == free:
                start[x] = True         # left free or right matched
            else:
                end[x] = True           # right free or left matched
        return start, end

    def path_search(self, out) -> list[list[int]]:
        """Maximal set of maximal augmenting paths between zero-dual ends.

        Raises:
            CyclicInput: the window is not acyclic.
        """
        order = self.topological_order(out)
        (start, end) = self._start_end_sets()
        marked = [False] * self.n
        ptr = [0] * self.n
        paths = []
        for u0 in order:
            if not start[u0] or marked[u0]:
                continue
            stack = [u0]
            estack: list[int] = []
            while stack:
                u = stack[-1]
                lst = out[u]
                j = ptr[u]
                while j < len(lst) and marked[lst[j][0]]:
                    j += 1
                ptr[u] = j
                if j == len(lst):
                    if end[u]:
                        paths.append(list(estack))
                        for x in stack:
                            marked[x] = True
                        stack = []
                    else:
                        marked[u] = True
                        stack.pop()
                        if estack:
                            estack.pop()
                    continue
                (v, k) = lst[j]
                stack.append(v)
                estack.append(k)
        return paths

    def _has_start_end_path(self, out) -> bool:
        (start, end) = self._start_end_sets()
        seen = self._reach([x for x in range(self.n) if start[x]], out)
        return any(seen[x] and end[x] for x in range(self.n))

    # ------------------------------------------------ chains / antichains

    def badness(self, lo: int) -> dict[int, int]:
        """f(e) for matched edges with y(e) - w_i(e) >= lo * delta."""
        d = self.delta
        f = {}
        for k in self._matched_edges():
            s = self.slack(k)
            if s >= lo * d:
                f[k] = (s - (lo - 1) * d) // d
        return f

    def find_chain_or_antichain(self, out, bad: dict[int, int], t_ceil: int,
                                comp: Optional[list[int]] = None,
                                inner=None) -> Chain | Antichain:
        """Longest-badness path from the sources of an acyclic window, or
        failing that a large set of bad edges at one common distance.

        With comp given, the window is first contracted along those
        components (strongly connected parts of the tight window "inner").
        """
        n = self.n
        if comp is None:
            comp = list(range(n))
        nc = max(comp) + 1 if comp else 0
        cedges: list[list[tuple[int, int, int, int]]] = [[] for _ in range(nc)]
        indeg = [0] * nc
        for x in range(n):
            for (z, k) in out[x]:
                (cx, cz) = (comp[x], comp[z])
                if cx == cz:
                    continue
                cedges[cx].append((cz, k, x, z))
                indeg[cz] += 1
        order = [c for c in range(nc) if indeg[c] == 0]
        pos = 0
        while pos < len(order):
            c = order[pos]
            pos += 1
            for (cz, _k, _x, _z) in cedges[c]:
                indeg[cz] -= 1
                if indeg[cz] == 0:
                    order.append(cz)
        if len(order) != nc:
            raise CyclicInput("contracted window contains a cycle")
        dist = [0] * nc
        back: list[Optional[tuple[int, int, int, int]]] = [None] * nc
        for c in order:
            for (cz, k, x, z) in cedges[c]:
                nd = dist[c] - bad.get(k, 0)
                if nd < dist[cz]:
                    dist[cz] = nd
                    back[cz] = (c, k, x, z)
        best = min(range(nc), key=lambda c: (dist[c], c)) if nc else -1
        if nc and dist[best] <= -t_ceil:
            hops = []
            c = best
            while back[c] is not None:
                (pc, k, x, z) = back[c]
                hops.append((k, x, z))
                c = pc
            hops.reverse()
            idx = [j for (j, (k, _x, _z)) in enumerate(hops) if k in bad]
            hops = hops[idx[0]:idx[-1] + 1]
            path: list[int] = []
            for (j, (k, x, z)) in enumerate(hops):
                if j:
                    prev_head = hops[j - 1][2]
                    if prev_head != x:
                        path.extend(self._inner_path(prev_head, x, comp, inner))
                path.append(k)
            chain_bad = [k for k in path if k in bad]
            return Chain(path, chain_bad)
        buckets: dict[int, list[int]] = {}
        for k in sorted(bad):
            dv = dist[comp[self.left_end[k]]]
            buckets.setdefault(dv, []).append(k)
        key = max(buckets, key=lambda dv: (len(buckets[dv]), dv))
        return Antichain(buckets[key])

    def _inner_path(self, src: int, dst: int, comp: list[int], inner) -> list[int]:
        """Edge ids of a directed path src -> dst inside one component."""
        c = comp[src]
        prev = {src: (-1, -1)}
        queue = deque([src])
        while queue:
            x = queue.popleft()
            if x == dst:
                break
            for (z, k) in inner[x]:
                if comp[z] == c and z not in prev:
                    prev[z] = (x, k)
                    queue.append(z)
        if dst not in prev:
            raise InvariantViolation("chain expansion",
                                     [f"no path {src} -> {dst} in component"])
        out = []
        x = dst
        while x != src:
            (px, k) = prev[x]
            out.append(k)
            x = px
        out.reverse()
        return out

    def antichain_adjust(self, bad_set: list[int], out) -> int:
        """Dual adjustment from the adjustable endpoints of an antichain.
        Returns |X|."""
        inn = self.transpose(out)
        if self.perfect:
            adjustable = [True] * self.n
        else:
            tilde = []
            for x in range(self.n):
                k = self.mate[x]
                if k == -1:
                    tilde.append(x)
                else:
                    other = self.left_end[k] + self.right_end[k] - x
                    if self.y[other] == 0:
                        tilde.append(x)
            (_even, odd) = self.even_odd(tilde, out, inn)
            # a vertex lies in its own even set, so it needs y > 0 itself
            adjustable = [not odd[x] and self.y[x] > 0 for x in range(self.n)]
        xl = [self.left_end[k] for k in bad_set if adjustable[self.left_end[k]]]
        xr = [self.right_end[k] for k in bad_set if adjustable[self.right_end[k]]]
        chosen = xr if len(xr) >= len(xl) else xl
        (even, odd) = self.even_odd(chosen, out, inn)
        self._adjust(even, odd, self.delta)
        self.stats.antichain_steps += 1
        return len(chosen)

    # ------------------------------------------------------------ search

    def search(self, x: int, forced: Optional[int] = None,
               limit: Optional[int] = None) -> tuple[list[int], set[int], int]:
        """Hungarian search from the free vertex x.

        Lengths are y(e) - w_i(e) (in units of delta) on unmatched edges,
        walked from x's side, and zero on matched edges.  The search stops
        at the cheapest of: a free vertex across, or a vertex on x's side
        whose dual can be brought down to zero.  With "forced" the target
        is fixed instead.  Duals are updated, the path is returned but not
        applied.

        Returns (path edge ids, path vertices, Delta in units of delta).
        """
        d = self.delta
        sx = self.side[x]
        adj: list[list[tuple[int, int, int]]] = [[] for _ in range(self.n)]
        for z in range(self.n):
            if self.side[z] == sx:
                for k in self.adj[z]:
                    if self.mate[z] == k:
                        continue
                    o = self.left_end[k] + self.right_end[k] - z
                    adj[z].append((o, self.slack(k) // d, k))
            else:
                k = self.mate[z]
                if k != -1:
                    o = self.left_end[k] + self.right_end[k] - z
                    adj[z].append((o, 0, k))
        (dist, pred, pred_edge) = dial_shortest_paths(self.n, x, adj, limit)
        if forced is not None:
            target = forced
            if dist[target] == INF:
                raise InvariantViolation(
                    f"scale {self.scale} search",
                    [f"vertex {forced} unreachable from {x}"])
            big = int(dist[target])
        else:
            best = INF
            target = -1
            for z in range(self.n):
                if dist[z] == INF:
                    continue
                if self.side[z] == sx:
                    h = dist[z] + self.y[z] // d
                elif self.mate[z] == -1:
                    h = dist[z]
                else:
                    continue
                if h < best:
                    best = h
                    target = z
            if target == -1:
                raise InvariantViolation(
                    f"scale {self.scale} search",
                    [f"no augmenting path from {x} within the search limit"])
            big = int(best)
        for z in range(self.n):
            if dist[z] < big:
                step = (big - int(dist[z])) * d
                if self.side[z] == sx:
                    self.y[z] -= step
                else:
                    self.y[z] += step
        path = []
        verts = {target}
        z = target
        while z != x:
            path.append(pred_edge[z])
            z = pred[z]
            verts.add(z)
        path.reverse()
        return path, verts, big

    def chain_adjust(self, chain: Chain) -> None:
        path = chain.path
        u = self.right_end[path[0]]
        v = self.left_end[path[-1]]
        before = self.weight_i()
        self._flip(path)
        if self.perfect:
            # reversing P gives a u-v path of length at most 3n granules
            (pu, _vu, du) = self.search(u, forced=v, limit=3 * self.half_n)
            self._flip(pu)
            total = du
        else:
            limit = 3 * self.half_n
            (pu, vu, du) = self.search(u, limit=limit)
            (pv, vv, dv) = self.search(v, limit=limit)
            if vu & vv:
                q = self._window_path(v, u)
                self._flip(q)
            else:
                self._flip(pu)
                self._flip(pv)
            total = du + dv
        self.stats.chain_steps += 1
        if self.check:
            problems = []
            if self.weight_i() < before:
                problems.append(f"chain step lowered w_i(M) from {before} "
                                f"to {self.weight_i()}")
            if not self.perfect and total > 3 * self.half_n:
                problems.append(f"chain searches adjusted {total} granules "
                                f"> 3n = {3 * self.half_n}")
            if problems:
                raise InvariantViolation(f"scale {self.scale} chain step",
                                         problems)

    def _window_path(self, src: int, dst: int) -> list[int]:
        out = self.window(0, 3)
        prev = {src: (-1, -1)}
        queue = deque([src])
        while queue:
            x = queue.popleft()
            if x == dst:
                break
            for (z, k) in out[x]:
                if z not in prev:
                    prev[z] = (x, k)
                    queue.append(z)
        if dst not in prev:
            raise InvariantViolation(f"scale {self.scale} chain step",
                                     [f"no alternating path {src} -> {dst}"])
        path = []
        x = dst
        while x != src:
            (px, k) = prev[x]
            path.append(k)
            x = px
        path.reverse()
        return path

    # ------------------------------------------------------------ phases

    def phase1(self) -> None:
        """Scale 0 for MWM: augment and adjust on G[1, 1] until the left
        free vertices reach zero."""
        p = self.params
        self._set_scale(0)
        self.stage = "phase1"
        top = p.raw(p.delta_0 * math.floor(Fraction(p.N) / p.delta_0))
        for x in range(self.n):
            self.y[x] = top if self.side[x] == 0 else 0
        self._verify("phase 1 start")
        while True:
            out = self.window(1, 1)
            for path in self.free_augmenting_paths(out):
                self._flip(path)
            self._verify("phase 1 augmentation")
            out = self.window(1, 1)
            free_left = [x for x in range(self.n)
                         if self.side[x] == 0 and self.mate[x] == -1]
            (even, odd) = self.even_odd(free_left, out)
            if self.check and any(odd[x] and self.mate[x] == -1
                                  for x in range(self.n)):
                raise InvariantViolation("phase 1",
                                         ["augmenting path left after augmentation"])
            self._adjust(even, odd, self.delta)
            self.stats.phase1_iterations += 1
            self._verify("phase 1 dual adjustment")
            self._trace("phase1", 0)
            free_left = [x for x in range(self.n)
                         if self.side[x] == 0 and self.mate[x] == -1]
            if not free_left or self.y[free_left[0]] == 0:
                break

    def phase1_perfect(self) -> None:
        """Scale 0 for MWPM: any perfect matching, then y = delta_0 on the
        left and 0 on the right."""
        self._set_scale(0)
        self.stage = "end"
        mate = hopcroft_karp(self.graph, self.left_end, self.right_end)
        if any(k == -1 for k in mate):
            raise NoPerfectMatching("graph has no perfect matching")
        self.mate = mate
        for x in range(self.n):
            self.y[x] = self.delta if self.side[x] == 0 else 0
        self.stats.phase1_iterations = 1
        self._verify("phase 1")

    def _augment_phase2(self) -> None:
        out = self.window(1, 3)
        cycles = self.cycle_search(out)
        for c in cycles:
            self._flip(c)
        self.stats.cycles += len(cycles)
        if self.perfect:
            if self.check:
                self.topological_order(self.window(1, 3))
            return
        out = self.window(1, 3)
        paths = self.path_search(out)
        for path in paths:
            self._flip(path)
        self.stats.paths += len(paths)
        if self.check:
            out = self.window(1, 3)
            self.topological_order(out)
            if self._has_start_end_path(out):
                raise InvariantViolation(f"scale {self.scale} augmentation",
                                         ["augmenting path left in G[1,3]"])

    def phase2_scale(self, i: int) -> None:
        self._set_scale(i)
        self.stage = "scale"
        for x in range(self.n):
            if self.side[x] == 0:
                self.y[x] += self.delta
        if not self.perfect:
            # one Phase I step on G[1, 3] brings left free duals to zero
            out = self.window(1, 3)
            for path in self.free_augmenting_paths(out):
                self._flip(path)
            out = self.window(1, 3)
            free_left = [x for x in range(self.n)
                         if self.side[x] == 0 and self.mate[x] == -1]
            (even, odd) = self.even_odd(free_left, out)
            self._adjust(even, odd, self.delta)
        self._verify("scale start")
        rounds = self.phase2_rounds()
        self.stats.phase2_rounds.append(rounds)
        self._verify("scale end", "end")
        self.stats.scale_ends.append((i, self.weight(), self.params.delta(i)))
        self._trace("phase2-end", 0)

    def phase2_rounds(self) -> int:
        """Augment, then chain or antichain adjust, until no matched edge
        of the current scale is bad.  Returns the number of rounds."""
        rounds = 0
        while True:
            self._augment_phase2()
            self._verify("augmentation")
            bad = self.badness(2)
            b = sum(bad.values())
            if b == 0:
                return rounds
            if self.perfect:
                t_ceil = ceil_sqrt_ratio(b, 2)
            else:
                t_ceil = ceil_sqrt_ratio(b, 4)
            found = self.find_chain_or_antichain(self.window(1, 3), bad, t_ceil)
            if isinstance(found, Chain):
                self.chain_adjust(found)
            else:
                self.antichain_adjust(found.bad, self.window(1, 3))
            rounds += 1
            self._verify("dual adjustment")
            self._trace("phase2", b)

    def _sccs(self, out) -> list[int]:
        """Strongly connected components (iterative Tarjan)."""
        n = self.n
        index = [-1] * n
        low = [0] * n
        on = [False] * n
        comp = [-1] * n
        stack: list[int] = []
        counter = 0
        nc = 0
        for s in range(n):
            if index[s] != -1:
                continue
            work = [(s, 0)]
            index[s] = low[s] = counter
            counter += 1
            stack.append(s)
            on[s] = True
            while work:
                (x, j) = work[-1]
                if j < len(out[x]):
                    work[-1] = (x, j + 1)
                    z = out[x][j][0]
                    if index[z] == -1:
                        index[z] = low[z] = counter
                        counter += 1
                        stack.append(z)
                        on[z] = True
                        work.append((z, 0))
                    elif on[z]:
                        low[x] = min(low[x], index[z])
                    continue
                work.pop()
                if work:
                    px = work[-1][0]
                    low[px] = min(low[px], low[x])
                if low[x] == index[x]:
                    while True:
                        z = stack.pop()
                        on[z] = False
                        comp[z] = nc
                        if z == x:
                            break
                    nc += 1
        return comp

    def _phase3_augmentation(self) -> Optional[list[int]]:
        """An alternating cycle, or a path between zero-dual ends, inside
        G[0, 1] that uses a non-tight matched edge."""
        out = self.window(0, 1)
        comp = self._sccs(out)
        bad = [k for k in self._matched_edges() if self.slack(k) > 0]
        for k in bad:
            (l, r) = (self.left_end[k], self.right_end[k])
            if comp[l] == comp[r]:
                return self._inner_path(l, r, comp, out) + [k]
        if self.perfect:
            return None
        (start, end) = self._start_end_sets()
        fwd_prev: dict[int, tuple[int, int]] = {}
        queue = deque()
        for x in range(self.n):
            if start[x]:
                fwd_prev[x] = (-1, -1)
                queue.append(x)
        while queue:
            x = queue.popleft()
            for (z, k) in out[x]:
                if z not in fwd_prev:
                    fwd_prev[z] = (x, k)
                    queue.append(z)
        inn = self.transpose(out)
        bwd_next: dict[int, tuple[int, int]] = {}
        for x in range(self.n):
            if end[x]:
                bwd_next[x] = (-1, -1)
                queue.append(x)
        while queue:
            x = queue.popleft()
            for (z, k) in inn[x]:
                if z not in bwd_next:
                    bwd_next[z] = (x, k)
                    queue.append(z)
        for k in bad:
            (l, r) = (self.left_end[k], self.right_end[k])
            if r in fwd_prev and l in bwd_next:
                verts = [r]
                edges: list[int] = []
                x = r
                while fwd_prev[x][0] != -1:
                    (px, pk) = fwd_prev[x]
                    verts.append(px)
                    edges.append(pk)
                    x = px
                verts.reverse()
                edges.reverse()
                verts.append(l)
                edges.append(k)
                x = l
                while bwd_next[x][0] != -1:
                    (nx, nk) = bwd_next[x]
                    verts.append(nx)
                    edges.append(nk)
                    x = nx
                (verts, edges) = _remove_loops(verts, edges)
                if k not in edges:
                    raise InvariantViolation(
                        "phase 3 augmentation",
                        [f"bad edge {k} lies on an alternating cycle"])
                return edges
        return None

    def phase3(self) -> None:
        L = self.params.L
        self._set_scale(L)
        self.stage = "scale"
        rounds = 0
        while True:
            while True:
                aug = self._phase3_augmentation()
                if aug is None:
                    break
                before = self.weight()
                self._flip(aug)
                self.stats.phase3_augmentations += 1
                if self.weight() <= before:
                    raise InvariantViolation(
                        "phase 3 augmentation",
                        [f"w(M) went from {before} to {self.weight()}"])
                self._verify("phase 3 augmentation")
            bad = self.badness(1)
            b = sum(bad.values())
            if b == 0:
                break
            t_ceil = ceil_sqrt_ratio(b, 2)
            out = self.window(0, 1)
            inner = self.window(0, 0)
            comp = self._sccs(inner)
            found = self.find_chain_or_antichain(out, bad, t_ceil, comp, inner)
            if isinstance(found, Chain):
                self.chain_adjust(found)
            else:
                self.antichain_adjust(found.bad, out)
            rounds += 1
            self._verify("phase 3 dual adjustment")
            self._trace("phase3", b)
        self.stats.phase3_rounds = rounds
        self._verify("phase 3 end", "end")
        self._trace("phase3-end", 0)

    def run(self) -> ExactResult:
        if self.perfect:
            self.phase1_perfect()
        else:
            self.phase1()
        self.stats.scale_ends.append((0, self.weight(), self.params.delta(0)))
        self._verify("scale end", "end")
        for i in range(1, self.params.L + 1):
            self.phase2_scale(i)
        self.phase3()
        return ExactResult(self.matching(), self.params, self.stats, self.mode)


def _remove_loops(verts: list[int], edges: list[int]) -> tuple[list[int], list[int]]:
    """Shortcut a directed walk (vertices v0..vk, edges e1..ek) to a path."""
    out_v: list[int] = []
    out_e: list[int] = []
    where: dict[int, int] = {}
    for (j, x) in enumerate(verts):
        if x in where:
            cut = where[x]
            for dropped in out_v[cut + 1:]:
                del where[dropped]
            del out_v[cut + 1:]
            del out_e[cut:]
        else:
            if j:
                out_e.append(edges[j - 1])
            where[x] = len(out_v)
            out_v.append(x)
    return out_v, out_e


def hopcroft_karp(graph: WeightedGraph, left_end: Sequence[int],
                  right_end: Sequence[int]) -> list[int]:
    """Maximum cardinality matching by shortest augmenting path phases.

    Returns the matched edge id per vertex (-1 if free).
    """
    n = graph.n
    side = graph.side
    assert side is not None
    mate = [-1] * n
    left = [x for x in range(n) if side[x] == 0]

    def other(k: int, x: int) -> int:
        return left_end[k] + right_end[k] - x

    while True:
        # BFS layers from free left vertices
        dist = {}
        queue = deque()
        for x in left:
            if mate[x] == -1:
                dist[x] = 0
                queue.append(x)
        found = False
        while queue:
            x = queue.popleft()
            for k in graph.adjacency[x]:
                r = other(k, x)
                mk = mate[r]
                if mk == -1:
                    found = True
                else:
                    l2 = other(mk, r)
                    if l2 not in dist:
                        dist[l2] = dist[x] + 1
                        queue.append(l2)
        if not found:
            return mate
        # DFS along layers
        ptr = {x: 0 for x in left}
        progress = False
        for s in left:
            if mate[s] != -1:
                continue
            stack = [s]
            kstack: list[int] = []
            while stack:
                x = stack[-1]
                adj = graph.adjacency[x]
                advanced = False
                while ptr[x] < len(adj):
                    k = adj[ptr[x]]
                    ptr[x] += 1
                    r = other(k, x)
                    mk = mate[r]
                    if mk == -1:
                        kstack.append(k)
                        # augment along the layered path
                        for e in kstack:
                            mate[left_end[e]] = e
                            mate[right_end[e]] = e
                            dist[left_end[e]] = -1
                        stack = []
                        progress = True
                        advanced = True
                        break
                    l2 = other(mk, r)
                    if dist.get(l2) == dist[x] + 1:
                        kstack.append(k)
                        stack.append(l2)
                        advanced = True
                        break
                if not stack:
                    break
                if not advanced:
                    dist[x] = -1
                    stack.pop()
                    if kstack:
                        kstack.pop()
        if not progress:
            return mate


def run_exact(graph: WeightedGraph, mode: str = "mwm", check: bool = False,
              callback: Optional[Trace] = None) -> ExactResult:
    return ExactSolver(graph, mode, check, callback).run()


def run_exact_mwm(graph: WeightedGraph, check: bool = False,
                  callback: Optional[Trace] = None) -> Matching:
    """Exact maximum weight matching of a bipartite graph.

    Raises:
        NotBipartite: the graph carries no bipartition.
        InvariantViolation: check=True and an invariant failed.
    """
    return run_exact(graph, "mwm", check, callback).matching


def run_exact_mwpm(graph: WeightedGraph, check: bool = False,
                   callback: Optional[Trace] = None) -> Matching:
    """Exact maximum weight perfect matching of a bipartite graph.

    Raises:
        NotBipartite, UnequalSides, NoPerfectMatching.
    """
    return run_exact(graph, "mwpm", check, callback).matching
