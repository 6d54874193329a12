"""
Laminar blossom forest for general-graph matching.

Vertices are numbered 0 .. n-1 and are the trivial blossoms.  Nontrivial
blossoms get ids n, n+1, ...; ids of dissolved blossoms are recycled.

A nontrivial blossom b stores its ordered children A_0 .. A_l and the cycle
edges e_0 .. e_l as triples (p, q, k): edge k joins p in A_j to q in
A_{j+1 mod l+1}.  Edge e_j is matched iff j is odd, so A_0 holds the base.

The forest owns the matching (per-vertex matched edge index, -1 if free)
because augmenting through a blossom moves its base.
"""

from __future__ import annotations

import sys
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import EvenCycle, NonzeroZ, NotAlternating, NotRoot
from .graph import WeightedGraph


Step = tuple[int, int, int]


def reverse_steps(steps: Sequence[Step]) -> list[Step]:
    return [(q, p, k) for (p, q, k) in reversed(steps)]


class BlossomForest:
    """Nested blossoms plus the matching they are defined against."""

    def __init__(self, graph: WeightedGraph,
                 mate_edge: Optional[Sequence[int]] = None) -> None:
        n = graph.n
        self.graph = graph
        self.n = n
        if mate_edge is None:
            self.mate_edge = [-1] * n
        else:
            self.mate_edge = list(mate_edge)
        self.mate_np = np.array(self.mate_edge, dtype=np.int32)
        self.parent: list[int] = [-1] * n
        self.children: list[list[int]] = [[] for _ in range(n)]
        self.cycle: list[list[Step]] = [[] for _ in range(n)]
        self.base: list[int] = list(range(n))
        self.z: list[int] = [0] * n
        self.alive: list[bool] = [True] * n
        self.inblossom: list[int] = list(range(n))
        self.inb_np = np.arange(n, dtype=np.int32)
        self.eb_owner: list[int] = [-1] * graph.m
        self._unused: list[int] = []
        self.root_set: set[int] = set()
        need = 1000 + 4 * n
        if sys.getrecursionlimit() < need:
            sys.setrecursionlimit(need)

    # ------------------------------------------------------------ queries

    def is_trivial(self, b: int) -> bool:
        return b < self.n

    def is_root(self, b: int) -> bool:
        return self.alive[b] and self.parent[b] == -1

    def roots(self) -> list[int]:
        return [b for b in range(len(self.parent)) if self.is_root(b)]

    def nontrivial_roots(self) -> list[int]:
        return sorted(self.root_set)

    def blossoms(self) -> list[int]:
        """All live nontrivial blossoms."""
        return [b for b in range(self.n, len(self.parent)) if self.alive[b]]

    def leaves(self, b: int) -> list[int]:
        if b < self.n:
            return [b]
        out: list[int] = []
        stack = [b]
        while stack:
            t = stack.pop()
            if t < self.n:
                out.append(t)
            else:
                stack.extend(self.children[t])
        return out

    def depth(self, b: int) -> int:
        d = 0
        while self.parent[b] != -1:
            b = self.parent[b]
            d += 1
        return d

    def is_matched(self, k: int) -> bool:
        u = self.graph.edges[k][0]
        return self.mate_edge[u] == k

    def in_some_eb(self, k: int) -> bool:
        return self.eb_owner[k] != -1

    # ------------------------------------------------------- contraction

    def _new_id(self) -> int:
        if self._unused:
            return self._unused.pop()
        b = len(self.parent)
        self.parent.append(-1)
        self.children.append([])
        self.cycle.append([])
        self.base.append(-1)
        self.z.append(0)
        self.alive.append(False)
        return b

    def contract(self, children: Sequence[int],
                 edges: Sequence[Step]) -> int:
        """Form a new root blossom from an odd alternating cycle of roots.

        children[0] holds the new base; edges[j] = (p, q, k) joins
        children[j] to children[j+1 mod len].

        Raises:
            EvenCycle, NotAlternating, NotRoot.
        """
        ell = len(children)
        if ell % 2 == 0 or ell < 3:
            raise EvenCycle(f"blossom cycle has {ell} children")
        if len(edges) != ell:
            raise NotAlternating("need one cycle edge per child")
        for c in children:
            if not self.is_root(c):
                raise NotRoot(f"{c} is not a root blossom")
        for j in range(ell):
            (p, q, k) = edges[j]
            (eu, ev, _w) = self.graph.edges[k]
            if {p, q} != {eu, ev}:
                raise NotAlternating(f"edge {k} does not join {p} and {q}")
            if (self.inblossom[p] != children[j]
                    or self.inblossom[q] != children[(j + 1) % ell]):
                raise NotAlternating(f"edge {k} does not link children "
                                     f"{j} and {(j + 1) % ell}")
            if self.is_matched(k) != (j % 2 == 1):
                raise NotAlternating(f"cycle edge {j} has wrong parity")
        b = self._new_id()
        self.alive[b] = True
        self.parent[b] = -1
        self.children[b] = list(children)
        self.cycle[b] = list(edges)
        self.base[b] = self.base[children[0]]
        self.z[b] = 0
        for c in children:
            self.parent[c] = b
            self.root_set.discard(c)
        self.root_set.add(b)
        for (_p, _q, k) in edges:
            self.eb_owner[k] = b
        lv = self.leaves(b)
        for v in lv:
            self.inblossom[v] = b
        self.inb_np[lv] = b
        return b

    def dissolve(self, b: int) -> list[int]:
        """Remove a root blossom with z = 0; its children become roots.

        Returns the children.

        Raises:
            NonzeroZ, NotRoot.
        """
        if b < self.n or not self.is_root(b):
            raise NotRoot(f"{b} is not a nontrivial root blossom")
        if self.z[b] != 0:
            raise NonzeroZ(f"blossom {b} has z = {self.z[b]}")
        kids = self.children[b]
        for (_p, _q, k) in self.cycle[b]:
            self.eb_owner[k] = -1
        self.root_set.discard(b)
        for c in kids:
            self.parent[c] = -1
            if c >= self.n:
                self.root_set.add(c)
            lv = self.leaves(c)
            for v in lv:
                self.inblossom[v] = c
            self.inb_np[lv] = c
        self.children[b] = []
        self.cycle[b] = []
        self.alive[b] = False
        self.base[b] = -1
        self._unused.append(b)
        return list(kids)

    # ---------------------------------------------------- path expansion

    def path_to_base(self, b: int, x: int) -> list[Step]:
        """Even-length alternating path inside b from leaf x to base(b)."""
        out: list[Step] = []
        self._walk_to_base(b, x, out)
        return out

    def _walk_to_base(self, b: int, x: int, out: list[Step]) -> None:
        if b < self.n:
            return
        c = x
        while self.parent[c] != b:
            c = self.parent[c]
        self._walk_to_base(c, x, out)
        ch = self.children[b]
        cyc = self.cycle[b]
        ell = len(ch)
        j = ch.index(c)
        if j == 0:
            return
        if j % 2 == 1:
            # forward around the cycle: e_j (matched), e_{j+1}, ..., e_l
            while True:
                out.append(cyc[j])
                j += 1
                (p, q, k) = cyc[j]
                out.extend(reverse_steps(self.path_to_base(ch[j], p)))
                out.append((p, q, k))
                j = (j + 1) % ell
                self._walk_to_base(ch[j], q, out)
                if j == 0:
                    return
        else:
            # backward around the cycle: e_{j-1} (matched), ..., e_0
            while True:
                (p, q, k) = cyc[j - 1]
                out.append((q, p, k))
                j -= 1
                (p, q, k) = cyc[j - 1]
                out.extend(reverse_steps(self.path_to_base(ch[j], q)))
                out.append((q, p, k))
                j -= 1
                self._walk_to_base(ch[j], p, out)
                if j == 0:
                    return

    def expand_path(self, contracted: Sequence[Step]) -> list[Step]:
        """Expand an alternating path between root blossoms into G.

        "contracted" lists the G-edges (x, y, k) joining consecutive root
        blossoms.  Each blossom is crossed by the even-length route between
        its entry vertex and its base; the first and last blossoms are
        crossed from their base.  An empty input expands to an empty path.

        Raises:
            NotAlternating: consecutive edges do not share a root blossom or
            the result does not alternate.
        """
        if not contracted:
            return []
        full: list[Step] = []
        (x0, _y0, _k0) = contracted[0]
        full.extend(reverse_steps(
            self.path_to_base(self.inblossom[x0], x0)))
        for t in range(len(contracted)):
            (x, y, k) = contracted[t]
            full.append((x, y, k))
            b = self.inblossom[y]
            if t + 1 < len(contracted):
                nx = contracted[t + 1][0]
                if self.inblossom[nx] != b:
                    raise NotAlternating(f"edges {t} and {t + 1} do not "
                                         "meet in a common root blossom")
                if self.base[b] == nx:
                    full.extend(self.path_to_base(b, y))
                elif self.base[b] == y:
                    full.extend(reverse_steps(self.path_to_base(b, nx)))
                else:
                    raise NotAlternating(f"path crosses blossom {b} "
                                         "away from its base")
            else:
                full.extend(self.path_to_base(b, y))
        self._check_alternating(full)
        return full

    def _check_alternating(self, steps: Sequence[Step]) -> None:
        for t in range(1, len(steps)):
            if steps[t - 1][1] != steps[t][0]:
                raise NotAlternating(f"path breaks at step {t}")
            if self.is_matched(steps[t - 1][2]) == self.is_matched(steps[t][2]):
                raise NotAlternating(f"path does not alternate at step {t}")

    # -------------------------------------------------------- augmentation

    def augment(self, steps: Sequence[Step]) -> tuple[list[int], list[int]]:
        """Flip an augmenting path given as G-steps between two free vertices.

        Blossom bases along the path are recomputed afterwards.

        Returns:
            (edges that became matched, edges that became unmatched)

        Raises:
            NotAlternating.
        """
        if not steps:
            return [], []
        self._check_alternating(steps)
        if self.mate_edge[steps[0][0]] != -1 or self.mate_edge[steps[-1][1]] != -1:
            raise NotAlternating("augmenting path must join free vertices")
        if self.is_matched(steps[0][2]):
            raise NotAlternating("augmenting path must start unmatched")
        added = []
        removed = []
        touched = []
        for (t, (p, q, k)) in enumerate(steps):
            if t % 2 == 0:
                added.append(k)
                touched.append(p)
                touched.append(q)
            else:
                removed.append(k)
        for k in added:
            (u, v, _w) = self.graph.edges[k]
            self.mate_edge[u] = k
            self.mate_edge[v] = k
            self.mate_np[u] = k
            self.mate_np[v] = k
        self.recompute_bases(touched)
        return added, removed

    def recompute_bases(self, vertices: Iterable[int]) -> None:
        """Re-root every blossom containing one of the given vertices.

        Each blossom's new A_0 is the unique child whose base is not matched
        through one of the blossom's own cycle edges.
        """
        touched: set[int] = set()
        for v in vertices:
            b = self.parent[v]
            while b != -1 and b not in touched:
                touched.add(b)
                b = self.parent[b]
        for b in sorted(touched, key=self.depth, reverse=True):
            ch = self.children[b]
            pick = -1
            for (j, c) in enumerate(ch):
                me = self.mate_edge[self.base[c]]
                if me == -1 or self.eb_owner[me] != b:
                    if pick != -1:
                        raise NotAlternating(f"blossom {b} has two bases")
                    pick = j
            if pick == -1:
                raise NotAlternating(f"blossom {b} lost its base")
            if pick:
                self.children[b] = ch[pick:] + ch[:pick]
                cyc = self.cycle[b]
                self.cycle[b] = cyc[pick:] + cyc[:pick]
            self.base[b] = self.base[self.children[b][0]]

    # ------------------------------------------------------------ checks

    def validate(self) -> list[str]:
        """Structural invariant check of every live blossom."""
        problems = []
        seen = [0] * self.n
        for b in self.roots():
            for v in self.leaves(b):
                seen[v] += 1
                if self.inblossom[v] != b:
                    problems.append(f"vertex {v}: root pointer {self.inblossom[v]} != {b}")
        for v in range(self.n):
            if seen[v] != 1:
                problems.append(f"vertex {v} covered {seen[v]} times by roots")
        for b in self.blossoms():
            ch = self.children[b]
            cyc = self.cycle[b]
            ell = len(ch)
            if ell % 2 == 0 or ell < 3:
                problems.append(f"blossom {b}: {ell} children")
                continue
            if self.base[b] != self.base[ch[0]]:
                problems.append(f"blossom {b}: base mismatch")
            leaf_set = set(self.leaves(b))
            if len(leaf_set) % 2 == 0:
                problems.append(f"blossom {b}: even size {len(leaf_set)}")
            for j in range(ell):
                (p, q, k) = cyc[j]
                if self.eb_owner[k] != b:
                    problems.append(f"blossom {b}: edge {k} owner {self.eb_owner[k]}")
                if not (self._contains(ch[j], p) and self._contains(ch[(j + 1) % ell], q)):
                    problems.append(f"blossom {b}: edge {j} misplaced")
                if self.is_matched(k) != (j % 2 == 1):
                    problems.append(f"blossom {b}: edge {j} parity")
            inner = 0
            for v in leaf_set:
                me = self.mate_edge[v]
                if me != -1 and self.graph.other(me, v) in leaf_set:
                    inner += 1
                elif v != self.base[b]:
                    problems.append(f"blossom {b}: non-base vertex {v} "
                                    "matched outside")
            if inner != len(leaf_set) - 1:
                problems.append(f"blossom {b}: {inner // 2} inner matched "
                                f"edges, expected {(len(leaf_set) - 1) // 2}")
        return problems

    def _contains(self, b: int, v: int) -> bool:
        while v != -1:
            if v == b:
                return True
            v = self.parent[v]
        return False

    def dump(self, b: Optional[int] = None) -> str:
        """Nested text form: trivial blossoms are vertex ids, others
        B<id>[base=<v>,z=<raw>](children...)."""
        if b is None:
            return " ".join(self.dump(r) for r in self.roots())
        if b < self.n:
            return str(b)
        inner = " ".join(self.dump(c) for c in self.children[b])
        return f"B{b}[base={self.base[b]},z={self.z[b]}]({inner})"
