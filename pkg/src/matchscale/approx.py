"""
(1 - eps)-approximate maximum weight matching on general graphs.

The solver runs scales 0 .. L.  Within a scale it alternates a search of
the eligible subgraph (augmenting along vertex-disjoint paths and shrinking
blossoms) with dual adjustments of one half-granule each, until the dual of
the free vertices reaches the scale's target.  Duals are raw integers in
units of eps'/2 (see ScaleParams).

Two modes are available:

    "logN"    every edge takes part in every scale.
    "linear"  each edge only takes part in a window of scales determined by
              its weight; matched edges whose window has passed are
              committed and their endpoints leave the graph.

Consecutive dual adjustments in which nothing can change in the eligible
subgraph are applied as one batch.  The batch length is the number of
single adjustments until the next edge becomes eligible, a blossom dual
reaches zero, or the scale target is met, so the result is identical to
applying them one by one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .blossom import BlossomForest, Step, reverse_steps
from .checks import ApproxSnapshot, check_approx_duals
from .errors import EpsOutOfRange, InvariantViolation
from .graph import Matching, ScaleParams, WeightedGraph, make_scale_params


Callback = Callable[[int, int, int, Fraction], None]

S_LABEL = 1
T_LABEL = 2


@dataclass
class ApproxStats:
    adjustments: list[int] = field(default_factory=list)
    passes: list[int] = field(default_factory=list)
    batches: list[int] = field(default_factory=list)
    augmentations: int = 0
    blossoms_formed: int = 0
    committed_edges: int = 0
    checks_run: int = 0
    # edges that were eligible at scale i < L with w < N/2^(i+1) + delta_i
    floor_violations: list[tuple[int, int]] = field(default_factory=list)


@dataclass
class ApproxResult:
    matching: Matching
    params: ScaleParams
    stats: ApproxStats
    mode: str


def scale_of_weight(w: int, N_pow2: int, eps_prime: Fraction) -> int:
    """First scale in which an edge of weight w can become eligible.

    Scale i covers weights in [N/2^(i+1) + delta_i, N/2^i + delta_{i-1}),
    with the last scale reaching down to zero.  Given the most significant
    bit b of w, the only candidates are p-1-b and p-b (N = 2^p).
    """
    p = N_pow2.bit_length() - 1
    if w >= N_pow2:
        return 0
    b = w.bit_length() - 1
    i = p - 1 - b
    k = eps_prime.denominator.bit_length() - 1     # eps' = 2^-k
    # lower end of scale i is 2^b (1 + 2 eps')
    if (w << k) < (1 << b) * ((1 << k) + 2):
        i += 1
    return min(i, p)


def expected_adjustments(params: ScaleParams) -> list[int]:
    """Number of single dual adjustments each scale performs."""
    inv = params.eps_prime.denominator
    L = params.L
    if L == 0:
        return [inv - 1]
    return [inv // 2] + [inv // 2 + 1] * (L - 1) + [inv]


class ApproxSolver:
    """One run of the approximate scaling algorithm on one graph."""

    def __init__(
            self,
            graph: WeightedGraph,
            eps: float | Fraction,
            mode: str = "logN",
            check: bool = False,
            callback: Optional[Callback] = None
            ) -> None:
        if mode not in ("logN", "linear"):
            raise ValueError(f"unknown mode {mode!r}")
        if not 0 < eps < 1:
            raise EpsOutOfRange(f"eps must lie in (0, 1), got {eps}")
        self.graph = graph
        self.mode = mode
        self.linear = mode == "linear"
        self.check = check
        self.callback = callback
        self.params = make_scale_params(max(graph.N, 1), eps, "approx", graph.n)
        self.stats = ApproxStats()

        p = self.params
        n = graph.n
        m = graph.m
        self.n = n
        self.m = m
        self.wf = p.weight_factor
        self.gamma = p.gamma
        if m:
            arr = np.array(graph.edges, dtype=np.int64)
            self.eu = arr[:, 0].copy()
            self.ev = arr[:, 1].copy()
            self.wraw = arr[:, 2] * self.wf
        else:
            self.eu = np.zeros(0, dtype=np.int64)
            self.ev = np.zeros(0, dtype=np.int64)
            self.wraw = np.zeros(0, dtype=np.int64)
        self.y = np.full(n, p.raw(Fraction(p.N_pow2, 2) - p.delta_0 / 2),
                         dtype=np.int64)
        self.free_y = p.raw(Fraction(p.N_pow2, 2) - p.delta_0 / 2)
        self.eu_list = self.eu.tolist()
        self.ev_list = self.ev.tolist()
        self.forest = BlossomForest(graph)
        self.edge_type = [-1] * m
        self.dead = np.zeros(n, dtype=bool)
        if self.linear:
            self.edge_scale = np.array(
                [scale_of_weight(w, p.N_pow2, p.eps_prime)
                 for (_u, _v, w) in graph.edges], dtype=np.int64)
        else:
            self.edge_scale = np.zeros(m, dtype=np.int64)
        self.committed = np.zeros(m, dtype=bool)
        # scratch mask of the current eligible edges; index m stands for
        # "no mate" (-1) and stays False
        self._emask = np.zeros(m + 1, dtype=bool)
        self.scale = 0
        self._cache: Optional[tuple] = None
        self._last_passes = 0

    # ---------------------------------------------------------- snapshots

    def snapshot(self, stage: str = "adjust") -> ApproxSnapshot:
        f = self.forest
        return ApproxSnapshot(
            graph=self.graph, params=self.params, scale=self.scale,
            y=self.y.tolist(), mate_edge=list(f.mate_edge),
            parent=list(f.parent), z=list(f.z), alive=list(f.alive),
            eb_owner=list(f.eb_owner), edge_type=list(self.edge_type),
            linear=self.linear,
            dead=self.dead.tolist() if self.linear else None,
            edge_scale=self.edge_scale.tolist() if self.linear else None,
            stage=stage)

    def _verify(self, where: str, stage: str) -> None:
        if not self.check:
            return
        self.stats.checks_run += 1
        problems = check_approx_duals(self.snapshot(stage))
        problems += self.forest.validate()
        if problems:
            raise InvariantViolation(f"scale {self.scale} {where}", problems)

    # ------------------------------------------------------------- driver

    def run(self) -> ApproxResult:
        p = self.params
        self._verify("initialization", "adjust")
        for i in range(p.L + 1):
            self.scale = i
            self._run_scale(i)
            if self.linear:
                self._commit(i)
            if i < p.L:
                shift = p.raw_delta(i + 1)
                self.y += shift
                self.free_y += shift
                self.scale = i + 1
                self._verify("scale start", "adjust")
        matching = Matching.from_mate_edges(self.graph, self.forest.mate_edge)
        return ApproxResult(matching, p, self.stats, self.mode)

    def _target(self, i: int) -> int:
        p = self.params
        if i == p.L:
            return 0
        return p.raw(Fraction(p.N_pow2, 1 << (i + 2)) - p.delta(i) / 2)

    def _run_scale(self, i: int) -> None:
        p = self.params
        delta = p.raw_delta(i)
        half = delta // 2
        target = self._target(i)
        assert (self.free_y - target) % half == 0
        steps_left = (self.free_y - target) // half
        done = 0
        passes = 0
        batches = 0

        active = self._active_edges(i)
        # endpoint order keeps the gathers below cache friendly
        active = active[np.argsort(self.eu[active], kind="stable")]
        (au, av, ak) = (self.eu[active].astype(np.int32),
                        self.ev[active].astype(np.int32),
                        active.astype(np.int32))
        wi = (self.wraw[active] // delta) * delta
        if self.linear:
            mok = self.edge_scale[active] >= i - self.gamma
        else:
            mok = None
        floor_raw = p.raw(Fraction(p.N_pow2, 1 << (i + 1)) + p.delta(i)) if i < p.L else None
        reach = 0

        while steps_left > 0:
            if 2 * steps_left <= reach or reach == 0:
                (au, av, ak, wi, mok) = self._reachable(au, av, ak, wi, mok,
                                                        delta, steps_left)
                reach = steps_left
            if not np.any(self.forest.mate_np == -1):
                # nothing left to adjust: the remaining steps are no-ops
                done += steps_left
                self.free_y -= steps_left * half
                steps_left = 0
                break
            (_aug, _shrunk, label) = self.search_phase(au, av, ak, wi, mok,
                                                       floor_raw)
            passes += self._last_passes
            (vlab, blab) = self._vertex_labels(label)
            if self.check:
                self._check_parity(vlab, half)
            k = self._batch_length(au, av, ak, wi, mok, delta, vlab, blab)
            k = min(k, steps_left)
            assert k >= 1
            self._apply_adjustment(vlab, blab, k)
            steps_left -= k
            done += k
            batches += 1
            self._dissolve_zero_roots()
            self._verify("dual adjustment", "adjust")
            if self.callback is not None:
                size = int(np.count_nonzero(self.forest.mate_np >= 0)) // 2
                self.callback(i, done, size, self.free_y * p.unit)
        self.stats.adjustments.append(done)
        self.stats.passes.append(passes)
        self.stats.batches.append(batches)

    def search_phase(self, au=None, av=None, ak=None, wi=None, mok=None,
                     floor_raw=None) -> tuple[int, int, np.ndarray]:
        """Augment and shrink blossoms until the eligible subgraph is stable.

        Returns (augmentations, blossoms formed, label per blossom id).
        The edge arrays default to every edge active at the current scale.
        """
        i = self.scale
        delta = self.params.raw_delta(i)
        if ak is None:
            ak = self._active_edges(i)
            (au, av) = (self.eu[ak], self.ev[ak])
            wi = (self.wraw[ak] // delta) * delta
            if self.linear:
                mok = self.edge_scale[ak] >= i - self.gamma
        aug0 = self.stats.augmentations
        blo0 = self.stats.blossoms_formed
        passes = 0
        # a pass that only shrinks keeps its new z = 0 blossoms (they are
        # outer); after an augmentation they may not be, so they go
        self._dissolve_zero_roots()
        while True:
            elig = self._eligible(au, av, ak, wi, mok, delta)
            if floor_raw is not None and elig.size:
                low = elig[self.wraw[elig] < floor_raw]
                for k in low.tolist():
                    self.stats.floor_violations.append((i, k))
            passes += 1
            before = self.stats.augmentations
            (final, label) = self._search(elig, i)
            self._verify("search", "search")
            if final:
                break
            if self.stats.augmentations > before:
                self._dissolve_zero_roots()
        self._last_passes = passes
        return (self.stats.augmentations - aug0,
                self.stats.blossoms_formed - blo0, label)

    def dual_adjustment(self, label: np.ndarray, count: int = 1) -> None:
        """Apply "count" half-granule dual adjustments for the given
        labels (as returned by search_phase), then dissolve blossoms whose
        dual dropped to zero."""
        (vlab, blab) = self._vertex_labels(label)
        self._apply_adjustment(vlab, blab, count)
        self._dissolve_zero_roots()

    def _apply_adjustment(self, vlab, blab, count: int) -> None:
        delta = self.params.raw_delta(self.scale)
        half = delta // 2
        self.y -= vlab * (count * half)
        for (b, sign) in blab.items():
            self.forest.z[b] += sign * count * delta
        self.free_y -= count * half

    def eligible_edges(self) -> list[int]:
        """Edges eligible at the current scale in the current state: the
        eligible edges between root blossoms plus all blossom edges."""
        i = self.scale
        delta = self.params.raw_delta(i)
        active = self._active_edges(i)
        wi = (self.wraw[active] // delta) * delta
        mok = self.edge_scale[active] >= i - self.gamma if self.linear else None
        elig = self._eligible(self.eu[active], self.ev[active], active, wi,
                              mok, delta)
        self._cache = None
        inside = [k for k in range(self.m) if self.forest.eb_owner[k] != -1]
        return sorted(set(elig.tolist()) | set(inside))

    # ------------------------------------------------------ edge windows

    def _active_edges(self, i: int) -> np.ndarray:
        ids = np.arange(self.m, dtype=np.int64)
        if not self.linear:
            return ids
        sc = self.edge_scale
        keep = (sc <= i) & (i <= sc + self.gamma + 2)
        keep &= ~self.dead[self.eu] & ~self.dead[self.ev]
        return ids[keep]

    def _commit(self, i: int) -> None:
        """Commit matched edges whose window has closed.

        An edge inside a blossom stays uncommitted until the blossom is
        gone, because augmenting paths can still pass through it.
        """
        f = self.forest
        matched = f.mate_np[self.eu] == np.arange(self.m)
        cand = np.nonzero(matched & ~self.committed
                          & (self.edge_scale + self.gamma <= i))[0]
        for k in cand.tolist():
            u = int(self.eu[k])
            v = int(self.ev[k])
            if f.parent[u] == -1 and f.parent[v] == -1:
                self.committed[k] = True
                self.dead[u] = True
                self.dead[v] = True
                self.stats.committed_edges += 1

    # ------------------------------------------------------- eligibility

    def _reachable(self, au, av, ak, wi, mok, delta, steps):
        """Drop edges that cannot turn eligible within "steps" adjustments.

        One adjustment moves each vertex dual by at most delta/2, so
        y(u) + y(v) - w_i moves by at most delta.  Matched edges stay
        (they may be unmatched by an augmentation); an edge matched later
        was eligible when it was matched, so it is already kept.
        """
        diff = self.y[au] + self.y[av] - wi
        keep = (np.abs(diff + delta) <= steps * delta) | (self.forest.mate_np[au] == ak)
        self._cache = None
        return (au[keep], av[keep], ak[keep], wi[keep],
                None if mok is None else mok[keep])

    def _eligible(self, au, av, ak, wi, mok, delta) -> np.ndarray:
        """Ids of eligible edges joining two different root blossoms."""
        if ak.size == 0:
            return ak
        inb = self.forest.inb_np
        mate = self.forest.mate_np
        inter = inb[au] != inb[av]
        diff = self.y[au] + self.y[av] - wi
        matched = mate[au] == ak
        ok_m = (diff >= 0) & ((diff & (delta - 1)) == 0)
        if mok is not None:
            ok_m &= mok
        el = inter & np.where(matched, ok_m, diff == -delta)
        self._cache = (inter, diff, matched)
        return ak[el]

    # ------------------------------------------------------------ search

    def _search(self, elig: np.ndarray, scale: int) -> tuple[bool, np.ndarray]:
        """One pass of alternating-forest growth over the eligible edges.

        Every free root blossom with an eligible edge starts a tree.  Edges
        between two S-blossoms of one tree form a blossom; between two
        trees they give an augmenting path, which is applied at once and
        retires both trees for the rest of the pass.

        Returns (labels final, label per blossom id).  Labels are final
        once a pass over every tree finds no augmenting path.
        """
        (quick, conflicts) = self._quick_labels(elig)
        if quick is not None:
            return True, quick
        # grow only the trees holding an edge between outer blossoms; the
        # others are labeled correctly and will be relabeled next pass
        (augmented, shrunk, _label) = self._grow(elig, scale, conflicts)
        if augmented or shrunk:
            return False, np.zeros(0, dtype=np.int8)
        (augmented, _shrunk, label) = self._grow(elig, scale, None)
        lab = np.zeros(len(self.forest.parent), dtype=np.int8)
        if label:
            lab[list(label)] = list(label.values())
        return not augmented, lab

    def _grow(self, elig: np.ndarray, scale: int,
              seeds: Optional[list[int]]) -> tuple[bool, bool, dict[int, int]]:
        """Python alternating-forest search, from all free roots or from
        the given ones.  Returns (augmented, shrunk, root labels)."""
        f = self.forest
        # CSR adjacency of the unmatched eligible edges
        eu = self.eu[elig]
        ev = self.ev[elig]
        unm = f.mate_np[eu] != elig
        src = np.concatenate((eu[unm], ev[unm]))
        dst = np.concatenate((ev[unm], eu[unm]))
        eid = np.concatenate((elig[unm], elig[unm]))
        order = np.argsort(src, kind="stable")
        dst_l = dst[order].tolist()
        eid_l = eid[order].tolist()
        start = np.searchsorted(src[order], np.arange(self.n + 1)).tolist()
        emask = self._emask
        emask[elig] = True
        try:
            return self._grow_trees(elig, scale, seeds, emask, src, dst_l,
                                    eid_l, start)
        finally:
            emask[elig] = False

    def _grow_trees(self, elig, scale, seeds, emask, src, dst_l, eid_l,
                    start) -> tuple[bool, bool, dict[int, int]]:
        f = self.forest
        inb = f.inblossom
        mate = f.mate_edge
        eu_all = self.eu_list
        ev_all = self.ev_list
        n = self.n
        label: dict[int, int] = {}
        labeledge: dict[int, Optional[Step]] = {}
        tree: dict[int, int] = {}
        dead_trees: set[int] = set()
        queue: list[int] = []
        augmented = False

        touched = np.unique(src)
        roots = np.unique(f.inb_np[touched])
        base_np = np.array([f.base[b] for b in roots.tolist()], dtype=np.int64)
        starts = roots[f.mate_np[base_np] == -1].tolist() if roots.size else []
        if seeds is not None:
            starts = seeds
        shrunk = False
        for b in starts:
            label[b] = S_LABEL
            labeledge[b] = None
            tree[b] = b
            queue.extend(f.leaves(b))
        queue.reverse()

        while queue:
            v = queue.pop()
            bv = inb[v]
            if tree[bv] in dead_trees:
                continue
            for j in range(start[v], start[v + 1]):
                w = dst_l[j]
                k = eid_l[j]
                if mate[v] == k:
                    continue
                bv = inb[v]
                bw = inb[w]
                if bv == bw:
                    continue
                lw = label.get(bw, 0)
                if lw == 0:
                    label[bw] = T_LABEL
                    labeledge[bw] = (v, w, k)
                    tree[bw] = tree[bv]
                    base = f.base[bw]
                    me = mate[base]
                    if me != -1 and emask[me]:
                        x = eu_all[me] if eu_all[me] != base else ev_all[me]
                        bx = inb[x]
                        if bx not in label:
                            label[bx] = S_LABEL
                            labeledge[bx] = (base, x, me)
                            tree[bx] = tree[bv]
                            if bx < n:
                                queue.append(bx)
                            else:
                                queue.extend(f.leaves(bx))
                elif lw == S_LABEL:
                    if tree[bw] in dead_trees:
                        continue
                    if tree[bw] == tree[bv]:
                        self._shrink(v, w, k, label, labeledge, tree,
                                     queue, scale)
                        shrunk = True
                    else:
                        self._augment_trees(v, w, k, labeledge, scale)
                        dead_trees.add(tree[bv])
                        dead_trees.add(tree[bw])
                        augmented = True
                        break
        # blossoms absorbed by a new blossom keep stale entries
        par = f.parent
        roots = {b: lab for (b, lab) in label.items() if par[b] == -1}
        return augmented, shrunk, roots

    def _quick_labels(self, elig: np.ndarray
                      ) -> tuple[Optional[np.ndarray], list[int]]:
        """Label the alternating forest layer by layer with array operations.

        Succeeds when the forest has no edge between two outer blossoms,
        i.e. when a search would neither augment nor shrink; the labels are
        then the same as the search's.  Otherwise returns None and the tree
        roots involved in such edges.
        """
        f = self.forest
        inb = f.inb_np
        mate = f.mate_np
        nb = len(f.parent)
        eu = self.eu[elig]
        ev = self.ev[elig]
        unm = mate[eu] != elig
        ru = inb[eu[unm]]
        rv = inb[ev[unm]]
        inter = ru != rv
        ru = ru[inter]
        rv = rv[inter]
        if ru.size == 0:
            return np.zeros(nb, dtype=np.int8), []
        emask = self._emask
        emask[elig] = True
        try:
            return self._layered_labels(elig, ru, rv, nb, emask)
        finally:
            emask[elig] = False

    def _layered_labels(self, elig, ru, rv, nb, emask):
        f = self.forest
        inb = f.inb_np
        mate = f.mate_np
        base = np.full(nb, -1, dtype=np.int64)
        base[:self.n] = np.arange(self.n)
        for b in f.root_set:
            base[b] = f.base[b]
        lab = np.zeros(nb, dtype=np.int8)
        tree = np.full(nb, -1, dtype=np.int64)
        touched = np.unique(np.concatenate((ru, rv)))
        frontier = touched[mate[base[touched]] == -1]
        lab[frontier] = S_LABEL
        tree[frontier] = frontier
        a = np.concatenate((ru, rv))
        b = np.concatenate((rv, ru))
        layer = np.zeros(nb, dtype=np.int32)
        depth = 0
        while frontier.size:
            depth += 1
            layer[frontier] = depth
            open_ = lab[b] == 0
            (a, b) = (a[open_], b[open_])
            sel = layer[a] == depth
            (tgt, first) = np.unique(b[sel], return_index=True)
            if tgt.size == 0:
                break
            lab[tgt] = T_LABEL
            tree[tgt] = tree[a[sel][first]]
            me = mate[base[tgt]]
            ok = emask[me]
            tb = base[tgt][ok]
            tt = tree[tgt][ok]
            me = me[ok]
            bx = inb[self.eu[me] + self.ev[me] - tb]
            fresh = lab[bx] == 0
            bx = bx[fresh]
            lab[bx] = S_LABEL
            tree[bx] = tt[fresh]
            frontier = bx
        # an edge between outer blossoms means a blossom or augmenting path
        clash = (lab[ru] == S_LABEL) & (lab[rv] == S_LABEL)
        bad = [tree[ru[clash]], tree[rv[clash]]]
        tl = np.nonzero(lab == T_LABEL)[0]
        me = mate[base[tl]]
        ok = emask[me]
        if np.any(ok):
            tb = base[tl][ok]
            me = me[ok]
            bx = inb[self.eu[me] + self.ev[me] - tb]
            odd = lab[bx] != S_LABEL
            bad.append(tree[tl[ok][odd]])
        bad_trees = np.unique(np.concatenate(bad))
        if bad_trees.size:
            return None, bad_trees.tolist()
        return lab, []

    def _s_parent(self, b: int, labeledge) -> int:
        le = labeledge[b]
        if le is None:
            return -1
        t = self.forest.inblossom[le[0]]
        return self.forest.inblossom[labeledge[t][0]]

    def _shrink(self, v, w, k, label, labeledge, tree, queue, scale) -> int:
        f = self.forest
        inb = f.inblossom
        bv = inb[v]
        bw = inb[w]
        # lowest common S-ancestor, walking both chains alternately
        seen: set[int] = set()
        a = bv
        b = bw
        base = -1
        while a != -1 or b != -1:
            if a != -1:
                if a in seen:
                    base = a
                    break
                seen.add(a)
                a = self._s_parent(a, labeledge)
            (a, b) = (b, a)
        assert base != -1

        def chain(start: int) -> tuple[list[int], list[Step]]:
            blos = []
            steps = []
            c = start
            while c != base:
                blos.append(c)
                le = labeledge[c]
                steps.append(le)
                c = inb[le[0]]
            return blos, steps

        (cv, sv) = chain(bv)
        (cw, sw) = chain(bw)
        children = [base] + cv[::-1] + cw
        cyc = sv[::-1] + [(v, w, k)] + [(q, p, kk) for (p, q, kk) in sw]
        b = f.contract(children, cyc)
        self._cache = None
        for (_p, _q, kk) in cyc:
            if not f.is_matched(kk):
                self.edge_type[kk] = scale
        label[b] = S_LABEL
        labeledge[b] = labeledge[base]
        tree[b] = tree[base]
        for c in children:
            if label.get(c) == T_LABEL:
                queue.extend(f.leaves(c))
        self.stats.blossoms_formed += 1
        return b

    def _tree_path(self, b: int, x: int, labeledge) -> list[Step]:
        """G-steps from leaf x of S-blossom b up to its tree's free base."""
        f = self.forest
        steps: list[Step] = []
        while True:
            steps.extend(f.path_to_base(b, x))
            le = labeledge[b]
            if le is None:
                return steps
            (p, q, k) = le
            steps.append((q, p, k))
            t = f.inblossom[p]
            (p2, q2, k2) = labeledge[t]
            steps.extend(reverse_steps(f.path_to_base(t, q2)))
            steps.append((q2, p2, k2))
            x = p2
            b = f.inblossom[p2]

    def _augment_trees(self, v, w, k, labeledge, scale) -> None:
        f = self.forest
        left = reverse_steps(self._tree_path(f.inblossom[v], v, labeledge))
        right = self._tree_path(f.inblossom[w], w, labeledge)
        path = left + [(v, w, k)] + right
        (added, removed) = f.augment(path)
        self._cache = None
        for kk in added:
            if f.eb_owner[kk] == -1:
                self.edge_type[kk] = scale
        for kk in removed:
            if f.eb_owner[kk] == -1:
                self.edge_type[kk] = -1
        self.stats.augmentations += 1
        if self.check:
            self._check_flipped(added + removed, scale)

    def _check_flipped(self, ids: list[int], scale: int) -> None:
        """Edges of an augmenting path leave the eligible set."""
        delta = self.params.raw_delta(scale)
        bad = []
        for kk in ids:
            if self.forest.eb_owner[kk] != -1:
                continue
            (u, v, _w) = self.graph.edges[kk]
            wi = int(self.wraw[kk]) // delta * delta
            diff = int(self.y[u]) + int(self.y[v]) - wi
            if self.forest.is_matched(kk):
                if diff >= 0 and diff % delta == 0:
                    bad.append(f"edge {kk} still eligible after augmentation")
            elif diff == -delta:
                bad.append(f"edge {kk} still eligible after augmentation")
        if bad:
            raise InvariantViolation(f"scale {scale} augmentation", bad)

    # ------------------------------------------------------ dual updates

    def _vertex_labels(self, label: np.ndarray
                       ) -> tuple[np.ndarray, dict[int, int]]:
        """Dual adjustment direction per vertex and per nontrivial root.

        Vertices of outer blossoms (including free roots that no search
        reached) get +1, vertices of inner blossoms -1, others 0.  The dict
        maps nontrivial roots to the sign of their z change.
        """
        f = self.forest
        nb = len(f.parent)
        lab = np.zeros(nb, dtype=np.int8)
        lab[:label.size] = label[:nb]
        base = np.arange(nb, dtype=np.int64)
        blab: dict[int, int] = {}
        for b in f.root_set:
            base[b] = f.base[b]
        free_root = np.zeros(nb, dtype=bool)
        free_root[:self.n] = f.mate_np == -1
        for b in f.root_set:
            free_root[b] = f.mate_edge[f.base[b]] == -1
        sign = np.where((lab == S_LABEL) | ((lab == 0) & free_root), 1,
                        np.where(lab == T_LABEL, -1, 0)).astype(np.int64)
        for b in f.root_set:
            if sign[b]:
                blab[b] = int(sign[b])
        return sign[f.inb_np], blab

    def _check_parity(self, vlab: np.ndarray, half: int) -> None:
        reach = np.nonzero(vlab != 0)[0]
        if reach.size:
            par = np.unique((self.y[reach] // half) % 2)
            if par.size > 1:
                raise InvariantViolation(
                    f"scale {self.scale} parity",
                    ["reachable vertices have y-values of both parities"])

    def _batch_length(self, au, av, ak, wi, mok, delta, vlab, blab) -> int:
        """Adjustments until the eligible subgraph can next change."""
        half = delta // 2
        best = 1 << 62
        f = self.forest
        for (b, sign) in blab.items():
            if sign < 0:
                best = min(best, f.z[b] // delta)
        if ak.size == 0:
            return best
        if self._cache is not None:
            (inter, diff, matched) = self._cache
        else:
            inter = f.inb_np[au] != f.inb_np[av]
            diff = self.y[au] + self.y[av] - wi
            matched = f.mate_np[au] == ak
        rate = vlab[au] + vlab[av]

        # unmatched edges whose yz falls until it reaches w_i - delta_i
        sel = inter & ~matched & (rate > 0) & (diff != -delta)
        if np.any(sel):
            gap = diff[sel] + delta
            per = rate[sel] * half
            best = min(best, int(np.min(-(-gap // per))))

        # matched edges whose yz rises until yz - w_i is a multiple of delta_i
        sel = inter & matched & (rate < 0)
        if mok is not None:
            sel &= mok
        if np.any(sel):
            r = diff[sel]
            per = -rate[sel] * half
            s = np.maximum(1, -(-(-r) // per))
            whole = per == delta
            # per == delta: reachable only if r is already a multiple
            ok_whole = whole & ((r & (delta - 1)) == 0)
            # per == delta/2: parity of the step count must match r/half
            s_half = s + ((r // half + s) % 2)
            cand = np.where(whole, np.where(ok_whole, s, 1 << 62), s_half)
            best = min(best, int(np.min(cand)))
        return best

    def _dissolve_zero_roots(self) -> None:
        f = self.forest
        stack = [b for b in f.nontrivial_roots() if f.z[b] == 0]
        if stack:
            self._cache = None
        while stack:
            b = stack.pop()
            cyc = list(f.cycle[b])
            kids = f.dissolve(b)
            for (_p, _q, k) in cyc:
                if not f.is_matched(k):
                    self.edge_type[k] = -1
            for c in kids:
                if c >= self.n and f.z[c] == 0:
                    stack.append(c)


def approx_mwm(graph: WeightedGraph, eps: float | Fraction,
               mode: str = "logN", check: bool = False,
               callback: Optional[Callback] = None) -> ApproxResult:
    """Compute a (1 - eps)-approximate maximum weight matching.

    Raises:
        EpsOutOfRange: eps outside (0, 1).
        InvariantViolation: check=True and a dual invariant failed.
    """
    return ApproxSolver(graph, eps, mode, check, callback).run()


def run(graph: WeightedGraph, eps: float | Fraction, mode: str = "logN",
        check: bool = False, callback: Optional[Callback] = None) -> Matching:
    """Matching-only form of approx_mwm."""
    return approx_mwm(graph, eps, mode, check, callback).matching


def scale_of_edge(w: int, params: ScaleParams) -> int:
    """Scale in which an edge of weight w enters (see scale_of_weight)."""
    assert params.eps_prime is not None
    return scale_of_weight(w, params.N_pow2, params.eps_prime)
