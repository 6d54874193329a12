"""
Dual-invariant checkers for both solvers.

Each checker is a pure function of a solver snapshot and returns a list of
human-readable violations; an empty list means every clause holds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .graph import ScaleParams, WeightedGraph


@dataclass(frozen=True)
class ApproxSnapshot:
    """State of the approximate solver at one point of a scale.

    stage is "adjust" right after a dual adjustment (all clauses apply in
    strict form) or "search" right after augmentation and blossom shrinking
    (new root blossoms may still have z = 0 and newly matched vertices may
    share the free-vertex dual).
    """
    graph: WeightedGraph
    params: ScaleParams
    scale: int
    y: Sequence[int]
    mate_edge: Sequence[int]
    parent: Sequence[int]
    z: Sequence[int]
    alive: Sequence[bool]
    eb_owner: Sequence[int]
    edge_type: Sequence[int]
    linear: bool = False
    dead: Optional[Sequence[bool]] = None
    edge_scale: Optional[Sequence[int]] = None
    stage: str = "adjust"


@dataclass(frozen=True)
class ExactSnapshot:
    """State of the exact bipartite solver.

    stage is "phase1" during the first scale, "scale" inside a later scale,
    or "end" at a scale boundary, where matched edges must be nearly tight
    within one granule.
    """
    graph: WeightedGraph
    params: ScaleParams
    scale: int
    y: Sequence[int]
    mate_edge: Sequence[int]
    stage: str = "scale"


def _ancestors(parent: Sequence[int], v: int) -> list[int]:
    out = []
    b = parent[v]
    while b != -1:
        out.append(b)
        b = parent[b]
    return out


def edge_yz(snap: ApproxSnapshot) -> list[int]:
    """yz for every edge: y(u) + y(v) plus z of blossoms holding both ends."""
    g = snap.graph
    anc = [_ancestors(snap.parent, v) for v in range(g.n)]
    out = []
    for (u, v, _w) in g.edges:
        total = snap.y[u] + snap.y[v]
        au = anc[u]
        av = anc[v]
        # laminar: shared blossoms form a common suffix of both chains
        a = len(au) - 1
        b = len(av) - 1
        while a >= 0 and b >= 0 and au[a] == av[b]:
            total += snap.z[au[a]]
            a -= 1
            b -= 1
        out.append(total)
    return out


def check_approx_duals(snap: ApproxSnapshot) -> list[str]:
    """Relaxed complementary slackness for the approximate solver.

    Clauses: granularity, active blossoms, near domination, near tightness
    (per-type slack, or the weakened bound past an edge's scale window in
    linear mode), free-vertex duals, and the matched-edge slack ratio.
    """
    p = snap.params
    g = snap.graph
    i = snap.scale
    delta = p.raw_delta(i)
    half = delta // 2
    wf = p.weight_factor
    gamma = p.gamma
    out: list[str] = []

    for v in range(g.n):
        if snap.y[v] < 0 or snap.y[v] % half:
            out.append(f"granularity: y({v}) = {snap.y[v]} not a "
                       f"nonnegative multiple of {half}")
    live_blossoms = [b for b in range(g.n, len(snap.parent)) if snap.alive[b]]
    for b in live_blossoms:
        if snap.z[b] < 0 or snap.z[b] % delta:
            out.append(f"granularity: z(B{b}) = {snap.z[b]} not a "
                       f"nonnegative multiple of {delta}")
        if snap.parent[b] == -1 and snap.z[b] <= 0 and snap.stage == "adjust":
            out.append(f"active blossoms: root B{b} has z = {snap.z[b]}")

    yz = edge_yz(snap)
    dead = snap.dead
    for (k, (u, v, w)) in enumerate(g.edges):
        wr = w * wf
        wi = wr - wr % delta
        matched = snap.mate_edge[u] == k
        in_set = matched or snap.eb_owner[k] != -1
        if dead is not None and (dead[u] or dead[v]):
            live = False
        elif snap.linear and snap.edge_scale is not None:
            live = in_set or i <= snap.edge_scale[k] + gamma + 2
        else:
            live = True
        if live and yz[k] < wi - delta:
            out.append(f"near domination: edge {k} ({u},{v}) yz = {yz[k]} "
                       f"< w_i - delta_i = {wi - delta}")
        if not in_set:
            continue
        j = snap.edge_type[k]
        if j < 0 or j > i:
            out.append(f"near tightness: edge {k} ({u},{v}) in matching or "
                       f"blossom has type {j}")
            continue
        if (snap.linear and snap.edge_scale is not None
                and i > snap.edge_scale[k] + gamma):
            bound = wi + 3 * p.raw_delta(snap.edge_scale[k])
        else:
            bound = wi + 2 * (p.raw_delta(j) - delta)
        if yz[k] > bound:
            out.append(f"near tightness: edge {k} ({u},{v}) type {j} "
                       f"yz = {yz[k]} > {bound}")
        if matched:
            ratio = 6 if snap.linear else 4
            limit = (1 + ratio * p.eps_prime) * wr
            if yz[k] > limit:
                out.append(f"matched slack: edge {k} ({u},{v}) yz = {yz[k]} "
                           f"> (1+{ratio}eps')w = {limit}")

    free = [v for v in range(g.n) if snap.mate_edge[v] == -1]
    if free:
        fy = {snap.y[v] for v in free}
        if len(fy) > 1:
            out.append(f"free duals: free vertices have y-values {sorted(fy)}")
        low = min(fy)
        strict = snap.stage == "adjust"
        for v in range(g.n):
            if snap.mate_edge[v] == -1:
                continue
            if snap.y[v] < low or (strict and snap.y[v] == low):
                out.append(f"free duals: matched vertex {v} has y = "
                           f"{snap.y[v]}, free y = {low}")
    return out


def _exact_common(snap: ExactSnapshot, allow_negative: bool) -> list[str]:
    p = snap.params
    g = snap.graph
    i = snap.scale
    delta = p.raw_delta(i)
    wf = p.weight_factor
    out = []
    for v in range(g.n):
        if snap.y[v] % delta or (not allow_negative and snap.y[v] < 0):
            kind = "multiple" if allow_negative else "nonnegative multiple"
            out.append(f"granularity: y({v}) = {snap.y[v]} not a {kind} "
                       f"of {delta}")
    if snap.stage == "phase1":
        slack = delta
    elif snap.stage == "end":
        slack = delta
    else:
        slack = 3 * delta
    for (k, (u, v, w)) in enumerate(g.edges):
        wr = w * wf
        wi = wr - wr % delta
        ye = snap.y[u] + snap.y[v]
        if ye < wi:
            out.append(f"domination: edge {k} ({u},{v}) y(e) = {ye} "
                       f"< w_i = {wi}")
        if snap.mate_edge[u] == k and ye > wi + slack:
            out.append(f"near tightness: edge {k} ({u},{v}) y(e) = {ye} "
                       f"> w_i + {slack // delta}delta_i = {wi + slack}")
    return out


def check_exact_duals(snap: ExactSnapshot) -> list[str]:
    """Invariants of the exact maximum weight matching solver.

    Clauses: nonnegative granularity, domination, near tightness (with the
    bound depending on stage), and free-vertex duals (left free vertices
    share the minimal left dual during the first scale, right free vertices
    are zero; every free vertex is zero afterwards).
    """
    out = _exact_common(snap, allow_negative=False)
    g = snap.graph
    side = g.side
    assert side is not None
    if snap.stage == "phase1":
        left_y = [snap.y[v] for v in range(g.n) if side[v] == 0]
        low = min(left_y) if left_y else 0
        for v in range(g.n):
            if snap.mate_edge[v] != -1:
                continue
            if side[v] == 1 and snap.y[v] != 0:
                out.append(f"free duals: right free vertex {v} has y = {snap.y[v]}")
            if side[v] == 0 and snap.y[v] != low:
                out.append(f"free duals: left free vertex {v} has y = "
                           f"{snap.y[v]}, minimum left y = {low}")
    else:
        for v in range(g.n):
            if snap.mate_edge[v] == -1 and snap.y[v] != 0:
                out.append(f"free duals: free vertex {v} has y = {snap.y[v]}")
    return out


def check_perfect_duals(snap: ExactSnapshot) -> list[str]:
    """Invariants of the exact perfect matching solver: granularity (signed
    duals allowed), domination, near tightness and perfection of M."""
    out = _exact_common(snap, allow_negative=True)
    for v in range(snap.graph.n):
        if snap.mate_edge[v] == -1:
            out.append(f"perfect matching: vertex {v} is free")
    return out


def free_dual_value(snap: ApproxSnapshot) -> Optional[Fraction]:
    """Common y-value of free vertices as an exact number, or None."""
    for v in range(snap.graph.n):
        if snap.mate_edge[v] == -1:
            return snap.y[v] * snap.params.unit
    return None


def matched_slack_ratio(snap: ApproxSnapshot) -> Fraction:
    """Largest (yz(e) - w(e)) / w(e) over matched edges (0 if none)."""
    yz = edge_yz(snap)
    wf = snap.params.weight_factor
    best = Fraction(0)
    for (k, (u, _v, w)) in enumerate(snap.graph.edges):
        if snap.mate_edge[u] == k:
            best = max(best, Fraction(yz[k] - w * wf, w * wf))
    return best
