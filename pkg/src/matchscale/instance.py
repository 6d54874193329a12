"""
Reading and writing DIMACS-style matching instances and results.

Instance text:

    c comment
    p edge <n> <m>                 general graph
    p bipartite <nL> <nR> <m>      left = 1..nL, right = nL+1..nL+nR
    e <u> <v> <w>                  1-indexed endpoints, integer w >= 1

Result text is "s <weight>" followed by one "m <u> <v>" line per matched
edge with u < v, sorted.
"""

from __future__ import annotations

from typing import Iterable, Optional, TextIO

from .errors import ParseError
from .graph import Matching, WeightedGraph, validate_graph


def _int(tok: str, what: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"{what} {tok!r} is not an integer", lineno) from None


def parse_instance(text: str | Iterable[str]) -> WeightedGraph:
    """Parse instance text into a validated graph.

    Raises:
        ParseError: malformed line, missing or repeated problem line, or an
            edge count different from the one announced.
        GraphError: any validate_graph failure.
    """
    lines = text.splitlines() if isinstance(text, str) else text
    n = -1
    m_expected = 0
    bipartition: Optional[tuple[range, range]] = None
    edges: list[tuple[int, int, int]] = []
    edge_lines: list[int] = []
    for (lineno, line) in enumerate(lines, start=1):
        tok = line.split()
        if not tok or tok[0] == "c":
            continue
        if tok[0] == "p":
            if n >= 0:
                raise ParseError("second problem line", lineno)
            if len(tok) == 4 and tok[1] == "edge":
                n = _int(tok[2], "vertex count", lineno)
                m_expected = _int(tok[3], "edge count", lineno)
            elif len(tok) == 5 and tok[1] == "bipartite":
                nl = _int(tok[2], "left count", lineno)
                nr = _int(tok[3], "right count", lineno)
                m_expected = _int(tok[4], "edge count", lineno)
                if nl < 0 or nr < 0:
                    raise ParseError("negative side size", lineno)
                n = nl + nr
                bipartition = (range(nl), range(nl, n))
            else:
                raise ParseError("expected 'p edge <n> <m>' or "
                                 "'p bipartite <nL> <nR> <m>'", lineno)
            if n < 0 or m_expected < 0:
                raise ParseError("negative count", lineno)
        elif tok[0] == "e":
            if n < 0:
                raise ParseError("edge before problem line", lineno)
            if len(tok) != 4:
                raise ParseError("expected 'e <u> <v> <w>'", lineno)
            u = _int(tok[1], "vertex", lineno)
            v = _int(tok[2], "vertex", lineno)
            w = _int(tok[3], "weight", lineno)
            edges.append((u - 1, v - 1, w))
            edge_lines.append(lineno)
        else:
            raise ParseError(f"unknown line type {tok[0]!r}", lineno)
    if n < 0:
        raise ParseError("missing problem line")
    if len(edges) != m_expected:
        raise ParseError(f"problem line announces {m_expected} edges, "
                         f"found {len(edges)}")
    return validate_graph(edges, n, bipartition)


def format_instance(graph: WeightedGraph, comment: Optional[str] = None) -> str:
    out = []
    if comment:
        for line in comment.splitlines():
            out.append(f"c {line}")
    if graph.side is not None and _is_split(graph):
        out.append(f"p bipartite {graph.n_left} {graph.n_right} {graph.m}")
    else:
        out.append(f"p edge {graph.n} {graph.m}")
    for (u, v, w) in graph.edges:
        out.append(f"e {u + 1} {v + 1} {w}")
    return "\n".join(out) + "\n"


def _is_split(graph: WeightedGraph) -> bool:
    """True when the left side is exactly the first n_left vertices."""
    assert graph.side is not None
    return all(s == (1 if x >= graph.n_left else 0)
               for (x, s) in enumerate(graph.side))


def format_result(matching: Matching) -> str:
    pairs = sorted(matching.pairs())
    out = [f"s {matching.weight}"]
    out.extend(f"m {u + 1} {v + 1}" for (u, v) in pairs)
    return "\n".join(out) + "\n"


def emit_result(matching: Matching, stream: TextIO) -> str:
    """Write the result lines to stream and return them."""
    text = format_result(matching)
    stream.write(text)
    return text
