"""
Command line front end.

    matchscale approx --eps 0.1 [--mode logN|linear] [FILE]
    matchscale exact [FILE]
    matchscale mwpm [FILE]
    matchscale oracle --method brute|hungarian|greedy [FILE]
    matchscale gen KIND --n N [--m M] [--max-weight W] [-o FILE]
    matchscale bench [--kinds ...] [--sizes n:m ...] [--plot DIR]

Instances are read from FILE or stdin; results go to stdout, diagnostics to
stderr.  Exit status: 0 success, 2 bad input or usage, 3 invariant
violation, 4 no perfect matching.
"""

from __future__ import annotations

import argparse
import os
import sys
from collections import deque
from typing import Optional, Sequence

from .approx import approx_mwm
from .bench import SOLVERS, bench_matrix, run_bench
from .errors import (InvariantViolation, MatchingError, NoPerfectMatching,
                     NotBipartite)
from .exact import run_exact
from .generate import KINDS, generate
from .graph import WeightedGraph
from .instance import emit_result, format_instance, parse_instance
from .oracle import brute_force_mwm, cubic_hungarian, greedy_half

EXIT_USAGE = 2
EXIT_INVARIANT = 3
EXIT_NO_PERFECT = 4


def with_bipartition(graph: WeightedGraph) -> WeightedGraph:
    """The graph itself if it carries sides, else a 2-coloured copy.

    Raises:
        NotBipartite: the graph has an odd cycle.
    """
    if graph.side is not None:
        return graph
    side = [-1] * graph.n
    for s in range(graph.n):
        if side[s] != -1:
            continue
        side[s] = 0
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for k in graph.adjacency[x]:
                z = graph.other(k, x)
                if side[z] == -1:
                    side[z] = 1 - side[x]
                    queue.append(z)
                elif side[z] == side[x]:
                    raise NotBipartite(f"odd cycle through edge {k}")
    return WeightedGraph(graph.n, graph.edges, side)


def _read_graph(path: Optional[str]) -> WeightedGraph:
    if path is None or path == "-":
        return parse_instance(sys.stdin.read())
    with open(path) as fh:
        return parse_instance(fh.read())


def _default_seed() -> int:
    env = os.environ.get("MATCHSCALE_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise SystemExit(f"matchscale: MATCHSCALE_SEED={env!r} is not an "
                         f"integer") from None


def _size(text: str) -> tuple[int, int]:
    try:
        (n, m) = text.split(":")
        return int(n), int(m)
    except ValueError:
        raise argparse.ArgumentTypeError(f"size {text!r} is not n:m") from None


def build_parser() -> argparse.ArgumentParser:
    # global flags are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--check-invariants", action="store_true",
                        default=argparse.SUPPRESS,
                        help="verify dual invariants after every step")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="random seed (default $MATCHSCALE_SEED or 0)")
    common.add_argument("--trace", action="store_true",
                        default=argparse.SUPPRESS,
                        help="print per-round progress to stderr")

    parser = argparse.ArgumentParser(
        prog="matchscale", parents=[common],
        description="Scaling algorithms for maximum weight matching.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("approx", parents=[common],
                       help="(1-eps)-approximate MWM on a general graph")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--mode", choices=("logN", "linear"), default="logN")
    p.add_argument("file", nargs="?")

    p = sub.add_parser("exact", parents=[common],
                       help="exact MWM on a bipartite graph")
    p.add_argument("file", nargs="?")

    p = sub.add_parser("mwpm", parents=[common],
                       help="exact maximum weight perfect matching (bipartite)")
    p.add_argument("file", nargs="?")

    p = sub.add_parser("oracle", parents=[common],
                       help="reference solver")
    p.add_argument("--method", choices=("brute", "hungarian", "greedy"),
                   required=True)
    p.add_argument("file", nargs="?")

    p = sub.add_parser("gen", parents=[common], help="generate an instance")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("--n", type=int, required=True,
                   help="vertices (left side for random-bipartite)")
    p.add_argument("--n-right", type=int, default=None)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--max-weight", "-N", type=int, default=100, dest="N")
    p.add_argument("-o", "--output", default=None)

    p = sub.add_parser("bench", parents=[common],
                       help="benchmark matrix as TSV")
    p.add_argument("--kinds", nargs="+", choices=KINDS,
                   default=["random-general", "random-bipartite"])
    p.add_argument("--sizes", nargs="+", type=_size,
                   default=[(40, 100), (80, 200), (160, 400)],
                   help="n:m pairs")
    p.add_argument("--max-weight", "-N", nargs="+", type=int, default=[1000],
                   dest="Ns")
    p.add_argument("--eps", nargs="+", type=float, default=[0.1])
    p.add_argument("--solvers", nargs="+", choices=SOLVERS,
                   default=list(SOLVERS))
    p.add_argument("--repeat", type=int, default=1,
                   help="seeds per configuration")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--no-oracle", action="store_true")
    p.add_argument("--plot", metavar="DIR", default=None,
                   help="also write a scaling figure to DIR (needs matplotlib)")
    return parser


def _trace_approx(scale: int, step: int, size: int, free_y) -> None:
    print(f"approx scale={scale} adjustment={step} |M|={size} "
          f"free_y={free_y}", file=sys.stderr)


def _trace_exact(phase: str, scale: int, badness: int, weight: int) -> None:
    print(f"exact {phase} scale={scale} f={badness} w={weight}",
          file=sys.stderr)


def _dispatch(args: argparse.Namespace) -> int:
    check = getattr(args, "check_invariants", False)
    trace = getattr(args, "trace", False)
    seed = getattr(args, "seed", None)
    if seed is None:
        seed = _default_seed()
    cmd = args.command

    if cmd == "approx":
        graph = _read_graph(args.file)
        res = approx_mwm(graph, args.eps, args.mode, check,
                         _trace_approx if trace else None)
        emit_result(res.matching, sys.stdout)
    elif cmd in ("exact", "mwpm"):
        graph = with_bipartition(_read_graph(args.file))
        mode = "mwpm" if cmd == "mwpm" else "mwm"
        ex = run_exact(graph, mode, check, _trace_exact if trace else None)
        emit_result(ex.matching, sys.stdout)
    elif cmd == "oracle":
        graph = _read_graph(args.file)
        if args.method == "brute":
            result = brute_force_mwm(graph)
        elif args.method == "hungarian":
            result = cubic_hungarian(with_bipartition(graph))
        else:
            result = greedy_half(graph)
        emit_result(result.matching, sys.stdout)
    elif cmd == "gen":
        graph = generate(args.kind, args.n, args.m, args.N, seed,
                         n_right=args.n_right)
        text = format_instance(graph, f"{args.kind} seed={seed}")
        if args.output:
            with open(args.output, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    elif cmd == "bench":
        jobs = bench_matrix(args.kinds, args.sizes, args.Ns, args.eps,
                            args.solvers, range(seed, seed + args.repeat),
                            check, not args.no_oracle)
        records = run_bench(jobs, sys.stdout, args.workers)
        if args.plot:
            from .plotting import plot_scaling
            path = plot_scaling(records, args.plot)
            print(f"wrote {path}", file=sys.stderr)
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return _dispatch(args)
    except InvariantViolation as exc:
        print(f"matchscale: invariant violation at {exc.where}", file=sys.stderr)
        for v in exc.violations:
            print(f"  {v}", file=sys.stderr)
        return EXIT_INVARIANT
    except NoPerfectMatching as exc:
        print(f"matchscale: {exc}", file=sys.stderr)
        return EXIT_NO_PERFECT
    except (MatchingError, OSError) as exc:
        print(f"matchscale: {exc}", file=sys.stderr)
        return EXIT_USAGE


def cli_main(argv: Optional[Sequence[str]] = None) -> int:
    return main(argv)


if __name__ == "__main__":
    sys.exit(main())
