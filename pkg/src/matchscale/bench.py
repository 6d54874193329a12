"""
Benchmark matrix: generators x sizes x solvers, one TSV row per run.
"""

from __future__ import annotations

import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, TextIO

from .approx import approx_mwm
from .errors import MatchingError, NoPerfectMatching, UnequalSides
from .exact import run_exact
from .generate import generate
from .graph import WeightedGraph
from .oracle import (BRUTE_FORCE_MAX_EDGES, MWPM_MAX_SIDE, OracleResult,
                     brute_force_mwm, brute_force_mwpm, cubic_hungarian,
                     hungarian_mwpm)


COLUMNS = ("instance", "solver", "eps", "n", "m", "N", "time_ms", "weight",
           "oracle_weight", "ratio", "rounds")

SOLVERS = ("approx-logN", "approx-linear", "exact", "mwpm")

# largest side handed to the cubic oracle inside a benchmark
HUNGARIAN_MAX_SIDE = 500


@dataclass
class BenchRecord:
    instance: str
    solver: str
    eps: Optional[float]
    n: int
    m: int
    N: int
    time_ms: float
    weight: int
    oracle_weight: Optional[int]
    rounds: str

    @property
    def ratio(self) -> Optional[Fraction]:
        if self.oracle_weight is None:
            return None
        if self.oracle_weight == 0:
            return Fraction(1)
        return Fraction(self.weight, self.oracle_weight)

    def row(self) -> str:
        ratio = self.ratio
        cells = [self.instance, self.solver,
                 "" if self.eps is None else f"{self.eps:g}",
                 str(self.n), str(self.m), str(self.N),
                 f"{self.time_ms:.3f}", str(self.weight),
                 "" if self.oracle_weight is None else str(self.oracle_weight),
                 "" if ratio is None else f"{float(ratio):.6f}",
                 self.rounds]
        return "\t".join(cells)


@dataclass(frozen=True)
class BenchJob:
    kind: str
    n: int
    m: int
    N: int
    seed: int
    solver: str
    eps: Optional[float]
    check: bool = False
    oracle: bool = True


def oracle_for(graph: WeightedGraph, perfect: bool) -> Optional[OracleResult]:
    """Best available exact optimum, or None when the instance is too big."""
    try:
        if perfect:
            if graph.n_left > MWPM_MAX_SIDE:
                return hungarian_mwpm(graph)
            return brute_force_mwpm(graph)
        if graph.side is not None and max(graph.n_left,
                                          graph.n_right) <= HUNGARIAN_MAX_SIDE:
            return cubic_hungarian(graph)
        if graph.m <= BRUTE_FORCE_MAX_EDGES:
            return brute_force_mwm(graph)
    except MatchingError:
        return None
    return None


def solve(graph: WeightedGraph, solver: str, eps: Optional[float],
          check: bool = False) -> tuple[int, str]:
    """Run one solver; returns (matching weight, per-scale round summary)."""
    if solver.startswith("approx-"):
        assert eps is not None
        res = approx_mwm(graph, eps, solver[len("approx-"):], check)
        return res.matching.weight, ",".join(map(str, res.stats.adjustments))
    mode = "mwpm" if solver == "mwpm" else "mwm"
    ex = run_exact(graph, mode, check)
    rounds = (",".join(map(str, ex.stats.phase2_rounds))
              + f"|{ex.stats.phase3_rounds}")
    return ex.matching.weight, rounds


def timed_solve(graph: WeightedGraph, solver: str, eps: Optional[float],
                check: bool = False) -> tuple[float, int, str]:
    t0 = time.perf_counter()
    (weight, rounds) = solve(graph, solver, eps, check)
    return (time.perf_counter() - t0) * 1000.0, weight, rounds


def median_time(graph: WeightedGraph, solver: str, eps: Optional[float],
                repeats: int = 5) -> float:
    """Median wall time in seconds over several runs."""
    times = [timed_solve(graph, solver, eps)[0] / 1000.0
             for _ in range(repeats)]
    return statistics.median(times)


def build_instance(job: BenchJob) -> WeightedGraph:
    if job.kind == "random-bipartite":
        return generate(job.kind, job.n // 2, job.m, job.N, job.seed,
                        n_right=job.n - job.n // 2)
    if job.kind == "worst-path":
        return generate(job.kind, job.n, None, job.N, job.seed)
    if job.kind == "unit-odd-cycle":
        return generate(job.kind, job.n | 1, None, 1, job.seed)
    return generate(job.kind, job.n, job.m, job.N, job.seed)


def run_job(job: BenchJob) -> Optional[BenchRecord]:
    """Run one job; None when a perfect matching was asked for and the
    instance has none."""
    graph = build_instance(job)
    perfect = job.solver == "mwpm"
    try:
        (ms, weight, rounds) = timed_solve(graph, job.solver, job.eps,
                                           job.check)
    except (NoPerfectMatching, UnequalSides):
        return None
    oracle = oracle_for(graph, perfect) if job.oracle else None
    name = f"{job.kind}-n{job.n}-m{job.m}-N{job.N}-s{job.seed}"
    return BenchRecord(name, job.solver, job.eps, graph.n, graph.m, graph.N,
                       ms, weight, None if oracle is None else oracle.weight,
                       rounds)


def bench_matrix(kinds: Sequence[str], sizes: Sequence[tuple[int, int]],
                 Ns: Sequence[int], eps_list: Sequence[float],
                 solvers: Sequence[str], seeds: Iterable[int],
                 check: bool = False, oracle: bool = True) -> list[BenchJob]:
    """Every applicable (generator, size, N, seed, solver, eps) combination.
    Exact solvers only run on bipartite kinds and ignore eps."""
    jobs = []
    seeds = list(seeds)
    for kind in kinds:
        bip = kind in ("random-bipartite", "worst-path")
        for (n, m) in sizes:
            for N in Ns:
                for seed in seeds:
                    for solver in solvers:
                        if solver.startswith("approx-"):
                            for eps in eps_list:
                                jobs.append(BenchJob(kind, n, m, N, seed,
                                                     solver, eps, check,
                                                     oracle))
                        elif bip:
                            jobs.append(BenchJob(kind, n, m, N, seed, solver,
                                                 None, check, oracle))
    return jobs


def run_bench(jobs: Sequence[BenchJob], out: TextIO, workers: int = 1
              ) -> list[BenchRecord]:
    """Run the jobs and stream TSV rows to out.  With several workers the
    jobs are sharded across processes; each owns its solver state."""
    out.write("\t".join(COLUMNS) + "\n")
    records = []
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for rec in pool.map(run_job, jobs):
                if rec is not None:
                    out.write(rec.row() + "\n")
                    records.append(rec)
    else:
        for job in jobs:
            rec = run_job(job)
            if rec is None:
                continue
            out.write(rec.row() + "\n")
            out.flush()
            records.append(rec)
    return records
