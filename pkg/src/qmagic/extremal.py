"""Exhaustive and sampled checks of the induced-degree bound, plus local search.

For a subset S of C_l^n the checked quantity is the largest in- or out-degree
inside S over vertices of S.  Subsets of size (l-1)*l^(n-1)+1 must reach
ceil(n^(1/l)).

Work is cut into fixed-size units whose boundaries do not depend on the
thread count, and unit results are merged in unit order, so reports are
identical for any number of workers.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from . import kernels
from ._config import InvalidArgument, ResourceLimitError, enum_limit
from .cyclegraph import (
    DiGraph,
    VertexSubset,
    build_cycle_power,
    induced_degree_stats,
    referee_independent_set,
)

__all__ = [
    "TheoremReport",
    "SearchResult",
    "degree_bound",
    "threshold_size",
    "verify_theorem_exhaustive",
    "verify_theorem_sampled",
    "search_min_max_degree",
]

ENUM_UNIT = 1 << 16
SAMPLE_BLOCK = 1024


def degree_bound(l: int, n: int) -> tuple[float, int]:
    """(n ** (1/l), smallest integer >= it)."""
    if l < 2 or n < 1:
        raise InvalidArgument(f"degree_bound needs l >= 2 and n >= 1, got l={l}, n={n}")
    real = n ** (1.0 / l)
    c = max(1, math.ceil(real))
    # settle float rounding with integer arithmetic: (c-1)^l < n <= c^l
    while c**l < n:
        c += 1
    while c > 1 and (c - 1) ** l >= n:
        c -= 1
    if c**l == n:
        real = float(c)
    return real, c


def threshold_size(l: int, n: int) -> int:
    return (l - 1) * l ** (n - 1) + 1


@dataclass
class TheoremReport:
    l: int
    n: int
    threshold_size: int
    bound: float
    ceil_bound: int
    mode: Literal["exhaustive", "sampled"]
    subsets_checked: int
    min_max_degree: int
    counterexample: list[int] | None = None
    seed: int | None = None
    elapsed_ms: float = 0.0

    @property
    def theorem_holds(self) -> bool:
        return self.counterexample is None

    def to_dict(self, timing: bool = False) -> dict:
        d = {
            "l": self.l,
            "n": self.n,
            "threshold_size": self.threshold_size,
            "bound": self.bound,
            "ceil_bound": self.ceil_bound,
            "mode": self.mode,
            "subsets_checked": self.subsets_checked,
            "min_max_degree": self.min_max_degree,
            "theorem_holds": self.theorem_holds,
            "counterexample": self.counterexample,
        }
        if self.seed is not None:
            d["seed"] = self.seed
        if timing:
            d["elapsed_ms"] = round(self.elapsed_ms, 3)
        return d


def _run_units(fn, units, threads: int):
    if threads == 0:
        threads = 1 if len(units) < 2 else min(len(units), _cpu_count())
    if threads <= 1 or len(units) < 2:
        return [fn(u) for u in units]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, units))


def _cpu_count() -> int:
    return os.cpu_count() or 1


def _binom_table(n_vert: int, k: int) -> np.ndarray:
    t = np.zeros((n_vert + 1, k + 1), dtype=np.int64)
    for c in range(n_vert + 1):
        for i in range(k + 1):
            t[c, i] = math.comb(c, i)
    return t


def verify_theorem_exhaustive(l: int, n: int, limit: int | None = None, threads: int = 1) -> TheoremReport:
    """Check every subset of threshold size, in colex order."""
    t0 = time.perf_counter()
    if limit is None:
        limit = enum_limit()
    size = threshold_size(l, n)
    bound, ceil_bound = degree_bound(l, n)
    n_vert = l**n
    total = math.comb(n_vert, size)
    if total > limit or n_vert > 62:
        raise ResourceLimitError(f"C({n_vert}, {size}) = {total} subsets exceeds enumeration limit {limit}")
    g = build_cycle_power(l, n)
    out_m, in_m = g.bitmasks()
    binom = _binom_table(n_vert, size)
    kern = kernels.backend()
    units = [(lo, min(ENUM_UNIT, total - lo)) for lo in range(0, total, ENUM_UNIT)]

    def run(unit):
        lo, cnt = unit
        return kern.exhaustive_range(out_m, in_m, size, lo, cnt, binom, ceil_bound)

    best, cx = n_vert + 1, None
    for worst, cx_rank, cx_mask in _run_units(run, units, threads):
        best = min(best, int(worst))
        if cx is None and cx_rank >= 0:
            cx = VertexSubset.from_mask(n_vert, int(cx_mask)).indices().tolist()
    return TheoremReport(
        l, n, size, bound, ceil_bound, "exhaustive", total, best, cx,
        elapsed_ms=(time.perf_counter() - t0) * 1e3,
    )


def _block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(block,)))


def _sample_block(seed: int, block: int, count: int, n_vert: int, size: int) -> np.ndarray:
    """(count, n_vert) uint8 memberships of uniformly random size-subsets."""
    rng = _block_rng(seed, block)
    picks = np.argsort(rng.random((count, n_vert)), axis=1)[:, :size]
    members = np.zeros((count, n_vert), dtype=np.uint8)
    np.put_along_axis(members, picks, 1, axis=1)
    return members


def verify_theorem_sampled(
    l: int, n: int, samples: int, seed: int, threads: int = 1, limit: int | None = None
) -> TheoremReport:
    """Check ``samples`` random subsets of threshold size drawn from ``seed``."""
    if samples < 1:
        raise InvalidArgument(f"samples must be >= 1, got {samples}")
    t0 = time.perf_counter()
    size = threshold_size(l, n)
    bound, ceil_bound = degree_bound(l, n)
    g = build_cycle_power(l, n, limit)
    csr = g.csr()
    kern = kernels.backend()
    blocks = [(b, min(SAMPLE_BLOCK, samples - b * SAMPLE_BLOCK)) for b in range(math.ceil(samples / SAMPLE_BLOCK))]

    def run(unit):
        b, cnt = unit
        members = _sample_block(seed, b, cnt, g.num_vertices, size)
        worst = kern.batch_max_degree(members, *csr)
        hits = np.flatnonzero(worst < ceil_bound)
        cx = np.flatnonzero(members[hits[0]]).tolist() if hits.size else None
        return int(worst.min()), cx

    best, cx = g.num_vertices + 1, None
    for worst, block_cx in _run_units(run, blocks, threads):
        best = min(best, worst)
        if cx is None:
            cx = block_cx
    return TheoremReport(
        l, n, size, bound, ceil_bound, "sampled", samples, best, cx, seed=seed,
        elapsed_ms=(time.perf_counter() - t0) * 1e3,
    )


@dataclass
class SearchResult:
    l: int
    n: int
    target_size: int
    best_subset: VertexSubset = field(repr=False)
    best_max_degree: int
    iterations: int
    seed: int
    init: str = "random"
    accept: str = "arcs"

    def to_dict(self) -> dict:
        return {
            "l": self.l,
            "n": self.n,
            "target_size": self.target_size,
            "init": self.init,
            "accept": self.accept,
            "seed": self.seed,
            "iterations": self.iterations,
            "best_max_degree": self.best_max_degree,
            "best_subset": self.best_subset.indices().tolist(),
        }


def _initial_subset(l: int, n: int, size: int, init: str, rng: np.random.Generator) -> np.ndarray:
    n_vert = l**n
    member = np.zeros(n_vert, dtype=np.uint8)
    if init == "random":
        member[rng.choice(n_vert, size, replace=False)] = 1
    elif init == "referee":
        base = referee_independent_set(l, n).indices()
        if base.size >= size:
            member[base[:size]] = 1
        else:
            member[base] = 1
            rest = np.flatnonzero(member == 0)
            member[rng.choice(rest, size - base.size, replace=False)] = 1
    else:
        raise InvalidArgument(f"unknown init {init!r}; use 'random' or 'referee'")
    return member


def search_min_max_degree(
    l: int,
    n: int,
    size: int,
    iters: int,
    seed: int,
    init: str = "random",
    accept: str = "arcs",
    limit: int | None = None,
) -> SearchResult:
    """Swap-based local search for a size-subset with small induced max degree.

    Each step proposes exchanging one member for one non-member.  With
    ``accept="arcs"`` the swap is kept when the number of induced arcs does
    not increase; with ``accept="maxdeg"`` when the induced max degree does
    not increase.  Ties are accepted either way, so plateaus are walked, and
    the best max degree seen is returned.  Stops early at 0.

    The max-degree rule alone tends to stall at 1: an independent set of the
    same size is usually only reachable through states of larger max degree.
    """
    if accept not in ("arcs", "maxdeg"):
        raise InvalidArgument(f"unknown accept rule {accept!r}; use 'arcs' or 'maxdeg'")
    if l < 2 or n < 1:
        raise InvalidArgument(f"search needs l >= 2 and n >= 1, got l={l}, n={n}")
    g: DiGraph = build_cycle_power(l, n, limit)
    n_vert = g.num_vertices
    if not 1 <= size <= n_vert:
        raise InvalidArgument(f"size must be in [1, {n_vert}], got {size}")
    if iters < 0:
        raise InvalidArgument("iters must be >= 0")
    rng = np.random.default_rng(seed)
    member = _initial_subset(l, n, size, init, rng)
    if n_vert - size > 0:
        pick_out = rng.integers(0, size, iters, dtype=np.int64)
        pick_in = rng.integers(0, n_vert - size, iters, dtype=np.int64)
    else:
        pick_out = pick_in = np.zeros(0, dtype=np.int64)
    best_member, best, done = kernels.backend().local_search(member, *g.csr(), pick_out, pick_in, accept == "arcs")
    subset = VertexSubset(n_vert, best_member.astype(bool))
    check = induced_degree_stats(g, subset).summary
    if check != best:
        raise AssertionError(f"search objective {best} disagrees with recomputed degree {check}")
    return SearchResult(l, n, size, subset, int(best), int(done), seed, init, accept)
