"""Cartesian powers of the directed l-cycle and induced degree statistics.

Vertices of C_l^n are digit tuples in [0, l)^n encoded big-endian (digit 0 is
the most significant), which is the order the Kronecker recursion for B_n
produces.  An arc increments exactly one digit mod l.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from ._config import InvalidArgument, check_dim
from .qmatrix import abs_pattern, build_B

__all__ = [
    "DiGraph",
    "VertexCode",
    "VertexSubset",
    "DegreeStats",
    "build_cycle_power",
    "verify_pattern_equivalence",
    "induced_degree_stats",
    "referee_independent_set",
    "verify_independent",
    "parse_subset",
]


@dataclass(frozen=True)
class DiGraph:
    num_vertices: int
    out_adj: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.out_adj) != self.num_vertices:
            raise InvalidArgument("out_adj length must equal num_vertices")
        for v, nbrs in enumerate(self.out_adj):
            if list(nbrs) != sorted(set(nbrs)):
                raise InvalidArgument(f"out-neighbors of {v} must be sorted and distinct")
            if nbrs and not (0 <= nbrs[0] and nbrs[-1] < self.num_vertices):
                raise InvalidArgument(f"out-neighbor of {v} out of range")

    @property
    def num_arcs(self) -> int:
        return sum(len(a) for a in self.out_adj)

    def in_adj(self) -> tuple[tuple[int, ...], ...]:
        preds: list[list[int]] = [[] for _ in range(self.num_vertices)]
        for v, nbrs in enumerate(self.out_adj):
            for w in nbrs:
                preds[w].append(v)
        return tuple(tuple(p) for p in preds)

    def adjacency(self) -> np.ndarray:
        """M(S): entry (i, j) counts arcs i -> j."""
        m = np.zeros((self.num_vertices, self.num_vertices), dtype=np.uint8)
        for v, nbrs in enumerate(self.out_adj):
            m[v, list(nbrs)] = 1
        return m

    def csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """(out_indptr, out_idx, in_indptr, in_idx) as int64 arrays."""

        def pack(adj):
            indptr = np.zeros(len(adj) + 1, dtype=np.int64)
            np.cumsum([len(a) for a in adj], out=indptr[1:])
            idx = np.fromiter(itertools.chain.from_iterable(adj), dtype=np.int64)
            return indptr, idx

        return (*pack(self.out_adj), *pack(self.in_adj()))

    def bitmasks(self) -> tuple[np.ndarray, np.ndarray]:
        """Out- and in-neighborhoods as int64 bitmasks (needs < 63 vertices)."""
        if self.num_vertices > 62:
            raise InvalidArgument("bitmask form needs at most 62 vertices")
        out_m = np.array([sum(1 << w for w in a) for a in self.out_adj], dtype=np.int64)
        in_m = np.array([sum(1 << w for w in a) for a in self.in_adj()], dtype=np.int64)
        return out_m, in_m

    def to_dot(self, name: str = "G", highlight: VertexSubset | None = None) -> str:
        lines = [f"digraph {name} {{"]
        for v in range(self.num_vertices):
            attrs = []
            if self.labels is not None:
                attrs.append(f'label="{self.labels[v]}"')
            if highlight is not None and highlight.contains(v):
                attrs.append("style=filled")
            lines.append(f"  {v}" + (f" [{', '.join(attrs)}]" if attrs else "") + ";")
        for v, nbrs in enumerate(self.out_adj):
            for w in nbrs:
                lines.append(f"  {v} -> {w};")
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class VertexCode:
    l: int
    n: int
    digits: tuple[int, ...]

    def __post_init__(self):
        if len(self.digits) != self.n or any(not 0 <= d < self.l for d in self.digits):
            raise InvalidArgument(f"bad digits {self.digits} for base {self.l}, length {self.n}")

    @classmethod
    def from_index(cls, l: int, n: int, index: int) -> VertexCode:
        if not 0 <= index < l**n:
            raise InvalidArgument(f"index {index} outside [0, {l}^{n})")
        digits = []
        for _ in range(n):
            index, d = divmod(index, l)
            digits.append(d)
        return cls(l, n, tuple(reversed(digits)))

    @property
    def index(self) -> int:
        out = 0
        for d in self.digits:
            out = out * self.l + d
        return out

    def __str__(self) -> str:
        return "".join(str(d) for d in self.digits) if self.l <= 10 else ".".join(map(str, self.digits))


@dataclass(frozen=True, eq=False)
class VertexSubset:
    universe: int
    members: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.asarray(self.members, dtype=bool)
        if m.shape != (self.universe,):
            raise InvalidArgument(f"membership must have shape ({self.universe},)")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "members", m)

    @classmethod
    def from_indices(cls, universe: int, indices: Iterable[int]) -> VertexSubset:
        idx = np.fromiter((int(i) for i in indices), dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= universe):
            raise InvalidArgument(f"vertex index outside [0, {universe})")
        if np.unique(idx).size != idx.size:
            raise InvalidArgument("duplicate vertex in subset")
        m = np.zeros(universe, dtype=bool)
        m[idx] = True
        return cls(universe, m)

    @classmethod
    def from_mask(cls, universe: int, mask: int) -> VertexSubset:
        return cls.from_indices(universe, [v for v in range(universe) if (mask >> v) & 1])

    @classmethod
    def full(cls, universe: int) -> VertexSubset:
        return cls(universe, np.ones(universe, dtype=bool))

    @property
    def size(self) -> int:
        return int(self.members.sum())

    def __len__(self) -> int:
        return self.size

    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.members)

    def contains(self, v: int) -> bool:
        return bool(self.members[v])

    def complement(self) -> VertexSubset:
        return VertexSubset(self.universe, ~self.members)

    def to_mask(self) -> int:
        return sum(1 << int(v) for v in self.indices())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VertexSubset):
            return NotImplemented
        return self.universe == other.universe and bool(np.array_equal(self.members, other.members))

    def __repr__(self) -> str:
        return f"VertexSubset(universe={self.universe}, indices={self.indices().tolist()})"


def build_cycle_power(l: int, n: int, limit: int | None = None) -> DiGraph:
    """C_l^n built from digit tuples: one arc per single-digit increment."""
    if l < 2 or n < 1:
        raise InvalidArgument(f"build_cycle_power needs l >= 2 and n >= 1, got l={l}, n={n}")
    check_dim(l, n, limit)
    codes = [VertexCode(l, n, digits) for digits in itertools.product(range(l), repeat=n)]
    out_adj = []
    for code in codes:
        nbrs = set()
        for j in range(n):
            d = list(code.digits)
            d[j] = (d[j] + 1) % l
            nbrs.add(VertexCode(l, n, tuple(d)).index)
        out_adj.append(tuple(sorted(nbrs)))
    return DiGraph(l**n, tuple(out_adj), tuple(str(c) for c in codes))


def verify_pattern_equivalence(l: int, n: int, limit: int | None = None) -> dict:
    """Compare |B_n| with M(C_l^n) entrywise."""
    pattern = abs_pattern(build_B(l, n, limit))
    graph = build_cycle_power(l, n, limit).adjacency()
    diff = np.argwhere(pattern != graph)
    first = None if diff.size == 0 else {"row": int(diff[0, 0]), "col": int(diff[0, 1])}
    return {"l": l, "n": n, "dim": l**n, "pass": first is None, "mismatches": int(diff.shape[0]), "first_mismatch": first}


@dataclass(frozen=True, eq=False)
class DegreeStats:
    out_deg: np.ndarray
    in_deg: np.ndarray
    summary: int

    def to_dict(self) -> dict:
        return {"out_deg": self.out_deg.tolist(), "in_deg": self.in_deg.tolist(), "max_degree": self.summary}


def _check_subset(g: DiGraph, s: VertexSubset) -> None:
    if s.universe != g.num_vertices:
        raise InvalidArgument(f"subset universe {s.universe} != graph size {g.num_vertices}")


def induced_degree_stats(g: DiGraph, s: VertexSubset) -> DegreeStats:
    """Out-/in-degrees inside s, for vertices of s (0 elsewhere), and their max."""
    _check_subset(g, s)
    inside = s.members.astype(np.int64)
    adj = g.adjacency().astype(np.int64)
    out_deg = (adj @ inside) * inside
    in_deg = (adj.T @ inside) * inside
    summary = int(np.maximum(out_deg, in_deg).max()) if g.num_vertices else 0
    return DegreeStats(out_deg, in_deg, summary)


def referee_independent_set(l: int, m: int) -> VertexSubset:
    """Union of the digit-sum classes S_(2k+1) over integers 0 <= k < (l-1)/2."""
    if l < 2 or m < 1:
        raise InvalidArgument(f"referee_independent_set needs l >= 2 and m >= 1, got l={l}, m={m}")
    classes = set()
    k = 0
    while 2 * k < l - 1:
        classes.add((2 * k + 1) % l)
        k += 1
    sums = np.array([sum(t) % l for t in itertools.product(range(l), repeat=m)])
    return VertexSubset(l**m, np.isin(sums, sorted(classes)))


def verify_independent(g: DiGraph, s: VertexSubset) -> bool:
    return induced_degree_stats(g, s).summary == 0


def parse_subset(text: str, universe: int) -> VertexSubset:
    """Parse ``"0,3,5"`` or ``"@path"`` (one index per line)."""
    text = text.strip()
    if text.startswith("@"):
        tokens: Sequence[str] = Path(text[1:]).read_text().split()
    else:
        tokens = [t for t in text.split(",") if t.strip()]
    try:
        idx = [int(t) for t in tokens]
    except ValueError as exc:
        raise InvalidArgument(f"bad subset literal: {exc}") from None
    return VertexSubset.from_indices(universe, idx)
