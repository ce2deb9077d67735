"""The matrices x, y, their Kronecker lifts and the recursive family B_n.

RootMatrix holds matrices whose entries are 0 or powers of q, stored row-wise
as sorted ``(column, exponent)`` pairs.  Exact products leave that set and
are returned as CycMatrix, a dense integer array of canonical Z[q]
coefficients.

Internally products are formed in the group ring Z[X]/(X^l - 1), where
multiplying by q^k is a cyclic shift of the coefficient axis, and projected
onto Z[q] at the end.  The projection is a ring homomorphism, so this is
exact.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Union

import numpy as np

from . import kernels
from ._config import InvalidArgument, check_dim
from .cyclotomic import CycInt, cyclotomic_poly, reduction_matrix

__all__ = [
    "RootEntry",
    "RootMatrix",
    "CycMatrix",
    "build_x",
    "build_y",
    "identity",
    "kron",
    "tilde_lift",
    "build_B",
    "mat_mul_exact",
    "mat_pow_exact",
    "verify_power_identity",
    "IdentityReport",
    "abs_pattern",
    "to_dump",
    "from_dump",
]

# None is the zero entry, an int k in [0, l) is q^k
RootEntry = Union[int, None]

_INT64_SAFE = 1 << 62


@dataclass(frozen=True)
class RootMatrix:
    order: int
    dim: int
    rows: tuple[tuple[tuple[int, int], ...], ...]

    def __post_init__(self):
        if self.order < 2:
            raise InvalidArgument(f"root order must be >= 2, got {self.order}")
        if len(self.rows) != self.dim:
            raise InvalidArgument(f"expected {self.dim} rows, got {len(self.rows)}")
        for r, row in enumerate(self.rows):
            last = -1
            for c, k in row:
                if not 0 <= c < self.dim:
                    raise InvalidArgument(f"column {c} out of range in row {r}")
                if c <= last:
                    raise InvalidArgument(f"row {r} not strictly sorted by column")
                if not 0 <= k < self.order:
                    raise InvalidArgument(f"exponent {k} not reduced mod {self.order}")
                last = c

    @classmethod
    def from_entries(cls, order: int, dim: int, entries: Mapping[tuple[int, int], int] | Iterable[tuple[int, int, int]]) -> RootMatrix:
        """Build from ``{(row, col): exponent}`` or ``(row, col, exponent)`` triples.

        Exponents are reduced mod ``order``; repeated positions are rejected.
        """
        items = entries.items() if isinstance(entries, Mapping) else (((r, c), k) for r, c, k in entries)
        rows: list[dict[int, int]] = [{} for _ in range(dim)]
        for (r, c), k in items:
            if not 0 <= r < dim:
                raise InvalidArgument(f"row {r} out of range")
            if c in rows[r]:
                raise InvalidArgument(f"duplicate entry at ({r}, {c})")
            rows[r][c] = k % order
        return cls(order, dim, tuple(tuple(sorted(d.items())) for d in rows))

    @property
    def nnz(self) -> int:
        return sum(len(row) for row in self.rows)

    def entry(self, i: int, j: int) -> RootEntry:
        for c, k in self.rows[i]:
            if c == j:
                return k
        return None

    def triples(self) -> list[tuple[int, int, int]]:
        return [(r, c, k) for r, row in enumerate(self.rows) for c, k in row]

    def csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(indptr, cols, exps) int64 arrays."""
        counts = [len(row) for row in self.rows]
        indptr = np.zeros(self.dim + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        flat = [e for row in self.rows for e in row]
        arr = np.array(flat, dtype=np.int64).reshape(-1, 2)
        return indptr, arr[:, 0].copy(), arr[:, 1].copy()

    def row_counts(self) -> np.ndarray:
        return np.array([len(row) for row in self.rows], dtype=np.int64)

    def col_counts(self) -> np.ndarray:
        out = np.zeros(self.dim, dtype=np.int64)
        for row in self.rows:
            for c, _ in row:
                out[c] += 1
        return out

    def to_cyc(self) -> CycMatrix:
        return CycMatrix.from_group_ring(self.order, self._group_ring())

    def _group_ring(self) -> np.ndarray:
        g = np.zeros((self.dim, self.dim, self.order), dtype=np.int64)
        for r, c, k in self.triples():
            g[r, c, k] = 1
        return g


@dataclass(frozen=True, eq=False)
class CycMatrix:
    """Dense square matrix over Z[q]; ``coeffs[i, j]`` is the canonical vector of entry (i, j)."""

    order: int
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        phi = cyclotomic_poly(self.order).degree
        c = self.coeffs
        if c.ndim != 3 or c.shape[0] != c.shape[1] or c.shape[2] != phi:
            raise InvalidArgument(f"coeffs must have shape (d, d, {phi}), got {c.shape}")
        c.setflags(write=False)

    @classmethod
    def from_group_ring(cls, l: int, g: np.ndarray) -> CycMatrix:
        red = reduction_matrix(l)
        if g.dtype == object:
            red = red.astype(object)
        return cls(l, g @ red)

    @classmethod
    def identity(cls, l: int, dim: int, scale: int = 1) -> CycMatrix:
        phi = cyclotomic_poly(l).degree
        c = np.zeros((dim, dim, phi), dtype=np.int64)
        c[np.arange(dim), np.arange(dim), 0] = scale
        return cls(l, c)

    @property
    def dim(self) -> int:
        return self.coeffs.shape[0]

    def entry(self, i: int, j: int) -> CycInt:
        return CycInt(self.order, tuple(int(v) for v in self.coeffs[i, j]))

    def _group_ring(self) -> np.ndarray:
        pad = self.order - self.coeffs.shape[2]
        return np.concatenate([self.coeffs, np.zeros((self.dim, self.dim, pad), dtype=self.coeffs.dtype)], axis=2)

    def _check(self, other: CycMatrix) -> None:
        if self.order != other.order or self.dim != other.dim:
            raise InvalidArgument("CycMatrix order/dimension mismatch")

    def __eq__(self, other: object) -> bool:
        if isinstance(other, RootMatrix):
            other = other.to_cyc()
        if not isinstance(other, CycMatrix):
            return NotImplemented
        return self.order == other.order and self.dim == other.dim and bool(np.all(self.coeffs == other.coeffs))

    def __add__(self, other: CycMatrix) -> CycMatrix:
        self._check(other)
        return CycMatrix(self.order, self.coeffs + other.coeffs)

    def __sub__(self, other: CycMatrix) -> CycMatrix:
        self._check(other)
        return CycMatrix(self.order, self.coeffs - other.coeffs)

    def scale(self, c: CycInt) -> CycMatrix:
        """Multiply every entry by the scalar c."""
        if c.order != self.order:
            raise InvalidArgument("scalar order mismatch")
        l = self.order
        g = self._group_ring()
        if _magnitude(self) * sum(map(abs, c.coeffs)) * l >= _INT64_SAFE:
            g = g.astype(object)
        out = np.zeros_like(g)
        for t, ct in enumerate(c.coeffs):
            if ct:
                out += ct * np.roll(g, t, axis=2)
        return CycMatrix.from_group_ring(l, out)

    def is_scalar_identity(self, n: int) -> bool:
        return self == CycMatrix.identity(self.order, self.dim, n)

    def first_discrepancy(self, other: CycMatrix) -> tuple[int, int] | None:
        self._check(other)
        bad = np.argwhere(np.any(self.coeffs != other.coeffs, axis=2))
        return (int(bad[0, 0]), int(bad[0, 1])) if bad.size else None


Matrix = Union[RootMatrix, CycMatrix]


def build_x(l: int) -> RootMatrix:
    """diag(q^0, q^1, ..., q^(l-1))."""
    return RootMatrix.from_entries(l, l, {(i, i): i for i in range(l)})


def build_y(l: int) -> RootMatrix:
    """Cyclic shift: entry (i, i+1 mod l) is 1."""
    return RootMatrix.from_entries(l, l, {(i, (i + 1) % l): 0 for i in range(l)})


def identity(l: int, dim: int) -> RootMatrix:
    return RootMatrix.from_entries(l, dim, {(i, i): 0 for i in range(dim)})


def _cyc_kron(a: CycMatrix, b: CycMatrix) -> CycMatrix:
    l = a.order
    ga, gb = a._group_ring(), b._group_ring()
    da, db = a.dim, b.dim
    dtype = object if ga.dtype == object or gb.dtype == object else np.int64
    g = np.zeros((da * db, da * db, l), dtype=dtype)
    for s in range(l):
        for t in range(l):
            g[:, :, (s + t) % l] += np.kron(ga[:, :, s], gb[:, :, t])
    return CycMatrix.from_group_ring(l, g)


def kron(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product; stays a RootMatrix when both factors are."""
    if a.order != b.order:
        raise InvalidArgument(f"order mismatch: {a.order} vs {b.order}")
    if isinstance(a, CycMatrix) or isinstance(b, CycMatrix):
        a = a.to_cyc() if isinstance(a, RootMatrix) else a
        b = b.to_cyc() if isinstance(b, RootMatrix) else b
        return _cyc_kron(a, b)
    l, db = a.order, b.dim
    rows = []
    for i, arow in enumerate(a.rows):
        for r, brow in enumerate(b.rows):
            rows.append(tuple((j * db + s, (ka + kb) % l) for j, ka in arow for s, kb in brow))
    return RootMatrix(l, a.dim * db, tuple(rows))


def _disjoint_sum(a: RootMatrix, b: RootMatrix) -> RootMatrix:
    rows = []
    for r, (ra, rb) in enumerate(zip(a.rows, b.rows)):
        merged = sorted(ra + rb)
        if len({c for c, _ in merged}) != len(merged):
            raise InvalidArgument(f"supports overlap in row {r}")
        rows.append(tuple(merged))
    return RootMatrix(a.order, a.dim, tuple(rows))


def tilde_lift(a: RootMatrix) -> RootMatrix:
    """x (x) a + y (x) Id; the two summands have disjoint block supports."""
    l = a.order
    return _disjoint_sum(kron(build_x(l), a), kron(build_y(l), identity(l, a.dim)))


def build_B(l: int, n: int, limit: int | None = None) -> RootMatrix:
    """B_1 = y and B_n = tilde_lift(B_(n-1)); an l^n x l^n matrix."""
    if l < 2 or n < 1:
        raise InvalidArgument(f"build_B needs l >= 2 and n >= 1, got l={l}, n={n}")
    check_dim(l, n, limit)
    b = build_y(l)
    for _ in range(n - 1):
        b = tilde_lift(b)
    return b


def _magnitude(m: Matrix) -> int:
    if isinstance(m, RootMatrix):
        return 1
    return int(np.abs(m.coeffs).max()) if m.coeffs.size else 0


def _row_weight(m: Matrix) -> int:
    """Upper bound on the l1 size of one row, counted in coefficients."""
    if isinstance(m, RootMatrix):
        return int(m.row_counts().max()) if m.dim else 0
    return int(np.abs(m.coeffs).sum(axis=(1, 2)).max()) if m.dim else 0


def mat_mul_exact(a: Matrix, b: Matrix) -> CycMatrix:
    if a.order != b.order or a.dim != b.dim:
        raise InvalidArgument("mat_mul_exact: order/dimension mismatch")
    l = a.order
    # coefficient growth bound decides whether int64 is safe
    red = reduction_matrix(l)
    bound = _row_weight(a) * _magnitude(b) * l * l * max(1, int(np.abs(red).max()))
    big = bound >= _INT64_SAFE
    gb = b._group_ring()
    if big:
        gb = gb.astype(object)
    if isinstance(a, RootMatrix):
        indptr, cols, exps = a.csr()
        if big:
            out = kernels.get("numpy").root_left_mul(indptr, cols, exps, gb, l)
        else:
            out = kernels.backend().root_left_mul(indptr, cols, exps, gb, l)
        return CycMatrix.from_group_ring(l, out)
    ga = a._group_ring()
    if big:
        ga = ga.astype(object)
    out = np.zeros_like(gb)
    for s in range(l):
        for t in range(l):
            out[:, :, (s + t) % l] += ga[:, :, s] @ gb[:, :, t]
    return CycMatrix.from_group_ring(l, out)


def mat_pow_exact(a: Matrix, e: int) -> CycMatrix:
    """a**e by repeated left multiplication."""
    if e < 1:
        raise InvalidArgument(f"exponent must be >= 1, got {e}")
    out = a.to_cyc() if isinstance(a, RootMatrix) else a
    for _ in range(e - 1):
        out = mat_mul_exact(a, out)
    return out


@dataclass
class IdentityReport:
    l: int
    n: int
    dim: int
    passed: bool
    work: int
    first_discrepancy: dict | None = None
    elapsed_ms: float = 0.0

    def to_dict(self, timing: bool = False) -> dict:
        d = {
            "identity": "B_n^l=nI",
            "l": self.l,
            "n": self.n,
            "dim": self.dim,
            "pass": self.passed,
            "work": self.work,
            "first_discrepancy": self.first_discrepancy,
        }
        if timing:
            d["elapsed_ms"] = round(self.elapsed_ms, 3)
        return d


def verify_power_identity(l: int, n: int, limit: int | None = None) -> IdentityReport:
    """Exact check that B_n^l equals n times the identity."""
    t0 = time.perf_counter()
    b = build_B(l, n, limit)
    power = mat_pow_exact(b, l)
    target = CycMatrix.identity(l, b.dim, n)
    where = power.first_discrepancy(target)
    # one unit of work = one nonzero of B applied to one row of the running product
    work = (l - 1) * b.nnz * b.dim
    bad = None
    if where is not None:
        i, j = where
        bad = {"row": i, "col": j, "got": list(power.entry(i, j).coeffs), "want": list(target.entry(i, j).coeffs)}
    return IdentityReport(l, n, b.dim, where is None, work, bad, (time.perf_counter() - t0) * 1e3)


def abs_pattern(a: RootMatrix) -> np.ndarray:
    """0/1 uint8 matrix with the support of a."""
    out = np.zeros((a.dim, a.dim), dtype=np.uint8)
    for r, c, _ in a.triples():
        out[r, c] = 1
    return out


def to_dump(a: RootMatrix) -> str:
    lines = [f"l={a.order} dim={a.dim}"]
    lines += [f"{r} {c} {k}" for r, c, k in a.triples()]
    return "\n".join(lines) + "\n"


def from_dump(text: str) -> RootMatrix:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise InvalidArgument("empty matrix dump")
    try:
        header = dict(tok.split("=", 1) for tok in lines[0].split())
        l, dim = int(header["l"]), int(header["dim"])
        triples = [tuple(int(v) for v in ln.split()) for ln in lines[1:]]
    except (KeyError, ValueError) as exc:
        raise InvalidArgument(f"malformed matrix dump: {exc}") from None
    if any(len(t) != 3 for t in triples):
        raise InvalidArgument("each dump line needs 'row col exponent'")
    if any(not 0 <= k < l for _, _, k in triples):
        raise InvalidArgument("dump exponent out of range")
    return RootMatrix.from_entries(l, dim, triples)
