"""Floating-point side of the degree argument.

The eigenvalues of B_n are known in closed form (q^k times the real l-th
root of n), so rank and null-space computations by Gaussian elimination are
all that is needed: eigenvalue multiplicities, an eigenvector supported on a
vertex subset, and the row/column l1 bound on the corresponding minor.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from ._config import InvalidArgument
from .cyclegraph import VertexSubset
from .cyclotomic import cyc_root_power, cyc_to_complex
from .qmatrix import RootMatrix, abs_pattern, build_B

__all__ = [
    "DEFAULT_TOL",
    "as_cmatrix",
    "to_numeric",
    "gauss_rank",
    "null_space",
    "SpectralReport",
    "eigen_multiplicities",
    "power_residual_rank",
    "EigenWitness",
    "intersection_witness",
    "minor_norm_bound",
]

DEFAULT_TOL = 1e-8


def as_cmatrix(m) -> np.ndarray:
    out = np.array(m, dtype=np.complex128)
    if out.ndim != 2:
        raise InvalidArgument("expected a 2-d matrix")
    if not np.all(np.isfinite(out)):
        raise InvalidArgument("matrix has non-finite entries")
    return out


def to_numeric(a: RootMatrix) -> np.ndarray:
    roots = np.array([cyc_to_complex(cyc_root_power(a.order, k)) for k in range(a.order)])
    out = np.zeros((a.dim, a.dim), dtype=np.complex128)
    for r, c, k in a.triples():
        out[r, c] = roots[k]
    return out


def _rref(m: np.ndarray, tol: float, scale: float | None) -> tuple[np.ndarray, list[int]]:
    """Gauss-Jordan with partial pivoting on maximum modulus.

    A pivot whose modulus is at most ``tol * scale`` counts as zero; ``scale``
    defaults to the largest entry modulus of the input.
    """
    if tol <= 0:
        raise InvalidArgument("tol must be positive")
    a = as_cmatrix(m).copy()
    rows, cols = a.shape
    if scale is None:
        scale = float(np.abs(a).max()) if a.size else 0.0
    cutoff = tol * scale
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = r + int(np.argmax(np.abs(a[r:, c])))
        if abs(a[p, c]) <= cutoff:
            continue
        if p != r:
            a[[r, p]] = a[[p, r]]
        a[r] /= a[r, c]
        factors = a[:, c].copy()
        factors[r] = 0
        a -= np.outer(factors, a[r])
        pivots.append(c)
        r += 1
    return a, pivots


def gauss_rank(m, tol: float = DEFAULT_TOL, scale: float | None = None) -> int:
    return len(_rref(m, tol, scale)[1])


def null_space(m, tol: float = DEFAULT_TOL, scale: float | None = None) -> np.ndarray:
    """Orthonormal null-space basis as the columns of a (cols, nullity) array."""
    a, pivots = _rref(m, tol, scale)
    cols = a.shape[1]
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((cols, len(free)), dtype=np.complex128)
    for j, f in enumerate(free):
        basis[f, j] = 1.0
        for i, p in enumerate(pivots):
            basis[p, j] = -a[i, f]
    if not free:
        return basis
    q, _ = np.linalg.qr(basis)
    return q


@dataclass
class SpectralReport:
    l: int
    n: int
    eigenvalues: list[complex]
    nullities: list[int]
    tol: float

    @property
    def dim(self) -> int:
        return self.l**self.n

    @property
    def nullity_sum(self) -> int:
        return sum(self.nullities)

    @property
    def claim_holds(self) -> bool:
        """Some eigenvalue has multiplicity at least l^(n-1)."""
        return max(self.nullities) >= self.l ** (self.n - 1)

    @property
    def equal_split(self) -> bool:
        return all(k == self.l ** (self.n - 1) for k in self.nullities)

    @property
    def passed(self) -> bool:
        return self.nullity_sum == self.dim and self.claim_holds

    def to_dict(self) -> dict:
        return {
            "l": self.l,
            "n": self.n,
            "dim": self.dim,
            "tol": self.tol,
            "eigenvalues": [[round(z.real, 12), round(z.imag, 12)] for z in self.eigenvalues],
            "nullities": self.nullities,
            "nullity_sum": self.nullity_sum,
            "claim_holds": self.claim_holds,
            "equal_split": self.equal_split,
            "pass": self.passed,
        }


def _real_root(l: int, n: int) -> float:
    return float(n) ** (1.0 / l)


def eigen_multiplicities(l: int, n: int, tol: float = DEFAULT_TOL, limit: int | None = None) -> SpectralReport:
    b = to_numeric(build_B(l, n, limit))
    r = _real_root(l, n)
    eye = np.eye(b.shape[0])
    eigs, nulls = [], []
    for k in range(l):
        lam = cmath.exp(2j * math.pi * k / l) * r
        eigs.append(lam)
        nulls.append(b.shape[0] - gauss_rank(b - lam * eye, tol))
    return SpectralReport(l, n, eigs, nulls, tol)


def power_residual_rank(l: int, n: int, tol: float = DEFAULT_TOL, limit: int | None = None) -> int:
    """Numeric rank of B_n^l - n*I, measured against the scale n."""
    b = to_numeric(build_B(l, n, limit))
    resid = np.linalg.matrix_power(b, l) - n * np.eye(b.shape[0])
    return gauss_rank(resid, tol, scale=float(n))


@dataclass
class EigenWitness:
    lam: complex
    vector: np.ndarray = field(repr=False)
    residual: float
    subset: list[int]

    def to_dict(self) -> dict:
        return {
            "lambda": [self.lam.real, self.lam.imag],
            "abs_lambda": abs(self.lam),
            "residual": self.residual,
            "subset": self.subset,
            "vector": [[round(z.real, 12), round(z.imag, 12)] for z in self.vector],
        }


def intersection_witness(
    l: int, n: int, s: VertexSubset, tol: float = DEFAULT_TOL, limit: int | None = None
) -> EigenWitness | None:
    """An eigenvector for the real root of n that vanishes off s, restricted to s."""
    if s.size < 1:
        raise InvalidArgument("subset must be nonempty")
    bm = build_B(l, n, limit)
    if s.universe != bm.dim:
        raise InvalidArgument(f"subset universe {s.universe} != {bm.dim}")
    b = to_numeric(bm)
    lam = _real_root(l, n)
    basis = null_space(b - lam * np.eye(bm.dim), tol)
    if basis.shape[1] == 0:
        return None
    inside = s.indices()
    outside = s.complement().indices()
    combos = null_space(basis[outside, :], tol)
    if combos.shape[1] == 0:
        return None
    v = basis @ combos[:, 0]
    w = v[inside]
    norm = np.linalg.norm(w)
    if norm <= tol:
        return None
    w = w / norm
    minor = b[np.ix_(inside, inside)]
    residual = float(np.linalg.norm(minor @ w - lam * w))
    return EigenWitness(complex(lam), w, residual, inside.tolist())


def minor_norm_bound(l: int, n: int, s: VertexSubset, limit: int | None = None) -> tuple[int, int]:
    """(max row l1-norm, max column l1-norm) of the s-by-s minor of B_n.

    Every nonzero has modulus exactly 1, so these are nonzero counts.
    """
    if s.size < 1:
        raise InvalidArgument("subset must be nonempty")
    bm = build_B(l, n, limit)
    if s.universe != bm.dim:
        raise InvalidArgument(f"subset universe {s.universe} != {bm.dim}")
    idx = s.indices()
    minor = abs_pattern(bm)[np.ix_(idx, idx)].astype(np.int64)
    return int(minor.sum(axis=1).max()), int(minor.sum(axis=0).max())
