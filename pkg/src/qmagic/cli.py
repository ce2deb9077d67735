"""Command-line front end.

Exit codes: 0 success, 1 a verification failed, 2 usage error,
3 resource limit exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from typing import Sequence

import numpy as np

from . import __version__
from ._config import (
    DEFAULT_DIM_LIMIT,
    DEFAULT_ENUM_LIMIT,
    DIM_LIMIT_ENV,
    ENUM_LIMIT_ENV,
    InvalidArgument,
    ResourceLimitError,
)
from .cyclegraph import (
    DiGraph,
    VertexCode,
    VertexSubset,
    build_cycle_power,
    parse_subset,
    referee_independent_set,
    verify_independent,
    verify_pattern_equivalence,
)
from .extremal import (
    degree_bound,
    search_min_max_degree,
    threshold_size,
    verify_theorem_exhaustive,
    verify_theorem_sampled,
)
from .qmatrix import build_B, to_dump, verify_power_identity
from .spectral import DEFAULT_TOL, eigen_multiplicities, intersection_witness, minor_norm_bound, power_residual_rank

SCHEMA_VERSION = 1

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3


class Outcome:
    def __init__(self, report: dict, passed: bool = True, rows: list[dict] | None = None, text: dict | None = None):
        self.report = report
        self.passed = passed
        self.rows = rows
        self.text = text or {}


def _positive(name: str, minimum: int = 1):
    def parse(raw: str) -> int:
        try:
            v = int(raw)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer, got {raw!r}") from None
        if v < minimum:
            raise argparse.ArgumentTypeError(f"{name} must be >= {minimum}, got {v}")
        return v

    return parse


def _positive_float(raw: str) -> float:
    try:
        v = float(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {raw!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError(f"tolerance must be positive, got {v}")
    return v


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=["json", "csv", "dump", "dot"], default="json", help="output format (default: json)")
    p.add_argument("--threads", type=_positive("--threads", 0), default=1, help="worker threads, 0 = auto (default: 1)")
    p.add_argument("--timing", action="store_true", help="add elapsed_ms to reports (breaks byte-identical output)")
    p.add_argument(
        "--dim-limit", type=_positive("--dim-limit"), default=None,
        help=f"max matrix/graph dimension (default: ${DIM_LIMIT_ENV} or {DEFAULT_DIM_LIMIT})",
    )
    p.add_argument(
        "--enum-limit", type=_positive("--enum-limit"), default=None,
        help=f"max subsets for exhaustive runs (default: ${ENUM_LIMIT_ENV} or {DEFAULT_ENUM_LIMIT})",
    )
    return p


def _ln(p: argparse.ArgumentParser, n_name: str = "n") -> None:
    p.add_argument("--l", type=_positive("--l", 2), required=True, help="cycle length / root order (>= 2)")
    p.add_argument(f"--{n_name}", type=_positive(f"--{n_name}"), required=True, help="Cartesian power (>= 1)")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="qmagic", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-b", parents=[common], help="build the matrix B_n")
    _ln(p)

    verify = sub.add_parser("verify", help="exact and exhaustive checks")
    vsub = verify.add_subparsers(dest="what", required=True)
    p = vsub.add_parser("identity", parents=[common], help="exact B_n^l = n*I")
    _ln(p)
    p = vsub.add_parser("pattern", parents=[common], help="|B_n| equals the adjacency matrix of C_l^n")
    _ln(p)
    p = vsub.add_parser("theorem", parents=[common], help="induced degree bound on threshold-size subsets")
    _ln(p)
    p.add_argument("--mode", choices=["exhaustive", "sampled"], default="exhaustive")
    p.add_argument("--samples", type=_positive("--samples"), default=10_000, help="sampled mode only (default: 10000)")
    p.add_argument("--seed", type=_positive("--seed", 0), default=0)

    p = sub.add_parser("spectral", parents=[common], help="eigenvalue multiplicities of B_n")
    _ln(p)
    p.add_argument("--tol", type=_positive_float, default=DEFAULT_TOL)

    p = sub.add_parser("witness", parents=[common], help="eigenvector supported on a subset, and the minor norm bound")
    _ln(p)
    p.add_argument("--subset", default=None, help="comma-separated vertex indices or @file; default: random threshold-size subset")
    p.add_argument("--seed", type=_positive("--seed", 0), default=0)
    p.add_argument("--tol", type=_positive_float, default=DEFAULT_TOL)

    p = sub.add_parser("indep-set", parents=[common], help="digit-sum class independent set")
    _ln(p, "m")

    p = sub.add_parser("search", parents=[common], help="local search for low induced max degree")
    _ln(p)
    p.add_argument("--size", type=_positive("--size"), default=None, help="subset size (default: threshold size)")
    p.add_argument("--iters", type=_positive("--iters", 0), default=10_000)
    p.add_argument("--seed", type=_positive("--seed", 0), default=0)
    p.add_argument("--init", choices=["random", "referee"], default="random")
    p.add_argument("--accept", choices=["arcs", "maxdeg"], default="arcs")
    return parser


def _digits(l: int, n: int, v: int) -> str:
    return str(VertexCode.from_index(l, n, v))


def _pattern_graph(l: int, n: int, limit: int | None) -> DiGraph:
    b = build_B(l, n, limit)
    labels = tuple(_digits(l, n, v) for v in range(b.dim))
    return DiGraph(b.dim, tuple(tuple(c for c, _ in row) for row in b.rows), labels)


def _cmd_build_b(a) -> Outcome:
    b = build_B(a.l, a.n, a.dim_limit)
    triples = b.triples()
    report = {"l": a.l, "n": a.n, "dim": b.dim, "nnz": b.nnz, "entries": [list(t) for t in triples]}
    rows = [{"row": r, "col": c, "exponent": k} for r, c, k in triples]
    return Outcome(report, rows=rows, text={"dump": to_dump(b), "dot": _pattern_graph(a.l, a.n, a.dim_limit).to_dot(f"B_{a.l}_{a.n}")})


def _cmd_identity(a) -> Outcome:
    rep = verify_power_identity(a.l, a.n, a.dim_limit)
    return Outcome(rep.to_dict(a.timing), rep.passed)


def _cmd_pattern(a) -> Outcome:
    t0 = time.perf_counter()
    rep = {"check": "abs(B_n)=M(C_l^n)", **verify_pattern_equivalence(a.l, a.n, a.dim_limit)}
    if a.timing:
        rep["elapsed_ms"] = round((time.perf_counter() - t0) * 1e3, 3)
    dot = build_cycle_power(a.l, a.n, a.dim_limit).to_dot(f"C_{a.l}_{a.n}")
    return Outcome(rep, rep["pass"], text={"dot": dot})


def _cmd_theorem(a) -> Outcome:
    if a.mode == "exhaustive":
        rep = verify_theorem_exhaustive(a.l, a.n, limit=a.enum_limit, threads=a.threads)
    else:
        rep = verify_theorem_sampled(a.l, a.n, a.samples, a.seed, threads=a.threads, limit=a.dim_limit)
    return Outcome(rep.to_dict(a.timing), rep.theorem_holds)


def _cmd_spectral(a) -> Outcome:
    t0 = time.perf_counter()
    rep = eigen_multiplicities(a.l, a.n, a.tol, a.dim_limit)
    d = rep.to_dict()
    d["power_residual_rank"] = power_residual_rank(a.l, a.n, a.tol, a.dim_limit)
    d["pass"] = d["pass"] and d["power_residual_rank"] == 0
    if a.timing:
        d["elapsed_ms"] = round((time.perf_counter() - t0) * 1e3, 3)
    rows = [
        {"k": k, "re": round(z.real, 12), "im": round(z.imag, 12), "nullity": m}
        for k, (z, m) in enumerate(zip(rep.eigenvalues, rep.nullities))
    ]
    return Outcome(d, d["pass"], rows=rows)


def _cmd_witness(a) -> Outcome:
    dim = a.l**a.n
    size = threshold_size(a.l, a.n)
    if a.subset is not None:
        s = parse_subset(a.subset, dim)
    else:
        rng = np.random.default_rng(a.seed)
        s = VertexSubset.from_indices(dim, rng.choice(dim, size, replace=False))
    if s.size < 1:
        raise InvalidArgument("subset must be nonempty")
    bound, ceil_bound = degree_bound(a.l, a.n)
    w = intersection_witness(a.l, a.n, s, a.tol, a.dim_limit)
    row_norm, col_norm = minor_norm_bound(a.l, a.n, s, a.dim_limit)
    at_threshold = s.size >= size
    ok = True
    if at_threshold:
        ok = w is not None and w.residual <= a.tol and max(row_norm, col_norm) >= bound - 1e-6
    report = {
        "l": a.l,
        "n": a.n,
        "subset_size": s.size,
        "threshold_size": size,
        "bound": bound,
        "ceil_bound": ceil_bound,
        "witness": None if w is None else w.to_dict(),
        "max_row_l1": row_norm,
        "max_col_l1": col_norm,
        "pass": ok,
    }
    return Outcome(report, ok)


def _cmd_indep_set(a) -> Outcome:
    g = build_cycle_power(a.l, a.m, a.dim_limit)
    s = referee_independent_set(a.l, a.m)
    indep = verify_independent(g, s)
    report = {
        "l": a.l,
        "m": a.m,
        "size": s.size,
        "floor_formula_size": ((a.l - 1) // 2) * a.l ** (a.m - 1),
        "independent": indep,
        "subset": s.indices().tolist(),
    }
    rows = [{"vertex": int(v), "digits": _digits(a.l, a.m, int(v))} for v in s.indices()]
    return Outcome(report, indep, rows=rows, text={"dot": g.to_dot(f"C_{a.l}_{a.m}", highlight=s)})


def _cmd_search(a) -> Outcome:
    size = a.size if a.size is not None else threshold_size(a.l, a.n)
    res = search_min_max_degree(a.l, a.n, size, a.iters, a.seed, init=a.init, accept=a.accept, limit=a.dim_limit)
    return Outcome(res.to_dict())


_DISPATCH = {
    "build-b": _cmd_build_b,
    ("verify", "identity"): _cmd_identity,
    ("verify", "pattern"): _cmd_pattern,
    ("verify", "theorem"): _cmd_theorem,
    "spectral": _cmd_spectral,
    "witness": _cmd_witness,
    "indep-set": _cmd_indep_set,
    "search": _cmd_search,
}


def _csv(outcome: Outcome) -> str:
    buf = io.StringIO()
    if outcome.rows is not None:
        rows = outcome.rows
    else:
        rows = [{k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in outcome.report.items()}]
    fields = list(rows[0]) if rows else []
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def render(outcome: Outcome, fmt: str) -> str:
    if fmt == "json":
        return json.dumps({"schema_version": SCHEMA_VERSION, **outcome.report}, indent=2) + "\n"
    if fmt == "csv":
        return _csv(outcome)
    if fmt in outcome.text:
        return outcome.text[fmt]
    raise InvalidArgument(f"format {fmt!r} is not available for this command")


def run(argv: Sequence[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    key = args.command if args.command != "verify" else ("verify", args.what)
    try:
        outcome = _DISPATCH[key](args)
        text = render(outcome, args.format)
    except InvalidArgument as exc:
        print(f"qmagic: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        print(f"qmagic: resource limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    stdout.write(text)
    if not outcome.passed:
        print("qmagic: verification FAILED", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
