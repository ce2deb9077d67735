"""q-analogue magic matrices over roots of unity and induced-subgraph degree checks on powers of directed cycles."""

__version__ = "0.1.0"

from ._config import InvalidArgument, ResourceLimitError
from .cyclotomic import CycInt, IntPoly, cyc_add, cyc_mul, cyc_reduce, cyc_root_power, cyc_to_complex, cyclotomic_poly
from .qmatrix import (
    CycMatrix,
    RootMatrix,
    abs_pattern,
    build_B,
    build_x,
    build_y,
    kron,
    mat_mul_exact,
    mat_pow_exact,
    tilde_lift,
    verify_power_identity,
)
from .cyclegraph import (
    DiGraph,
    VertexCode,
    VertexSubset,
    build_cycle_power,
    induced_degree_stats,
    referee_independent_set,
    verify_independent,
    verify_pattern_equivalence,
)
from .spectral import eigen_multiplicities, gauss_rank, intersection_witness, minor_norm_bound, null_space, to_numeric
from .extremal import (
    degree_bound,
    search_min_max_degree,
    verify_theorem_exhaustive,
    verify_theorem_sampled,
)
