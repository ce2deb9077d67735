from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings

from qmagic import InvalidArgument, ResourceLimitError
from qmagic.cyclotomic import CycInt, cyc_root_power
from qmagic.qmatrix import (
    CycMatrix,
    RootMatrix,
    abs_pattern,
    build_B,
    build_x,
    build_y,
    from_dump,
    identity,
    kron,
    mat_mul_exact,
    mat_pow_exact,
    tilde_lift,
    to_dump,
    verify_power_identity,
)
from qmagic.spectral import to_numeric

from conftest import random_root_matrix, root_matrices

GOLDEN = Path(__file__).parent / "golden"


def dense(m):
    """Complex oracle for any exact matrix."""
    if isinstance(m, RootMatrix):
        return to_numeric(m)
    l = m.order
    powers = np.exp(2j * np.pi * np.arange(m.coeffs.shape[2]) / l)
    return m.coeffs.astype(np.complex128) @ powers


def test_build_x_y_small():
    assert build_x(2).triples() == [(0, 0, 0), (1, 1, 1)]
    assert build_x(3).triples() == [(0, 0, 0), (1, 1, 1), (2, 2, 2)]
    assert build_y(3).triples() == [(0, 1, 0), (1, 2, 0), (2, 0, 0)]
    assert build_y(2).triples() == [(0, 1, 0), (1, 0, 0)]


def test_x_and_y_powers_are_identity():
    assert mat_pow_exact(build_x(2), 2).is_scalar_identity(1)
    assert mat_pow_exact(build_y(4), 4).is_scalar_identity(1)
    assert mat_pow_exact(build_y(5), 5).is_scalar_identity(1)
    assert not mat_pow_exact(build_y(5), 4).is_scalar_identity(1)


def test_kron_identity_left_is_block_diagonal(rng):
    a = random_root_matrix(rng, 3, 3)
    k = kron(identity(3, 3), a)
    for blk in range(3):
        for r, row in enumerate(a.rows):
            assert k.rows[blk * 3 + r] == tuple((blk * 3 + c, e) for c, e in row)


def test_kron_x_y_l2():
    # hand expansion: [[y, 0], [0, -y]]
    assert kron(build_x(2), build_y(2)).triples() == [(0, 1, 0), (1, 0, 0), (2, 3, 1), (3, 2, 1)]


@given(root_matrices())
@settings(max_examples=40, deadline=None)
def test_kron_matches_numeric(a):
    b = build_y(a.order)
    assert np.allclose(to_numeric(kron(a, b)), np.kron(to_numeric(a), to_numeric(b)))
    assert np.array_equal(kron(a, identity(a.order, 2)).row_counts(), np.repeat(a.row_counts(), 2))


def test_kron_order_mismatch():
    with pytest.raises(InvalidArgument):
        kron(build_x(2), build_x(3))


def test_tilde_lift_l2():
    b2 = tilde_lift(build_y(2))
    signs = np.real(to_numeric(b2)).round().astype(int)
    assert signs.tolist() == [[0, 1, 1, 0], [1, 0, 0, 1], [1, 0, 0, -1], [0, 1, -1, 0]]
    assert b2 == build_B(2, 2)


def test_tilde_lift_of_zero_is_y():
    zero = RootMatrix.from_entries(3, 1, {})
    assert tilde_lift(zero) == build_y(3)


@given(root_matrices())
@settings(max_examples=40, deadline=None)
def test_tilde_lift_adds_one_per_row(a):
    t = tilde_lift(a)
    assert t.dim == a.order * a.dim
    assert np.array_equal(t.row_counts(), np.tile(a.row_counts(), a.order) + 1)


def test_build_B_base_and_structure():
    assert build_B(2, 1) == build_y(2)
    b = build_B(3, 2)
    assert b.dim == 9
    assert (b.row_counts() == 2).all() and (b.col_counts() == 2).all()


@pytest.mark.parametrize("l,n", [(2, 5), (3, 4), (4, 3), (5, 2), (7, 2)])
def test_build_B_entries_are_roots_and_regular(l, n):
    b = build_B(l, n)
    assert all(0 <= k < l for _, _, k in b.triples())
    assert (b.row_counts() == n).all() and (b.col_counts() == n).all()


def test_build_B_limit():
    with pytest.raises(ResourceLimitError):
        build_B(2, 13)
    with pytest.raises(ResourceLimitError):
        build_B(3, 3, limit=20)
    with pytest.raises(InvalidArgument):
        build_B(1, 2)


@pytest.mark.parametrize("l", range(2, 17))
def test_q_commutation_constant(l):
    x, y = build_x(l), build_y(l)
    c = cyc_root_power(l, l - 1)
    assert mat_mul_exact(x, y) == mat_mul_exact(y, x).scale(c)
    if l > 2:
        assert mat_mul_exact(x, y) != mat_mul_exact(y, x).scale(cyc_root_power(l, 1))


def test_xy_vs_yx_l3():
    x, y = build_x(3), build_y(3)
    assert mat_mul_exact(x, y) == mat_mul_exact(y, x).scale(cyc_root_power(3, 2))


@given(root_matrices(max_dim=3))
@settings(max_examples=30, deadline=None)
def test_lifted_q_commutation(a):
    l = a.order
    xa = kron(build_x(l), a)
    yi = kron(build_y(l), identity(l, a.dim))
    assert mat_mul_exact(xa, yi) == mat_mul_exact(yi, xa).scale(cyc_root_power(l, l - 1))


@given(root_matrices(max_dim=3))
@settings(max_examples=30, deadline=None)
def test_collapse_identity(a):
    l = a.order
    lhs = mat_pow_exact(tilde_lift(a), l)
    rhs = kron(identity(l, l), mat_pow_exact(a, l) + CycMatrix.identity(l, a.dim))
    assert lhs == rhs


@given(root_matrices(max_dim=4))
@settings(max_examples=40, deadline=None)
def test_exact_product_matches_numeric(a):
    b = tilde_lift(a)
    c = mat_mul_exact(b, b)
    assert np.allclose(dense(c), to_numeric(b) @ to_numeric(b), atol=1e-9)
    cc = mat_mul_exact(c, c)
    assert np.allclose(dense(cc), dense(c) @ dense(c), atol=1e-8)


def test_mat_mul_mismatch():
    with pytest.raises(InvalidArgument):
        mat_mul_exact(build_x(3), build_x(2))
    with pytest.raises(InvalidArgument):
        mat_mul_exact(build_x(3), build_B(3, 2))
    with pytest.raises(InvalidArgument):
        mat_pow_exact(build_x(3), 0)


def test_object_dtype_path_is_exact():
    # entries ~ 2^40 so products overflow int64 and must switch to Python ints
    big = CycMatrix(3, np.full((2, 2, 2), 1 << 40, dtype=np.int64))
    prod = mat_mul_exact(big, big)
    assert prod.coeffs.dtype == object
    # exact check of one entry by hand: (a + b q)^2 summed twice, a = b = 2^40
    s = CycInt(3, (1 << 40, 1 << 40))
    assert prod.entry(0, 0) == s * s + s * s


def test_power_identity_examples():
    b = mat_pow_exact(build_B(3, 2), 3)
    assert b.is_scalar_identity(2)
    for l, n in [(2, 3), (3, 1), (5, 2)]:
        rep = verify_power_identity(l, n)
        assert rep.passed and rep.dim == l**n and rep.first_discrepancy is None


def test_power_identity_detects_wrong_power():
    # B_2 cubed at l=2 is 2 * B_2, not a scalar
    b = build_B(2, 2)
    assert not mat_pow_exact(b, 3).is_scalar_identity(2)
    assert mat_pow_exact(b, 3).first_discrepancy(CycMatrix.identity(2, 4, 2)) == (0, 0)


def test_abs_pattern():
    for l in (2, 3, 5):
        assert np.array_equal(abs_pattern(build_x(l)), np.eye(l, dtype=np.uint8))
    assert abs_pattern(build_B(2, 1)).tolist() == [[0, 1], [1, 0]]
    assert (abs_pattern(build_B(3, 3)).sum(axis=1) == 3).all()


def test_dump_roundtrip():
    b = build_B(3, 2)
    text = to_dump(b)
    assert text.splitlines()[0] == "l=3 dim=9"
    assert from_dump(text) == b
    assert (GOLDEN / "B_2_2.dump").read_text() == to_dump(build_B(2, 2))


def test_dump_rejects_garbage():
    with pytest.raises(InvalidArgument):
        from_dump("")
    with pytest.raises(InvalidArgument):
        from_dump("l=3 dim=2\n0 1\n")
    with pytest.raises(InvalidArgument):
        from_dump("l=3 dim=2\n0 1 5\n")


def test_root_matrix_validation():
    with pytest.raises(InvalidArgument):
        RootMatrix(3, 2, (((1, 0), (0, 0)), ()))
    with pytest.raises(InvalidArgument):
        RootMatrix.from_entries(3, 2, [(0, 0, 1), (0, 0, 2)])
    assert RootMatrix.from_entries(3, 2, [(0, 1, 5)]).entry(0, 1) == 2
    assert build_x(3).entry(0, 1) is None
