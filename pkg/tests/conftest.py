import numpy as np
import pytest
from hypothesis import strategies as st

from qmagic.qmatrix import RootMatrix

ACCEPTANCE_LINES: list[str] = []


@st.composite
def root_matrices(draw, order=None, max_dim=4):
    l = order if order is not None else draw(st.integers(2, 7))
    dim = draw(st.integers(1, max_dim))
    cells = draw(st.lists(st.tuples(st.integers(0, dim - 1), st.integers(0, dim - 1), st.integers(0, l - 1)), max_size=dim * dim))
    entries = {(r, c): k for r, c, k in cells}
    return RootMatrix.from_entries(l, dim, entries)


def random_root_matrix(rng: np.random.Generator, l: int, dim: int, density: float = 0.5) -> RootMatrix:
    mask = rng.random((dim, dim)) < density
    exps = rng.integers(0, l, (dim, dim))
    return RootMatrix.from_entries(l, dim, {(int(r), int(c)): int(exps[r, c]) for r, c in np.argwhere(mask)})


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
