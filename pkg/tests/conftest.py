import random

import pytest
from hypothesis import settings, strategies as st

from order_regular import BinaryMatrix, RegularityKind
from order_regular.search import SearchConfig, branch_search

settings.register_profile("default", deadline=None)
settings.load_profile("default")


def matrices(max_rows=8, max_cols=6, min_rows=1):
    """Hypothesis strategy for arbitrary binary matrices."""

    @st.composite
    def build(draw):
        n = draw(st.integers(1, max_cols))
        m = draw(st.integers(min_rows, max_rows))
        rows = draw(st.lists(st.integers(0, (1 << n) - 1), min_size=m, max_size=m))
        return BinaryMatrix(n, tuple(rows))

    return build()


def random_matrix(rng, max_rows, max_cols):
    n = rng.randint(1, max_cols)
    m = rng.randint(1, max_rows)
    return BinaryMatrix(n, tuple(rng.getrandbits(n) for _ in range(m)))


def random_regular(rng, kind, n, node_limit=400):
    """A starred matrix of ``kind`` found by a short randomized search."""
    out = branch_search(
        SearchConfig(kind=kind.star, n=n, seed=rng.randrange(1, 2**31), node_limit=node_limit, symmetry=rng.random() < 0.5)
    )
    return out.best


@pytest.fixture(scope="session")
def or_pool():
    """OR matrices of assorted sizes (starred search results with the duplicate row dropped)."""
    rng = random.Random(2024)
    pool = []
    for _ in range(60):
        n = rng.randint(1, 6)
        m = random_regular(rng, RegularityKind.ORSTAR, n)
        pool.append(m.head(m.n_rows - 1))
    return pool


@pytest.fixture(scope="session")
def sor_star_pool():
    rng = random.Random(77)
    return [random_regular(rng, RegularityKind.SORSTAR, rng.randint(2, 7), node_limit=2000) for _ in range(40)]


# one line per acceptance criterion, printed after the run
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
