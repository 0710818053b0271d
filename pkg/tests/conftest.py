import numpy as np
import pytest
from hypothesis import strategies as st

from hardymult.arith import DirichletPoly
from hardymult.bohr import TorusPoly


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


small_int_coeff = st.builds(complex, st.integers(-6, 6), st.integers(-6, 6))
float_coeff = st.builds(
    complex,
    st.floats(-3, 3, allow_nan=False, allow_infinity=False),
    st.floats(-3, 3, allow_nan=False, allow_infinity=False),
)


def dirichlet_polys(max_n=60, max_terms=6, coeffs=small_int_coeff):
    return st.dictionaries(st.integers(1, max_n), coeffs, max_size=max_terms).map(DirichletPoly)


def torus_polys(nvars=2, degree=3, max_terms=6, coeffs=float_coeff):
    alpha = st.tuples(*[st.integers(0, degree)] * nvars)
    return st.dictionaries(alpha, coeffs, min_size=1, max_size=max_terms).map(
        lambda d: TorusPoly(d, nvars=nvars)
    )


# filled by the acceptance tests, echoed at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
