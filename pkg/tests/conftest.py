"""Shared fixtures and independent oracles for the test suite."""

import numpy as np
import pytest
from hypothesis import settings

from torfib.algebra import fiber_product, monomial_quotient_algebra
from torfib.fdmodule import module_from_presentation
from torfib.rng import SplitMix64

settings.register_profile("torfib", deadline=None, max_examples=60)
settings.load_profile("torfib")


def naive_rank(rows, p):
    """Gaussian elimination on Python integers, written independently of the engine."""
    m = [[int(v) % p for v in r] for r in np.asarray(rows).tolist()]
    rank, ncols = 0, len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(m)) if m[r][c]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = pow(m[rank][c], p - 2, p)
        m[rank] = [v * inv % p for v in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][c]:
                f = m[r][c]
                m[r] = [(a - f * b) % p for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def random_module(A, seed, rows=2, cols=3):
    rng = SplitMix64(seed)
    P = np.zeros((rows, cols, A.dim), dtype=np.int64)
    for i in range(rows):
        for j in range(cols):
            P[i, j, 1 + rng.below(A.dim - 1)] = 1 + rng.below(A.p - 1)
    return module_from_presentation(A, P)


@pytest.fixture(scope="session")
def x2():
    return monomial_quotient_algebra(5, ["x"], ["x^2"])


@pytest.fixture(scope="session")
def x3():
    return monomial_quotient_algebra(5, ["x"], ["x^3"])


@pytest.fixture(scope="session")
def sq0():
    """GF(5)[y,z]/(y^2, yz, z^2), the square-zero algebra of embedding dimension 2."""
    return monomial_quotient_algebra(5, ["y", "z"], ["y^2", "y*z", "z^2"])


@pytest.fixture(scope="session")
def fib_x2_y2():
    S = monomial_quotient_algebra(5, ["x"], ["x^2"])
    T = monomial_quotient_algebra(5, ["y"], ["y^2"])
    return fiber_product(S, T)


@pytest.fixture(scope="session")
def fib_canonical():
    """S = GF(5)[x]/(x^3), T = GF(5)[y,z]/(y^2, yz, z^2)."""
    S = monomial_quotient_algebra(5, ["x"], ["x^3"])
    T = monomial_quotient_algebra(5, ["y", "z"], ["y^2", "y*z", "z^2"])
    return fiber_product(S, T)


# acceptance criteria report: one line per criterion, printed after the run

_CRITERIA = []


@pytest.fixture
def criterion(request):
    """``criterion(n, title, ok, detail)`` records a result line and asserts ``ok``."""

    def record(number: int, title: str, ok: bool, detail: str = "") -> None:
        line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}" + (f"  [{detail}]" if detail else "")
        _CRITERIA.append((number, line))
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_CRITERIA):
        terminalreporter.write_line(line)
