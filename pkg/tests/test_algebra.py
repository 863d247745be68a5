import itertools

import numpy as np
import pytest

from torfib.algebra import (
    AlgebraError,
    InfiniteDimensionError,
    SettingViolation,
    algebra_from_table,
    fiber_product,
    is_nzd,
    monomial_quotient_algebra,
)
from torfib.exactla import matmul
from torfib.rng import SplitMix64


def test_smallest_non_field(x2):
    assert x2.dim == 2 and list(x2.labels) == ["1", "x"]
    x = x2.basis_element(1)
    assert not x2.mul(x, x).any()
    x2.validate()


def test_square_zero_algebra(sq0):
    assert sq0.dim == 3
    assert sq0.power_dims() == [2]
    sq0.validate()


def test_truncated_polynomial_algebra(x3):
    x, xx = x3.basis_element(1), x3.basis_element(2)
    assert x3.dim == 3
    assert np.array_equal(x3.mul(x, x), xx)
    assert not x3.mul(x, xx).any()


def test_errors():
    with pytest.raises(InfiniteDimensionError):
        monomial_quotient_algebra(5, ["x", "y"], ["x^2"])
    with pytest.raises(ValueError):
        monomial_quotient_algebra(4, ["x"], ["x^2"])
    with pytest.raises(AlgebraError):
        monomial_quotient_algebra(5, ["x"], ["1"])
    k = monomial_quotient_algebra(5, ["x"], ["x"])
    with pytest.raises(SettingViolation):
        fiber_product(k, monomial_quotient_algebra(5, ["y"], ["y^2"]))
    with pytest.raises(AlgebraError):
        fiber_product(monomial_quotient_algebra(3, ["x"], ["x^2"]), monomial_quotient_algebra(5, ["y"], ["y^2"]))


def test_fiber_of_two_dual_numbers_is_square_zero(fib_x2_y2):
    """R must match GF(5)[x,y]/(x^2, xy, y^2) built directly from monomials."""
    R = fib_x2_y2.R
    direct = monomial_quotient_algebra(5, ["x", "y"], ["x^2", "x*y", "y^2"])
    assert R.dim == 3
    perm = [direct.labels.index(lab) for lab in R.labels]
    assert np.array_equal(R.mult, direct.mult[np.ix_(perm, perm, perm)])
    fib_x2_y2.validate()


def test_fiber_dimensions(fib_canonical):
    f = fib_canonical
    assert f.R.dim == 5 and f.ideal_I.dim == 2 and f.ideal_J.dim == 2
    f.validate()


def test_projections_kill_the_other_ideal(fib_canonical):
    f = fib_canonical
    assert not matmul(f.eta_S.matrix, f.ideal_J.basis.T, 5).any()
    assert not matmul(f.eta_T.matrix, f.ideal_I.basis.T, 5).any()


def test_table_algebra_validation():
    mult = np.zeros((2, 2, 2), dtype=np.int64)
    mult[0, 0, 0] = mult[0, 1, 1] = mult[1, 0, 1] = 1
    A = algebra_from_table(5, ["1", "e"], mult)
    assert A.dim == 2
    bad = mult.copy()
    bad[1, 1, 0] = 1  # e^2 = 1 makes e a unit, not in the maximal ideal
    with pytest.raises(AlgebraError):
        algebra_from_table(5, ["1", "e"], bad)


def test_nzd_basics(x2):
    assert is_nzd(x2, x2.unit())
    assert not is_nzd(x2, x2.basis_element(1))


def test_nzd_in_fiber_product_is_componentwise(fib_canonical):
    f = fib_canonical
    rng = SplitMix64(7)
    for _ in range(40):
        a = np.array([rng.below(5) for _ in range(f.R.dim)], dtype=np.int64)
        s, t = f.eta_S(a), f.eta_T(a)
        assert is_nzd(f.R, a) == (is_nzd(f.S, s) and is_nzd(f.T, t))
        # over artinian rings this is the unit test
        assert is_nzd(f.R, a) == bool(a[0] % 5)


@pytest.mark.parametrize("rels", [["x^2"], ["x^4"], ["x^2", "y^3"], ["x^2", "x*y", "y^2"], ["x^3", "x*y", "y^2"]])
def test_invariants_and_depth(rels):
    variables = sorted({v[0] for r in rels for v in r.split("*")})
    A = monomial_quotient_algebra(5, variables, rels)
    A.validate()
    assert A.depth() == 0 and not A.is_dvr()
    # the residue field is one-dimensional: m has codimension 1
    assert A.maxideal.dim == A.dim - 1
    # structure constants are commutative and associative on all triples
    for i, j, k in itertools.product(range(A.dim), repeat=3):
        ab = A.mul(A.basis_element(i), A.basis_element(j))
        assert np.array_equal(A.mul(ab, A.basis_element(k)), A.mul(A.basis_element(i), A.mul(A.basis_element(j), A.basis_element(k))))
