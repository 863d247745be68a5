import numpy as np
import pytest

from conftest import random_module

from torfib.algebra import monomial_quotient_algebra
from torfib.fdmodule import (
    IsoVerdict,
    free_module,
    iso_probably,
    maximal_ideal_module,
    minimal_generators,
    module_from_presentation,
    presentation_array,
    residue_field,
    zero_module,
)
from torfib.resolution import ResourceLimit, betti_numbers, minimal_resolution, pd_detect, syzygy


def dense_betti(M, length):
    """Betti numbers by repeatedly taking the kernel of a minimal cover, all dense."""
    out = []
    for _ in range(length + 1):
        cov = minimal_generators(M)
        out.append(cov.count)
        if cov.count == 0:
            break
        F = free_module(M.algebra, cov.count)
        M = F.submodule(cov.cover.kernel())
    return out + [0] * (length + 1 - len(out))


def test_free_module_resolution(x3):
    res = minimal_resolution(free_module(x3, 2), 4)
    assert res.betti == [2, 0, 0, 0, 0]
    assert res.terminated and res.pd == 0


def test_residue_field_over_truncated_polynomial(x3):
    res = minimal_resolution(residue_field(x3), 6)
    assert res.betti == [1] * 7
    res.check()
    # the differentials alternate between x and x^2
    x, xx = x3.labels.index("x"), x3.labels.index("x^2")
    for i in range(1, 7):
        d = res.differential(i)
        assert d.shape == (1, 1, 3)
        assert np.count_nonzero(d) == 1 and d[0, 0, x if i % 2 else xx] != 0


def test_residue_field_over_square_zero(fib_x2_y2):
    res = minimal_resolution(residue_field(fib_x2_y2.R), 6)
    assert res.betti == [2**i for i in range(7)]
    res.check()


def test_syzygy_basics(x3, fib_x2_y2):
    k = residue_field(x3)
    assert syzygy(k, 0) is k
    assert iso_probably(syzygy(k, 1), maximal_ideal_module(x3)) is IsoVerdict.ISOMORPHIC
    assert syzygy(residue_field(fib_x2_y2.R), 2).dim == 4
    with pytest.raises(ValueError):
        syzygy(k, -1)


def test_pd_detect(x3, sq0):
    assert pd_detect(free_module(x3, 1), 3) == 0
    for A in (x3, sq0):
        for b in (1, 3, 5):
            assert pd_detect(residue_field(A), b) is None
    unit = module_from_presentation(x3, presentation_array(x3, [[{"1": 1}]]))
    assert unit.dim == 0 and pd_detect(unit, 2) == 0
    assert minimal_resolution(zero_module(x3), 3).betti == [0, 0, 0, 0]


@pytest.mark.parametrize("seed", range(8))
@pytest.mark.parametrize(
    "rels", [["x^3"], ["x^2", "y^2"], ["x^2", "x*y", "y^3"], ["x^2", "y^2", "z^2", "x*y"]]
)
def test_betti_agree_with_dense_oracle(rels, seed):
    variables = sorted({f[0] for r in rels for f in r.split("*")})
    A = monomial_quotient_algebra(5, variables, rels)
    M = random_module(A, seed)
    res = minimal_resolution(M, 4)
    assert res.betti == dense_betti(M, 4)
    res.check()
    # rank alternation: dim Omega^i = beta_{i-1} dim A - dim Omega^{i-1}
    dims = [M.dim] + [res.syzygy_dim(i) for i in range(1, 5)]
    for i in range(1, 5):
        assert dims[i] == res.betti[i - 1] * A.dim - dims[i - 1]


def test_resolution_is_deterministic(fib_canonical):
    M = random_module(fib_canonical.R, 3)
    a, b = minimal_resolution(M, 5), minimal_resolution(M, 5)
    assert a.betti == b.betti
    for i in range(1, 6):
        assert np.array_equal(a.differential(i), b.differential(i))


def test_budget(fib_x2_y2):
    with pytest.raises(ResourceLimit):
        minimal_resolution(residue_field(fib_x2_y2.R), 12, budget=1000)
    assert betti_numbers(residue_field(fib_x2_y2.R), 3) == [1, 2, 4, 8]
