import numpy as np
import pytest

from conftest import random_module
from torfib.corpus import MODULE_NAMES, CorpusParams, Instance
from torfib.fdmodule import (
    IsoVerdict,
    direct_sum,
    free_module,
    is_free,
    iso_probably,
    power,
    residue_field,
    restrict_scalars,
    zero_module,
)
from torfib.resolution import minimal_resolution
from torfib.theorems import (
    Status,
    Workspace,
    check_balance,
    check_higher_theorems,
    check_instance,
    check_structural_formulas,
    check_vanishing_theorems,
    dk_split,
)
from torfib.tor import tor_dims


def make_instance(fib, **mods):
    defaults = {
        "X": residue_field(fib.S),
        "Y": residue_field(fib.S),
        "Z": residue_field(fib.T),
        "W": free_module(fib.T, 1),
        "M": residue_field(fib.R),
        "N": free_module(fib.R, 1),
    }
    defaults.update(mods)
    return Instance(0, CorpusParams(count=1), fib, defaults, {n: None for n in MODULE_NAMES})


def by_name(reports):
    return {r.name: r for r in reports}


def test_split_of_free_module_is_zero(fib_canonical):
    sp = dk_split(free_module(fib_canonical.R, 2), fib_canonical)
    assert sp.X.dim == 0 and sp.Z.dim == 0 and sp.syzygy_dim == 0


def test_split_of_residue_field(fib_x2_y2):
    f = fib_x2_y2
    sp = dk_split(residue_field(f.R), f)
    assert sp.syzygy_dim == 4 and sp.X.dim == 2 and sp.Z.dim == 2
    assert iso_probably(sp.X, power(residue_field(f.S), 2)) is IsoVerdict.ISOMORPHIC
    assert iso_probably(sp.Z, power(residue_field(f.T), 2)) is IsoVerdict.ISOMORPHIC


def _check_split_postconditions(M, f):
    sp = dk_split(M, f)
    res = minimal_resolution(M, 2)
    W = res.syzygy_space(2)
    assert sp.syzygy_dim == W.dim == sp.X.dim + sp.Z.dim
    assert (sp.x_space & sp.z_space).dim == 0
    assert sp.x_space + sp.z_space == W
    # the S-part is killed by J and the T-part by I
    for space, ideal in ((sp.x_space, f.ideal_J), (sp.z_space, f.ideal_I)):
        if space.dim == 0:
            continue
        F = free_module(f.R, res.betti[1])
        acts = np.tensordot(ideal.basis, F.action, axes=1) % f.R.p
        assert not np.einsum("kab,vb->kva", acts, space.basis).any() % f.R.p
    return sp


def test_split_of_S_as_R_module(fib_canonical):
    f = fib_canonical
    _check_split_postconditions(restrict_scalars(f.eta_S, free_module(f.S, 1)), f)


@pytest.mark.parametrize("seed", range(10))
def test_split_postconditions_random(fib_canonical, seed):
    _check_split_postconditions(random_module(fib_canonical.R, seed), fib_canonical)


def test_split_rejects_modules_over_factors(fib_canonical):
    with pytest.raises(ValueError):
        dk_split(residue_field(fib_canonical.S), fib_canonical)


def test_structural_formulas_canonical(fib_canonical):
    inst = make_instance(fib_canonical)
    reps = by_name(check_structural_formulas(inst, bound=6))
    assert not [r.name for r in reps.values() if r.status is Status.FAIL]
    for name in ("syzygy_decomposition", "tor1_same_side", "tor1_mixed", "tor1_free_factor", "syzygy_shift"):
        assert reps[name].status is Status.PASS
    values = {lab: (lhs, rhs) for lab, lhs, rhs in reps["tor1_free_factor"].detail["values"]}
    assert values["S^1,Z"] == (2, 2)
    assert values["S^3,Z"] == (6, 6)
    assert set(reps["syzygy_decomposition"].detail["iso"].values()) == {"isomorphic"}


def test_free_pair_has_vanishing_tor1(fib_canonical):
    f = fib_canonical
    inst = make_instance(f, Y=free_module(f.S, 2), Z=free_module(f.T, 1))
    rep = by_name(check_structural_formulas(inst, bound=6))["tor1_free_pair"]
    assert rep.status is Status.PASS and rep.detail["hits"] >= 1
    YR, ZR = inst.lift(inst.Y), inst.lift(inst.Z)
    assert tor_dims(YR, ZR, 1, "both").dims[1] == 0


def test_zero_module_is_vacuous(fib_canonical):
    f = fib_canonical
    inst = make_instance(f, X=zero_module(f.S), Y=zero_module(f.S), Z=zero_module(f.T), W=zero_module(f.T))
    reps = by_name(check_vanishing_theorems(inst))
    for name in ("vanishing.same_side", "vanishing.even_mixed", "vanishing.odd_mixed", "vanishing.tor1_mixed"):
        assert reps[name].status is Status.INAPPLICABLE
    assert reps["vanishing.tor1_factors"].status is Status.PASS


def test_vanishing_examples(fib_canonical):
    f = fib_canonical
    inst = make_instance(f, Y=free_module(f.S, 1), Z=free_module(f.T, 1))
    ws = Workspace()
    reps = by_name(check_vanishing_theorems(inst, ws, bound=6))
    assert all(r.status is not Status.FAIL for r in reps.values())
    t = ws.tor(inst.lift(inst.Y), inst.lift(inst.Z), 6)
    assert t[1] == 0 and all(t[i] for i in range(2, 7))
    kk = ws.tor(inst.lift(residue_field(f.S)), inst.lift(residue_field(f.S)), 6)
    assert all(v >= 1 for v in kk)
    kS, kT = inst.lift(residue_field(f.S)), inst.lift(residue_field(f.T))
    assert ws.tor(kS, kT, 1)[1] != 0


def test_higher_theorems_with_free_module(fib_canonical):
    f = fib_canonical
    inst = make_instance(f, M=free_module(f.R, 1), N=random_module(f.R, 4))
    reps = by_name(check_higher_theorems(inst, bound=6))
    assert all(r.status is not Status.FAIL for r in reps.values())
    assert reps["pd_rigidity"].detail["hits"] >= 1
    assert reps["tor5_alternatives"].detail["hits"] >= 1


def test_nonfree_pair_has_nonvanishing_high_tor(fib_x2_y2):
    f = fib_x2_y2
    M, N = random_module(f.R, 1), random_module(f.R, 2)
    assert not is_free(M) and not is_free(N)
    t = tor_dims(M, N, 8, "both").dims
    assert all(t[m] for m in range(6, 9))


def test_torsionless_pair_has_nonvanishing_tor4(fib_x2_y2):
    f = fib_x2_y2
    k = residue_field(f.R)
    M = direct_sum(minimal_resolution(k, 1).syzygy(1), free_module(f.R, 1))
    N = minimal_resolution(k, 2).syzygy(2)
    inst = make_instance(f, M=M, N=N)
    rep = by_name(check_higher_theorems(inst, bound=6))["torsionless_tor4"]
    assert rep.detail["torsionless"]["M"] and rep.detail["torsionless"]["N"]
    assert rep.status is not Status.FAIL
    assert tor_dims(M, N, 4, "both").dims[4] != 0


def test_balance_and_full_instance(fib_x2_y2):
    inst = make_instance(fib_x2_y2, M=random_module(fib_x2_y2.R, 9))
    assert check_balance(inst).status is Status.PASS
    reps = check_instance(inst)
    assert [r.name for r in reps] == sorted(r.name for r in reps)
    assert not [r.name for r in reps if r.status is Status.FAIL]
    with pytest.raises(ValueError):
        check_instance(inst, bound=4)


def test_failure_carries_witness():
    from torfib.theorems import _equalities, _implication

    rep = _equalities("demo", "a = b", [("case", 1, 2)], {"ring": "R"})
    assert rep.status is Status.FAIL and rep.witness and rep.detail["failed"]
    rep = _implication("demo", "h => c", [(True, False, {"i": 1})], {"ring": "R"})
    assert rep.status is Status.FAIL and rep.to_json()["witness"] == {"ring": "R"}
    assert _implication("demo", "h => c", [(False, False, {})]).status is Status.INAPPLICABLE
