"""Finite-dimensional commutative local algebras over GF(p) and fiber products.

An algebra is stored by structure constants ``mult[i, j, l]`` (the coefficient
of basis element ``l`` in ``a_i * a_j``).  Basis element 0 is always the unit
and the remaining basis elements span the maximal ideal, so membership in the
maximal ideal is positional.  Elements are coefficient vectors over the basis.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .exactla import Subspace, check_prime, matmul, rank_array


class AlgebraError(ValueError):
    pass


class InfiniteDimensionError(AlgebraError):
    """The monomial ideal misses a pure power of some variable."""


class SettingViolation(AlgebraError):
    """A fiber product factor equals the residue field."""


_MONO_FACTOR = re.compile(r"^([A-Za-z_][A-Za-z_0-9]*)(?:\^(\d+))?$")


def parse_monomial(text: str, variables: Sequence[str]) -> tuple[int, ...]:
    """``"x^2*y"`` -> exponent vector over ``variables``."""
    exps = [0] * len(variables)
    text = text.strip()
    if text == "1":
        return tuple(exps)
    for factor in text.split("*"):
        m = _MONO_FACTOR.match(factor.strip())
        if not m or m.group(1) not in variables:
            raise AlgebraError(f"bad monomial {text!r} over variables {list(variables)}")
        exps[variables.index(m.group(1))] += int(m.group(2) or 1)
    return tuple(exps)


def monomial_label(exps: Sequence[int], variables: Sequence[str]) -> str:
    parts = []
    for v, e in zip(variables, exps):
        if e == 1:
            parts.append(v)
        elif e > 1:
            parts.append(f"{v}^{e}")
    return "*".join(parts) if parts else "1"


@dataclass(frozen=True, eq=False)
class FiniteLocalAlgebra:
    p: int
    labels: tuple[str, ...]
    mult: np.ndarray
    ideal_gens: tuple[int, ...]
    presentation: dict = field(default_factory=dict, compare=False)
    unit_index: int = 0

    def __post_init__(self):
        mult = np.mod(np.asarray(self.mult, dtype=np.int64), self.p)
        mult.setflags(write=False)
        object.__setattr__(self, "mult", mult)
        # lmul[i] is the matrix of multiplication by a_i (column convention)
        lmul = np.ascontiguousarray(mult.transpose(0, 2, 1))
        lmul.setflags(write=False)
        object.__setattr__(self, "lmul", lmul)

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def maxideal(self) -> Subspace:
        return Subspace(self.dim, self.p, np.eye(self.dim, dtype=np.int64)[1:], range(1, self.dim))

    def unit(self) -> np.ndarray:
        e = np.zeros(self.dim, dtype=np.int64)
        e[0] = 1
        return e

    def basis_element(self, i: int) -> np.ndarray:
        e = np.zeros(self.dim, dtype=np.int64)
        e[i] = 1
        return e

    def element(self, coeffs) -> np.ndarray:
        if isinstance(coeffs, dict):
            e = np.zeros(self.dim, dtype=np.int64)
            for lab, c in coeffs.items():
                e[self.labels.index(lab)] += c
            return np.mod(e, self.p)
        return np.mod(np.asarray(coeffs, dtype=np.int64), self.p)

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return matmul(self.mul_matrix(a), np.asarray(b, dtype=np.int64), self.p)

    def mul_matrix(self, a: np.ndarray) -> np.ndarray:
        """Matrix of multiplication by the element ``a``."""
        a = np.asarray(a, dtype=np.int64)
        return np.mod(np.tensordot(a, self.lmul, axes=1), self.p)

    def power_dims(self) -> list[int]:
        """Dimensions of m, m^2, m^3, ... down to the first zero power."""
        dims = []
        cur = self.maxideal
        while cur.dim:
            dims.append(cur.dim)
            imgs = [matmul(cur.basis, self.lmul[g].T, self.p) for g in self.ideal_gens]
            cur = Subspace.span(np.vstack(imgs), self.dim, self.p)
        return dims

    def loewy_length(self) -> int:
        return len(self.power_dims()) + 1

    def embedding_dim(self) -> int:
        dims = self.power_dims()
        if not dims:
            return 0
        return dims[0] - (dims[1] if len(dims) > 1 else 0)

    def is_field(self) -> bool:
        return self.dim == 1

    def depth(self) -> int:
        # artinian: every element of m is nilpotent, hence a zerodivisor
        return 0

    def is_dvr(self) -> bool:
        # zero-dimensional rings are never discrete valuation rings
        return False

    def socle(self) -> Subspace:
        ops = np.vstack([self.lmul[g] for g in self.ideal_gens]) if self.ideal_gens else np.zeros((0, self.dim))
        return Subspace.kernel(ops, self.p) if self.dim > 1 else Subspace.full(1, self.p)

    def validate(self) -> None:
        """Check every structural invariant; raise :class:`AlgebraError` on failure."""
        d, p, c = self.dim, self.p, self.mult
        if c.shape != (d, d, d):
            raise AlgebraError(f"structure constants have shape {c.shape}, expected {(d, d, d)}")
        if not np.array_equal(c, c.transpose(1, 0, 2)):
            raise AlgebraError("not commutative")
        if not np.array_equal(c[0], np.eye(d, dtype=np.int64)):
            raise AlgebraError("basis element 0 is not the unit")
        # (a_i a_j) a_k == a_i (a_j a_k)
        left = np.mod(np.einsum("ijm,mkl->ijkl", c, c), p)
        right = np.mod(np.einsum("jkm,iml->ijkl", c, c), p)
        if not np.array_equal(left, right):
            raise AlgebraError("not associative")
        if d > 1 and np.any(c[1:, 1:, 0]):
            raise AlgebraError("maximal ideal is not closed under multiplication")
        for i in range(1, d):
            op = self.lmul[i]
            acc = op
            for _ in range(d):
                if not acc.any():
                    break
                acc = matmul(acc, op, p)
            if acc.any():
                raise AlgebraError(f"basis element {self.labels[i]} is not nilpotent")
        gens_span = self._ideal_generated(self.ideal_gens)
        if gens_span.dim != d - 1:
            raise AlgebraError("ideal_gens do not generate the maximal ideal")

    def _ideal_generated(self, idx) -> Subspace:
        if not idx:
            return Subspace.zero(self.dim, self.p)
        vecs = np.vstack([self.lmul[i].T for i in idx])
        return Subspace.span(vecs, self.dim, self.p)

    def describe(self) -> dict:
        return {"p": self.p, "dim": self.dim, "basis": list(self.labels), **self.presentation}

    def digest_bytes(self) -> bytes:
        return b"alg" + self.p.to_bytes(4, "little") + ",".join(self.labels).encode() + self.mult.tobytes()

    def __repr__(self) -> str:
        return f"FiniteLocalAlgebra(p={self.p}, dim={self.dim}, basis={list(self.labels)})"


def monomial_quotient_algebra(p: int, variables: Sequence[str], relations: Sequence) -> FiniteLocalAlgebra:
    """``GF(p)[variables] / (relations)`` for a monomial ideal of finite colength.

    ``relations`` are monomial strings (``"x^2*y"``) or exponent tuples.
    """
    p = check_prime(p)
    variables = list(variables)
    if len(set(variables)) != len(variables):
        raise AlgebraError("duplicate variable names")
    n = len(variables)
    rels = [tuple(r) if not isinstance(r, str) else parse_monomial(r, variables) for r in relations]
    for r in rels:
        if len(r) != n:
            raise AlgebraError(f"relation {r} has wrong arity")
        if not any(r):
            raise AlgebraError("the unit monomial cannot be a relation (algebra would be zero)")
    for k, v in enumerate(variables):
        if not any(r[k] > 0 and sum(r) == r[k] for r in rels):
            raise InfiniteDimensionError(f"no power of {v} among the relations")

    def in_ideal(e):
        return any(all(a >= b for a, b in zip(e, r)) for r in rels)

    bounds = [min(r[k] for r in rels if r[k] > 0 and sum(r) == r[k]) for k in range(n)]
    std = [e for e in itertools.product(*(range(b) for b in bounds)) if not in_ideal(e)]
    std.sort(key=lambda e: (sum(e), tuple(-x for x in e)))
    index = {e: i for i, e in enumerate(std)}
    d = len(std)
    mult = np.zeros((d, d, d), dtype=np.int64)
    for i, a in enumerate(std):
        for j, b in enumerate(std):
            s = tuple(x + y for x, y in zip(a, b))
            if s in index:
                mult[i, j, index[s]] = 1
    gens = []
    for k in range(n):
        e = tuple(1 if t == k else 0 for t in range(n))
        if e in index:
            gens.append(index[e])
    labels = tuple(monomial_label(e, variables) for e in std)
    pres = {
        "kind": "monomial",
        "vars": variables,
        "relations": [monomial_label(r, variables) for r in rels],
    }
    return FiniteLocalAlgebra(p, labels, mult, tuple(gens), pres)


def algebra_from_table(p: int, labels: Sequence[str], mult) -> FiniteLocalAlgebra:
    """Algebra from a raw multiplication table; basis element 0 must be the unit."""
    p = check_prime(p)
    labels = tuple(labels)
    alg = FiniteLocalAlgebra(
        p, labels, np.asarray(mult), tuple(range(1, len(labels))), {"kind": "table"}
    )
    alg.validate()
    return alg


@dataclass(frozen=True, eq=False)
class AlgebraSurjection:
    source: FiniteLocalAlgebra
    target: FiniteLocalAlgebra
    matrix: np.ndarray  # dim target x dim source

    def __call__(self, a) -> np.ndarray:
        return matmul(self.matrix, np.asarray(a, dtype=np.int64), self.source.p)

    def kernel(self) -> Subspace:
        return Subspace.kernel(self.matrix, self.source.p)

    def section(self) -> np.ndarray:
        """A k-linear right inverse (dim source x dim target)."""
        from .exactla import solve_array

        sec = solve_array(self.matrix, np.eye(self.target.dim, dtype=np.int64), self.source.p)
        if sec is None:
            raise AlgebraError("map is not surjective")
        return sec

    def validate(self) -> None:
        S, T, F, p = self.source, self.target, self.matrix, self.source.p
        if F.shape != (T.dim, S.dim):
            raise AlgebraError("surjection matrix has the wrong shape")
        if rank_array(F, p) != T.dim:
            raise AlgebraError("map is not surjective")
        if not np.array_equal(np.mod(F[:, 0], p), T.unit()):
            raise AlgebraError("map is not unital")
        # F(a_i a_j) == F(a_i) F(a_j)
        lhs = np.mod(np.einsum("ijl,tl->ijt", S.mult, F), p)
        rhs = np.mod(np.einsum("ui,vj,uvt->ijt", F, F, T.mult), p)
        if not np.array_equal(lhs, rhs):
            raise AlgebraError("map is not multiplicative")


@dataclass(frozen=True, eq=False)
class FiberProductData:
    R: FiniteLocalAlgebra
    S: FiniteLocalAlgebra
    T: FiniteLocalAlgebra
    eta_S: AlgebraSurjection
    eta_T: AlgebraSurjection
    ideal_I: Subspace  # ker eta_T, the copy of m_S
    ideal_J: Subspace  # ker eta_S, the copy of n_T

    @property
    def s_positions(self) -> np.ndarray:
        return np.arange(1, self.S.dim)

    @property
    def t_positions(self) -> np.ndarray:
        return np.arange(self.S.dim, self.R.dim)

    def validate(self) -> None:
        R, S, T, p = self.R, self.S, self.T, self.R.p
        R.validate()
        self.eta_S.validate()
        self.eta_T.validate()
        if R.dim != 1 + (S.dim - 1) + (T.dim - 1):
            raise AlgebraError("dim R != 1 + dim m + dim n")
        if not (self.eta_T.kernel() == self.ideal_I and self.eta_S.kernel() == self.ideal_J):
            raise AlgebraError("I, J are not the kernels of the projections")
        prods = np.einsum("ai,bj,ijl->abl", self.ideal_I.basis, self.ideal_J.basis, R.mult)
        if np.mod(prods, p).any():
            raise AlgebraError("I*J != 0")
        if not (self.ideal_I + self.ideal_J) == R.maxideal or (self.ideal_I & self.ideal_J).dim:
            raise AlgebraError("I + J is not a direct decomposition of the maximal ideal")
        # the square commutes: pi_S eta_S == pi_T eta_T (both read the unit coordinate)
        if not np.array_equal(np.mod(self.eta_S.matrix[0], p), np.mod(self.eta_T.matrix[0], p)):
            raise AlgebraError("pullback square does not commute")


def fiber_product(S: FiniteLocalAlgebra, T: FiniteLocalAlgebra) -> FiberProductData:
    if S.p != T.p:
        raise AlgebraError(f"characteristic mismatch: {S.p} vs {T.p}")
    if S.dim < 2 or T.dim < 2:
        raise SettingViolation("both factors must differ from the residue field")
    p = S.p
    ds, dt = S.dim - 1, T.dim - 1
    d = 1 + ds + dt
    clash = set(S.labels[1:]) & set(T.labels[1:])
    s_lab = [f"S.{x}" if clash else x for x in S.labels[1:]]
    t_lab = [f"T.{x}" if clash else x for x in T.labels[1:]]
    labels = ("1", *s_lab, *t_lab)
    mult = np.zeros((d, d, d), dtype=np.int64)
    mult[0] = np.eye(d, dtype=np.int64)
    mult[:, 0] = np.eye(d, dtype=np.int64)
    s_idx = np.arange(1, 1 + ds)
    t_idx = np.arange(1 + ds, d)
    mult[np.ix_(s_idx, s_idx, s_idx)] = S.mult[1:, 1:, 1:]
    mult[np.ix_(t_idx, t_idx, t_idx)] = T.mult[1:, 1:, 1:]
    gens = tuple(int(g) for g in S.ideal_gens) + tuple(int(g) + ds for g in T.ideal_gens)
    pres = {"kind": "fiber", "S": S.describe(), "T": T.describe()}
    R = FiniteLocalAlgebra(p, labels, mult, gens, pres)
    eS = np.zeros((S.dim, d), dtype=np.int64)
    eS[0, 0] = 1
    eS[s_idx, s_idx] = 1
    eT = np.zeros((T.dim, d), dtype=np.int64)
    eT[0, 0] = 1
    eT[np.arange(1, T.dim), t_idx] = 1
    eye = np.eye(d, dtype=np.int64)
    I = Subspace(d, p, eye[s_idx], s_idx)
    J = Subspace(d, p, eye[t_idx], t_idx)
    return FiberProductData(R, S, T, AlgebraSurjection(R, S, eS), AlgebraSurjection(R, T, eT), I, J)


def is_nzd(A: FiniteLocalAlgebra, a) -> bool:
    """Whether multiplication by ``a`` is injective on ``A``."""
    return rank_array(A.mul_matrix(a), A.p) == A.dim
