"""Finitely generated modules over a :class:`FiniteLocalAlgebra`.

A module is a k-vector space ``k^n`` together with one ``n x n`` action matrix
per algebra basis element (column convention: ``a_l . v = action[l] @ v``).
Submodules and quotients are built from :class:`~torfib.exactla.Subspace`
objects, using the fact that their bases are the identity on coordinate
columns.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .algebra import AlgebraSurjection, FiniteLocalAlgebra
from .exactla import Subspace, matmul, rank_array, solve_array
from .rng import SplitMix64


class ModuleError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FDModule:
    algebra: FiniteLocalAlgebra
    action: np.ndarray  # (dim A, n, n)

    def __post_init__(self):
        act = np.mod(np.asarray(self.action, dtype=np.int64), self.algebra.p)
        if act.ndim != 3 or act.shape[0] != self.algebra.dim or act.shape[1] != act.shape[2]:
            raise ModuleError(f"action array has shape {act.shape}")
        act.setflags(write=False)
        object.__setattr__(self, "action", act)

    @property
    def dim(self) -> int:
        return self.action.shape[1]

    @property
    def p(self) -> int:
        return self.algebra.p

    def is_zero(self) -> bool:
        return self.dim == 0

    def element_action(self, a) -> np.ndarray:
        return np.mod(np.tensordot(np.asarray(a, dtype=np.int64), self.action, axes=1), self.p)

    def gen_actions(self) -> np.ndarray:
        return self.action[list(self.algebra.ideal_gens)]

    def validate(self) -> None:
        A, p, n = self.algebra, self.p, self.dim
        if not np.array_equal(self.action[0], np.eye(n, dtype=np.int64)):
            raise ModuleError("unit does not act as the identity")
        lhs = np.mod(np.einsum("iab,jbc->ijac", self.action, self.action), p)
        rhs = np.mod(np.einsum("ijl,lac->ijac", A.mult, self.action), p)
        if not np.array_equal(lhs, rhs):
            raise ModuleError("action is not compatible with the multiplication")

    def maximal_submodule(self) -> Subspace:
        """m*M as a subspace of k^n."""
        if self.dim == 0 or not self.algebra.ideal_gens:
            return Subspace.zero(self.dim, self.p)
        cols = np.hstack(list(self.gen_actions()))
        return Subspace.span(cols.T, self.dim, self.p)

    def submodule(self, W: Subspace) -> "FDModule":
        """The submodule carried by an A-stable subspace ``W``."""
        B = W.basis
        if W.dim == 0:
            return zero_module(self.algebra)
        imgs = matmul(B, self.action.transpose(0, 2, 1), self.p)  # (d, k, n) rows a_l . b_i
        act = imgs[:, :, W.coord_cols].transpose(0, 2, 1)
        return FDModule(self.algebra, act)

    def quotient(self, W: Subspace) -> "FDModule":
        """``M / W`` with basis the classes of e_q, q outside W's coordinate columns."""
        keep = np.setdiff1d(np.arange(self.dim), W.coord_cols)
        imgs = self.action[:, :, keep].transpose(0, 2, 1)  # rows: a_l . e_q
        red = W.reduce(imgs)
        act = red[:, :, keep].transpose(0, 2, 1)
        return FDModule(self.algebra, act)

    def generated_submodule(self, vectors: np.ndarray) -> Subspace:
        """A-span of the given row vectors."""
        v = np.asarray(vectors, dtype=np.int64).reshape(-1, self.dim)
        if v.shape[0] == 0:
            return Subspace.zero(self.dim, self.p)
        imgs = matmul(v, self.action.transpose(0, 2, 1), self.p).reshape(-1, self.dim)
        return Subspace.span(imgs, self.dim, self.p)

    def stable(self, W: Subspace) -> bool:
        imgs = matmul(W.basis, self.action.transpose(0, 2, 1), self.p)
        return W.contains(imgs.reshape(-1, self.dim))

    def digest_bytes(self) -> bytes:
        return b"mod" + self.dim.to_bytes(4, "little") + self.action.tobytes()

    def __repr__(self) -> str:
        return f"FDModule(dim={self.dim}, over dim-{self.algebra.dim} algebra)"


@dataclass(frozen=True, eq=False)
class ModuleMap:
    source: FDModule
    target: FDModule
    matrix: np.ndarray  # target.dim x source.dim

    def is_homomorphism(self) -> bool:
        p = self.source.p
        lhs = matmul(self.target.action, self.matrix, p)
        rhs = matmul(self.matrix, self.source.action, p)
        return bool(np.array_equal(lhs, rhs))

    def rank(self) -> int:
        return rank_array(self.matrix, self.source.p)

    def is_injective(self) -> bool:
        return self.rank() == self.source.dim

    def is_surjective(self) -> bool:
        return self.rank() == self.target.dim

    def kernel(self) -> Subspace:
        return Subspace.kernel(self.matrix, self.source.p)


# constructors


def zero_module(A: FiniteLocalAlgebra) -> FDModule:
    return FDModule(A, np.zeros((A.dim, 0, 0), dtype=np.int64))


def free_module(A: FiniteLocalAlgebra, rank: int) -> FDModule:
    eye = np.eye(rank, dtype=np.int64)
    return FDModule(A, np.stack([np.kron(eye, A.lmul[l]) for l in range(A.dim)]))


def residue_field(A: FiniteLocalAlgebra) -> FDModule:
    act = np.zeros((A.dim, 1, 1), dtype=np.int64)
    act[0, 0, 0] = 1
    return FDModule(A, act)


def ideal_module(A: FiniteLocalAlgebra, ideal: Subspace) -> FDModule:
    return free_module(A, 1).submodule(ideal)


def maximal_ideal_module(A: FiniteLocalAlgebra) -> FDModule:
    return ideal_module(A, A.maxideal)


def direct_sum(*mods: FDModule) -> FDModule:
    if not mods:
        raise ModuleError("direct_sum needs at least one summand")
    A = mods[0].algebra
    n = sum(m.dim for m in mods)
    act = np.zeros((A.dim, n, n), dtype=np.int64)
    o = 0
    for m in mods:
        if m.algebra is not A:
            raise ModuleError("summands live over different algebras")
        act[:, o : o + m.dim, o : o + m.dim] = m.action
        o += m.dim
    return FDModule(A, act)


def power(M: FDModule, c: int) -> FDModule:
    return direct_sum(*([M] * c)) if c else zero_module(M.algebra)


def module_from_presentation(A: FiniteLocalAlgebra, P) -> FDModule:
    """Cokernel of ``A^c -> A^r`` given by an ``r x c`` matrix of algebra elements.

    ``P`` is an array of shape ``(r, c, dim A)``.
    """
    P = np.mod(np.asarray(P, dtype=np.int64), A.p)
    if P.ndim != 3 or P.shape[2] != A.dim:
        raise ModuleError(f"presentation must have shape (r, c, {A.dim}), got {P.shape}")
    r, c, _ = P.shape
    F = free_module(A, r)
    cols = P.transpose(1, 0, 2).reshape(c, r * A.dim)
    return F.quotient(F.generated_submodule(cols))


def restrict_scalars(phi: AlgebraSurjection, Y: FDModule) -> FDModule:
    """View an module over phi's target as a module over its source."""
    if Y.algebra is not phi.target:
        raise ModuleError("module is not over the target of the surjection")
    act = np.mod(np.einsum("il,iab->lab", phi.matrix, Y.action), Y.p)
    return FDModule(phi.source, act)


def descend_scalars(phi: AlgebraSurjection, M: FDModule) -> FDModule:
    """Inverse of :func:`restrict_scalars` for modules killed by ``ker phi``."""
    K = phi.kernel()
    if K.dim and np.mod(np.tensordot(K.basis, M.action, axes=1), M.p).any():
        raise ModuleError("kernel of the surjection does not annihilate the module")
    sec = phi.section()
    act = np.mod(np.einsum("li,lab->iab", sec, M.action), M.p)
    return FDModule(phi.target, act)


# tensor and Hom


def tensor(M: FDModule, N: FDModule) -> FDModule:
    """``M (x)_A N`` as the quotient of ``M (x)_k N`` by the balancing relations."""
    A, p = M.algebra, M.p
    if N.algebra is not A:
        raise ModuleError("tensor factors live over different algebras")
    m, n = M.dim, N.dim
    if m == 0 or n == 0:
        return zero_module(A)
    act = np.stack([np.kron(M.action[l], np.eye(n, dtype=np.int64)) for l in range(A.dim)])
    big = FDModule(A, act)
    rels = [
        np.kron(M.action[g], np.eye(n, dtype=np.int64)) - np.kron(np.eye(m, dtype=np.int64), N.action[g])
        for g in A.ideal_gens
    ]
    if not rels:
        return big
    W = Subspace.span(np.mod(np.hstack(rels).T, p), m * n, p)
    return big.quotient(W)


@dataclass(frozen=True, eq=False)
class HomSpace:
    source: FDModule
    target: FDModule
    basis: tuple[ModuleMap, ...]
    module: FDModule

    @property
    def dim(self) -> int:
        return len(self.basis)

    def matrices(self) -> np.ndarray:
        """Basis maps stacked as ``(dim, target.dim, source.dim)``."""
        return np.array([f.matrix for f in self.basis], dtype=np.int64).reshape(
            self.dim, self.target.dim, self.source.dim
        )


def hom_space(M: FDModule, N: FDModule) -> HomSpace:
    """All A-linear maps ``M -> N`` with the induced module structure."""
    A, p = M.algebra, M.p
    m, n = M.dim, N.dim
    if m == 0 or n == 0:
        return HomSpace(M, N, (), zero_module(A))
    # f flattened row-major: f[r, c] at r*m + c
    eqs = [
        np.kron(N.action[g], np.eye(m, dtype=np.int64)) - np.kron(np.eye(n, dtype=np.int64), M.action[g].T)
        for g in A.ideal_gens
    ]
    if eqs:
        sol = Subspace.kernel(np.mod(np.vstack(eqs), p), p)
    else:
        sol = Subspace.full(m * n, p)
    maps = tuple(ModuleMap(M, N, row.reshape(n, m)) for row in sol.basis)
    # a . f = N.action[a] o f, expressed in the basis
    imgs = matmul(N.action[:, None], sol.basis.reshape(1, -1, n, m), p)  # (d, k, n, m)
    coords = sol.coords(imgs.reshape(A.dim, sol.dim, n * m))  # (d, k, k) rows
    module = FDModule(A, coords.transpose(0, 2, 1))
    return HomSpace(M, N, maps, module)


def dual(M: FDModule) -> HomSpace:
    return hom_space(M, free_module(M.algebra, 1))


@dataclass(frozen=True, eq=False)
class Biduality:
    delta: ModuleMap
    injective: bool


def biduality(M: FDModule) -> Biduality:
    """The canonical map ``M -> M**``; ``injective`` is the torsionless predicate."""
    A, p = M.algebra, M.p
    Mstar = dual(M)
    Mss = dual(Mstar.module)
    if M.dim == 0:
        return Biduality(ModuleMap(M, Mss.module, np.zeros((Mss.dim, 0), dtype=np.int64)), True)
    fs = Mstar.matrices()  # (s, d, m): f_i as map M -> A
    s = Mstar.dim
    # delta(m) is the map M* -> A sending f_i to f_i(m); its matrix is d x s
    evals = np.mod(np.einsum("idm->mdi", fs), p).reshape(M.dim, A.dim * s)
    if Mss.dim:
        phis = Mss.matrices().reshape(Mss.dim, A.dim * s)
        coords = solve_array(phis.T, evals.T, p)
        if coords is None:
            raise ModuleError("evaluation maps are not A-linear (internal error)")
    else:
        coords = np.zeros((0, M.dim), dtype=np.int64)
    delta = ModuleMap(M, Mss.module, coords)
    injective = rank_array(evals, p) == M.dim
    return Biduality(delta, bool(injective))


# generators and freeness


@dataclass(frozen=True, eq=False)
class MinimalCover:
    count: int
    cover: ModuleMap  # A^count -> M
    generators: np.ndarray  # (count, n) lifted generator vectors


def minimal_generators(M: FDModule) -> MinimalCover:
    A, p = M.algebra, M.p
    mM = M.maximal_submodule()
    q = np.setdiff1d(np.arange(M.dim), mM.coord_cols)
    gens = np.eye(M.dim, dtype=np.int64)[q]
    b = len(q)
    # column (j, l) = a_l . g_j
    cols = M.action[:, :, q].transpose(2, 0, 1).reshape(b * A.dim, M.dim)
    cover = ModuleMap(free_module(A, b), M, cols.T.copy())
    return MinimalCover(b, cover, gens)


def num_generators(M: FDModule) -> int:
    return M.dim - M.maximal_submodule().dim


def is_free(M: FDModule) -> bool:
    return M.dim == num_generators(M) * M.algebra.dim


class IsoVerdict(str, Enum):
    ISOMORPHIC = "isomorphic"
    NOT_ISOMORPHIC = "not_isomorphic"
    UNDETERMINED = "undetermined"


def iso_probably(M: FDModule, N: FDModule, trials: int = 20, seed: int = 0) -> IsoVerdict:
    """Randomised isomorphism test: sample intertwiners until one is invertible."""
    if M.algebra is not N.algebra:
        raise ModuleError("modules live over different algebras")
    if M.dim != N.dim:
        return IsoVerdict.NOT_ISOMORPHIC
    if M.dim == 0:
        return IsoVerdict.ISOMORPHIC
    H = hom_space(M, N)
    if not (hom_space(M, M).dim == H.dim == hom_space(N, N).dim):
        return IsoVerdict.NOT_ISOMORPHIC
    if H.dim == 0:
        return IsoVerdict.NOT_ISOMORPHIC
    mats = H.matrices()
    rng = SplitMix64(seed, M.dim, H.dim)
    for _ in range(trials):
        coeffs = np.array([rng.below(M.p) for _ in range(H.dim)], dtype=np.int64)
        f = np.mod(np.tensordot(coeffs, mats, axes=1), M.p)
        if rank_array(f, M.p) == M.dim:
            return IsoVerdict.ISOMORPHIC
    return IsoVerdict.UNDETERMINED


def module_summary(M: FDModule) -> dict:
    return {"dim": M.dim, "generators": num_generators(M), "free": is_free(M)}


def presentation_array(A: FiniteLocalAlgebra, rows: Sequence[Sequence]) -> np.ndarray:
    """Helper: nested lists of element vectors -> ``(r, c, dim A)`` array."""
    r = len(rows)
    c = len(rows[0]) if r else 0
    out = np.zeros((r, c, A.dim), dtype=np.int64)
    for i, row in enumerate(rows):
        if len(row) != c:
            raise ModuleError("ragged presentation matrix")
        for j, e in enumerate(row):
            out[i, j] = A.element(e)
    return out
