"""Minimal free resolutions over finite local algebras.

Each syzygy ``Omega^i`` is kept as a subspace of the free module
``F_{i-1} = A^{beta_{i-1}}`` (vectors laid out block by block, one block of
``dim A`` coordinates per free generator).  Bases are sparse: a kernel basis
is the identity on the free columns of an echelon form and almost empty
elsewhere.  Minimal generators of a syzygy are read off a complement of
``m * Omega^i`` in the syzygy's own coordinates, so every choice is
deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import sparse

from .algebra import FiniteLocalAlgebra
from .exactla import Subspace, matmul, sparse_kernel, sparse_rref_coo
from .fdmodule import FDModule, free_module, minimal_generators

DEFAULT_LENGTH = 8
DEFAULT_BUDGET = 60_000


class ResourceLimit(RuntimeError):
    """A free module in the resolution would exceed the k-dimension budget."""


def _mod(m, p: int) -> sparse.csr_matrix:
    m = sparse.csr_matrix(m, dtype=np.int64)
    m.data %= p
    m.eliminate_zeros()
    return m


@lru_cache(maxsize=256)
def _block_op(A: FiniteLocalAlgebra, beta: int, l: int) -> sparse.csr_matrix:
    """Row-convention operator of multiplication by ``a_l`` on ``A^beta``."""
    one = sparse.identity(beta, dtype=np.int64, format="csr")
    return sparse.kron(one, sparse.csr_matrix(A.lmul[l].T), format="csr")


@dataclass(eq=False)
class SyzygySpace:
    """A subspace of ``A^beta`` with sparse basis, identity on ``coord_cols``."""

    basis: sparse.csr_matrix
    coord_cols: np.ndarray
    ambient_dim: int

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def dense(self, p: int) -> Subspace:
        return Subspace(self.ambient_dim, p, self.basis.toarray(), self.coord_cols)


def _images(A: FiniteLocalAlgebra, V: sparse.csr_matrix, beta: int, elems) -> list[sparse.csr_matrix]:
    return [_mod(V @ _block_op(A, beta, l), A.p) for l in elems]


def _generators(A: FiniteLocalAlgebra, W: SyzygySpace, beta: int) -> sparse.csr_matrix:
    """Rows of ``W.basis`` whose classes form a basis of ``W / m W``."""
    if W.dim == 0 or not A.ideal_gens:
        return W.basis
    imgs = sparse.vstack(_images(A, W.basis, beta, A.ideal_gens), format="csr")[:, W.coord_cols].tocoo()
    pivots, _ = sparse_rref_coo(imgs.row, imgs.col, imgs.data, imgs.shape, A.p, want_rows=False)
    keep = np.setdiff1d(np.arange(W.dim), pivots)
    return W.basis[keep]


def _cover_kernel(A: FiniteLocalAlgebra, W: SyzygySpace, gens: sparse.csr_matrix, beta: int) -> SyzygySpace:
    """Kernel of ``A^b -> W`` sending the j-th free generator to ``gens[j]``."""
    b, d = gens.shape[0], A.dim
    rows, cols, vals = [], [], []
    for l, img in enumerate(_images(A, gens, beta, range(d))):
        c = img[:, W.coord_cols].tocoo()
        # column (j, l) of the cover matrix holds the coordinates of a_l g_j
        rows.append(c.col)
        cols.append(c.row * d + l)
        vals.append(c.data)
    K, free = sparse_kernel(
        np.concatenate(rows), np.concatenate(cols), np.concatenate(vals), (W.dim, b * d), A.p
    )
    return SyzygySpace(K, free, b * d)


def _empty_space() -> SyzygySpace:
    return SyzygySpace(sparse.csr_matrix((0, 0), dtype=np.int64), np.zeros(0, dtype=np.int64), 0)


@dataclass(eq=False)
class MinimalResolution:
    module: FDModule
    length: int
    betti: list[int]
    generators: list[sparse.csr_matrix] = field(repr=False)  # gens of Omega^i in F_{i-1}, i = 1..length
    spaces: list[SyzygySpace] = field(repr=False)  # Omega^i inside F_{i-1}, i = 1..length
    terminated: bool = False

    @property
    def algebra(self) -> FiniteLocalAlgebra:
        return self.module.algebra

    @property
    def pd(self) -> int | None:
        """Projective dimension when the resolution terminated, else None."""
        if not self.terminated:
            return None
        nz = [i for i, b in enumerate(self.betti) if b]
        return nz[-1] if nz else 0

    def differential(self, i: int) -> np.ndarray:
        """``d_i`` as a ``(beta_{i-1}, beta_i, dim A)`` array of algebra elements."""
        d = self.algebra.dim
        g = self.generators[i - 1].toarray()
        return g.reshape(self.betti[i], self.betti[i - 1], d).transpose(1, 0, 2)

    @property
    def differentials(self) -> list[np.ndarray]:
        return [self.differential(i) for i in range(1, self.length + 1)]

    def differential_entries(self, i: int):
        """Nonzero entries of ``d_i`` as arrays ``(row, col, basis index, value)``."""
        d = self.algebra.dim
        c = self.generators[i - 1].tocoo()
        return c.col // d, c.row, c.col % d, c.data

    def syzygy_dim(self, i: int) -> int:
        return self.module.dim if i == 0 else self.spaces[i - 1].dim

    def syzygy_space(self, i: int) -> Subspace:
        return self.spaces[i - 1].dense(self.algebra.p)

    def syzygy(self, i: int) -> FDModule:
        if i == 0:
            return self.module
        return free_module(self.algebra, self.betti[i - 1]).submodule(self.syzygy_space(i))

    def differential_matrix(self, i: int) -> np.ndarray:
        """k-linear matrix of ``d_i : F_i -> F_{i-1}``."""
        A = self.algebra
        D = self.differential(i)
        r, c, d = D.shape
        big = np.einsum("rjl,lab->rajb", D, A.lmul)
        return np.mod(big.reshape(r * d, c * d), A.p)

    def check(self) -> None:
        """Assert minimality, ``d^2 = 0`` and exactness of the computed stages."""
        p = self.algebra.p
        for i in range(1, self.length + 1):
            if np.any(self.differential(i)[..., 0]):
                raise AssertionError(f"d_{i} has an entry outside the maximal ideal")
            if i >= 2:
                prev, cur = self.differential_matrix(i - 1), self.differential_matrix(i)
                if matmul(prev, cur, p).any():
                    raise AssertionError(f"d_{i - 1} d_{i} != 0")
                ker = Subspace.kernel(prev, p)
                if not ker == Subspace.span(cur.T, ker.ambient_dim, p):
                    raise AssertionError(f"not exact at F_{i - 1}")
        if self.length:
            cover = minimal_generators(self.module).cover.matrix
            first = self.differential_matrix(1)
            if matmul(cover, first, p).any():
                raise AssertionError("augmentation does not kill the image of d_1")
            ker = Subspace.kernel(cover, p)
            if not ker == Subspace.span(first.T, ker.ambient_dim, p):
                raise AssertionError("not exact at F_0")


def minimal_resolution(M: FDModule, length: int = DEFAULT_LENGTH, budget: int = DEFAULT_BUDGET) -> MinimalResolution:
    """Resolve ``M`` through ``F_length`` (differentials ``d_1 .. d_length``).

    Raises :class:`ResourceLimit` when some ``beta_i * dim A`` exceeds ``budget``.
    """
    if length < 0:
        raise ValueError("length must be nonnegative")
    A = M.algebra
    d, p = A.dim, A.p
    cov = minimal_generators(M)
    betti = [cov.count]
    gens_list: list[sparse.csr_matrix] = []
    spaces: list[SyzygySpace] = []
    _guard(cov.count, d, budget, 0)
    if length == 0:
        return MinimalResolution(M, 0, betti, gens_list, spaces, terminated=(cov.count == 0))
    c = sparse.coo_matrix(np.asarray(cov.cover.matrix))
    K, free = sparse_kernel(c.row, c.col, c.data.astype(np.int64), c.shape, p)
    W = SyzygySpace(K, free, cov.count * d)
    terminated = False
    for i in range(1, length + 1):
        spaces.append(W)
        gens = _generators(A, W, betti[i - 1])
        b = gens.shape[0]
        _guard(b, d, budget, i)
        betti.append(b)
        gens_list.append(gens)
        if b == 0:
            terminated = True
            # the remaining stages are all zero
            for _ in range(i + 1, length + 1):
                spaces.append(_empty_space())
                betti.append(0)
                gens_list.append(sparse.csr_matrix((0, 0), dtype=np.int64))
            break
        if i < length:
            W = _cover_kernel(A, W, gens, betti[i - 1])
    return MinimalResolution(M, length, betti, gens_list, spaces, terminated)


def _guard(beta: int, d: int, budget: int, i: int) -> None:
    if beta * d > budget:
        raise ResourceLimit(f"F_{i} would have k-dimension {beta * d} > budget {budget}")


def syzygy(M: FDModule, i: int) -> FDModule:
    if i < 0:
        raise ValueError("syzygy index must be nonnegative")
    if i == 0:
        return M
    return minimal_resolution(M, i).syzygy(i)


def betti_numbers(M: FDModule, length: int = DEFAULT_LENGTH) -> list[int]:
    return minimal_resolution(M, length).betti


def pd_detect(M: FDModule, bound: int) -> int | None:
    """Projective dimension if it is at most ``bound``; ``None`` means ``>= bound + 1``."""
    res = minimal_resolution(M, bound + 1)
    if res.terminated and res.pd is not None and res.pd <= bound:
        return res.pd
    return None
