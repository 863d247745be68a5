"""Exact dense linear algebra over prime fields GF(p), p < 2**16.

Matrices are plain ``numpy.int64`` arrays with entries reduced into
``[0, p)``; the modulus travels alongside as an ``int``.  :class:`FFMatrix`
is a thin validated wrapper used at API boundaries.  The elimination kernel
is compiled with numba and skips zero entries, which matters because almost
every matrix built by the resolution code is very sparse.

Pivoting is deterministic (first nonzero entry in column order, topmost row),
so every basis produced here is reproducible byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from numba import njit

MAX_PRIME = 1 << 16

_FLOAT_EXACT = float(1 << 53)


class DimensionMismatch(ValueError):
    """Operands live in different ambient spaces."""


class ModulusMismatch(ValueError):
    """Operands are defined over different prime fields."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, (int, np.integer)) or not is_prime(int(p)):
        raise ValueError(f"modulus must be a prime, got {p!r}")
    if p >= MAX_PRIME:
        raise ValueError(f"modulus must be below 2**16, got {p}")
    return int(p)


@lru_cache(maxsize=None)
def inverse_table(p: int) -> np.ndarray:
    inv = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        inv[a] = pow(a, p - 2, p)
    inv.setflags(write=False)
    return inv


def inv_mod(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError("0 has no inverse mod p")
    return pow(a, p - 2, p)


def as_ff(a, p: int) -> np.ndarray:
    """Copy ``a`` into a fresh int64 array reduced mod ``p``."""
    arr = np.array(a, dtype=np.int64)
    return np.mod(arr, p)


@njit(cache=True)
def _eliminate(a, p, inv, full):
    # In-place Gaussian elimination mod p.  With full=True the result is the
    # reduced row echelon form; otherwise only rows below each pivot are
    # cleared (enough for rank).
    m, n = a.shape
    pivots = np.empty(min(m, n), np.int64)
    nz = np.empty(n, np.int64)
    rank = 0
    for c in range(n):
        if rank == m:
            break
        r = -1
        for i in range(rank, m):
            if a[i, c] != 0:
                r = i
                break
        if r < 0:
            continue
        if r != rank:
            for j in range(c, n):
                t = a[r, j]
                a[r, j] = a[rank, j]
                a[rank, j] = t
        f = inv[a[rank, c]]
        cnt = 0
        for j in range(c, n):
            v = a[rank, j]
            if v != 0:
                if f != 1:
                    v = (v * f) % p
                    a[rank, j] = v
                nz[cnt] = j
                cnt += 1
        start = 0 if full else rank + 1
        for i in range(start, m):
            if i == rank:
                continue
            g = a[i, c]
            if g != 0:
                g = p - g
                for t in range(cnt):
                    j = nz[t]
                    a[i, j] = (a[i, j] + g * a[rank, j]) % p
        pivots[rank] = c
        rank += 1
    return rank, pivots[:rank].copy()


def _run(a: np.ndarray, p: int, full: bool) -> tuple[int, np.ndarray]:
    if a.shape[0] == 0 or a.shape[1] == 0:
        return 0, np.zeros(0, dtype=np.int64)
    return _eliminate(a, p, inverse_table(p), full)


# Above this many entries a matrix is split into connected blocks first.
SPARSE_THRESHOLD = 40_000


def _block_labels(rows: np.ndarray, cols: np.ndarray, m: int, n: int) -> np.ndarray:
    """Connected-component label of every entry in the row/column incidence graph."""
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import connected_components

    graph = coo_matrix((np.ones(rows.size, dtype=np.int8), (rows, cols + m)), shape=(m + n, m + n))
    _, label = connected_components(graph, directed=False)
    return label[rows]


@njit(cache=True)
def _block_sizes(rows, cols, starts, m, n):
    nb = starts.size - 1
    nr = np.zeros(nb, np.int64)
    nc = np.zeros(nb, np.int64)
    rseen = np.full(m, -1, np.int64)
    cseen = np.full(n, -1, np.int64)
    for b in range(nb):
        for e in range(starts[b], starts[b + 1]):
            if rseen[rows[e]] != b:
                rseen[rows[e]] = b
                nr[b] += 1
            if cseen[cols[e]] != b:
                cseen[cols[e]] = b
                nc[b] += 1
    return nr, nc


@njit(cache=True)
def _eliminate_blocks(rows, cols, vals, starts, nr, nc, m, n, p, inv, full, out_piv, out_prow, out_col, out_val):
    # Eliminates every connected block densely.  Writes the pivot columns and,
    # with full=True, the RREF entries tagged by the pivot column of their row.
    rmap = np.full(m, -1, np.int64)
    cmap = np.full(n, -1, np.int64)
    npiv = 0
    nent = 0
    for b in range(starts.size - 1):
        s0, s1 = starts[b], starts[b + 1]
        ccols = np.empty(nc[b], np.int64)
        kr = 0
        kc = 0
        for e in range(s0, s1):
            r, c = rows[e], cols[e]
            if rmap[r] < 0:
                rmap[r] = kr
                kr += 1
            if cmap[c] < 0:
                cmap[c] = 0
                ccols[kc] = c
                kc += 1
        ccols.sort()
        for t in range(kc):
            cmap[ccols[t]] = t
        sub = np.zeros((kr, kc), np.int64)
        for e in range(s0, s1):
            li = rmap[rows[e]]
            lj = cmap[cols[e]]
            sub[li, lj] = (sub[li, lj] + vals[e]) % p
        rank, piv = _eliminate(sub, p, inv, full)
        for t in range(rank):
            out_piv[npiv + t] = ccols[piv[t]]
        if full:
            for t in range(rank):
                for j in range(piv[t], kc):
                    v = sub[t, j]
                    if v != 0:
                        out_prow[nent] = ccols[piv[t]]
                        out_col[nent] = ccols[j]
                        out_val[nent] = v
                        nent += 1
        npiv += rank
        for e in range(s0, s1):
            rmap[rows[e]] = -1
            cmap[cols[e]] = -1
    return npiv, nent


def sparse_rref_coo(rows, cols, vals, shape, p: int, want_rows: bool = True):
    """RREF of a matrix given by coordinates.

    Returns ``(pivots, (r, c, v))`` where the second item lists the nonzero
    entries of the RREF (row ``t`` belongs to ``pivots[t]``); it is ``None``
    when ``want_rows`` is false.

    Each connected block of the support is eliminated on its own.  Rows of
    different blocks share no columns, so ordering the union of the block
    RREF rows by pivot column gives the RREF of the whole matrix.
    """
    m, n = shape
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    vals = np.mod(np.asarray(vals, dtype=np.int64), p)
    nz = vals != 0
    rows, cols, vals = rows[nz], cols[nz], vals[nz]
    empty = np.zeros(0, dtype=np.int64)
    if rows.size == 0:
        return empty, ((empty, empty, empty) if want_rows else None)
    label = _block_labels(rows, cols, m, n)
    order = np.argsort(label, kind="stable")
    rows, cols, vals, label = rows[order], cols[order], vals[order], label[order]
    starts = np.concatenate(([0], np.flatnonzero(np.diff(label)) + 1, [label.size])).astype(np.int64)
    nr, nc = _block_sizes(rows, cols, starts, m, n)
    piv_cap = int(np.minimum(nr, nc).sum())
    ent_cap = int((np.minimum(nr, nc) * nc).sum()) if want_rows else 0
    out_piv = np.empty(piv_cap, np.int64)
    out_prow = np.empty(ent_cap, np.int64)
    out_col = np.empty(ent_cap, np.int64)
    out_val = np.empty(ent_cap, np.int64)
    npiv, nent = _eliminate_blocks(
        rows, cols, vals, starts, nr, nc, m, n, p, inverse_table(p), want_rows, out_piv, out_prow, out_col, out_val
    )
    pivots = np.sort(out_piv[:npiv])
    if not want_rows:
        return pivots, None
    r = np.searchsorted(pivots, out_prow[:nent])
    return pivots, (r, out_col[:nent].copy(), out_val[:nent].copy())


def sparse_rref(rows, cols, vals, shape, p: int, want_rows: bool = True):
    """Dense-output wrapper of :func:`sparse_rref_coo`: ``(R, pivots)``."""
    pivots, ent = sparse_rref_coo(rows, cols, vals, shape, p, want_rows)
    if not want_rows:
        return None, pivots
    R = np.zeros((pivots.size, shape[1]), dtype=np.int64)
    R[ent[0], ent[1]] = ent[2]
    return R, pivots


def sparse_rank(rows, cols, vals, shape, p: int) -> int:
    return int(sparse_rref_coo(rows, cols, vals, shape, p, want_rows=False)[0].size)


def sparse_kernel(rows, cols, vals, shape, p: int):
    """Right kernel of a coordinate-form matrix as ``(K, free)`` with ``K`` in CSR form.

    Same normalisation as :func:`kernel_from_rref`: ``K[:, free]`` is the identity.
    """
    from scipy.sparse import csr_matrix

    n = shape[1]
    pivots, (r, c, v) = sparse_rref_coo(rows, cols, vals, shape, p)
    free = np.setdiff1d(np.arange(n, dtype=np.int64), pivots, assume_unique=True)
    off = c != pivots[r] if r.size else np.zeros(0, dtype=bool)
    fpos = np.searchsorted(free, c[off])
    krows = np.concatenate([np.arange(free.size), fpos])
    kcols = np.concatenate([free, pivots[r[off]]])
    kvals = np.concatenate([np.ones(free.size, dtype=np.int64), np.mod(-v[off], p)])
    K = csr_matrix((kvals, (krows, kcols)), shape=(free.size, n), dtype=np.int64)
    return K, free


def rref_array(a: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Reduced row echelon form of ``a``; returns ``(R, pivots)``.

    ``R`` has only the ``rank`` nonzero rows.
    """
    a = np.asarray(a)
    if a.size > SPARSE_THRESHOLD:
        r, c = np.nonzero(a)
        return sparse_rref(r, c, a[r, c], a.shape, p)
    work = np.array(a, dtype=np.int64, order="C", copy=True)
    rank, piv = _run(work, p, True)
    return work[:rank], piv


def rank_array(a: np.ndarray, p: int) -> int:
    a = np.asarray(a)
    if a.size > SPARSE_THRESHOLD:
        r, c = np.nonzero(a)
        return sparse_rank(r, c, a[r, c], a.shape, p)
    if a.shape[0] > a.shape[1]:
        a = a.T
    work = np.array(a, dtype=np.int64, order="C", copy=True)
    rank, _ = _run(work, p, False)
    return int(rank)


def kernel_from_rref(R: np.ndarray, pivots: np.ndarray, ncols: int, p: int):
    """Kernel basis ``K`` (rows) and its coordinate columns (the free columns).

    ``K[:, free] == identity``, so coordinates of a kernel vector are read off
    at the free columns.
    """
    free = np.setdiff1d(np.arange(ncols, dtype=np.int64), pivots, assume_unique=True)
    K = np.zeros((free.size, ncols), dtype=np.int64)
    if free.size:
        K[np.arange(free.size), free] = 1
        if pivots.size:
            K[:, pivots] = np.mod(-R[:, free].T, p)
    return K, free


def kernel_array(a: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Right kernel ``{v : a @ v == 0}``; see :func:`kernel_from_rref`."""
    a = np.asarray(a)
    R, piv = rref_array(a, p)
    return kernel_from_rref(R, piv, a.shape[1], p)


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Exact product mod p; BLAS float path whenever it is provably exact."""
    a = np.asarray(a)
    b = np.asarray(b)
    inner = a.shape[-1]
    if inner == 0:
        return np.zeros(a.shape[:-1] + b.shape[-1:], dtype=np.int64)
    if inner * (p - 1) ** 2 < _FLOAT_EXACT:
        prod = np.matmul(a.astype(np.float64), b.astype(np.float64))
        return np.mod(prod, p).astype(np.int64)
    return np.mod(np.matmul(a.astype(np.int64), b.astype(np.int64)), p)


def solve_array(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """One solution ``x`` of ``a @ x == b`` (``b`` a vector or a matrix), or None."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    vec = b.ndim == 1
    bb = b.reshape(-1, 1) if vec else b
    m, n = a.shape
    aug = np.hstack([a, bb])
    R, piv = rref_array(aug, p)
    if piv.size and piv[-1] >= n:
        return None
    x = np.zeros((n, bb.shape[1]), dtype=np.int64)
    if piv.size:
        x[piv] = R[:, n:]
    return x[:, 0] if vec else x


@dataclass(frozen=True, eq=False)
class FFMatrix:
    """A matrix over GF(p).  Entries are reduced on construction."""

    data: np.ndarray
    p: int

    def __post_init__(self):
        check_prime(self.p)
        arr = np.array(self.data, dtype=np.int64)
        if arr.ndim != 2:
            if arr.size:
                raise ValueError("FFMatrix needs a 2-d array")
            arr = arr.reshape(0, 0)
        arr = np.mod(arr, self.p)
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @classmethod
    def from_entries(cls, entries: Sequence, p: int) -> "FFMatrix":
        """Build from FFScalar-like entries, rejecting mixed moduli."""
        rows = [list(r) for r in entries]
        mods = {getattr(e, "modulus", p) for r in rows for e in r}
        if mods - {p}:
            raise ModulusMismatch(f"entries carry moduli {sorted(mods)}, expected {p}")
        vals = [[int(getattr(e, "value", e)) for e in r] for r in rows]
        if not vals:
            return cls(np.zeros((0, 0), dtype=np.int64), p)
        return cls(np.array(vals, dtype=np.int64), p)

    @classmethod
    def zeros(cls, rows: int, cols: int, p: int) -> "FFMatrix":
        return cls(np.zeros((rows, cols), dtype=np.int64), p)

    @classmethod
    def identity(cls, n: int, p: int) -> "FFMatrix":
        return cls(np.eye(n, dtype=np.int64), p)

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def T(self) -> "FFMatrix":
        return FFMatrix(self.data.T, self.p)

    def _same(self, other: "FFMatrix"):
        if other.p != self.p:
            raise ModulusMismatch(f"GF({self.p}) vs GF({other.p})")

    def __matmul__(self, other: "FFMatrix") -> "FFMatrix":
        self._same(other)
        if self.cols != other.rows:
            raise DimensionMismatch(f"{self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        return FFMatrix(matmul(self.data, other.data, self.p), self.p)

    def __add__(self, other: "FFMatrix") -> "FFMatrix":
        self._same(other)
        return FFMatrix(self.data + other.data, self.p)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FFMatrix):
            return NotImplemented
        return self.p == other.p and self.data.shape == other.data.shape and bool(
            np.array_equal(self.data, other.data)
        )

    def __hash__(self):
        return hash((self.p, self.data.shape, self.data.tobytes()))

    def __repr__(self) -> str:
        return f"FFMatrix(p={self.p}, {self.data.tolist()})"

    def rank(self) -> int:
        return rank_array(self.data, self.p)


class RREF(NamedTuple):
    rank: int
    R: FFMatrix
    kernel_basis: "Subspace"


def rref(m: FFMatrix) -> RREF:
    """Reduced row echelon form, rank and right kernel of ``m``."""
    R, piv = rref_array(m.data, m.p)
    K, free = kernel_from_rref(R, piv, m.cols, m.p)
    full = np.zeros((m.rows, m.cols), dtype=np.int64)
    full[: R.shape[0]] = R
    return RREF(int(piv.size), FFMatrix(full, m.p), Subspace(m.cols, m.p, K, tuple(int(c) for c in free)))


def solve(m: FFMatrix, b: FFMatrix) -> FFMatrix | None:
    """A solution ``x`` of ``m @ x == b`` or ``None`` when the system is inconsistent."""
    m._same(b)
    x = solve_array(m.data, b.data, m.p)
    return None if x is None else FFMatrix(x, m.p)


class Subspace:
    """A subspace of GF(p)^n held by a basis normalised on coordinate columns.

    ``basis[:, coord_cols]`` is the identity, which makes coordinates of a
    member vector a plain column lookup.  :meth:`span` produces the reduced
    echelon basis (coordinate columns = pivots); kernels keep the free-column
    normalisation.  Both are canonical for the subspace and the column set.
    """

    __slots__ = ("ambient_dim", "p", "basis", "coord_cols")

    def __init__(self, ambient_dim: int, p: int, basis: np.ndarray, coord_cols: Iterable[int]):
        self.ambient_dim = int(ambient_dim)
        self.p = p
        self.coord_cols = np.asarray(list(coord_cols), dtype=np.int64)
        self.basis = np.asarray(basis, dtype=np.int64).reshape(len(self.coord_cols), self.ambient_dim)

    @classmethod
    def span(cls, rows, ambient_dim: int, p: int) -> "Subspace":
        rows = np.asarray(rows, dtype=np.int64)
        rows = rows.reshape(rows.size // ambient_dim if ambient_dim else 0, ambient_dim)
        R, piv = rref_array(rows, p)
        return cls(ambient_dim, p, R, piv)

    @classmethod
    def zero(cls, ambient_dim: int, p: int) -> "Subspace":
        return cls(ambient_dim, p, np.zeros((0, ambient_dim), dtype=np.int64), ())

    @classmethod
    def full(cls, ambient_dim: int, p: int) -> "Subspace":
        return cls(ambient_dim, p, np.eye(ambient_dim, dtype=np.int64), range(ambient_dim))

    @classmethod
    def kernel(cls, a: np.ndarray, p: int) -> "Subspace":
        a = np.asarray(a)
        K, free = kernel_array(a, p)
        return cls(a.shape[1], p, K, free)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def coords(self, vectors: np.ndarray) -> np.ndarray:
        """Coordinates of member row vectors (no membership check)."""
        return np.asarray(vectors)[..., self.coord_cols]

    def reduce(self, vectors: np.ndarray) -> np.ndarray:
        """Subtract the projection along the coordinate columns; zero iff member."""
        v = np.asarray(vectors, dtype=np.int64)
        if self.dim == 0:
            return np.mod(v, self.p)
        return np.mod(v - matmul(v[..., self.coord_cols], self.basis, self.p), self.p)

    def contains(self, vectors: np.ndarray) -> bool:
        return not np.any(self.reduce(vectors))

    def echelon(self) -> "Subspace":
        return Subspace.span(self.basis, self.ambient_dim, self.p)

    def _check(self, other: "Subspace"):
        if other.p != self.p:
            raise ModulusMismatch(f"GF({self.p}) vs GF({other.p})")
        if other.ambient_dim != self.ambient_dim:
            raise DimensionMismatch(f"ambient {self.ambient_dim} vs {other.ambient_dim}")

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(np.vstack([self.basis, other.basis]), self.ambient_dim, self.p)

    def __and__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient_dim, self.p)
        # a @ U == b @ V  <=>  [U; -V]^T (a, b) == 0
        stacked = np.vstack([self.basis, np.mod(-other.basis, self.p)]).T
        K, _ = kernel_array(stacked, self.p)
        vecs = matmul(K[:, : self.dim], self.basis, self.p)
        return Subspace.span(vecs, self.ambient_dim, self.p)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        if other.p != self.p or other.ambient_dim != self.ambient_dim or other.dim != self.dim:
            return False
        return self.contains(other.basis) and other.contains(self.basis)

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, p={self.p})"


def subspace_meet_join(U: Subspace, V: Subspace) -> tuple[Subspace, Subspace]:
    return U & V, U + V
