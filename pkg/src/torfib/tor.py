"""dim_k Tor^A_i(M, N) from a minimal resolution tensored with the other side.

``d_i (x) N`` is assembled blockwise from ``N``'s action matrices, and

    dim Tor_i = beta_i * dim N - rank(d_i (x) N) - rank(d_{i+1} (x) N).

Resolving ``M`` and resolving ``N`` are independent computations; running
both is the balance check every formula in :mod:`torfib.theorems` is tested
against.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .exactla import matmul, sparse_rank
from .fdmodule import FDModule, num_generators, residue_field
from .resolution import DEFAULT_BUDGET, MinimalResolution, minimal_resolution


class Method(str, Enum):
    LEFT = "left-resolved"
    RIGHT = "right-resolved"
    BOTH = "both"

    @classmethod
    def _missing_(cls, value):
        aliases = {"left": cls.LEFT, "right": cls.RIGHT}
        return aliases.get(value)


class BalanceError(AssertionError):
    """Left- and right-resolved Tor dimensions disagree."""

    def __init__(self, left, right, witness=None):
        super().__init__(f"Tor balance failure: left={left} right={right}")
        self.left = left
        self.right = right
        self.witness = witness


@dataclass(frozen=True, eq=False)
class TorTable:
    left: FDModule
    right: FDModule
    bound: int
    dims: tuple[int, ...]
    method: Method
    left_dims: tuple[int, ...] | None = None
    right_dims: tuple[int, ...] | None = None

    @property
    def balanced(self) -> bool | None:
        if self.left_dims is None or self.right_dims is None:
            return None
        return self.left_dims == self.right_dims

    def to_json(self) -> dict:
        out = {"bound": self.bound, "dims": list(self.dims), "method": self.method.value}
        if self.method is Method.BOTH:
            out["balanced"] = self.balanced
        return out


def tensored_differential(D: np.ndarray, N: FDModule) -> np.ndarray:
    """k-matrix of ``d (x) N`` for ``d`` given as a ``(r, c, dim A)`` array."""
    r, c, d = D.shape
    n = N.dim
    if r == 0 or c == 0 or n == 0:
        return np.zeros((r * n, c * n), dtype=np.int64)
    blocks = matmul(D.reshape(r * c, d), N.action.reshape(d, n * n), N.p)
    return blocks.reshape(r, c, n, n).transpose(0, 2, 1, 3).reshape(r * n, c * n)


def _entries_rank(rr, cc, ll, vv, shape, N: FDModule) -> int:
    r, c = shape
    n = N.dim
    if r == 0 or c == 0 or n == 0 or rr.size == 0:
        return 0
    rows, cols, vals = [], [], []
    for l in np.unique(ll):
        sel = ll == l
        a, b = np.nonzero(N.action[l])
        if a.size == 0:
            continue
        w = N.action[l][a, b]
        rows.append((rr[sel, None] * n + a[None, :]).ravel())
        cols.append((cc[sel, None] * n + b[None, :]).ravel())
        vals.append((vv[sel, None] * w[None, :]).ravel())
    if not rows:
        return 0
    return sparse_rank(np.concatenate(rows), np.concatenate(cols), np.concatenate(vals), (r * n, c * n), N.p)


def tensored_rank(D: np.ndarray, N: FDModule) -> int:
    """``rank(d (x) N)`` without materialising the dense matrix."""
    rr, cc, ll = np.nonzero(D)
    return _entries_rank(rr, cc, ll, D[rr, cc, ll], D.shape[:2], N)


def tor_from_resolution(res: MinimalResolution, N: FDModule, bound: int) -> tuple[int, ...]:
    """Tor dimensions ``0..bound`` from a resolution of length >= ``bound + 1``."""
    if res.length < bound + 1 and not res.terminated:
        raise ValueError(f"resolution of length {res.length} cannot give Tor up to {bound}")
    if N.algebra is not res.algebra:
        raise ValueError("modules live over different algebras")
    ranks = [0]
    for i in range(1, bound + 2):
        if i <= res.length:
            shape = (res.betti[i - 1], res.betti[i])
            ranks.append(_entries_rank(*res.differential_entries(i), shape, N))
        else:
            ranks.append(0)
    betti = res.betti + [0] * (bound + 1 - len(res.betti) + 1)
    return tuple(betti[i] * N.dim - ranks[i] - ranks[i + 1] for i in range(bound + 1))


def tor_dims(
    M: FDModule,
    N: FDModule,
    bound: int,
    method: Method | str = Method.LEFT,
    *,
    res_left: MinimalResolution | None = None,
    res_right: MinimalResolution | None = None,
    budget: int = DEFAULT_BUDGET,
) -> TorTable:
    """``dim_k Tor^A_i(M, N)`` for ``i = 0..bound``.

    Precomputed resolutions may be passed in to share work across pairs.
    With ``method="both"`` a disagreement raises :class:`BalanceError`.
    """
    method = Method(method)
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    if M.algebra is not N.algebra:
        raise ValueError("modules live over different algebras")
    left = right = None
    if method in (Method.LEFT, Method.BOTH):
        if res_left is None or res_left.length < bound + 1:
            res_left = minimal_resolution(M, bound + 1, budget)
        left = tor_from_resolution(res_left, N, bound)
    if method in (Method.RIGHT, Method.BOTH):
        if res_right is None or res_right.length < bound + 1:
            res_right = minimal_resolution(N, bound + 1, budget)
        right = tor_from_resolution(res_right, M, bound)
    if method is Method.BOTH and left != right:
        raise BalanceError(left, right, {"left_betti": res_left.betti, "right_betti": res_right.betti})
    dims = left if left is not None else right
    return TorTable(M, N, bound, dims, method, left, right)


def tor_via_formula_tor1(X: FDModule, Y: FDModule, Z: FDModule, data) -> tuple[int, int]:
    """``dim Tor_1^R(X, Y)`` and ``dim Tor_1^R(Y, Z)`` from data over the factors alone.

    ``X, Y`` are S-modules and ``Z`` is a T-module of the fiber product ``data``.
    Nothing is resolved over R, so the values are independent of :func:`tor_dims` over R.
    """
    if not (X.algebra is data.S and Y.algebra is data.S and Z.algebra is data.T):
        raise ValueError("expected X, Y over S and Z over T")
    kS, kT = residue_field(data.S), residue_field(data.T)
    beta1_kT = minimal_resolution(kT, 1).betti[1]
    dim_xy = tor_dims(X, Y, 1).dims[1] + num_generators(Y) * beta1_kT * num_generators(X)
    beta1_Z = minimal_resolution(Z, 1).betti[1]
    dim_yz = tor_dims(Y, kS, 1).dims[1] * num_generators(Z) + num_generators(Y) * beta1_Z
    return dim_xy, dim_yz
