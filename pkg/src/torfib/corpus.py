"""Seeded random corpora of fiber products and modules over them.

Instance ``i`` of a corpus is a pure function of ``(params, i)``: every random
draw comes from a :class:`~torfib.rng.SplitMix64` stream keyed by the seed,
the index and the rejection attempt.
"""

from __future__ import annotations

import hashlib
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from .algebra import FiberProductData, FiniteLocalAlgebra, fiber_product, monomial_quotient_algebra
from .exactla import Subspace, check_prime, matmul
from .fdmodule import FDModule, module_from_presentation, residue_field, restrict_scalars, zero_module
from .resolution import ResourceLimit, minimal_resolution
from .rng import SplitMix64

S_VARS = ("x", "y", "z")
T_VARS = ("u", "v", "w")
MODULE_NAMES = ("X", "Y", "Z", "W", "M", "N")


@dataclass(frozen=True)
class CorpusParams:
    seed: int = 42
    count: int = 200
    p: int = 5
    max_vars: int = 3
    max_power: int = 5  # largest pure power x^e among the relations, so socle degree <= 4
    max_factor_dim: int = 6
    max_rows: int = 3
    max_cols: int = 4
    max_entry_degree: int = 2
    betti_length: int = 9
    betti_budget: int = 5000  # bound on predicted beta_L(k) * dim R
    max_attempts: int = 500

    def __post_init__(self):
        check_prime(self.p)
        if not 1 <= self.max_vars <= 3:
            raise ValueError("max_vars must be between 1 and 3")
        if self.max_power < 2:
            raise ValueError("max_power must be at least 2")


def _series_inverse(a: np.ndarray) -> np.ndarray:
    """Truncated inverse of an integer power series with constant term 1."""
    out = np.zeros_like(a)
    out[0] = 1
    for n in range(1, len(a)):
        out[n] = -np.dot(a[1 : n + 1], out[n - 1 :: -1][:n])
    return out


def predicted_residue_betti(bS, bT) -> list[int]:
    """Betti numbers of k over the fiber product from those over the factors.

    Uses ``1/P_R = 1/P_S + 1/P_T - 1`` for the Poincare series of k.
    """
    n = min(len(bS), len(bT))
    a = np.array(bS[:n], dtype=object)
    b = np.array(bT[:n], dtype=object)
    inv = _series_inverse(a) + _series_inverse(b)
    inv[0] -= 1
    return [int(v) for v in _series_inverse(inv)]


def _sample_factor(rng: SplitMix64, params: CorpusParams, names) -> FiniteLocalAlgebra | None:
    n = rng.randint(1, params.max_vars)
    variables = list(names[:n])
    rels = []
    for k in range(n):
        e = [0] * n
        e[k] = rng.randint(2, params.max_power)
        rels.append(tuple(e))
    for i in range(n):
        for j in range(i + 1, n):
            if rng.chance(1, 2):
                e = [0] * n
                e[i] = e[j] = 1
                rels.append(tuple(e))
    A = monomial_quotient_algebra(params.p, variables, rels)
    return A if A.dim <= params.max_factor_dim else None


def _residue_betti(A: FiniteLocalAlgebra, params: CorpusParams) -> tuple[int, ...] | None:
    pres = A.presentation
    return _residue_betti_of(A.p, tuple(pres["vars"]), tuple(pres["relations"]), params.betti_length, params.betti_budget)


@lru_cache(maxsize=1024)
def _residue_betti_of(p, variables, relations, length, budget):
    A = monomial_quotient_algebra(p, variables, relations)
    try:
        return tuple(minimal_resolution(residue_field(A), length, budget).betti)
    except ResourceLimit:
        return None


def _low_degree(A: FiniteLocalAlgebra, deg: int) -> np.ndarray:
    """Basis indices of the maximal ideal outside ``m^(deg+1)``."""
    power = A.maxideal
    for _ in range(deg):
        if power.dim == 0:
            break
        imgs = np.vstack([matmul(power.basis, A.lmul[g].T, A.p) for g in A.ideal_gens])
        power = Subspace.span(imgs, A.dim, A.p)
    eye = np.eye(A.dim, dtype=np.int64)
    return np.array([i for i in range(1, A.dim) if not power.contains(eye[i : i + 1])], dtype=np.int64)


def _sample_presentation(rng: SplitMix64, A: FiniteLocalAlgebra, params: CorpusParams) -> np.ndarray:
    r = rng.randint(1, params.max_rows)
    c = rng.randint(0, params.max_cols)
    support = _low_degree(A, params.max_entry_degree)
    P = np.zeros((r, c, A.dim), dtype=np.int64)
    for i in range(r):
        for j in range(c):
            if rng.chance(1, 4):
                continue
            for _ in range(rng.randint(1, 2)):
                P[i, j, support[rng.below(len(support))]] += rng.randint(1, params.p - 1)
    return np.mod(P, params.p)


@dataclass(frozen=True, eq=False)
class Instance:
    index: int
    params: CorpusParams
    fiber: FiberProductData
    modules: dict  # name -> FDModule; X, Y over S, Z, W over T, M, N over R
    presentations: dict  # name -> (r, c, dim) array, or None for an injected zero module
    attempts: int = 0
    _lifts: dict = field(default_factory=dict, repr=False)

    @property
    def S(self) -> FiniteLocalAlgebra:
        return self.fiber.S

    @property
    def T(self) -> FiniteLocalAlgebra:
        return self.fiber.T

    @property
    def R(self) -> FiniteLocalAlgebra:
        return self.fiber.R

    def __getattr__(self, name):
        if name in MODULE_NAMES:
            return self.modules[name]
        raise AttributeError(name)

    def lift(self, M: FDModule) -> FDModule:
        """The R-module underlying an S-, T- or R-module (cached per object)."""
        if M.algebra is self.R:
            return M
        key = id(M)
        if key not in self._lifts:
            if M.algebra is self.S:
                phi = self.fiber.eta_S
            elif M.algebra is self.T:
                phi = self.fiber.eta_T
            else:
                raise ValueError("module is not over S, T or R")
            self._lifts[key] = (M, restrict_scalars(phi, M))
        return self._lifts[key][1]

    def describe(self) -> dict:
        mods = {}
        for name in MODULE_NAMES:
            P = self.presentations[name]
            mods[name] = {
                "dim": self.modules[name].dim,
                "presentation": None if P is None else P.tolist(),
            }
        return {
            "seed": self.params.seed,
            "index": self.index,
            "p": self.params.p,
            "S": self.S.describe(),
            "T": self.T.describe(),
            "modules": mods,
        }

    def digest(self) -> str:
        h = hashlib.blake2b(digest_size=8)
        h.update(self.S.digest_bytes())
        h.update(self.T.digest_bytes())
        for name in MODULE_NAMES:
            h.update(name.encode())
            h.update(self.modules[name].digest_bytes())
        return h.hexdigest()

    def manifest_line(self) -> str:
        dims = " ".join(str(self.modules[n].dim) for n in MODULE_NAMES)
        return f"{self.index} {self.S.dim} {self.T.dim} {self.R.dim} {dims} {self.digest()}"


def generate(params: CorpusParams, index: int) -> Instance:
    """Instance ``index`` of the corpus described by ``params``."""
    if not 0 <= index < params.count:
        raise IndexError(f"index {index} outside corpus of size {params.count}")
    for attempt in range(params.max_attempts):
        rng = SplitMix64(params.seed, index, attempt)
        S = _sample_factor(rng, params, S_VARS)
        T = _sample_factor(rng, params, T_VARS) if S is not None else None
        if S is None or T is None:
            continue
        bS = _residue_betti(S, params)
        bT = _residue_betti(T, params) if bS is not None else None
        if bS is None or bT is None:
            continue
        dim_R = S.dim + T.dim - 1
        if predicted_residue_betti(bS, bT)[-1] * dim_R > params.betti_budget:
            continue
        fib = fiber_product(S, T)
        modules, pres = {}, {}
        for k, name in enumerate(MODULE_NAMES):
            A = S if name in "XY" else T if name in "ZW" else fib.R
            sub = rng.split(k)
            if sub.chance(1, 16):
                modules[name], pres[name] = zero_module(A), None
                continue
            P = _sample_presentation(sub, A, params)
            modules[name], pres[name] = module_from_presentation(A, P), P
        return Instance(index, params, fib, modules, pres, attempt)
    raise RuntimeError(f"no admissible instance after {params.max_attempts} attempts")


def corpus(params: CorpusParams):
    for i in range(params.count):
        yield generate(params, i)


def write_manifest(params: CorpusParams, path) -> Path:
    path = Path(path)
    lines = [f"# corpus {asdict(params)}", "# index dimS dimT dimR X Y Z W M N digest"]
    lines += [inst.manifest_line() for inst in corpus(params)]
    path.write_text("\n".join(lines) + "\n")
    return path
