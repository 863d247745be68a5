"""Graded computations over R = k[x, y]/(xy), the fiber product of k[x] and k[y].

R is infinite-dimensional, so nothing here truncates the ring.  Instead the
closed-form periodic resolutions of ``S = R/(y)``, ``T = R/(x)`` and ``k``
are written down and checked degree by degree: in degree ``e`` every free
module ``R(-s)`` is the finite space ``R_{e-s}`` (``R_0 = k``, ``R_t`` spanned
by ``x^t, y^t`` for ``t >= 1``), so exactness and homology reduce to ranks of
small matrices over GF(p).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exactla import check_prime, rank_array
from .resolution import ResourceLimit
from .theorems import CheckReport, Status

TARGETS = ("S", "T", "k")


class WindowError(ValueError):
    """A requested homological degree is not visible below the degree bound."""


@dataclass(frozen=True)
class Mono:
    """``coef * x^a`` (var ``"x"``), ``coef * y^a`` (var ``"y"``), or a scalar (``a = 0``)."""

    coef: int
    var: str = "x"
    exp: int = 0

    @property
    def degree(self) -> int:
        return self.exp

    def __str__(self) -> str:
        if self.coef == 0:
            return "0"
        if self.exp == 0:
            return str(self.coef)
        c = "" if self.coef == 1 else f"{self.coef}*"
        return f"{c}{self.var}" + (f"^{self.exp}" if self.exp > 1 else "")


@dataclass(frozen=True)
class GradedHypersurfaceRing:
    p: int
    degree_bound: int

    def __post_init__(self):
        check_prime(self.p)
        if self.degree_bound < 1:
            raise ValueError("degree bound must be positive")

    def piece_dim(self, t: int) -> int:
        return 0 if t < 0 else 1 if t == 0 else 2

    def mult_matrix(self, m: Mono, t: int) -> np.ndarray:
        """Matrix of multiplication by ``m`` from ``R_t`` to ``R_{t + deg m}``.

        Basis of ``R_t``: ``[1]`` for ``t = 0``, ``[x^t, y^t]`` for ``t > 0``.
        """
        src, dst = self.piece_dim(t), self.piece_dim(t + m.degree)
        out = np.zeros((dst, src), dtype=np.int64)
        c = m.coef % self.p
        if src == 0 or dst == 0 or c == 0:
            return out
        if m.exp == 0:
            return (c * np.eye(src, dtype=np.int64)) % self.p
        pos = 0 if m.var == "x" else 1
        if t == 0:
            out[pos, 0] = c
        else:
            out[pos, pos] = c  # x^a x^t = x^(a+t), x^a y^t = 0
        return out

    def is_nzd_in_degree(self, m: Mono, t: int) -> bool:
        return rank_array(self.mult_matrix(m, t), self.p) == self.piece_dim(t)

    def sum_is_nzd_in_degree(self, t: int) -> bool:
        """Whether ``x + y`` is injective on ``R_t``."""
        a = self.mult_matrix(Mono(1, "x", 1), t) + self.mult_matrix(Mono(1, "y", 1), t)
        return rank_array(a % self.p, self.p) == self.piece_dim(t)


@dataclass(frozen=True)
class GradedComplex:
    """Free modules ``F_i = sum_j R(-shifts[i][j])`` with monomial differentials.

    ``differentials[i - 1]`` is ``d_i`` as a nested list ``[row][col]`` of :class:`Mono`.
    """

    ring: GradedHypersurfaceRing
    target: str
    shifts: tuple[tuple[int, ...], ...]
    differentials: tuple[tuple[tuple[Mono, ...], ...], ...]

    @property
    def length(self) -> int:
        return len(self.differentials)

    @property
    def ranks(self) -> list[int]:
        return [len(s) for s in self.shifts]

    def is_minimal(self) -> bool:
        return all(m.coef % self.ring.p == 0 or m.exp > 0 for d in self.differentials for row in d for m in row)

    def describe(self) -> list[list[list[str]]]:
        return [[[str(m) for m in row] for row in d] for d in self.differentials]


def periodic_resolution(target: str, length: int, degree_bound: int = 12, p: int = 5) -> GradedComplex:
    """Closed-form minimal resolution of ``S``, ``T`` or ``k`` through ``F_length``."""
    if target not in TARGETS:
        raise ValueError(f"target must be one of {TARGETS}")
    if length < 1:
        raise ValueError("length must be at least 1")
    if length >= degree_bound:
        raise ResourceLimit(f"F_{length} is generated in degree {length}, outside the bound {degree_bound}")
    ring = GradedHypersurfaceRing(p, degree_bound)
    x, y, zero = Mono(1, "x", 1), Mono(1, "y", 1), Mono(0)
    if target in ("S", "T"):
        first, second = (y, x) if target == "S" else (x, y)
        shifts = tuple((i,) for i in range(length + 1))
        diffs = tuple((((first if i % 2 else second),),) for i in range(1, length + 1))
    else:
        shifts = ((0,),) + tuple((i, i) for i in range(1, length + 1))
        diffs = [((x, y),)]
        for i in range(2, length + 1):
            a, b = (y, x) if i % 2 == 0 else (x, y)
            diffs.append(((a, zero), (zero, b)))
        diffs = tuple(diffs)
    return GradedComplex(ring, target, shifts, diffs)


def _module_piece(tag: str, t: int) -> int:
    """Dimension of the degree-``t`` piece of ``S = k[x]``, ``T = k[y]``, ``k``, or ``R``."""
    if t < 0:
        return 0
    if tag in ("S", "T"):
        return 1
    if tag == "k":
        return 1 if t == 0 else 0
    return 1 if t == 0 else 2


def _act(m: Mono, tag: str, t: int, ring: GradedHypersurfaceRing) -> np.ndarray:
    """Matrix of ``m`` from the degree-``t`` piece of the module ``tag`` to degree ``t + deg m``."""
    if tag == "R":
        return ring.mult_matrix(m, t)
    src, dst = _module_piece(tag, t), _module_piece(tag, t + m.degree)
    out = np.zeros((dst, src), dtype=np.int64)
    if src == 0 or dst == 0:
        return out
    c = m.coef % ring.p
    if m.exp == 0:
        out[0, 0] = c
    elif tag == "S" and m.var == "x" or tag == "T" and m.var == "y":
        out[0, 0] = c
    return out


def degree_matrix(C: GradedComplex, i: int, e: int, tag: str = "R") -> np.ndarray:
    """``d_i (x) N`` restricted to degree ``e``, for ``N`` named by ``tag`` (``"R"`` for ``d_i`` itself)."""
    src_shifts, dst_shifts = C.shifts[i], C.shifts[i - 1]
    D = C.differentials[i - 1]
    src_dims = [_module_piece(tag, e - s) for s in src_shifts]
    dst_dims = [_module_piece(tag, e - s) for s in dst_shifts]
    out = np.zeros((sum(dst_dims), sum(src_dims)), dtype=np.int64)
    r0 = 0
    for r, rs in enumerate(dst_shifts):
        c0 = 0
        for c, cs in enumerate(src_shifts):
            m = D[r][c]
            if m.coef % C.ring.p and src_dims[c] and dst_dims[r]:
                if m.degree != cs - rs:
                    raise ValueError(f"entry {m} of d_{i} is not homogeneous of degree {cs - rs}")
                out[r0 : r0 + dst_dims[r], c0 : c0 + src_dims[c]] = _act(m, tag, e - cs, C.ring)
            c0 += src_dims[c]
        r0 += dst_dims[r]
    return out % C.ring.p


def piece_dim(C: GradedComplex, i: int, e: int, tag: str = "R") -> int:
    return sum(_module_piece(tag, e - s) for s in C.shifts[i])


def _rank(a: np.ndarray, p: int) -> int:
    return rank_array(a, p) if a.size else 0


def check_exactness(C: GradedComplex) -> dict:
    """Verify ``d^2 = 0`` and exactness (including the augmentation) in degrees ``< D - 1``."""
    p, D = C.ring.p, C.ring.degree_bound
    problems = []
    for e in range(D - 1):
        for i in range(2, C.length + 1):
            prod = degree_matrix(C, i - 1, e) @ degree_matrix(C, i, e) % p
            if prod.size and prod.any():
                problems.append({"degree": e, "position": i, "issue": "d^2 != 0"})
        # homology at F_0 must be the target, and zero at F_1 .. F_{L-1}
        h0 = piece_dim(C, 0, e) - _rank(degree_matrix(C, 1, e), p)
        if h0 != _module_piece(C.target, e):
            problems.append({"degree": e, "position": 0, "issue": f"cokernel dim {h0}"})
        for i in range(1, C.length):
            h = piece_dim(C, i, e) - _rank(degree_matrix(C, i, e), p) - _rank(degree_matrix(C, i + 1, e), p)
            if h:
                problems.append({"degree": e, "position": i, "issue": f"homology dim {h}"})
    return {"exact": not problems, "minimal": C.is_minimal(), "problems": problems}


def graded_tor_dims(mtag: str, ntag: str, i_max: int, degree_bound: int = 12, p: int = 5) -> list[int]:
    """``dim_k Tor_i^R(M, N)`` for ``i = 1 .. i_max``, resolving ``M``, summed over degrees ``< D - 1``."""
    if ntag not in TARGETS:
        raise ValueError(f"module must be one of {TARGETS}")
    if i_max < 1:
        raise ValueError("i_max must be at least 1")
    if i_max > degree_bound - 2:
        raise WindowError(f"i_max = {i_max} needs degree bound at least {i_max + 2}, got {degree_bound}")
    C = periodic_resolution(mtag, i_max + 1, degree_bound, p)
    dims = []
    for i in range(1, i_max + 1):
        total = 0
        for e in range(degree_bound - 1):
            total += (
                piece_dim(C, i, e, ntag)
                - _rank(degree_matrix(C, i, e, ntag), p)
                - _rank(degree_matrix(C, i + 1, e, ntag), p)
            )
        dims.append(total)
    return dims


def expected_pattern(mtag: str, ntag: str, i_max: int) -> list[int] | None:
    """Tor dimensions predicted for the cyclic modules S and T."""
    if {mtag, ntag} == {"S", "T"}:
        return [1 if i % 2 == 0 else 0 for i in range(1, i_max + 1)]
    if mtag == ntag and mtag in ("S", "T"):
        return [1 if i % 2 == 1 else 0 for i in range(1, i_max + 1)]
    return None


def verify_dvr_example(degree_bound: int = 12, i_max: int = 10, p: int = 5) -> CheckReport:
    """Check the Tor patterns, exactness and depth facts for k[x,y]/(xy)."""
    if i_max > degree_bound - 2:
        raise WindowError(f"i_max = {i_max} needs degree bound at least {i_max + 2}, got {degree_bound}")
    ring = GradedHypersurfaceRing(p, degree_bound)
    detail: dict = {"degree_bound": degree_bound, "i_max": i_max, "p": p}
    ok = True

    complexes = {t: periodic_resolution(t, i_max + 1, degree_bound, p) for t in TARGETS}
    detail["complexes"] = {}
    for t, C in complexes.items():
        ex = check_exactness(C)
        detail["complexes"][t] = {"ranks": C.ranks, "exact": ex["exact"], "minimal": ex["minimal"]}
        ok &= ex["exact"] and ex["minimal"]
        if ex["problems"]:
            detail["complexes"][t]["problems"] = ex["problems"]

    detail["tor"] = {}
    for a, b in (("S", "S"), ("S", "T"), ("T", "S"), ("T", "T")):
        dims = graded_tor_dims(a, b, i_max, degree_bound, p)
        want = expected_pattern(a, b, i_max)
        detail["tor"][f"{a},{b}"] = {"dims": dims, "expected": want}
        ok &= dims == want

    # the resolutions of S and T never stop, yet an even Tor of S with itself vanishes
    betti_S = [r for r in complexes["S"].ranks[: i_max + 1]]
    betti_T = [r for r in complexes["T"].ranks[: i_max + 1]]
    tor4 = detail["tor"]["S,S"]["dims"][3] if i_max >= 4 else None
    witness_ok = tor4 == 0 and all(betti_S) and all(betti_T)
    detail["tor4_witness"] = {"tor4_SS": tor4, "betti_S": betti_S, "betti_T": betti_T, "holds": witness_ok}
    ok &= witness_ok

    # Betti numbers of k are measured as dim Tor_i(k, k), never assumed
    detail["betti_k"] = [1] + graded_tor_dims("k", "k", i_max, degree_bound, p)

    nzd = all(ring.sum_is_nzd_in_degree(t) for t in range(degree_bound - 1))
    zd = not ring.is_nzd_in_degree(Mono(1, "x", 1), 1)
    detail["depth"] = {"x_plus_y_nzd": nzd, "x_zero_divisor": zd}
    ok &= nzd and zd

    status = Status.PASS if ok else Status.FAIL
    return CheckReport("dvr_example", "Tor over k[x,y]/(xy): periodic patterns and vanishing Tor_4(S,S)", status, detail)
