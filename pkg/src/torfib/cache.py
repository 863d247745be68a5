"""On-disk cache of minimal resolutions, enabled by ``TORFIB_CACHE_DIR``.

Entries are keyed by a content hash of (algebra, module, length) and written
atomically (temporary file, then rename).  A cached resolution is identical
to a recomputed one, so the cache never changes results.
"""

from __future__ import annotations

import hashlib
import os
import tempfile
from pathlib import Path

import numpy as np
from scipy import sparse

from .fdmodule import FDModule
from .resolution import DEFAULT_BUDGET, MinimalResolution, SyzygySpace, minimal_resolution

ENV_VAR = "TORFIB_CACHE_DIR"
FORMAT = b"torfib-resolution-v1"


def cache_dir() -> Path | None:
    d = os.environ.get(ENV_VAR)
    return Path(d) if d else None


def resolution_key(M: FDModule, length: int) -> str:
    h = hashlib.blake2b(digest_size=16)
    h.update(FORMAT)
    h.update(M.algebra.digest_bytes())
    h.update(M.digest_bytes())
    h.update(length.to_bytes(4, "little"))
    return h.hexdigest()


def _pack(res: MinimalResolution) -> dict:
    out = {
        "betti": np.array(res.betti, dtype=np.int64),
        "meta": np.array([res.length, int(res.terminated)], dtype=np.int64),
    }
    for i, (g, W) in enumerate(zip(res.generators, res.spaces)):
        for tag, m in (("g", g), ("w", W.basis)):
            m = sparse.csr_matrix(m)
            out[f"{tag}{i}_data"] = m.data.astype(np.int64)
            out[f"{tag}{i}_indices"] = m.indices.astype(np.int64)
            out[f"{tag}{i}_indptr"] = m.indptr.astype(np.int64)
            out[f"{tag}{i}_shape"] = np.array(m.shape, dtype=np.int64)
        out[f"c{i}"] = W.coord_cols.astype(np.int64)
        out[f"a{i}"] = np.array([W.ambient_dim], dtype=np.int64)
    return out


def _unpack(M: FDModule, z) -> MinimalResolution:
    length, terminated = (int(v) for v in z["meta"])
    gens, spaces = [], []
    for i in range(length):
        mats = {}
        for tag in ("g", "w"):
            mats[tag] = sparse.csr_matrix(
                (z[f"{tag}{i}_data"], z[f"{tag}{i}_indices"], z[f"{tag}{i}_indptr"]),
                shape=tuple(z[f"{tag}{i}_shape"]),
            )
        gens.append(mats["g"])
        spaces.append(SyzygySpace(mats["w"], z[f"c{i}"], int(z[f"a{i}"][0])))
    return MinimalResolution(M, length, [int(b) for b in z["betti"]], gens, spaces, bool(terminated))


def cached_resolution(M: FDModule, length: int, budget: int = DEFAULT_BUDGET) -> MinimalResolution:
    """:func:`minimal_resolution` backed by the on-disk cache when it is enabled."""
    root = cache_dir()
    if root is None:
        return minimal_resolution(M, length, budget)
    path = root / f"{resolution_key(M, length)}.npz"
    if path.exists():
        try:
            with np.load(path) as z:
                return _unpack(M, z)
        except (OSError, ValueError, KeyError):
            pass  # unreadable entry: recompute and overwrite
    res = minimal_resolution(M, length, budget)
    root.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=root, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            np.savez(fh, **_pack(res))
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return res
