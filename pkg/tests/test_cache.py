import numpy as np

from conftest import random_module
from torfib.cache import ENV_VAR, cached_resolution, resolution_key
from torfib.resolution import minimal_resolution


def test_cache_round_trip(tmp_path, monkeypatch, fib_x2_y2):
    monkeypatch.setenv(ENV_VAR, str(tmp_path))
    M = random_module(fib_x2_y2.R, 5)
    first = cached_resolution(M, 5)
    files = list(tmp_path.glob("*.npz"))
    assert [f.stem for f in files] == [resolution_key(M, 5)]
    assert not list(tmp_path.glob("*.tmp"))
    again = cached_resolution(M, 5)
    fresh = minimal_resolution(M, 5)
    assert again.betti == first.betti == fresh.betti
    assert again.terminated == fresh.terminated
    for i in range(1, 6):
        assert np.array_equal(again.differential(i), fresh.differential(i))
        assert again.syzygy_space(i) == fresh.syzygy_space(i)
    again.check()


def test_cache_disabled_and_corrupt_entry(tmp_path, monkeypatch, fib_x2_y2):
    M = random_module(fib_x2_y2.R, 6)
    monkeypatch.delenv(ENV_VAR, raising=False)
    assert cached_resolution(M, 3).betti == minimal_resolution(M, 3).betti
    monkeypatch.setenv(ENV_VAR, str(tmp_path))
    (tmp_path / f"{resolution_key(M, 3)}.npz").write_bytes(b"garbage")
    assert cached_resolution(M, 3).betti == minimal_resolution(M, 3).betti


def test_key_depends_on_content(fib_x2_y2):
    a, b = random_module(fib_x2_y2.R, 1), random_module(fib_x2_y2.R, 2)
    assert resolution_key(a, 4) != resolution_key(b, 4)
    assert resolution_key(a, 4) != resolution_key(a, 5)
    assert resolution_key(a, 4) == resolution_key(random_module(fib_x2_y2.R, 1), 4)
