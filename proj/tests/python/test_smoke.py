import numpy as np
import pytest

import randutv


def test_factorize_roundtrip():
    rng = np.random.default_rng(0)
    a = rng.standard_normal((40, 30))
    t, u, v = randutv.factorize(a, b=8, q=1, seed=3)
    assert t.shape == (40, 30) and u.shape == (40, 40) and v.shape == (30, 30)
    assert np.allclose(u @ t @ v.T, a, atol=1e-11)
    assert np.allclose(u.T @ u, np.eye(40), atol=1e-12)
    assert np.allclose(v.T @ v, np.eye(30), atol=1e-12)
    assert np.all(np.tril(t, -1) == 0.0)
    # the factorization is orthogonally equivalent to a, so spectra agree
    assert np.allclose(
        np.linalg.svd(t, compute_uv=False), np.linalg.svd(a, compute_uv=False), rtol=1e-10
    )


def test_seed_determinism():
    a = randutv.make_test_matrix("gaussian", 24, 24, seed=11)
    t1, _, _ = randutv.factorize(a, b=8, seed=5)
    t2, _, _ = randutv.factorize(a, b=8, seed=5)
    t3, _, _ = randutv.factorize(a, b=8, seed=6)
    assert np.array_equal(t1, t2)
    assert not np.array_equal(t1, t3)


def test_ab_worker_invariance():
    a = randutv.make_test_matrix("gaussian", 32, 32, seed=4)
    r1 = randutv.factorize(a, algo="ab", b=8, workers=1, seed=9)
    r4 = randutv.factorize(a, algo="ab", b=8, workers=4, seed=9)
    for x, y in zip(r1, r4):
        assert np.array_equal(x, y)


def test_no_uv():
    a = randutv.make_test_matrix("gaussian", 16, 16, seed=1)
    t, u, v = randutv.factorize(a, b=8, build_uv=False)
    assert u is None and v is None
    assert t.shape == (16, 16)


def test_c_order_input_accepted():
    a = np.arange(36.0).reshape(6, 6)  # C-ordered
    t, u, v = randutv.factorize(a, b=4, q=2)
    assert np.allclose(u @ t @ v.T, a, atol=1e-12)


def test_singular_values_match_numpy():
    a = randutv.make_test_matrix("geometric:0.5", 20, 20, seed=2)
    s = randutv.singular_values(a)
    assert np.allclose(s, np.linalg.svd(a, compute_uv=False), rtol=1e-10, atol=1e-18)


def test_svd_reconstruction():
    a = randutv.make_test_matrix("gaussian", 12, 7, seed=8)
    u, s, v = randutv.svd(a)
    assert u.shape == (12, 7) and v.shape == (7, 7)
    assert np.allclose(u * s @ v.T, a, atol=1e-12)


def test_divisibility_error():
    a = np.zeros((10, 10))
    with pytest.raises(ValueError):
        randutv.factorize(a, algo="ab", b=3)
    with pytest.raises(ValueError):
        randutv.factorize(a, algo="nope")


def test_transcript_and_layout():
    txt = randutv.analyze_transcript(8, 8, b=4, q=0, build_uv=False)
    lines = txt.splitlines()
    assert len(lines) == 24
    assert lines[0].startswith("Generate_normal_random")
    lay = randutv.layout_map(16, 24, 4, 4, 2, 3)
    assert lay.splitlines()[0] == "P0 P1 P2 P0 P1 P2"


def test_scaled_time():
    assert randutv.scaled_time(216.7, 25600) == pytest.approx(0.129, abs=5e-4)
