import json
import math

import numpy as np
import pytest

import fracgrad as fg


def gaussian_2d(L=16.0, N=128):
    x = fg.coordinates(L, N)
    X, Y = np.meshgrid(x, x, indexing="ij")
    return np.exp(-(X**2 + Y**2) / 2), X, Y


def test_constants():
    assert fg.c_ns(2, 1.0) == 0.0
    assert fg.c_ns(1, 0.5) == pytest.approx(0.199471140200716338969973029967, rel=1e-13)
    assert fg.c_ns_over_one_minus_s(3, 1.0) == pytest.approx(3 / (4 * math.pi), rel=1e-14)
    assert fg.lattice_zeta(1, 3.0) == pytest.approx(2 * 1.2020569031595942, rel=1e-12)
    rows = fg.constants_table(2, [0.5, 0.9])
    assert [r["s"] for r in rows] == [0.5, 0.9]


def test_gradient_shapes_and_mode():
    L, N = 16.0, 64
    x = fg.coordinates(L, N)
    u = np.cos(2 * np.pi * 3 * x / L)
    D = fg.fractional_gradient(u, L, 0.4)
    assert D.shape == (1, N)
    w = 2 * np.pi * 3 / L
    np.testing.assert_allclose(D[0], -(w**0.4) * np.sin(2 * np.pi * 3 * x / L), atol=1e-12)

    g, X, Y = gaussian_2d()
    V = fg.fractional_gradient(g, 16.0, 0.7)
    assert V.shape == (2, 128, 128)
    M = fg.fractional_gradient(V, 16.0, 0.5, vector=True)
    assert M.shape == (2, 2, 128, 128)


def test_duality_and_ftc():
    g, X, Y = gaussian_2d(N=64)
    phi = np.stack([np.exp(-((X - 1) ** 2 + Y**2)), np.exp(-(X**2 + (Y + 1) ** 2))])
    lhs = np.sum(fg.fractional_gradient(g, 16.0, 0.6) * phi)
    rhs = -np.sum(g * fg.fractional_divergence(phi, 16.0, 0.6))
    assert abs(lhs - rhs) < 1e-11 * np.linalg.norm(g) * np.linalg.norm(phi)
    back = fg.ftc_reconstruct(fg.fractional_gradient(g, 16.0, 0.6), 16.0, 0.6)
    np.testing.assert_allclose(back, g - g.mean(), atol=1e-10)


def test_direct_matches_spectral():
    L, N = 16.0, 128
    x = fg.coordinates(L, N)
    u = np.where(np.abs(x) < 4, np.exp(-1 / np.maximum(1 - (x / 4) ** 2, 1e-300)), 0.0)
    spec = fg.fractional_gradient(u, L, 0.5)
    direct = fg.fractional_gradient_direct(u, L, 0.5)
    assert np.linalg.norm(direct - spec) / np.linalg.norm(spec) < 0.05


def test_minors():
    rng = np.random.default_rng(0)
    F = rng.normal(size=(2, 2, 8, 8))
    det = fg.det_field(F)
    np.testing.assert_allclose(det, F[0, 0] * F[1, 1] - F[0, 1] * F[1, 0], rtol=1e-14)
    cof = fg.cof_field(F)
    np.testing.assert_array_equal(cof[0, 1], -F[1, 0])


def test_errors():
    with pytest.raises(ValueError):
        fg.fractional_gradient(np.zeros(63), 1.0, 0.5)
    with pytest.raises(ValueError):
        fg.fractional_gradient(np.zeros(64), 1.0, 1.5)
    with pytest.raises(MemoryError):
        fg.fractional_gradient_direct(np.zeros((64, 64, 64)), 1.0, 0.5)
    with pytest.raises(fg.ConfigError):
        fg.gamma("{not json")


def test_gamma_sweep():
    cfg = {
        "grid": {"n": 1, "L": 16.0, "N": 128},
        "W": {"kind": "quadratic"},
        "omega": {"type": "ball", "r": 4.0},
        "f": {"type": "bump", "radius": 2.0},
        "s_grid": ["local", 0.9, 0.99],
    }
    res = fg.gamma(json.dumps(cfg))
    assert [r["s"] for r in res["table"]] == ["local", 0.9, 0.99]
    assert all(r["converged"] == 1 for r in res["table"])
    assert res["local_minimizer"].shape == (1, 128)
    assert res["recovery"][-1]["rel_gap"] < 0.02


def test_selftest_subset():
    results = fg.selftest([1, 2, 3])
    assert [r["id"] for r in results] == [1, 2, 3]
    assert all(r["passed"] for r in results)
