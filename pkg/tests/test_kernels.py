"""Bitwise parity of the compiled kernels against the pure-Python mirror."""

import math

import numpy as np
import pytest

from stepfreeze import _kernels
from stepfreeze._kernels import _fallback

native = pytest.importorskip(
    "stepfreeze._kernels._native",
    reason="compiled backend not built; parity is vacuous")


def increments(seed, n, dt=1e-3):
    return np.random.default_rng(seed).standard_normal((n, 2)) * math.sqrt(dt)


class TestParity:
    @pytest.mark.parametrize("seed", range(5))
    def test_em_cartesian_bitwise(self, seed):
        dw = increments(seed, 20_000)
        args = (1.0, 0.0, -0.85, 2 * math.pi * 0.88, 0.05, 1e-3, dw)
        a = native.em_cartesian(*args)
        b = _fallback.em_cartesian(*args)
        np.testing.assert_array_equal(a, b)

    @pytest.mark.parametrize("seed", range(5))
    def test_em_polar_bitwise(self, seed):
        dw = increments(100 + seed, 20_000)
        args = (0.9, 0.1, -0.85, 2 * math.pi * 0.88, 0.05, 1e-3, dw, 1e-6)
        np.testing.assert_array_equal(
            native.em_polar(*args), _fallback.em_polar(*args))

    def test_em_polar_reflection_bitwise(self):
        # a handcrafted large downward kick forces a crossing below the
        # floor, so the reflection branch itself is compared bitwise
        dw = increments(7, 1000, dt=1e-6)
        dw[0, 0] = -1e-3
        args = (1.2e-6, 0.0, -0.5, 2 * math.pi * 0.88, 1e-3, 1e-6, dw, 1e-6)
        a = native.em_polar(*args)
        b = _fallback.em_polar(*args)
        assert a[1, 0] > 1e-6  # reflected, not clamped to the floor
        assert a[:, 0].min() >= 1e-6
        np.testing.assert_array_equal(a, b)

    @pytest.mark.parametrize("seed", range(5))
    def test_em_cartesian_escape_bitwise(self, seed):
        dw = increments(200 + seed, 200_000)
        args = (1.0, 0.0, -0.85, 2 * math.pi * 0.88, 0.12, 1e-3, dw, 0.5)
        a = native.em_cartesian_escape(*args)
        b = _fallback.em_cartesian_escape(*args)
        assert a == b

    @pytest.mark.parametrize("seed", range(5))
    def test_surrogate_walk_bitwise(self, seed):
        rng = np.random.default_rng(seed)
        rows = rng.dirichlet(np.ones(8), size=8)
        cum = np.cumsum(rows, axis=1)
        u = rng.random(5000)
        np.testing.assert_array_equal(
            native.surrogate_walk(cum, 3, u),
            _fallback.surrogate_walk(cum, 3, u))

    def test_surrogate_walk_clips_rounding_overflow(self):
        # a draw beyond the row's cumulative total must clamp to the last state
        cum = np.array([[0.5, 0.999999], [0.2, 1.0]])
        u = np.array([0.9999999])
        for impl in (native.surrogate_walk, _fallback.surrogate_walk):
            np.testing.assert_array_equal(impl(cum, 0, u), [0, 1])


class TestBackendSelection:
    def test_active_backend_reported(self):
        assert _kernels.BACKEND in ("native", "fallback")

    def test_exported_callables_match_backend(self):
        mod = native if _kernels.BACKEND == "native" else _fallback
        assert _kernels.em_cartesian is mod.em_cartesian
        assert _kernels.surrogate_walk is mod.surrogate_walk
