"""Backend equivalence: compiled kernel vs numpy fallback vs direct formula."""

import cmath

import numpy as np
import pytest

from twmd._backend import BACKEND
from twmd._kernels_py import accumulate_echo as accumulate_py

try:
    from twmd._kernels import accumulate_echo as accumulate_c
except ImportError:
    accumulate_c = None


def _random_problem(rng, n=37, s=4, m=23):
    freqs = 380e6 + 5e6 * np.arange(n)
    delays = rng.uniform(1e-8, 2e-7, size=(s, m))
    amps = rng.uniform(0.1, 2.0, size=s)
    return freqs, delays, amps


def test_numpy_kernel_matches_scalar_formula(rng):
    freqs, delays, amps = _random_problem(rng, n=5, s=3, m=4)
    out = accumulate_py(freqs, delays, amps)
    for n in range(5):
        for m in range(4):
            expected = sum(
                amps[s] * cmath.exp(-2j * cmath.pi * freqs[n] * delays[s, m]) for s in range(3)
            )
            assert abs(out[n, m] - expected) <= 1e-12 * abs(expected)


@pytest.mark.skipif(accumulate_c is None, reason="compiled kernel not built")
def test_compiled_matches_numpy(rng):
    freqs, delays, amps = _random_problem(rng)
    a = accumulate_c(freqs, delays, amps)
    b = accumulate_py(freqs, delays, amps)
    np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-15)


@pytest.mark.skipif(accumulate_c is None, reason="compiled kernel not built")
def test_compiled_rejects_mismatched_amps(rng):
    freqs, delays, amps = _random_problem(rng)
    with pytest.raises(ValueError):
        accumulate_c(freqs, delays, amps[:-1])


def test_backend_is_reported():
    assert BACKEND in ("compiled", "numpy")


@pytest.mark.skipif(accumulate_c is None, reason="compiled kernel not built")
def test_backends_agree_through_echo_synthesis(monkeypatch):
    import twmd.sfcw as sfcw
    from twmd.motions import make_motion_scene
    from twmd.sfcw import RadarParams, synthesize_echo

    params = RadarParams(n_freq=48)
    scene = make_motion_scene(0, 17, params, duration_s=2.0)

    monkeypatch.setattr(sfcw, "accumulate_echo", accumulate_c)
    with_compiled = synthesize_echo(scene, params).data
    monkeypatch.setattr(sfcw, "accumulate_echo", accumulate_py)
    with_numpy = synthesize_echo(scene, params).data
    np.testing.assert_allclose(with_compiled, with_numpy, rtol=1e-12, atol=1e-15)
