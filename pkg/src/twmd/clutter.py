"""Wall-clutter mitigation along slow time: mean subtraction, SVD subspace
projection, and a linear-phase FIR high-pass filter.

The filter is a windowed-sinc design (Hamming window, spectral inversion of
the matching low-pass): deterministic and closed-form. Defaults follow the
through-wall operating point: even order 112 (113 symmetric taps), 3 Hz
cutoff at a 113 Hz sweep rate. Filtering runs along slow time independently
for every range bin; the group delay of order/2 samples is compensated so
output columns stay aligned with the input.
"""

from dataclasses import dataclass

import numpy as np
from scipy.signal import oaconvolve

from twmd.ranging import RangeMap


@dataclass(frozen=True)
class FilterCoeffs:
    """Symmetric (type I) FIR taps plus the design metadata."""

    taps: np.ndarray
    cutoff_hz: float
    sample_rate_hz: float

    @property
    def order(self):
        return self.taps.size - 1

    @property
    def group_delay(self):
        """Constant delay in samples for a type-I linear-phase filter."""
        return self.order // 2

    def response_at(self, freq_hz: float) -> complex:
        """Frequency response H(f) evaluated directly from the taps."""
        n = np.arange(self.taps.size)
        return complex(np.sum(self.taps * np.exp(-2j * np.pi * freq_hz / self.sample_rate_hz * n)))


def mean_subtract(rm: RangeMap) -> RangeMap:
    """Remove each range bin's slow-time mean (stationary clutter)."""
    if rm.n_slow < 2:
        raise ValueError("mean subtraction needs at least 2 slow-time samples")
    data = rm.data - rm.data.mean(axis=1, keepdims=True)
    return RangeMap(data=data, bin_spacing=rm.bin_spacing, prf=rm.prf, params=rm.params)


def svd_project(rm: RangeMap, n_remove: int = 1) -> RangeMap:
    """Subtract the n_remove strongest singular components of the range map.

    The dominant subspace is attributed to static wall reflections; the
    output's largest singular value is the input's sigma_{n_remove+1}.
    """
    k = min(rm.data.shape)
    if not 1 <= n_remove < k:
        raise ValueError(f"n_remove must be in [1, {k - 1}] (got {n_remove})")
    u, s, vh = np.linalg.svd(rm.data, full_matrices=False)
    clutter = (u[:, :n_remove] * s[:n_remove]) @ vh[:n_remove]
    return RangeMap(data=rm.data - clutter, bin_spacing=rm.bin_spacing, prf=rm.prf, params=rm.params)


def design_highpass(order: int = 112, cutoff_hz: float = 3.0, sample_rate_hz: float = 113.0) -> FilterCoeffs:
    """Design a linear-phase FIR high-pass by windowed-sinc spectral inversion.

    A Hamming-windowed low-pass is normalized to unit DC gain and inverted
    (hp = delta - lp), so the high-pass DC gain is zero to machine
    precision and the Nyquist-side passband sits at unity. order must be
    even (type I), giving order+1 symmetric taps and a flat group delay of
    order/2 samples.
    """
    if order < 2 or order % 2 != 0:
        raise ValueError("order must be a positive even integer")
    if not 0.0 < cutoff_hz < sample_rate_hz / 2.0:
        raise ValueError("cutoff_hz must lie in (0, sample_rate/2)")

    mid = order // 2
    fc = cutoff_hz / sample_rate_hz
    # Build the right half and mirror it so symmetry is exact in floating point.
    d = np.arange(mid + 1)
    half = np.where(d == 0, 2.0 * fc, np.sin(2.0 * np.pi * fc * d) / (np.pi * np.where(d == 0, 1, d)))
    half = half * (0.54 - 0.46 * np.cos(2.0 * np.pi * (mid + d) / order))
    lowpass = np.concatenate([half[:0:-1], half])
    lowpass /= lowpass.sum()

    taps = -lowpass
    taps[mid] += 1.0
    return FilterCoeffs(taps=taps, cutoff_hz=float(cutoff_hz), sample_rate_hz=float(sample_rate_hz))


def apply_highpass(rm: RangeMap, coeffs: FilterCoeffs) -> RangeMap:
    """High-pass filter every range bin along slow time.

    Real taps convolve the complex slow-time rows (zero-padded edges); the
    output is advanced by the group delay so it stays aligned with the
    input and keeps length M. The first and last order/2 columns are
    filter transients.
    """
    m = rm.n_slow
    if m <= coeffs.order:
        raise ValueError(f"need more than {coeffs.order} slow-time samples (got {m})")
    delay = coeffs.group_delay
    full = oaconvolve(rm.data, coeffs.taps[None, :], axes=1)
    data = full[:, delay : delay + m]
    return RangeMap(data=data, bin_spacing=rm.bin_spacing, prf=rm.prf, params=rm.params)


def transient_width(coeffs: FilterCoeffs) -> int:
    """Columns at each edge of a filtered map affected by edge transients."""
    return coeffs.group_delay


def declutter(rm: RangeMap, method: str, n_remove: int = 1, hpf: FilterCoeffs | None = None) -> RangeMap:
    """Dispatch one of the mitigation methods: none, mean, svd, or hpf."""
    if method == "none":
        return rm
    if method == "mean":
        return mean_subtract(rm)
    if method == "svd":
        return svd_project(rm, n_remove=n_remove)
    if method == "hpf":
        if hpf is None:
            hpf = design_highpass(sample_rate_hz=rm.prf)
        return apply_highpass(rm, hpf)
    raise ValueError(f"unknown clutter method {method!r}")
