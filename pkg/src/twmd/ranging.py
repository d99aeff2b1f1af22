"""Range compression: per-column inverse DFT of the frequency-domain echo.

Convention: the inverse transform carries the 1/L factor (numpy's ifft),
so per column sum_l |s(l,m)|^2 = (1/L) * sum_n |echo(n,m)|^2. A scatterer
at range R peaks at bin round(2*R*delta_f*L / c).
"""

from dataclasses import dataclass

import numpy as np

from twmd.sfcw import EchoMatrix, RadarParams


@dataclass(frozen=True)
class RangeMap:
    """L x M complex range/slow-time matrix with axis bookkeeping.

    bin_start is nonzero for range-gated maps: row l then corresponds to
    absolute bin bin_start + l of the ungated map.
    """

    data: np.ndarray
    bin_spacing: float
    prf: float
    params: RadarParams
    bin_start: int = 0

    @property
    def n_bins(self):
        return self.data.shape[0]

    @property
    def n_slow(self):
        return self.data.shape[1]


def range_compress(echo: EchoMatrix, n_bins: int | None = None) -> RangeMap:
    """Convert an echo matrix into a range map via L-point column IDFT.

    Parameters
    ----------
    echo : EchoMatrix
    n_bins : output FFT length L; defaults to N (no zero padding).
        Must satisfy L >= N.

    Returns
    -------
    RangeMap with data[l, m] = IDFT_L over n of echo.data[n, m].
    """
    n = echo.n_freq
    length = n if n_bins is None else int(n_bins)
    if length < n:
        raise ValueError(f"n_bins must be >= {n} (got {length})")
    data = np.fft.ifft(echo.data, n=length, axis=0)
    spacing = echo.params.c / (2.0 * echo.params.delta_f * length)
    return RangeMap(data=data, bin_spacing=spacing, prf=echo.params.prf, params=echo.params)


def range_axis(rm: RangeMap) -> np.ndarray:
    """Range in meters for each bin: [0, spacing, ..., (L-1)*spacing]."""
    return rm.bin_spacing * (rm.bin_start + np.arange(rm.n_bins))


def range_gate(rm: RangeMap, lo_bin: int, hi_bin: int) -> RangeMap:
    """Restrict a range map to bins [lo_bin, hi_bin) to bound memory."""
    if not 0 <= lo_bin < hi_bin <= rm.n_bins:
        raise ValueError(f"gate [{lo_bin}, {hi_bin}) invalid for {rm.n_bins} bins")
    return RangeMap(
        data=rm.data[lo_bin:hi_bin],
        bin_spacing=rm.bin_spacing,
        prf=rm.prf,
        params=rm.params,
        bin_start=rm.bin_start + lo_bin,
    )


def peak_bin(params: RadarParams, target_range: float, n_bins: int) -> int:
    """Predicted range-compression peak bin for a static scatterer."""
    return int(round(2.0 * target_range * params.delta_f * n_bins / params.c))
