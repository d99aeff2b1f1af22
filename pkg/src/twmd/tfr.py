"""STFT engine and the four time-frequency representations.

Given a range map s(l, m):

- range-accumulated STFT: spectrogram of the coherent column sum over l
  (cheap, but components in different bins can cancel or mask each other);
- per-bin spectrogram cube: STFT of every range bin, stacked into a
  range x frame x Doppler volume;
- inverse-energy weighted sum of the per-bin spectrograms (weak bins get
  large weights, which also amplifies noise-only bins);
- range-max map: per time-frequency cell maximum over range bins, keeping
  each cell's strongest single-bin response;
- time-max range-Doppler map: per (range, Doppler) cell maximum over frames.

All reductions iterate range bins in index order, so results do not depend
on any parallel schedule. Doppler axes are two-sided and DC-centered.
"""

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from twmd.ranging import RangeMap, range_axis

_WINDOWS = {
    "hann": np.hanning,
    "hamming": np.hamming,
    "blackman": np.blackman,
    "rect": np.ones,
}


@dataclass(frozen=True)
class StftConfig:
    """Analysis parameters: window type/length, hop, and FFT length."""

    window: str = "hann"
    win_len: int = 32
    hop: int = 1
    fft_len: int = 64

    def __post_init__(self):
        if self.window not in _WINDOWS:
            raise ValueError(f"unknown window {self.window!r}; choose from {sorted(_WINDOWS)}")
        if self.win_len < 1:
            raise ValueError("win_len must be >= 1")
        if not 1 <= self.hop <= self.win_len:
            raise ValueError("hop must satisfy 1 <= hop <= win_len")
        if self.fft_len < self.win_len:
            raise ValueError("fft_len must be >= win_len")

    def window_values(self):
        return _WINDOWS[self.window](self.win_len)

    def n_frames(self, n_samples: int) -> int:
        return (n_samples - self.win_len) // self.hop + 1


@dataclass(frozen=True)
class Spectrogram:
    """Nonnegative M' x K time-frequency power map with its axes."""

    data: np.ndarray
    frame_times: np.ndarray
    doppler_axis: np.ndarray

    @property
    def n_frames(self):
        return self.data.shape[0]

    @property
    def n_bins(self):
        return self.data.shape[1]


@dataclass(frozen=True)
class RadarDataCube:
    """L x M' x K per-range-bin spectrogram volume."""

    data: np.ndarray
    range_axis_m: np.ndarray
    frame_times: np.ndarray
    doppler_axis: np.ndarray

    @property
    def n_range_bins(self):
        return self.data.shape[0]


def doppler_axis(cfg: StftConfig, prf: float) -> np.ndarray:
    """DC-centered two-sided Doppler axis spanning [-prf/2, prf/2)."""
    return np.fft.fftshift(np.fft.fftfreq(cfg.fft_len, d=1.0 / prf))


def stft_spectrogram(signal: np.ndarray, cfg: StftConfig, prf: float) -> Spectrogram:
    """Magnitude-squared STFT of one complex slow-time signal.

    Frame i covers samples [i*hop, i*hop + win_len); its row is
    |FFT_K(window * segment)|^2 with frequencies rotated so bin K/2 is DC.
    frame_times hold each window's start time in seconds.
    """
    signal = np.asarray(signal)
    if signal.ndim != 1:
        raise ValueError("signal must be one-dimensional")
    if signal.size < cfg.win_len:
        raise ValueError(f"signal length {signal.size} is shorter than win_len {cfg.win_len}")
    frames = sliding_window_view(signal, cfg.win_len)[:: cfg.hop]
    spectra = np.fft.fft(frames * cfg.window_values(), n=cfg.fft_len, axis=1)
    power = np.fft.fftshift(spectra.real**2 + spectra.imag**2, axes=1)
    times = (cfg.hop * np.arange(frames.shape[0])) / prf
    return Spectrogram(data=power, frame_times=times, doppler_axis=doppler_axis(cfg, prf))


def ra_stft(rm: RangeMap, cfg: StftConfig) -> Spectrogram:
    """Spectrogram of the coherent sum of all range bins."""
    return stft_spectrogram(rm.data.sum(axis=0), cfg, rm.prf)


def build_cube(rm: RangeMap, cfg: StftConfig) -> RadarDataCube:
    """Per-range-bin spectrogram volume; slice l is exactly the row-l STFT."""
    slices = [stft_spectrogram(rm.data[l], cfg, rm.prf) for l in range(rm.n_bins)]
    data = np.stack([s.data for s in slices])
    return RadarDataCube(
        data=data,
        range_axis_m=range_axis(rm),
        frame_times=slices[0].frame_times,
        doppler_axis=slices[0].doppler_axis,
    )


def rmax_tfr(cube: RadarDataCube) -> Spectrogram:
    """Range-max map: per-cell maximum of the cube over range bins."""
    return Spectrogram(
        data=cube.data.max(axis=0),
        frame_times=cube.frame_times,
        doppler_axis=cube.doppler_axis,
    )


def rmax_tfr_stream(rm: RangeMap, cfg: StftConfig) -> Spectrogram:
    """Range-max map computed bin by bin, without materializing the cube.

    Identical to rmax_tfr(build_cube(rm, cfg)); memory stays at one
    spectrogram regardless of the number of range bins.
    """
    out = None
    times = axis = None
    for l in range(rm.n_bins):
        s = stft_spectrogram(rm.data[l], cfg, rm.prf)
        if out is None:
            out, times, axis = s.data.copy(), s.frame_times, s.doppler_axis
        else:
            np.maximum(out, s.data, out=out)
    return Spectrogram(data=out, frame_times=times, doppler_axis=axis)


def tmax_rdr(cube: RadarDataCube) -> np.ndarray:
    """Time-max range-Doppler map: L x K maximum of the cube over frames."""
    return cube.data.max(axis=1)


def tmax_rdr_stream(rm: RangeMap, cfg: StftConfig) -> np.ndarray:
    """Time-max map computed bin by bin; equals tmax_rdr(build_cube(...))."""
    return np.stack(
        [stft_spectrogram(rm.data[l], cfg, rm.prf).data.max(axis=0) for l in range(rm.n_bins)]
    )


def cratfr_weights(rm: RangeMap, energy_floor: float = 1e-6) -> np.ndarray:
    """Inverse-energy weights over range bins.

    E_l is the slow-time energy of bin l; bins below energy_floor times the
    strongest bin are inactive (weight 0). Active weights are (1/E_l),
    normalized to sum to 1. Raises ValueError when every bin is below the
    floor (an empty map).
    """
    energies = np.sum(rm.data.real**2 + rm.data.imag**2, axis=1)
    e_max = energies.max() if energies.size else 0.0
    if e_max <= 0.0:
        raise ValueError("all range bins are empty; cannot form inverse-energy weights")
    active = energies >= energy_floor * e_max
    weights = np.zeros_like(energies)
    weights[active] = 1.0 / energies[active]
    return weights / weights.sum()


def cratfr(rm: RangeMap, cfg: StftConfig, energy_floor: float = 1e-6) -> Spectrogram:
    """Inverse-energy weighted sum of the per-bin spectrograms.

    Accumulation runs in bin-index order so the floating-point result is
    schedule-independent.
    """
    weights = cratfr_weights(rm, energy_floor=energy_floor)
    out = None
    times = axis = None
    for l in range(rm.n_bins):
        if weights[l] == 0.0:
            continue
        s = stft_spectrogram(rm.data[l], cfg, rm.prf)
        if out is None:
            out, times, axis = weights[l] * s.data, s.frame_times, s.doppler_axis
        else:
            out += weights[l] * s.data
    return Spectrogram(data=out, frame_times=times, doppler_axis=axis)


def ridge_contrast(spec: Spectrogram) -> float:
    """Peak-to-background-median ratio of a time-frequency map."""
    med = float(np.median(spec.data))
    if med == 0.0:
        return float("inf") if spec.data.max() > 0 else 0.0
    return float(spec.data.max()) / med
