"""Pure-numpy fallback for the echo-synthesis hot kernel.

Semantically identical to the compiled version in _kernels.pyx: scatterers
are accumulated in array order so both backends agree cell-by-cell.
"""

import numpy as np


def accumulate_echo(freqs, delays, amps):
    """Coherently sum point-scatterer returns on the frequency/slow-time grid.

    out[n, m] = sum_s amps[s] * exp(-j * 2*pi * freqs[n] * delays[s, m])

    Parameters
    ----------
    freqs : (N,) float64 array of probing frequencies in Hz
    delays : (S, M) float64 array of two-way time delays in seconds
    amps : (S,) float64 array of scatterer amplitudes

    Returns
    -------
    (N, M) complex128 array
    """
    freqs = np.asarray(freqs, dtype=np.float64)
    delays = np.atleast_2d(np.asarray(delays, dtype=np.float64))
    amps = np.asarray(amps, dtype=np.float64)
    if amps.shape[0] != delays.shape[0]:
        raise ValueError("amps length must match delays row count")
    out = np.zeros((freqs.size, delays.shape[1]), dtype=np.complex128)
    for amp, delay in zip(amps, delays):
        out += amp * np.exp(-2j * np.pi * np.outer(freqs, delay))
    return out
