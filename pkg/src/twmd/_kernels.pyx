# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled echo-synthesis kernel.

Single fused pass over the frequency/slow-time grid: no per-scatterer
temporaries, accumulation in the same scatterer order as the numpy
fallback. Phase is grouped as -2*pi * (f * d) to match numpy's
exp(-2j*pi*outer(f, d)) evaluation.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, sin

cnp.import_array()

cdef double NEG_TWO_PI = -6.283185307179586


def accumulate_echo(object freqs, object delays, object amps):
    """Coherently sum point-scatterer returns on the frequency/slow-time grid.

    out[n, m] = sum_s amps[s] * exp(-j * 2*pi * freqs[n] * delays[s, m])
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=1] f = np.ascontiguousarray(freqs, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] d = np.ascontiguousarray(np.atleast_2d(delays), dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] a = np.ascontiguousarray(amps, dtype=np.float64)

    cdef Py_ssize_t n_freq = f.shape[0]
    cdef Py_ssize_t n_scat = d.shape[0]
    cdef Py_ssize_t n_slow = d.shape[1]
    if a.shape[0] != n_scat:
        raise ValueError("amps length must match delays row count")

    out = np.zeros((n_freq, n_slow), dtype=np.complex128)
    cdef double complex[:, ::1] o = out
    cdef double[::1] fv = f
    cdef double[:, ::1] dv = d
    cdef double[::1] av = a

    cdef Py_ssize_t n, m, s
    cdef double fn, phase, acc_re, acc_im

    with nogil:
        for n in range(n_freq):
            fn = fv[n]
            for m in range(n_slow):
                acc_re = 0.0
                acc_im = 0.0
                for s in range(n_scat):
                    phase = NEG_TWO_PI * (fn * dv[s, m])
                    acc_re += av[s] * cos(phase)
                    acc_im += av[s] * sin(phase)
                o[n, m] = acc_re + 1j * acc_im
    return out
