"""Kernel backend selection: compiled extension if built, numpy otherwise."""

try:
    from twmd._kernels import accumulate_echo

    BACKEND = "compiled"
except ImportError:
    from twmd._kernels_py import accumulate_echo

    BACKEND = "numpy"

__all__ = ["accumulate_echo", "BACKEND"]
