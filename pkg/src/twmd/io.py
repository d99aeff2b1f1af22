"""Binary and text file formats.

All multi-byte values are little-endian.

Echo files ("RMX1"): magic, u32 N, u32 M, f64 f0, f64 delta_f, f64 prf,
then N*M complex values as interleaved f64 (re, im) in column-major
(slow-time-major) order.

Range-map files ("RGM1") mirror the echo layout with L in place of N and
one extra header field, f64 bin_spacing, before the samples.

Cube files ("RDC1"): magic, u32 L, u32 M', u32 K, then the three axes as
f64 arrays (range[L], frame_times[M'], doppler[K]) followed by L*M'*K f32
values in (l, m, k) order.

Grayscale images are binary PGM (P5, maxval 255). Dataset manifests are
JSON arrays of {path, class_label, seed}.
"""

import json
import struct
from pathlib import Path

import numpy as np

from twmd.ranging import RangeMap
from twmd.sfcw import EchoMatrix, RadarParams
from twmd.tfr import RadarDataCube, Spectrogram

_ECHO_MAGIC = b"RMX1"
_RANGE_MAGIC = b"RGM1"
_CUBE_MAGIC = b"RDC1"


class FormatError(ValueError):
    """Raised for bad magic numbers or malformed headers."""


def _read_exact(f, n: int, what: str) -> bytes:
    buf = f.read(n)
    if len(buf) != n:
        raise FormatError(f"truncated file while reading {what}")
    return buf


def _complex_to_bytes(data: np.ndarray) -> bytes:
    # complex128 memory layout is (re, im) f64 pairs, so a column-major
    # flatten already produces the interleaved spec layout.
    return np.ascontiguousarray(data.flatten(order="F"), dtype="<c16").tobytes()


def _complex_from_bytes(buf: bytes, rows: int, cols: int) -> np.ndarray:
    flat = np.frombuffer(buf, dtype="<c16")
    if flat.size != rows * cols:
        raise FormatError(f"expected {rows * cols} samples, found {flat.size}")
    return flat.reshape((rows, cols), order="F").copy()


def save_echo(path, echo: EchoMatrix) -> None:
    n, m = echo.data.shape
    header = struct.pack(
        "<4sIIddd", _ECHO_MAGIC, n, m, echo.params.f0, echo.params.delta_f, echo.params.prf
    )
    with open(path, "wb") as f:
        f.write(header)
        f.write(_complex_to_bytes(echo.data))


def load_echo(path) -> EchoMatrix:
    with open(path, "rb") as f:
        magic, n, m, f0, delta_f, prf = struct.unpack("<4sIIddd", _read_exact(f, 36, "echo header"))
        if magic != _ECHO_MAGIC:
            raise FormatError(f"{path}: bad magic {magic!r}, expected {_ECHO_MAGIC!r}")
        data = _complex_from_bytes(_read_exact(f, 16 * n * m, "echo samples"), n, m)
    params = RadarParams(f0=f0, delta_f=delta_f, n_freq=n, prf=prf)
    return EchoMatrix(data=data, params=params)


def save_range_map(path, rm: RangeMap) -> None:
    l, m = rm.data.shape
    header = struct.pack(
        "<4sIIdddd", _RANGE_MAGIC, l, m, rm.params.f0, rm.params.delta_f, rm.prf, rm.bin_spacing
    )
    with open(path, "wb") as f:
        f.write(header)
        f.write(_complex_to_bytes(rm.data))


def load_range_map(path) -> RangeMap:
    with open(path, "rb") as f:
        magic, l, m, f0, delta_f, prf, spacing = struct.unpack(
            "<4sIIdddd", _read_exact(f, 44, "range-map header")
        )
        if magic != _RANGE_MAGIC:
            raise FormatError(f"{path}: bad magic {magic!r}, expected {_RANGE_MAGIC!r}")
        data = _complex_from_bytes(_read_exact(f, 16 * l * m, "range-map samples"), l, m)
    params = RadarParams(f0=f0, delta_f=delta_f, n_freq=max(l, 2), prf=prf)
    return RangeMap(data=data, bin_spacing=spacing, prf=prf, params=params)


def save_cube(path, cube: RadarDataCube) -> None:
    l, mp, k = cube.data.shape
    with open(path, "wb") as f:
        f.write(struct.pack("<4sIII", _CUBE_MAGIC, l, mp, k))
        f.write(np.ascontiguousarray(cube.range_axis_m, dtype="<f8").tobytes())
        f.write(np.ascontiguousarray(cube.frame_times, dtype="<f8").tobytes())
        f.write(np.ascontiguousarray(cube.doppler_axis, dtype="<f8").tobytes())
        f.write(np.ascontiguousarray(cube.data, dtype="<f4").tobytes())


def load_cube(path) -> RadarDataCube:
    with open(path, "rb") as f:
        magic, l, mp, k = struct.unpack("<4sIII", _read_exact(f, 16, "cube header"))
        if magic != _CUBE_MAGIC:
            raise FormatError(f"{path}: bad magic {magic!r}, expected {_CUBE_MAGIC!r}")
        rng_axis = np.frombuffer(_read_exact(f, 8 * l, "range axis"), dtype="<f8").copy()
        times = np.frombuffer(_read_exact(f, 8 * mp, "frame times"), dtype="<f8").copy()
        dop = np.frombuffer(_read_exact(f, 8 * k, "doppler axis"), dtype="<f8").copy()
        data = np.frombuffer(_read_exact(f, 4 * l * mp * k, "cube values"), dtype="<f4")
    return RadarDataCube(
        data=data.reshape((l, mp, k)).astype(np.float64),
        range_axis_m=rng_axis,
        frame_times=times,
        doppler_axis=dop,
    )


def save_pgm(path, image: np.ndarray) -> None:
    if image.dtype != np.uint8 or image.ndim != 2:
        raise ValueError("PGM export expects a 2-D uint8 image")
    h, w = image.shape
    with open(path, "wb") as f:
        f.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        f.write(image.tobytes())


def load_pgm(path) -> np.ndarray:
    with open(path, "rb") as f:
        if f.readline().strip() != b"P5":
            raise FormatError(f"{path}: not a binary PGM file")
        dims = f.readline().split()
        maxval = int(f.readline())
        if maxval != 255:
            raise FormatError("only maxval 255 PGM supported")
        w, h = int(dims[0]), int(dims[1])
        data = np.frombuffer(_read_exact(f, w * h, "pixels"), dtype=np.uint8)
    return data.reshape((h, w)).copy()


def save_matrix_csv(path, matrix: np.ndarray) -> None:
    np.savetxt(path, np.asarray(matrix), delimiter=",", fmt="%.12g")


def save_spectrogram_csv(path, spec: Spectrogram) -> None:
    """Rows are time frames, columns are Doppler bins (magnitude squared)."""
    save_matrix_csv(path, spec.data)


def save_range_map_csv(path, rm: RangeMap) -> None:
    """Rows are range bins, columns slow-time samples (magnitude only)."""
    save_matrix_csv(path, np.abs(rm.data))


def save_taps_csv(path, coeffs) -> None:
    with open(path, "w") as f:
        f.write("index,tap\n")
        for i, tap in enumerate(coeffs.taps):
            f.write(f"{i},{tap:.17g}\n")


def save_manifest(path, entries) -> None:
    with open(path, "w") as f:
        json.dump([{"path": e["path"], "class_label": e["class_label"], "seed": e["seed"]} for e in entries], f, indent=1)
        f.write("\n")


def load_manifest(path):
    with open(path) as f:
        entries = json.load(f)
    if not isinstance(entries, list):
        raise FormatError("manifest must be a JSON array")
    for e in entries:
        if set(e) != {"path", "class_label", "seed"}:
            raise FormatError(f"manifest entry keys {sorted(e)} invalid")
    return entries


def inspect_file(path) -> dict:
    """Parse just the header of any twmd binary file."""
    path = Path(path)
    with open(path, "rb") as f:
        magic = f.read(4)
        f.seek(0)
        if magic == _ECHO_MAGIC:
            _, n, m, f0, delta_f, prf = struct.unpack("<4sIIddd", _read_exact(f, 36, "header"))
            return {"format": "echo", "n_freq": n, "n_slow": m, "f0": f0, "delta_f": delta_f, "prf": prf}
        if magic == _RANGE_MAGIC:
            _, l, m, f0, delta_f, prf, spacing = struct.unpack("<4sIIdddd", _read_exact(f, 44, "header"))
            return {
                "format": "range_map",
                "n_bins": l,
                "n_slow": m,
                "f0": f0,
                "delta_f": delta_f,
                "prf": prf,
                "bin_spacing": spacing,
            }
        if magic == _CUBE_MAGIC:
            _, l, mp, k = struct.unpack("<4sIII", _read_exact(f, 16, "header"))
            return {"format": "cube", "n_bins": l, "n_frames": mp, "n_doppler": k}
        if magic.startswith(b"P5"):
            img = load_pgm(path)
            return {"format": "pgm", "height": img.shape[0], "width": img.shape[1]}
    raise FormatError(f"{path}: unrecognized magic {magic!r}")
