"""Stepped-frequency CW echo synthesis for point-scatterer motion scenes.

Scenes are described by parametric scatterers (bulk velocity plus sinusoidal
micro-motion), optional static wall returns, and optional complex Gaussian
noise. Echoes are generated directly in the demodulated frequency-domain
form: a scatterer at two-way delay t_d contributes
a * exp(-j*2*pi*(f0 + n*df)*t_d) to frequency bin n. Delays are evaluated
once per sweep at t_m = m / prf (stop-and-go): intra-sweep displacement at
indoor speeds and a 113 Hz sweep rate is sub-millimeter.
"""

from dataclasses import dataclass

import numpy as np

from twmd._backend import accumulate_echo

C_FREE_SPACE = 2.99792458e8


@dataclass(frozen=True)
class RadarParams:
    """SFCW system parameters.

    Defaults match a low center-frequency through-wall system: 380 MHz
    start, 5 MHz steps, 805 bins (380 MHz - 4.4 GHz), 113 Hz sweep rate.
    """

    f0: float = 380e6
    delta_f: float = 5e6
    n_freq: int = 805
    prf: float = 113.0
    c: float = C_FREE_SPACE

    def __post_init__(self):
        if self.f0 <= 0 or self.delta_f <= 0 or self.prf <= 0 or self.c <= 0:
            raise ValueError("f0, delta_f, prf and c must be positive")
        if self.n_freq < 2:
            raise ValueError("n_freq must be >= 2")

    @property
    def frequencies(self):
        """Probing frequencies f0 + n*delta_f, n = 0..N-1."""
        return self.f0 + self.delta_f * np.arange(self.n_freq)

    @property
    def center_frequency(self):
        return self.f0 + self.delta_f * (self.n_freq - 1) / 2.0

    @property
    def unambiguous_range(self):
        """Maximum unaliased range c / (2*delta_f)."""
        return self.c / (2.0 * self.delta_f)


@dataclass(frozen=True)
class Scatterer:
    """Point scatterer with bulk radial motion and sinusoidal micro-motion.

    Instantaneous range:
        R(t) = base_range - radial_velocity*t
               + micro_amplitude*sin(2*pi*micro_freq*t + micro_phase)
    Positive radial_velocity means approaching the radar.
    """

    base_range: float
    radial_velocity: float = 0.0
    micro_amplitude: float = 0.0
    micro_freq: float = 0.0
    micro_phase: float = 0.0
    reflectivity: float = 1.0

    def __post_init__(self):
        if self.reflectivity < 0:
            raise ValueError("reflectivity must be >= 0")

    def range_at(self, t):
        return scatterer_range(self, t)


def scatterer_range(s: Scatterer, t):
    """Instantaneous range R(t) in meters; t may be scalar or array."""
    t = np.asarray(t, dtype=np.float64)
    r = s.base_range - s.radial_velocity * t
    if s.micro_amplitude != 0.0:
        r = r + s.micro_amplitude * np.sin(2.0 * np.pi * s.micro_freq * t + s.micro_phase)
    return r if r.ndim else float(r)


@dataclass(frozen=True)
class WallSpec:
    """Static wall/coupling returns plus a one-way amplitude attenuation.

    surface_returns model antenna coupling and front/rear wall reflections:
    fixed-range, zero-velocity reflectors. one_way_attenuation is applied
    twice (out and back) to every behind-wall scatterer's reflectivity.
    """

    surface_returns: tuple = ()
    one_way_attenuation: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "surface_returns", tuple((float(r), float(a)) for r, a in self.surface_returns))
        for r, a in self.surface_returns:
            if r < 0 or a < 0:
                raise ValueError("wall surface ranges and amplitudes must be >= 0")
        if not 0.0 < self.one_way_attenuation <= 1.0:
            raise ValueError("one_way_attenuation must be in (0, 1]")


@dataclass(frozen=True)
class MotionScene:
    """One motion sample: scatterers, optional wall, duration, noise, seed."""

    scatterers: tuple
    wall: WallSpec | None = None
    duration_s: float = 30.0
    noise_snr_db: float | None = None
    seed: int = 0
    class_label: int = -1

    def __post_init__(self):
        object.__setattr__(self, "scatterers", tuple(self.scatterers))
        if self.duration_s <= 0:
            raise ValueError("duration_s must be positive")


@dataclass(frozen=True)
class EchoMatrix:
    """N x M demodulated frequency-domain samples (rows: frequency bin n,
    columns: slow-time sweep m) together with the generating parameters."""

    data: np.ndarray
    params: RadarParams

    @property
    def n_freq(self):
        return self.data.shape[0]

    @property
    def n_slow(self):
        return self.data.shape[1]


def n_slow_samples(scene: MotionScene, params: RadarParams) -> int:
    m = int(np.floor(scene.duration_s * params.prf))
    if m < 1:
        raise ValueError("scene too short: duration_s * prf must be >= 1")
    return m


def _range_extent(s: Scatterer, duration: float):
    """Conservative [min, max] of R(t) over [0, duration]."""
    drift = s.radial_velocity * duration
    lo = s.base_range - max(drift, 0.0) - abs(s.micro_amplitude)
    hi = s.base_range + max(-drift, 0.0) + abs(s.micro_amplitude)
    return lo, hi


def synthesize_echo(scene: MotionScene, params: RadarParams) -> EchoMatrix:
    """Generate the N x M complex echo matrix for a motion scene.

    Entry (n, m) is the coherent sum over all scatterers and wall surface
    returns evaluated at slow time t_m = m / prf. Behind-wall scatterer
    amplitudes are scaled by one_way_attenuation**2. If noise_snr_db is
    set, circular complex Gaussian noise is added at that SNR relative to
    the noise-free target-only (wall-free) signal power, seeded from the
    scene seed.

    Raises ValueError if any scatterer can leave (0, unambiguous_range)
    during the scene, or if noise is requested for a target-free scene.
    """
    m_slow = n_slow_samples(scene, params)
    n = params.n_freq
    r_max = params.unambiguous_range

    for s in scene.scatterers:
        lo, hi = _range_extent(s, scene.duration_s)
        if hi >= r_max:
            raise ValueError(
                f"scatterer can reach {hi:.2f} m, beyond the unambiguous range {r_max:.2f} m"
            )
        if lo <= 0.0:
            raise ValueError("scatterer range can reach zero or negative values during the scene")
    if scene.wall is not None:
        for r, _ in scene.wall.surface_returns:
            if r >= r_max:
                raise ValueError("wall surface return beyond the unambiguous range")

    t = np.arange(m_slow) / params.prf
    freqs = params.frequencies

    att = 1.0
    if scene.wall is not None:
        att = scene.wall.one_way_attenuation ** 2

    if scene.scatterers:
        delays = np.empty((len(scene.scatterers), m_slow))
        amps = np.empty(len(scene.scatterers))
        for i, s in enumerate(scene.scatterers):
            delays[i] = 2.0 * scatterer_range(s, t) / params.c
            amps[i] = s.reflectivity * att
        target = accumulate_echo(freqs, delays, amps)
    else:
        target = np.zeros((n, m_slow), dtype=np.complex128)

    data = target
    if scene.wall is not None and scene.wall.surface_returns:
        # Static returns share one column profile across slow time.
        col = np.zeros(n, dtype=np.complex128)
        for r, a in scene.wall.surface_returns:
            col += a * np.exp(-2j * np.pi * freqs * (2.0 * r / params.c))
        data = data + col[:, None]

    if scene.noise_snr_db is not None:
        p_sig = float(np.mean(np.abs(target) ** 2))
        if p_sig == 0.0:
            raise ValueError("noise SNR is undefined for a scene with no target power")
        noise_power = p_sig * 10.0 ** (-scene.noise_snr_db / 10.0)
        rng = np.random.default_rng(scene.seed)
        scale = np.sqrt(noise_power / 2.0)
        noise = scale * rng.standard_normal((n, m_slow)) + 1j * scale * rng.standard_normal((n, m_slow))
        data = data + noise

    return EchoMatrix(data=data, params=params)
