"""Pipeline configuration: one JSON document drives every CLI command.

Parsing is strict (unknown keys are rejected at every level) and the
dataclass round-trips losslessly through its JSON form, so configs double
as reproducibility records. All pipeline randomness flows from the single
seed field.
"""

import json
from dataclasses import dataclass, field

from twmd.clutter import FilterCoeffs, design_highpass
from twmd.motions import CLASS_IDS
from twmd.sfcw import RadarParams, WallSpec
from twmd.tfr import StftConfig

CLUTTER_METHODS = ("none", "mean", "svd", "hpf")
TFR_METHODS = ("ra-stft", "cratfr", "rmax", "tmax")


def _take(d: dict, section: str, allowed: set) -> dict:
    unknown = set(d) - allowed
    if unknown:
        raise ValueError(f"unknown keys in {section}: {sorted(unknown)}")
    return d


@dataclass(frozen=True)
class RadarSection:
    f0_hz: float = 380e6
    delta_f_hz: float = 5e6
    n_freq: int = 805
    prf_hz: float = 113.0

    @classmethod
    def from_dict(cls, d):
        _take(d, "radar", {"f0_hz", "delta_f_hz", "n_freq", "prf_hz"})
        return cls(**d)

    def to_dict(self):
        return {"f0_hz": self.f0_hz, "delta_f_hz": self.delta_f_hz, "n_freq": self.n_freq, "prf_hz": self.prf_hz}

    def params(self) -> RadarParams:
        return RadarParams(f0=self.f0_hz, delta_f=self.delta_f_hz, n_freq=self.n_freq, prf=self.prf_hz)


@dataclass(frozen=True)
class WallSection:
    surface_returns: tuple = ()
    one_way_attenuation: float = 1.0

    @classmethod
    def from_dict(cls, d):
        _take(d, "dataset.wall", {"surface_returns", "one_way_attenuation"})
        returns = tuple(tuple(pair) for pair in d.get("surface_returns", ()))
        return cls(surface_returns=returns, one_way_attenuation=d.get("one_way_attenuation", 1.0))

    def to_dict(self):
        return {
            "surface_returns": [list(p) for p in self.surface_returns],
            "one_way_attenuation": self.one_way_attenuation,
        }

    def spec(self) -> WallSpec:
        return WallSpec(surface_returns=self.surface_returns, one_way_attenuation=self.one_way_attenuation)


@dataclass(frozen=True)
class DatasetSection:
    classes: tuple = CLASS_IDS
    samples_per_class: int = 4
    duration_s: float = 3.0
    noise_snr_db: float | None = None
    wall: WallSection | None = None

    @classmethod
    def from_dict(cls, d):
        _take(d, "dataset", {"classes", "samples_per_class", "duration_s", "noise_snr_db", "wall"})
        wall = d.get("wall")
        return cls(
            classes=tuple(d.get("classes") or CLASS_IDS),
            samples_per_class=d.get("samples_per_class", 4),
            duration_s=d.get("duration_s", 3.0),
            noise_snr_db=d.get("noise_snr_db"),
            wall=WallSection.from_dict(wall) if wall is not None else None,
        )

    def to_dict(self):
        return {
            "classes": list(self.classes),
            "samples_per_class": self.samples_per_class,
            "duration_s": self.duration_s,
            "noise_snr_db": self.noise_snr_db,
            "wall": self.wall.to_dict() if self.wall is not None else None,
        }


@dataclass(frozen=True)
class ClutterSection:
    method: str = "hpf"
    svd_remove: int = 1
    hpf_order: int = 112
    hpf_cutoff_hz: float = 3.0

    @classmethod
    def from_dict(cls, d):
        _take(d, "clutter", {"method", "svd_remove", "hpf_order", "hpf_cutoff_hz"})
        section = cls(**d)
        if section.method not in CLUTTER_METHODS:
            raise ValueError(f"clutter.method must be one of {CLUTTER_METHODS}")
        return section

    def to_dict(self):
        return {
            "method": self.method,
            "svd_remove": self.svd_remove,
            "hpf_order": self.hpf_order,
            "hpf_cutoff_hz": self.hpf_cutoff_hz,
        }

    def hpf(self, prf: float) -> FilterCoeffs:
        return design_highpass(order=self.hpf_order, cutoff_hz=self.hpf_cutoff_hz, sample_rate_hz=prf)


@dataclass(frozen=True)
class StftSection:
    window: str = "hann"
    win_len: int = 32
    hop: int = 1
    fft_len: int = 64

    @classmethod
    def from_dict(cls, d):
        _take(d, "stft", {"window", "win_len", "hop", "fft_len"})
        return cls(**d)

    def to_dict(self):
        return {"window": self.window, "win_len": self.win_len, "hop": self.hop, "fft_len": self.fft_len}

    def config(self) -> StftConfig:
        return StftConfig(window=self.window, win_len=self.win_len, hop=self.hop, fft_len=self.fft_len)


@dataclass(frozen=True)
class TfrSection:
    method: str = "rmax"
    range_gate_bins: tuple | None = None
    energy_floor: float = 1e-6

    @classmethod
    def from_dict(cls, d):
        _take(d, "tfr", {"method", "range_gate_bins", "energy_floor"})
        gate = d.get("range_gate_bins")
        section = cls(
            method=d.get("method", "rmax"),
            range_gate_bins=tuple(gate) if gate is not None else None,
            energy_floor=d.get("energy_floor", 1e-6),
        )
        if section.method not in TFR_METHODS:
            raise ValueError(f"tfr.method must be one of {TFR_METHODS}")
        return section

    def to_dict(self):
        return {
            "method": self.method,
            "range_gate_bins": list(self.range_gate_bins) if self.range_gate_bins is not None else None,
            "energy_floor": self.energy_floor,
        }


@dataclass(frozen=True)
class ClassifierSection:
    k: int = 3
    components: int | None = None
    split: float = 0.8
    n_trials: int = 100
    image_height: int = 64
    image_width: int = 64
    dyn_range_db: float = 40.0

    @classmethod
    def from_dict(cls, d):
        _take(
            d,
            "classifier",
            {"k", "components", "split", "n_trials", "image_height", "image_width", "dyn_range_db"},
        )
        return cls(**d)

    def to_dict(self):
        return {
            "k": self.k,
            "components": self.components,
            "split": self.split,
            "n_trials": self.n_trials,
            "image_height": self.image_height,
            "image_width": self.image_width,
            "dyn_range_db": self.dyn_range_db,
        }


@dataclass(frozen=True)
class PipelineConfig:
    seed: int = 0
    radar: RadarSection = field(default_factory=RadarSection)
    dataset: DatasetSection = field(default_factory=DatasetSection)
    clutter: ClutterSection = field(default_factory=ClutterSection)
    stft: StftSection = field(default_factory=StftSection)
    tfr: TfrSection = field(default_factory=TfrSection)
    classifier: ClassifierSection = field(default_factory=ClassifierSection)
    out_dir: str | None = None

    @classmethod
    def from_json_dict(cls, d):
        _take(d, "config", {"seed", "radar", "dataset", "clutter", "stft", "tfr", "classifier", "out_dir"})
        return cls(
            seed=d.get("seed", 0),
            radar=RadarSection.from_dict(d.get("radar", {})),
            dataset=DatasetSection.from_dict(d.get("dataset", {})),
            clutter=ClutterSection.from_dict(d.get("clutter", {})),
            stft=StftSection.from_dict(d.get("stft", {})),
            tfr=TfrSection.from_dict(d.get("tfr", {})),
            classifier=ClassifierSection.from_dict(d.get("classifier", {})),
            out_dir=d.get("out_dir"),
        )

    def to_json_dict(self):
        return {
            "seed": self.seed,
            "radar": self.radar.to_dict(),
            "dataset": self.dataset.to_dict(),
            "clutter": self.clutter.to_dict(),
            "stft": self.stft.to_dict(),
            "tfr": self.tfr.to_dict(),
            "classifier": self.classifier.to_dict(),
            "out_dir": self.out_dir,
        }

    @classmethod
    def from_file(cls, path):
        with open(path) as f:
            return cls.from_json_dict(json.load(f))

    def save(self, path):
        with open(path, "w") as f:
            json.dump(self.to_json_dict(), f, indent=1)
            f.write("\n")
