"""Synthetic motion-scene generator for ten indoor activity classes.

Class parameter tables live in data/motion_classes.json (versioned with the
package) so generated benchmarks are reproducible. Cross-place classes
(walking, crawling) carry a nonzero bulk radial velocity; in-place classes
have zero bulk velocity and encode the activity in torso/limb micro-motion.
All scene parameters are jittered deterministically from (seed, class_id).
"""

import json
from importlib import resources

import numpy as np

from twmd.sfcw import MotionScene, RadarParams, Scatterer, WallSpec, _range_extent

_TWO_PI = 2.0 * np.pi
_SEED_MASK = (1 << 64) - 1


def _load_table():
    text = resources.files("twmd").joinpath("data/motion_classes.json").read_text()
    table = json.loads(text)
    return {entry["id"]: entry for entry in table["classes"]}


_CLASS_TABLE = _load_table()

CLASS_IDS = tuple(sorted(_CLASS_TABLE))
CLASS_NAMES = {cid: _CLASS_TABLE[cid]["name"] for cid in CLASS_IDS}
N_CLASSES = len(CLASS_IDS)


def _draw(rng, lo_hi):
    lo, hi = lo_hi
    if lo == hi:
        return float(lo)
    return float(rng.uniform(lo, hi))


def _draw_phase(rng, spec):
    if spec == "random":
        return float(rng.uniform(0.0, _TWO_PI))
    return float(spec)


def make_motion_scene(
    class_id: int,
    seed: int,
    params: RadarParams,
    duration_s: float = 30.0,
    wall: WallSpec | None = None,
    noise_snr_db: float | None = None,
) -> MotionScene:
    """Build a deterministic scene for one motion class.

    One torso scatterer (high reflectivity, class-specific bulk velocity and
    posture micro-motion) plus 2-4 limb scatterers (low reflectivity, faster
    micro-motion) sharing the torso's bulk velocity. Identical
    (class_id, seed) pairs always produce identical scenes.

    Raises ValueError for an unknown class_id or if the generated scene
    would violate the radar's unambiguous range.
    """
    if class_id not in _CLASS_TABLE:
        raise ValueError(f"unknown motion class id {class_id!r}; known ids: {list(CLASS_IDS)}")
    spec = _CLASS_TABLE[class_id]
    rng = np.random.default_rng([int(seed) & _SEED_MASK, class_id])

    base = _draw(rng, spec["base_range_m"])
    torso_spec = spec["torso"]
    torso = Scatterer(
        base_range=base,
        radial_velocity=_draw(rng, torso_spec["velocity_mps"]),
        micro_amplitude=_draw(rng, torso_spec["micro_amplitude_m"]),
        micro_freq=_draw(rng, torso_spec["micro_freq_hz"]),
        micro_phase=_draw_phase(rng, torso_spec["micro_phase"]),
        reflectivity=_draw(rng, torso_spec["reflectivity"]),
    )

    limb_spec = spec["limbs"]
    lo, hi = limb_spec["count"]
    n_limbs = int(rng.integers(lo, hi + 1))
    limbs = []
    for _ in range(n_limbs):
        limbs.append(
            Scatterer(
                base_range=base + _draw(rng, limb_spec["offset_m"]),
                radial_velocity=torso.radial_velocity,
                micro_amplitude=_draw(rng, limb_spec["micro_amplitude_m"]),
                micro_freq=_draw(rng, limb_spec["micro_freq_hz"]),
                micro_phase=_draw_phase(rng, limb_spec["micro_phase"]),
                reflectivity=_draw(rng, limb_spec["reflectivity"]),
            )
        )

    scene = MotionScene(
        scatterers=(torso, *limbs),
        wall=wall,
        duration_s=duration_s,
        noise_snr_db=noise_snr_db,
        seed=seed,
        class_label=class_id,
    )
    for s in scene.scatterers:
        lo_r, hi_r = _range_extent(s, duration_s)
        if hi_r >= params.unambiguous_range or lo_r <= 0.0:
            raise ValueError(
                f"class {class_id} scene leaves (0, {params.unambiguous_range:.1f}) m; "
                f"shorten the duration or adjust the class table"
            )
    return scene
