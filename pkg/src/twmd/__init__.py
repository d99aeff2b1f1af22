"""Through-wall micro-Doppler toolkit.

Pipeline: SFCW echo simulation -> range compression -> wall-clutter
mitigation -> time-frequency representations (range-accumulated STFT,
inverse-energy weighted sum, range-max, time-max) -> 2D-PCA + kNN motion
classification.
"""

from twmd._backend import BACKEND
from twmd.classify import (
    EvalReport,
    TwoDPcaModel,
    evaluate,
    fit_2dpca,
    knn_classify,
    project,
    to_grayscale,
)
from twmd.clutter import (
    FilterCoeffs,
    apply_highpass,
    declutter,
    design_highpass,
    mean_subtract,
    svd_project,
)
from twmd.motions import CLASS_IDS, CLASS_NAMES, make_motion_scene
from twmd.ranging import RangeMap, range_axis, range_compress, range_gate
from twmd.sfcw import (
    EchoMatrix,
    MotionScene,
    RadarParams,
    Scatterer,
    WallSpec,
    scatterer_range,
    synthesize_echo,
)
from twmd.tfr import (
    RadarDataCube,
    Spectrogram,
    StftConfig,
    build_cube,
    cratfr,
    ra_stft,
    rmax_tfr,
    rmax_tfr_stream,
    stft_spectrogram,
    tmax_rdr,
    tmax_rdr_stream,
)

__version__ = "0.1.0"
