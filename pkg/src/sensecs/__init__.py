"""Sensing-assisted sparse channel recovery for massive-antenna downlinks.

A deterministic, seedable Monte Carlo simulator: sparse multipath scenes,
monostatic echo sensing with 2D MUSIC, an SVD sensed sparse basis, greedy
compressive-sensing recovery from RVQ-quantized feedback, and achievable-rate
evaluation against a DFT-basis benchmark and the perfect-CSI bound.
"""

from .arrays import ArrayConfig, dft_basis, steering, steering_h, steering_matrix, steering_v
from .basis import SensedBasis, build_sensed_basis, projection_residual
from .config import ConfigError, SweepSpec, load_config
from .evaluation import (
    SCHEMES,
    SweepResult,
    TrialConfig,
    TrialResult,
    calibrate_power,
    mrt_rate,
    run_sweep,
    run_trial,
    upper_bound_rate,
)
from .feedback import (
    FeedbackWord,
    PilotMatrix,
    RvqCodebook,
    draw_pilots,
    perfect_feedback,
    receive_pilots,
    rvq_build,
    rvq_lookup,
    rvq_quantize,
)
from .recovery import (
    ChannelRecovery,
    RecoveryParams,
    SparseSolution,
    omp,
    recover_channel_dft,
    recover_channel_sensed,
    samp,
)
from .scene import Scene, SceneConfig, Scatterer, comm_gain, draw_scene, sense_gain
from .sensing import (
    AngleEstimate,
    AngleGrid,
    EchoBlock,
    MusicSpectrum,
    estimate_angles,
    music_spectrum_2d,
    oracle_angles,
    sample_covariance,
    simulate_echo,
)
from .validation import run_validation

__version__ = "0.1.0"
