"""Maximum-likelihood registration of noisy frame sequences under constant drift."""
from .baseline import PairwiseOffsets, pairwise_register, project_constant
from .core import (
    FrameSequence,
    MotionVector,
    NoiseSpec,
    as_frame,
    canonical,
    euclidean_error,
    registration_error,
    snr_db,
    snr_to_sigma,
    translate,
)
from .reconstruction import coadd
from .registration import (
    DegenerateSurfaceError,
    RegistrationResult,
    SearchRange,
    brute_force_cost_register,
    default_max_drift,
    direct_register,
    downsample_mod,
    ml_register,
    objective_surface,
)
from .simulator import SceneSource, SequenceSpec, apply_window, load_scene, simulate_sequence
from .spectral import cross_correlate, forward_dft, group_sum_surface, inverse_dft

__version__ = "0.1.0"
