"""Hybrid beamforming simulator for joint radar-communications with spatial path index modulation."""

from .arrays import (
    ArrayGeometry,
    ChannelRealization,
    PathParams,
    build_channel,
    coherence,
    steering_vector,
    validate_angle_deg,
)
from .beamforming import (
    ConstraintReport,
    HybridBeamformer,
    JointBeamformer,
    SpatialPattern,
    assemble_hybrid,
    check_constraints,
    enumerate_patterns,
    joint_fcr,
    optimal_digital,
    pattern_count,
    radar_beamformer,
)
from .experiments import (
    AggregateResult,
    BeampatternPanel,
    ScenarioConfig,
    TrialMetrics,
    aggregate,
    beampattern_sweep,
    mi_vs_gain,
    mi_vs_snr,
    run_trial,
)
from .metrics import (
    NoiseModel,
    PatternCovariances,
    mi_general,
    mi_mmwave_closed_form,
    mi_mmwave_numerical,
    mi_spim,
    mi_sweep,
    receive_covariances,
)
from .radar import (
    CovarianceEstimate,
    ProbingSnapshots,
    beampattern,
    beampattern_db,
    default_grid,
    estimate_doa,
    music_spectrum,
    sample_covariance,
    simulate_probing,
    transmit_covariance,
)

__version__ = "0.1.0"

__all__ = [
    "ArrayGeometry",
    "ChannelRealization",
    "PathParams",
    "build_channel",
    "coherence",
    "steering_vector",
    "validate_angle_deg",
    "ConstraintReport",
    "HybridBeamformer",
    "JointBeamformer",
    "SpatialPattern",
    "assemble_hybrid",
    "check_constraints",
    "enumerate_patterns",
    "joint_fcr",
    "optimal_digital",
    "pattern_count",
    "radar_beamformer",
    "AggregateResult",
    "BeampatternPanel",
    "ScenarioConfig",
    "TrialMetrics",
    "aggregate",
    "beampattern_sweep",
    "mi_vs_gain",
    "mi_vs_snr",
    "run_trial",
    "NoiseModel",
    "PatternCovariances",
    "mi_general",
    "mi_mmwave_closed_form",
    "mi_mmwave_numerical",
    "mi_spim",
    "mi_sweep",
    "receive_covariances",
    "CovarianceEstimate",
    "ProbingSnapshots",
    "beampattern",
    "beampattern_db",
    "default_grid",
    "estimate_doa",
    "music_spectrum",
    "sample_covariance",
    "simulate_probing",
    "transmit_covariance",
    "__version__",
]
