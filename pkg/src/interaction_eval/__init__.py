"""Interaction-mode evaluation for joint multi-agent trajectory predictions.

Filters safety-critical path-crossing agent pairs, classifies interactions
with winding-angle homotopy classes, enumerates kinematically feasible
futures by rollout simulation with collision checking, and computes mode
correctness / coverage / collapse and displacement metrics.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: F401
    ConfigError,
    DegenerateInterval,
    DuplicateAgentId,
    EmptyCorpus,
    EmptyFeasibleSet,
    EmptyOverlap,
    InteractionEvalError,
    IndexOutOfRange,
    IoError,
    LengthMismatch,
    MissingAgentPrediction,
    NoCollapse,
    NoFeasibleCombo,
    NonFiniteCoordinate,
    NonUniformSampling,
    ParseError,
    SceneValidationError,
    ShortTrajectory,
    UnknownAgent,
)
from .types import (  # noqa: F401
    Agent,
    EvalConfig,
    JointPredictionSet,
    JointSample,
    Scene,
    Trajectory,
    common_window,
    heading_and_speed,
    resample_trajectory,
    trajectory_kinematics,
    validate_scene,
)
from .filtering import (  # noqa: F401
    CriticalPair,
    PairRejection,
    PairwiseDistanceField,
    PathSharingResult,
    RejectReason,
    classify_pair,
    filter_scene,
    filter_scene_with_rejections,
    pairwise_distance_matrix,
    path_sharing_sets,
)
from .homotopy import (  # noqa: F401
    HomotopyClass,
    WindingResult,
    classify_pair_windows,
    gt_mode_sequence,
    homotopy_class,
    winding_angle,
)
from .collision import DiskSet, VehicleDims, disk_centers, is_collision, min_disk_distance  # noqa: F401
from .rollout import (  # noqa: F401
    InteractionTimeline,
    PathRollout,
    ProfileKind,
    SpeedProfile,
    feasible_homotopy_set,
    interaction_timeline,
    max_scene_speed,
    rollout_trajectory,
    speed_profile,
)
from .baselines import cv_predict, oracle_predict  # noqa: F401
from .metrics import (  # noqa: F401
    AggregateReport,
    DisplacementMetrics,
    FrameModeFlags,
    FrameRecord,
    PairMetrics,
    PairRecord,
    aggregate,
    displacement_metrics,
    frame_flags,
    pair_time_metrics,
)
from .sceneio import load_predictions, load_scene, save_predictions, save_scene  # noqa: F401
from .pipeline import evaluate_scene, emit_histograms, run_fixture, run_pipeline  # noqa: F401
