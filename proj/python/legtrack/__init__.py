"""Skeletal tracking toolkit.

Rigid-body poses, anatomical point positions and hip/knee joint angles from
labelled optical marker streams, validated against a built-in synthetic leg.
"""

from ._core import (
    CT_SIGMA_MM,
    FIT_REJECT_RMS_MM,
    OPTICAL_SIGMA_MM,
    JointCommand,
    LegtrackError,
    PoseFit,
    RigidBodyDef,
    SessionConfig,
    SyntheticSession,
    Transform,
    apply,
    compose,
    condyle_frame,
    fit_pose,
    frame_from_marker_pair,
    invert,
    parse_marker_stream_count,
    reconstruct_markers,
    run_pipeline,
    simulate,
)

__all__ = [
    "CT_SIGMA_MM",
    "FIT_REJECT_RMS_MM",
    "OPTICAL_SIGMA_MM",
    "JointCommand",
    "LegtrackError",
    "PoseFit",
    "RigidBodyDef",
    "SessionConfig",
    "SyntheticSession",
    "Transform",
    "apply",
    "compose",
    "condyle_frame",
    "fit_pose",
    "frame_from_marker_pair",
    "invert",
    "parse_marker_stream_count",
    "reconstruct_markers",
    "run_pipeline",
    "simulate",
]

__version__ = "0.1.0"
