#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "legtrack/kinematics.hpp"
#include "legtrack/session.hpp"

namespace legtrack {

/// Synthetic left leg: ball-joint hip at B with a rigid neck offset to K,
/// six degree-of-freedom knee (three rotations, three translations applied
/// in the condyle frame), marker plates rigid to each bone and a static
/// arthroscope.
///
/// Bone frames coincide with the world axes in the supine straight-leg rest
/// pose: femur frame at the hip centre, tibia frame at the tibial condyle
/// centre with x toward the midline, y anterior, z distal.
struct LegModelParams {
  double femur_length_mm = 430.0;
  double tibia_length_mm = 400.0;
  Vec3 neck_offset_mm = Vec3(80.0, 0.0, -45.0);  // B -> K, femur bone frame
  Vec3 hip_centre_w = Vec3(1200.0, 950.0, 1200.0);

  RigidBodyDef femur_body;
  RigidBodyDef tibia_body;
  RigidBodyDef scope_body;
  Vec3 scope_tip_local = Vec3(0.0, 0.0, -160.0);  // F in the scope body frame
  Transform scope_pose_w;                          // static instrument pose

  // Origin and z markers of the frame on each body.
  std::pair<std::string, std::string> femur_frame_markers = {"H", "G"};
  std::pair<std::string, std::string> tibia_frame_markers = {"M", "T2"};
  std::pair<std::string, std::string> scope_frame_markers = {"S", "S2"};

  static LegModelParams defaults();

  /// Throws InvalidParams on non-positive lengths, invalid bodies or a
  /// degenerate neck offset.
  void validate() const;
};

/// One commanded joint state. Knee rotations are flexion -> varus -> IE in
/// the condyle frame, knee translations (medial/lateral, posterior/anterior,
/// gap) follow in the same frame.
struct JointCommand {
  double hip_flexion_deg = 0.0;
  double hip_varus_deg = 0.0;
  double hip_roll_deg = 0.0;
  double knee_flexion_deg = 0.0;
  double knee_varus_deg = 0.0;
  double knee_ie_deg = 0.0;
  Vec3 knee_translation_mm = Vec3::Zero();
};

struct ScriptKey {
  double t = 0.0;  // seconds
  JointCommand command;
};

/// Time-sampled joint commands, linearly interpolated in joint space.
struct MotionScript {
  std::vector<ScriptKey> keys;
  double sample_rate_hz = 100.0;

  void validate() const;
  double t_begin() const;
  double t_end() const;
  /// Throws OutOfRange outside the scripted interval.
  JointCommand at(double t) const;

  static MotionScript constant(const JointCommand& command, double duration_s,
                               double rate_hz = 100.0);
};

struct NoiseSpec {
  double marker_sigma_mm = 0.0;
  double landmark_sigma_mm = 0.0;
  double occlusion_probability = 0.0;
  std::map<std::string, double> occlusion_overrides;  // per marker label
  std::uint64_t seed = 0;

  void validate() const;
};

/// Exact per-sample state of the synthetic leg.
struct GroundTruthSample {
  Timestamp t = 0.0;
  LegAngles angles;
  KneeTranslation translation;
  std::map<PointId, Vec3> points;             // world positions
  std::map<std::string, Transform> body_poses;
  std::map<FrameId, Transform> frame_poses;
};

struct GroundTruth {
  LegModelParams params;
  MotionScript script;
  std::vector<GroundTruthSample> samples;
};

struct SyntheticSession {
  SessionConfig config;  // bodies, frame specs, routes, (noisy) landmark table
  std::vector<MarkerFrameSample> stream;
  GroundTruth truth;
};

/// Exact forward kinematics at one commanded state.
GroundTruthSample forward_kinematics(const LegModelParams& params, const JointCommand& command,
                                     Timestamp t);

/// Deterministic synthetic session: markers are the exact forward-kinematics
/// positions plus noise, occluded markers are flagged not visible, the
/// landmark table carries one static CT-noise draw.
SyntheticSession synthesize(const LegModelParams& params, const MotionScript& script,
                            const NoiseSpec& noise);

/// Exact commanded state at time t (linear interpolation between script
/// keys); throws OutOfRange outside the script.
GroundTruthSample ground_truth_at(const GroundTruth& truth, double t);

/// Gentle multi-sine motion across both joints, the default session script.
MotionScript default_sweep_script(double duration_s, double rate_hz = 100.0);

/// Full clinical range sweep: hip flexion 0-90, hip varus +-20, knee
/// flexion 0-120, knee varus +-10, knee IE +-15 degrees, no translations.
MotionScript full_range_sweep_script(double duration_s, double rate_hz = 100.0);

}  // namespace legtrack
