#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "legtrack/anatomy.hpp"
#include "legtrack/rigid_body.hpp"

namespace legtrack {

/// Frame fixed to a rigid body, built from marker reference coordinates:
/// z from the origin marker to the z marker, x against the hint. The hint
/// is either a fixed direction in body reference coordinates (default +Y,
/// the world up axis in the supine mounting pose) or a marker pair.
struct MarkerFrameSpec {
  FrameId id;
  std::string body;
  std::string origin_label;
  std::string z_label;
  std::optional<std::pair<std::string, std::string>> y_pair;
  Vec3 y_hint = Vec3(0.0, 1.0, 0.0);
};

/// Condyle-style frame derived from three landmark points (Eq-style recipe
/// b, k, c).
struct CondyleFrameSpec {
  FrameId id = FrameId::C;
  PointId b = PointId::B;
  PointId k = PointId::K;
  PointId c = PointId::C;
};

/// Frame derived from a landmark pair: origin at `origin`, z toward `z_to`,
/// x against the y axis of `y_hint_frame`.
struct AxisFrameSpec {
  FrameId id = FrameId::D;
  PointId origin = PointId::D;
  PointId z_to = PointId::E;
  FrameId y_hint_frame = FrameId::M;
};

struct NamedRoute {
  std::string name;
  PointId point;
  Route chain;
};

/// Everything a tracking session needs besides the marker stream.
struct SessionConfig {
  std::vector<RigidBodyDef> bodies;
  LandmarkTable landmarks;
  std::vector<MarkerFrameSpec> marker_frames;
  std::vector<CondyleFrameSpec> condyle_frames;
  std::vector<AxisFrameSpec> axis_frames;
  std::vector<NamedRoute> routes;
  double fit_reject_rms_mm = kFitRejectRmsMm;

  /// Referential completeness: every body, marker label, frame and landmark
  /// referenced by a spec or route exists. Throws InvalidParams.
  void validate() const;

  const RigidBodyDef* find_body(const std::string& id) const;
};

/// One per-sample condition worth reporting (a failed fit, a frame that
/// could not be derived). Never aborts the stream.
struct SampleFlag {
  std::string subject;  // body or frame id
  ErrorCode code;
  std::string message;
};

struct SnapshotResult {
  SceneSnapshot snapshot;
  std::map<std::string, PoseFit> fits;  // by body id
  std::vector<SampleFlag> flags;
};

/// Fits every body pose, then assembles marker frames and derived frames.
/// Bodies or frames that fail are recorded as flags and left out of the
/// snapshot.
SnapshotResult build_snapshot(const SessionConfig& config, const MarkerFrameSample& sample);

}  // namespace legtrack
