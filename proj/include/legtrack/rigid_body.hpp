#pragma once

#include <string>
#include <utility>
#include <vector>

#include "legtrack/geometry.hpp"

namespace legtrack {

struct MarkerRef {
  std::string label;
  Vec3 reference;  // body frame, mm
};

/// A marker plate pinned to a bone or instrument: labelled markers at fixed
/// positions in the body's own frame.
struct RigidBodyDef {
  std::string id;
  std::vector<MarkerRef> markers;

  /// Throws InvalidParams unless there are >= 4 markers, pairwise >= 5 mm
  /// apart and not all collinear.
  void validate() const;

  const MarkerRef* find(const std::string& label) const;
};

struct MarkerObservation {
  std::string label;
  std::string body;              // owning rigid body, carried through streams
  Vec3 position = Vec3::Zero();  // world frame, mm; meaningful only when visible
  bool visible = false;
};

/// One tracker frame: every marker of every body, labels unique.
struct MarkerFrameSample {
  Timestamp t = 0.0;
  std::vector<MarkerObservation> observations;

  const MarkerObservation* find(const std::string& label) const;
};

struct PoseFit {
  std::string body_id;
  Transform pose;  // body -> world
  double rms_residual_mm = 0.0;
  int used_marker_count = 0;
};

// An rms above this rejects the fit: an order of magnitude above the
// optical noise floor, it signals mislabelled markers or a bent pin.
constexpr double kFitRejectRmsMm = 1.0;

/// Least-squares body pose from the visible markers (closed-form SVD
/// orthogonal Procrustes with reflection guard).
///
/// Throws InsufficientMarkers (< 3 visible), DegenerateGeometry (visible
/// set collinear) or FitRejected (rms above `reject_rms_mm`).
PoseFit fit_pose(const RigidBodyDef& def, const MarkerFrameSample& sample,
                 double reject_rms_mm = kFitRejectRmsMm);

/// World positions of every marker of the body, occluded ones included.
std::vector<std::pair<std::string, Vec3>> reconstruct_markers(const RigidBodyDef& def,
                                                              const PoseFit& fit);

}  // namespace legtrack
