#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "legtrack/geometry.hpp"

namespace legtrack {

/// Anatomical and instrument points: B hip joint centre, K neck/anatomical
/// axis junction, C femoral condyle centre, D tibial condyle centre,
/// E ankle centre, F arthroscope tip, plus the marker-frame origin markers
/// G, H (femur), M (tibia) and S (scope).
enum class PointId { B, K, C, D, E, F, G, H, M, S };

/// Coordinate frames of a scene: marker frames H (femur), M (tibia),
/// S (scope) and the derived condyle frames C (femoral) and D (tibial).
enum class FrameId { H, M, S, C, D };

const char* to_string(PointId id);
const char* to_string(FrameId id);
PointId point_id_from_string(const std::string& s);
FrameId frame_id_from_string(const std::string& s);

// Accuracy of the measurement chain: optical marker tracking and CT
// distance measurement.
constexpr double kOpticalSigmaMm = 0.03;
constexpr double kCtSigmaMm = 0.3;

/// CT-measured local vectors from frames to points. A point may carry
/// measurements in more than one frame (independent CT chains); the first
/// entry for a point is its primary host used by default lookups.
class LandmarkTable {
 public:
  struct Entry {
    PointId point;
    FrameId frame;
    Vec3 local;  // mm, in the hosting frame
  };

  LandmarkTable() = default;
  LandmarkTable(std::vector<Entry> entries, std::string provenance, double accuracy_mm);

  void add(PointId point, FrameId frame, const Vec3& local);

  /// Primary host of the point; throws UnknownPoint.
  const Entry& primary(PointId point) const;
  /// Measurement of the point in a specific frame; throws UnknownPoint.
  const Entry& in_frame(PointId point, FrameId frame) const;
  bool has(PointId point) const;
  bool has(PointId point, FrameId frame) const;

  const std::vector<Entry>& entries() const { return entries_; }
  const std::string& provenance() const { return provenance_; }
  double accuracy_mm() const { return accuracy_mm_; }

 private:
  std::vector<Entry> entries_;
  std::string provenance_;
  double accuracy_mm_ = 0.3;  // CT distance accuracy, mm
};

/// Frame poses of one instant, world referenced. Frames whose pose fit was
/// rejected are simply absent; queries against them throw MissingFrame
/// rather than extrapolate.
class SceneSnapshot {
 public:
  SceneSnapshot() = default;
  explicit SceneSnapshot(Timestamp t) : t_(t) {}

  Timestamp t() const { return t_; }
  void set_frame(FrameId id, const Transform& pose);
  bool has_frame(FrameId id) const;
  /// Throws MissingFrame.
  const Transform& frame(FrameId id) const;

 private:
  Timestamp t_ = 0.0;
  std::map<FrameId, Transform> frames_;
};

/// An explicit frame chain ending at the frame that hosts the landmark
/// measurement of interest; earlier frames are crossed with live pose
/// algebra. Every frame in the chain must be present in the snapshot.
using Route = std::vector<FrameId>;

/// World position of the point via its primary host frame.
Vec3 point_in_world(const SceneSnapshot& snapshot, const LandmarkTable& table, PointId point);

/// World position of the point via an explicit route.
Vec3 point_via_route(const SceneSnapshot& snapshot, const LandmarkTable& table, PointId point,
                     const Route& route);

/// Pose of `from_frame` relative to `to_frame`: applying the result to a
/// point in `from_frame` expresses it in `to_frame`. Works across joints.
Transform relative_transform(const SceneSnapshot& snapshot, FrameId from_frame,
                             FrameId to_frame);

/// Arthroscope tip (landmark F in the scope frame S) expressed in
/// `target_frame`.
Vec3 scope_tip_in_frame(const SceneSnapshot& snapshot, const LandmarkTable& table,
                        FrameId target_frame);

/// Euclidean distance between the world positions of the same point
/// computed via two frame chains; the end-to-end accuracy metric.
double cross_route_error(const SceneSnapshot& snapshot, const LandmarkTable& table,
                         PointId point, const Route& route_a, const Route& route_b);

}  // namespace legtrack
