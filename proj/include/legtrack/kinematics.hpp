#pragma once

#include <optional>

#include "legtrack/anatomy.hpp"
#include "legtrack/geometry.hpp"

namespace legtrack {

// Adult long bones: mechanical vectors shorter than this flag degenerate
// landmark data rather than anatomy.
constexpr double kMinBoneVectorMm = 100.0;

// Condyle-frame orientation of the supine straight-leg reference: x toward
// the patient midline (left-leg model), y anterior, z distal.
// Expressed in world axes this is diag(-1, 1, -1).
RotMat3 condyle_rest_rotation();

struct BoneVectors {
  Vec3 femur = Vec3::Zero();                 // hip centre B -> femoral condyle centre C
  std::optional<FrameId> femur_frame;        // nullopt = world
  Vec3 tibia = Vec3::Zero();                 // ankle centre E in the condyle frame
  FrameId tibia_frame = FrameId::C;
};

/// Both mechanical vectors of one instant; throws InvalidBoneVector when
/// either is shorter than 100 mm.
BoneVectors bone_vectors(const SceneSnapshot& snapshot, const LandmarkTable& table);

/// Joint angles, degrees, zero at the supine straight-leg reference.
/// Signs: flexion positive for anterior rotation of the distal segment,
/// varus positive toward the midline (left-leg model), roll/IE positive by
/// right-hand rule about the distal mechanical axis.
struct LegAngles {
  double hip_flexion_deg = 0.0;
  double hip_varus_deg = 0.0;
  double hip_roll_deg = 0.0;
  double knee_flexion_deg = 0.0;
  double knee_varus_deg = 0.0;
  double knee_ie_deg = 0.0;
};

/// Tibial condyle centre D expressed in the femoral condyle frame C:
/// x medial/lateral, y posterior/anterior, z knee gap (mm).
struct KneeTranslation {
  double medial_lateral_mm = 0.0;
  double posterior_anterior_mm = 0.0;
  double gap_mm = 0.0;

  /// Anatomically plausible gap for a valid fit.
  bool gap_plausible() const { return gap_mm >= -5.0 && gap_mm <= 60.0; }
};

/// Coordinate plane of a reference frame, named by its spanning axes.
enum class Plane { XY, YZ, ZX };

/// Unsigned angle between v and its projection onto the plane,
/// atan2(|v_proj x v|, v_proj . v). Throws DegenerateProjection when the
/// projection is shorter than 1e-6 |v|.
double projected_angle(const Vec3& v, Plane plane);

/// Same magnitude, signed by the side of the plane v lies on (the plane
/// normal is the axis not spanning the plane).
double projected_angle_signed(const Vec3& v, Plane plane);

/// Femur mechanical vector B -> C, world by default or rotated into
/// `in_frame`.
Vec3 femur_vector(const SceneSnapshot& snapshot, const LandmarkTable& table,
                  std::optional<FrameId> in_frame = std::nullopt);

/// Tibia mechanical vector: ankle centre E in the condyle frame C.
/// Throws InvalidBoneVector below 100 mm.
Vec3 tibia_vector(const SceneSnapshot& snapshot, const LandmarkTable& table);

/// Knee flexion/varus/IE from the tibial mechanical axis D -> E measured in
/// the condyle frame, IE as the twist of the tibial frame about that axis.
void knee_angles(const SceneSnapshot& snapshot, const LandmarkTable& table, LegAngles& out);

/// Hip flexion/varus from the femur vector against the world planes, roll
/// from the condyle rotation relative to the supine reference.
void hip_angles(const SceneSnapshot& snapshot, const LandmarkTable& table, LegAngles& out);

LegAngles leg_angles(const SceneSnapshot& snapshot, const LandmarkTable& table);

KneeTranslation knee_translation(const SceneSnapshot& snapshot, const LandmarkTable& table);

}  // namespace legtrack
