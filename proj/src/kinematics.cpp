#include "legtrack/kinematics.hpp"

#include <cmath>

namespace legtrack {

namespace {

int plane_normal_axis(Plane plane) {
  switch (plane) {
    case Plane::XY: return 2;
    case Plane::YZ: return 0;
    case Plane::ZX: return 1;
  }
  return 1;
}

// Signed twist about the z axis of `r` decomposed as swing * twist.
double z_twist_deg(const RotMat3& r) {
  Eigen::Quaterniond q(r);
  if (q.w() < 0.0) {
    q.coeffs() = -q.coeffs();
  }
  return deg_from_rad(2.0 * std::atan2(q.z(), q.w()));
}

}  // namespace

RotMat3 condyle_rest_rotation() {
  RotMat3 r = RotMat3::Identity();
  r(0, 0) = -1.0;
  r(2, 2) = -1.0;
  return r;
}

double projected_angle(const Vec3& v, Plane plane) {
  const int n = plane_normal_axis(plane);
  Vec3 proj = v;
  proj[n] = 0.0;
  if (proj.norm() <= 1e-6 * v.norm() || v.norm() == 0.0) {
    throw DegenerateProjectionError("vector is nearly perpendicular to the plane");
  }
  return deg_from_rad(std::atan2(proj.cross(v).norm(), proj.dot(v)));
}

double projected_angle_signed(const Vec3& v, Plane plane) {
  const double magnitude = projected_angle(v, plane);
  return v[plane_normal_axis(plane)] < 0.0 ? -magnitude : magnitude;
}

Vec3 femur_vector(const SceneSnapshot& snapshot, const LandmarkTable& table,
                  std::optional<FrameId> in_frame) {
  const Vec3 b = point_in_world(snapshot, table, PointId::B);
  const Vec3 c = point_in_world(snapshot, table, PointId::C);
  Vec3 v = c - b;
  if (v.norm() < kMinBoneVectorMm) {
    throw InvalidBoneVectorError("femur vector is " + std::to_string(v.norm()) + " mm");
  }
  if (in_frame.has_value()) {
    v = snapshot.frame(*in_frame).rotation().transpose() * v;
  }
  return v;
}

Vec3 tibia_vector(const SceneSnapshot& snapshot, const LandmarkTable& table) {
  const Vec3 e = point_in_world(snapshot, table, PointId::E);
  const Vec3 v = apply(invert(snapshot.frame(FrameId::C)), e);
  if (v.norm() < kMinBoneVectorMm) {
    throw InvalidBoneVectorError("tibia vector is " + std::to_string(v.norm()) + " mm");
  }
  return v;
}

BoneVectors bone_vectors(const SceneSnapshot& snapshot, const LandmarkTable& table) {
  BoneVectors out;
  out.femur = femur_vector(snapshot, table);
  out.femur_frame = std::nullopt;
  out.tibia = tibia_vector(snapshot, table);
  out.tibia_frame = FrameId::C;
  return out;
}

void knee_angles(const SceneSnapshot& snapshot, const LandmarkTable& table, LegAngles& out) {
  const Transform& condyle = snapshot.frame(FrameId::C);
  const Vec3 e = point_in_world(snapshot, table, PointId::E);
  const Vec3 d = point_in_world(snapshot, table, PointId::D);
  // Tibial mechanical axis D -> E in condyle coordinates. Measuring from D
  // instead of the condyle origin keeps the angles independent of the knee
  // translations.
  const Vec3 v = condyle.rotation().transpose() * (e - d);
  if (v.norm() < kMinBoneVectorMm) {
    throw InvalidBoneVectorError("tibial axis is " + std::to_string(v.norm()) + " mm");
  }
  out.knee_flexion_deg = deg_from_rad(std::atan2(v.y(), v.z()));
  out.knee_varus_deg = deg_from_rad(std::atan2(v.x(), std::hypot(v.y(), v.z())));
  // IE is the twist of the tibial frame about the mechanical axis relative
  // to the condyle frame.
  const RotMat3 rel = condyle.rotation().transpose() * snapshot.frame(FrameId::D).rotation();
  out.knee_ie_deg = z_twist_deg(rel);
}

void hip_angles(const SceneSnapshot& snapshot, const LandmarkTable& table, LegAngles& out) {
  const Vec3 v = femur_vector(snapshot, table);
  out.hip_flexion_deg = deg_from_rad(std::atan2(v.y(), -v.z()));
  out.hip_varus_deg = deg_from_rad(std::atan2(-v.x(), std::hypot(v.y(), v.z())));
  // Roll from the condyle rotation relative to the supine rest orientation.
  const RotMat3 g = snapshot.frame(FrameId::C).rotation() * condyle_rest_rotation();
  out.hip_roll_deg = deg_from_rad(std::atan2(-g(0, 1), g(0, 0)));
}

LegAngles leg_angles(const SceneSnapshot& snapshot, const LandmarkTable& table) {
  LegAngles out;
  hip_angles(snapshot, table, out);
  knee_angles(snapshot, table, out);
  return out;
}

KneeTranslation knee_translation(const SceneSnapshot& snapshot, const LandmarkTable& table) {
  const Vec3 d = point_in_world(snapshot, table, PointId::D);
  const Vec3 local = apply(invert(snapshot.frame(FrameId::C)), d);
  KneeTranslation out;
  out.medial_lateral_mm = local.x();
  out.posterior_anterior_mm = local.y();
  out.gap_mm = local.z();
  return out;
}

}  // namespace legtrack
