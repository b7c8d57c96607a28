#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "legtrack/errors.hpp"

namespace legtrack {

// All lengths are millimetres, all public angles degrees.
// World convention: Y-up right-handed, Z along the body from toe to head
// with the patient supine.
using Vec3 = Eigen::Vector3d;
using RotMat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

using Timestamp = double;  // seconds, strictly increasing within a stream

constexpr double kPi = 3.14159265358979323846;

inline double deg_from_rad(double rad) { return rad * (180.0 / kPi); }
inline double rad_from_deg(double deg) { return deg * (kPi / 180.0); }

/// Direction vector kept at unit Euclidean norm (within 1e-9).
class UnitVec3 {
 public:
  /// Normalizes `v`; throws DegenerateGeometry when `v` is too short to
  /// carry a direction.
  static UnitVec3 normalized(const Vec3& v);

  const Vec3& vec() const { return v_; }
  operator const Vec3&() const { return v_; }

  double x() const { return v_.x(); }
  double y() const { return v_.y(); }
  double z() const { return v_.z(); }

 private:
  explicit UnitVec3(const Vec3& v) : v_(v) {}
  Vec3 v_;
};

/// Nearest rotation to `m` (polar decomposition); det forced to +1.
RotMat3 orthonormalized(const RotMat3& m);

/// Max abs entry of MᵀM − I, the orthonormality drift.
double rotation_drift(const RotMat3& m);

bool is_rotation(const RotMat3& m, double tol = 1e-9);

/// Rigid pose: maps points in the child frame to the parent frame,
/// p_parent = R p_child + t.
class Transform {
 public:
  Transform() : rotation_(RotMat3::Identity()), translation_(Vec3::Zero()) {}

  /// Validates the rotation (orthonormal, det +1, within 1e-9).
  Transform(const RotMat3& rotation, const Vec3& translation);

  static Transform identity() { return Transform(); }
  static Transform from_translation(const Vec3& t);
  /// Trusts `rotation` to already be orthonormal; used on compose/invert
  /// results which are orthonormal by construction.
  static Transform unchecked(const RotMat3& rotation, const Vec3& translation);

  const RotMat3& rotation() const { return rotation_; }
  const Vec3& translation() const { return translation_; }

  Mat4 matrix() const;

  Transform operator*(const Transform& other) const;
  Vec3 operator*(const Vec3& p) const;

 private:
  RotMat3 rotation_;
  Vec3 translation_;
};

/// Applies b then a.
Transform compose(const Transform& a, const Transform& b);
Transform invert(const Transform& t);
Vec3 apply(const Transform& t, const Vec3& p);

bool approx_equal(const Transform& a, const Transform& b, double tol = 1e-9);

}  // namespace legtrack
