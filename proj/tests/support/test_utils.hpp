#pragma once

#include <random>

#include "legtrack/geometry.hpp"

namespace legtrack::testing {

using Rng = std::mt19937_64;

inline Vec3 random_vec(Rng& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return Vec3(u(rng), u(rng), u(rng));
}

inline UnitVec3 random_direction(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec3 v;
  do {
    v = Vec3(g(rng), g(rng), g(rng));
  } while (v.norm() < 1e-3);
  return UnitVec3::normalized(v);
}

inline RotMat3 random_rotation(Rng& rng) {
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  return Eigen::AngleAxisd(angle(rng), random_direction(rng).vec()).toRotationMatrix();
}

inline Transform random_transform(Rng& rng, double translation_scale = 1000.0) {
  return Transform(random_rotation(rng), random_vec(rng, translation_scale));
}

// Brute-force homogeneous 4x4 oracle, independent of the Transform
// arithmetic it checks.
inline Mat4 oracle_mat4(const RotMat3& r, const Vec3& t) {
  Mat4 m = Mat4::Identity();
  m.topLeftCorner<3, 3>() = r;
  m.topRightCorner<3, 1>() = t;
  return m;
}

inline Mat4 oracle_mat4(const Transform& t) { return oracle_mat4(t.rotation(), t.translation()); }

inline Vec3 oracle_apply(const Mat4& m, const Vec3& p) {
  Eigen::Vector4d h;
  h << p, 1.0;
  return (m * h).head<3>();
}

}  // namespace legtrack::testing
