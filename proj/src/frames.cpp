#include "legtrack/frames.hpp"

#include <cmath>

namespace legtrack {

Transform frame_from_marker_pair(const Vec3& h, const Vec3& g, const UnitVec3& y_hint) {
  const Vec3 hg = g - h;
  if (hg.norm() <= kMinSeparationMm) {
    throw DegenerateGeometryError("marker pair closer than 1 mm");
  }
  const Vec3 z = hg.normalized();
  // Reject hints within 1 degree of the z axis: the cross product would be
  // noise-dominated.
  const double sin_angle = y_hint.vec().cross(z).norm();
  if (sin_angle < std::sin(rad_from_deg(kMinHintAngleDeg))) {
    throw DegenerateGeometryError("y hint within 1 degree of the marker axis");
  }
  const Vec3 x = y_hint.vec().cross(z).normalized();
  const Vec3 y = z.cross(x);
  RotMat3 r;
  r.col(0) = x;
  r.col(1) = y;
  r.col(2) = z;
  return Transform(r, h);
}

Transform condyle_frame(const Vec3& b, const Vec3& k, const Vec3& c) {
  const Vec3 bc = c - b;
  if (bc.norm() <= kMinSeparationMm || (b - k).norm() <= kMinSeparationMm ||
      (c - k).norm() <= kMinSeparationMm) {
    throw DegenerateGeometryError("condyle frame points closer than 1 mm");
  }
  // Altitude of k above the b-c line; collinear inputs cannot fix the x axis.
  const double altitude = (k - b).cross(bc).norm() / bc.norm();
  if (altitude <= kMinAltitudeMm) {
    throw DegenerateGeometryError("condyle frame points are collinear");
  }
  const Vec3 z = bc.normalized();
  const Vec3 x_prime = (b - k).normalized();
  const Vec3 y = z.cross(x_prime).normalized();
  const Vec3 x = y.cross(z);
  RotMat3 r;
  r.col(0) = x;
  r.col(1) = y;
  r.col(2) = z;
  return Transform(r, c);
}

}  // namespace legtrack
