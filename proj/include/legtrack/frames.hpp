#pragma once

#include "legtrack/geometry.hpp"

namespace legtrack {

// Degeneracy thresholds: ~3x the worst positional error of the inputs
// (0.3 mm CT), so frames are never built from noise-dominated geometry.
constexpr double kMinSeparationMm = 1.0;
constexpr double kMinHintAngleDeg = 1.0;
constexpr double kMinAltitudeMm = 1.0;

/// Frame on marker `h` of a rigid body: z runs from h to g, x completes a
/// right-handed frame against `y_hint`.
///
/// Throws DegenerateGeometry when the markers coincide (< 1 mm apart) or
/// the hint is within 1 degree of the z axis.
Transform frame_from_marker_pair(const Vec3& h, const Vec3& g, const UnitVec3& y_hint);

/// Frame at the femoral condyle centre `c`: z along the mechanical axis
/// (b -> c), x' along k -> b, y perpendicular to the b,k,c plane.
///
/// Throws DegenerateGeometry when the points coincide or are collinear
/// (triangle altitude below 1 mm).
Transform condyle_frame(const Vec3& b, const Vec3& k, const Vec3& c);

}  // namespace legtrack
