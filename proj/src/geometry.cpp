#include "legtrack/geometry.hpp"

#include <Eigen/SVD>

namespace legtrack {

namespace {
// Drift above this triggers re-orthonormalization of composed rotations.
constexpr double kDriftTol = 1e-12;
}  // namespace

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::DegenerateGeometry: return "DegenerateGeometry";
    case ErrorCode::InsufficientMarkers: return "InsufficientMarkers";
    case ErrorCode::FitRejected: return "FitRejected";
    case ErrorCode::MissingFrame: return "MissingFrame";
    case ErrorCode::UnknownPoint: return "UnknownPoint";
    case ErrorCode::InvalidBoneVector: return "InvalidBoneVector";
    case ErrorCode::DegenerateProjection: return "DegenerateProjection";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NonMonotonicTime: return "NonMonotonicTime";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::OutOfRange: return "OutOfRange";
  }
  return "UnknownError";
}

UnitVec3 UnitVec3::normalized(const Vec3& v) {
  const double n = v.norm();
  if (!(n > 1e-12)) {
    throw DegenerateGeometryError("vector too short to normalize");
  }
  return UnitVec3(v / n);
}

RotMat3 orthonormalized(const RotMat3& m) {
  Eigen::JacobiSVD<RotMat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  RotMat3 r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0.0) {
    RotMat3 flip = RotMat3::Identity();
    flip(2, 2) = -1.0;
    r = svd.matrixU() * flip * svd.matrixV().transpose();
  }
  return r;
}

double rotation_drift(const RotMat3& m) {
  return (m.transpose() * m - RotMat3::Identity()).cwiseAbs().maxCoeff();
}

bool is_rotation(const RotMat3& m, double tol) {
  return m.allFinite() && rotation_drift(m) <= tol && std::abs(m.determinant() - 1.0) <= tol;
}

Transform::Transform(const RotMat3& rotation, const Vec3& translation)
    : rotation_(rotation), translation_(translation) {
  if (!translation.allFinite()) {
    throw InvalidParamsError("transform translation is not finite");
  }
  if (!is_rotation(rotation)) {
    throw InvalidParamsError("transform rotation is not orthonormal with det +1");
  }
}

Transform Transform::from_translation(const Vec3& t) {
  return Transform(RotMat3::Identity(), t);
}

Transform Transform::unchecked(const RotMat3& rotation, const Vec3& translation) {
  Transform out;
  out.rotation_ = rotation;
  out.translation_ = translation;
  return out;
}

Mat4 Transform::matrix() const {
  Mat4 m = Mat4::Identity();
  m.topLeftCorner<3, 3>() = rotation_;
  m.topRightCorner<3, 1>() = translation_;
  return m;
}

Transform Transform::operator*(const Transform& other) const {
  return compose(*this, other);
}

Vec3 Transform::operator*(const Vec3& p) const { return apply(*this, p); }

Transform compose(const Transform& a, const Transform& b) {
  RotMat3 r = a.rotation() * b.rotation();
  if (rotation_drift(r) > kDriftTol) {
    r = orthonormalized(r);
  }
  return Transform::unchecked(r, a.rotation() * b.translation() + a.translation());
}

Transform invert(const Transform& t) {
  const RotMat3 rt = t.rotation().transpose();
  return Transform::unchecked(rt, -(rt * t.translation()));
}

Vec3 apply(const Transform& t, const Vec3& p) {
  return t.rotation() * p + t.translation();
}

bool approx_equal(const Transform& a, const Transform& b, double tol) {
  return (a.rotation() - b.rotation()).cwiseAbs().maxCoeff() <= tol &&
         (a.translation() - b.translation()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace legtrack
