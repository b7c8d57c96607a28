#include "legtrack/rigid_body.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <set>

#include "legtrack/frames.hpp"

namespace legtrack {

namespace {

// Max distance of any point from the best line through the set; below this
// the set cannot fix a rotation about the line.
double max_line_deviation(const std::vector<Vec3>& pts) {
  Vec3 centroid = Vec3::Zero();
  for (const Vec3& p : pts) centroid += p;
  centroid /= static_cast<double>(pts.size());
  Eigen::Matrix3Xd centered(3, static_cast<Eigen::Index>(pts.size()));
  for (Eigen::Index i = 0; i < centered.cols(); ++i) {
    centered.col(i) = pts[static_cast<size_t>(i)] - centroid;
  }
  Eigen::JacobiSVD<Eigen::Matrix3Xd> svd(centered, Eigen::ComputeFullU);
  const Vec3 axis = svd.matrixU().col(0);
  double max_dev = 0.0;
  for (Eigen::Index i = 0; i < centered.cols(); ++i) {
    const Vec3 d = centered.col(i);
    max_dev = std::max(max_dev, (d - axis * axis.dot(d)).norm());
  }
  return max_dev;
}

}  // namespace

void RigidBodyDef::validate() const {
  if (id.empty()) {
    throw InvalidParamsError("rigid body id is empty");
  }
  if (markers.size() < 4) {
    throw InvalidParamsError("rigid body '" + id + "' needs >= 4 markers, got " +
                             std::to_string(markers.size()));
  }
  std::set<std::string> labels;
  std::vector<Vec3> pts;
  pts.reserve(markers.size());
  for (const MarkerRef& m : markers) {
    if (m.label.empty() || !labels.insert(m.label).second) {
      throw InvalidParamsError("rigid body '" + id + "' has duplicate or empty marker label");
    }
    if (!m.reference.allFinite()) {
      throw InvalidParamsError("rigid body '" + id + "' marker '" + m.label + "' is not finite");
    }
    pts.push_back(m.reference);
  }
  for (size_t i = 0; i < pts.size(); ++i) {
    for (size_t j = i + 1; j < pts.size(); ++j) {
      if ((pts[i] - pts[j]).norm() < 5.0) {
        throw InvalidParamsError("rigid body '" + id + "' markers '" + markers[i].label +
                                 "' and '" + markers[j].label + "' closer than 5 mm");
      }
    }
  }
  if (max_line_deviation(pts) <= kMinAltitudeMm) {
    throw InvalidParamsError("rigid body '" + id + "' markers are collinear");
  }
}

const MarkerRef* RigidBodyDef::find(const std::string& label) const {
  for (const MarkerRef& m : markers) {
    if (m.label == label) return &m;
  }
  return nullptr;
}

const MarkerObservation* MarkerFrameSample::find(const std::string& label) const {
  for (const MarkerObservation& o : observations) {
    if (o.label == label) return &o;
  }
  return nullptr;
}

PoseFit fit_pose(const RigidBodyDef& def, const MarkerFrameSample& sample,
                 double reject_rms_mm) {
  std::vector<Vec3> refs;
  std::vector<Vec3> obs;
  for (const MarkerRef& m : def.markers) {
    const MarkerObservation* o = sample.find(m.label);
    if (o != nullptr && o->visible) {
      refs.push_back(m.reference);
      obs.push_back(o->position);
    }
  }
  if (refs.size() < 3) {
    throw InsufficientMarkersError("body '" + def.id + "' has " +
                                   std::to_string(refs.size()) + " visible markers, needs 3");
  }
  if (max_line_deviation(refs) <= kMinAltitudeMm) {
    throw DegenerateGeometryError("visible markers of body '" + def.id + "' are collinear");
  }

  const auto n = static_cast<double>(refs.size());
  Vec3 ref_centroid = Vec3::Zero();
  Vec3 obs_centroid = Vec3::Zero();
  for (size_t i = 0; i < refs.size(); ++i) {
    ref_centroid += refs[i];
    obs_centroid += obs[i];
  }
  ref_centroid /= n;
  obs_centroid /= n;

  RotMat3 cross_cov = RotMat3::Zero();
  for (size_t i = 0; i < refs.size(); ++i) {
    cross_cov += (obs[i] - obs_centroid) * (refs[i] - ref_centroid).transpose();
  }
  Eigen::JacobiSVD<RotMat3> svd(cross_cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
  RotMat3 diag = RotMat3::Identity();
  // Reflection guard: flip the weakest singular direction instead of
  // returning an improper rotation.
  if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0) {
    diag(2, 2) = -1.0;
  }
  const RotMat3 rotation = svd.matrixU() * diag * svd.matrixV().transpose();
  const Vec3 translation = obs_centroid - rotation * ref_centroid;
  const Transform pose = Transform::unchecked(orthonormalized(rotation), translation);

  double sq_sum = 0.0;
  for (size_t i = 0; i < refs.size(); ++i) {
    sq_sum += (apply(pose, refs[i]) - obs[i]).squaredNorm();
  }
  const double rms = std::sqrt(sq_sum / n);
  if (rms > reject_rms_mm) {
    throw FitRejectedError("body '" + def.id + "' rms residual " + std::to_string(rms) +
                           " mm exceeds " + std::to_string(reject_rms_mm) + " mm");
  }

  PoseFit fit;
  fit.body_id = def.id;
  fit.pose = pose;
  fit.rms_residual_mm = rms;
  fit.used_marker_count = static_cast<int>(refs.size());
  return fit;
}

std::vector<std::pair<std::string, Vec3>> reconstruct_markers(const RigidBodyDef& def,
                                                              const PoseFit& fit) {
  std::vector<std::pair<std::string, Vec3>> out;
  out.reserve(def.markers.size());
  for (const MarkerRef& m : def.markers) {
    out.emplace_back(m.label, apply(fit.pose, m.reference));
  }
  return out;
}

}  // namespace legtrack
