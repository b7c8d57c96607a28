#include "legtrack/anatomy.hpp"

namespace legtrack {

const char* to_string(PointId id) {
  switch (id) {
    case PointId::B: return "B";
    case PointId::K: return "K";
    case PointId::C: return "C";
    case PointId::D: return "D";
    case PointId::E: return "E";
    case PointId::F: return "F";
    case PointId::G: return "G";
    case PointId::H: return "H";
    case PointId::M: return "M";
    case PointId::S: return "S";
  }
  return "?";
}

const char* to_string(FrameId id) {
  switch (id) {
    case FrameId::H: return "H";
    case FrameId::M: return "M";
    case FrameId::S: return "S";
    case FrameId::C: return "C";
    case FrameId::D: return "D";
  }
  return "?";
}

PointId point_id_from_string(const std::string& s) {
  if (s == "B") return PointId::B;
  if (s == "K") return PointId::K;
  if (s == "C") return PointId::C;
  if (s == "D") return PointId::D;
  if (s == "E") return PointId::E;
  if (s == "F") return PointId::F;
  if (s == "G") return PointId::G;
  if (s == "H") return PointId::H;
  if (s == "M") return PointId::M;
  if (s == "S") return PointId::S;
  throw InvalidParamsError("unknown point id '" + s + "'");
}

FrameId frame_id_from_string(const std::string& s) {
  if (s == "H") return FrameId::H;
  if (s == "M") return FrameId::M;
  if (s == "S") return FrameId::S;
  if (s == "C") return FrameId::C;
  if (s == "D") return FrameId::D;
  throw InvalidParamsError("unknown frame id '" + s + "'");
}

LandmarkTable::LandmarkTable(std::vector<Entry> entries, std::string provenance,
                             double accuracy_mm)
    : entries_(std::move(entries)), provenance_(std::move(provenance)), accuracy_mm_(accuracy_mm) {
  if (!(accuracy_mm_ > 0.0)) {
    throw InvalidParamsError("landmark table stated accuracy must be positive");
  }
  for (const Entry& e : entries_) {
    if (!e.local.allFinite()) {
      throw InvalidParamsError(std::string("landmark ") + to_string(e.point) + "@" +
                               to_string(e.frame) + " is not finite");
    }
  }
}

void LandmarkTable::add(PointId point, FrameId frame, const Vec3& local) {
  if (!local.allFinite()) {
    throw InvalidParamsError(std::string("landmark ") + to_string(point) + "@" +
                             to_string(frame) + " is not finite");
  }
  entries_.push_back(Entry{point, frame, local});
}

const LandmarkTable::Entry& LandmarkTable::primary(PointId point) const {
  for (const Entry& e : entries_) {
    if (e.point == point) return e;
  }
  throw UnknownPointError(std::string("point ") + to_string(point) + " not in landmark table");
}

const LandmarkTable::Entry& LandmarkTable::in_frame(PointId point, FrameId frame) const {
  for (const Entry& e : entries_) {
    if (e.point == point && e.frame == frame) return e;
  }
  throw UnknownPointError(std::string("point ") + to_string(point) + " has no measurement in frame " +
                          to_string(frame));
}

bool LandmarkTable::has(PointId point) const {
  for (const Entry& e : entries_) {
    if (e.point == point) return true;
  }
  return false;
}

bool LandmarkTable::has(PointId point, FrameId frame) const {
  for (const Entry& e : entries_) {
    if (e.point == point && e.frame == frame) return true;
  }
  return false;
}

void SceneSnapshot::set_frame(FrameId id, const Transform& pose) {
  frames_.insert_or_assign(id, pose);
}

bool SceneSnapshot::has_frame(FrameId id) const { return frames_.count(id) != 0; }

const Transform& SceneSnapshot::frame(FrameId id) const {
  auto it = frames_.find(id);
  if (it == frames_.end()) {
    throw MissingFrameError(std::string("frame ") + to_string(id) + " has no pose at t=" +
                            std::to_string(t_));
  }
  return it->second;
}

Vec3 point_in_world(const SceneSnapshot& snapshot, const LandmarkTable& table, PointId point) {
  const LandmarkTable::Entry& entry = table.primary(point);
  return apply(snapshot.frame(entry.frame), entry.local);
}

Vec3 point_via_route(const SceneSnapshot& snapshot, const LandmarkTable& table, PointId point,
                     const Route& route) {
  if (route.empty()) {
    throw InvalidParamsError("route chain is empty");
  }
  // Walk the chain with live pose algebra; the terminal frame hosts the
  // landmark measurement actually used.
  Transform t = snapshot.frame(route.front());
  for (size_t i = 1; i < route.size(); ++i) {
    t = compose(t, relative_transform(snapshot, route[i], route[i - 1]));
  }
  return apply(t, table.in_frame(point, route.back()).local);
}

Transform relative_transform(const SceneSnapshot& snapshot, FrameId from_frame,
                             FrameId to_frame) {
  if (from_frame == to_frame) {
    return Transform::identity();
  }
  return compose(invert(snapshot.frame(to_frame)), snapshot.frame(from_frame));
}

Vec3 scope_tip_in_frame(const SceneSnapshot& snapshot, const LandmarkTable& table,
                        FrameId target_frame) {
  const LandmarkTable::Entry& tip = table.in_frame(PointId::F, FrameId::S);
  return apply(relative_transform(snapshot, FrameId::S, target_frame), tip.local);
}

double cross_route_error(const SceneSnapshot& snapshot, const LandmarkTable& table,
                         PointId point, const Route& route_a, const Route& route_b) {
  const Vec3 a = point_via_route(snapshot, table, point, route_a);
  const Vec3 b = point_via_route(snapshot, table, point, route_b);
  return (a - b).norm();
}

}  // namespace legtrack
