#include "legtrack/session.hpp"

#include <set>

#include "legtrack/frames.hpp"

namespace legtrack {

namespace {

Transform frame_in_body(const RigidBodyDef& body, const MarkerFrameSpec& spec) {
  const MarkerRef* origin = body.find(spec.origin_label);
  const MarkerRef* z_ref = body.find(spec.z_label);
  if (origin == nullptr || z_ref == nullptr) {
    throw InvalidParamsError(std::string("frame ") + to_string(spec.id) +
                             " references markers missing from body '" + body.id + "'");
  }
  Vec3 hint = spec.y_hint;
  if (spec.y_pair.has_value()) {
    const MarkerRef* a = body.find(spec.y_pair->first);
    const MarkerRef* b = body.find(spec.y_pair->second);
    if (a == nullptr || b == nullptr) {
      throw InvalidParamsError(std::string("frame ") + to_string(spec.id) +
                               " y pair missing from body '" + body.id + "'");
    }
    hint = b->reference - a->reference;
  }
  return frame_from_marker_pair(origin->reference, z_ref->reference, UnitVec3::normalized(hint));
}

}  // namespace

void SessionConfig::validate() const {
  std::set<std::string> body_ids;
  for (const RigidBodyDef& body : bodies) {
    body.validate();
    if (!body_ids.insert(body.id).second) {
      throw InvalidParamsError("duplicate body id '" + body.id + "'");
    }
  }
  std::set<FrameId> frame_ids;
  for (const MarkerFrameSpec& spec : marker_frames) {
    const RigidBodyDef* body = find_body(spec.body);
    if (body == nullptr) {
      throw InvalidParamsError(std::string("frame ") + to_string(spec.id) +
                               " references unknown body '" + spec.body + "'");
    }
    frame_in_body(*body, spec);  // throws on missing markers or degenerate recipe
    if (!frame_ids.insert(spec.id).second) {
      throw InvalidParamsError(std::string("duplicate frame id ") + to_string(spec.id));
    }
  }
  auto require_landmark = [&](PointId point, const char* what) {
    if (!landmarks.has(point)) {
      throw InvalidParamsError(std::string(what) + " references point " + to_string(point) +
                               " missing from the landmark table");
    }
  };
  for (const CondyleFrameSpec& spec : condyle_frames) {
    require_landmark(spec.b, "condyle frame");
    require_landmark(spec.k, "condyle frame");
    require_landmark(spec.c, "condyle frame");
    if (!frame_ids.insert(spec.id).second) {
      throw InvalidParamsError(std::string("duplicate frame id ") + to_string(spec.id));
    }
  }
  for (const AxisFrameSpec& spec : axis_frames) {
    require_landmark(spec.origin, "axis frame");
    require_landmark(spec.z_to, "axis frame");
    if (!frame_ids.count(spec.y_hint_frame)) {
      throw InvalidParamsError(std::string("axis frame ") + to_string(spec.id) +
                               " hint frame " + to_string(spec.y_hint_frame) + " undefined");
    }
    if (!frame_ids.insert(spec.id).second) {
      throw InvalidParamsError(std::string("duplicate frame id ") + to_string(spec.id));
    }
  }
  for (const LandmarkTable::Entry& entry : landmarks.entries()) {
    if (!frame_ids.count(entry.frame)) {
      throw InvalidParamsError(std::string("landmark ") + to_string(entry.point) + "@" +
                               to_string(entry.frame) + " hosted by an undefined frame");
    }
  }
  std::set<std::string> route_names;
  for (const NamedRoute& route : routes) {
    if (route.name.empty() || !route_names.insert(route.name).second) {
      throw InvalidParamsError("duplicate or empty route name '" + route.name + "'");
    }
    if (route.chain.empty()) {
      throw InvalidParamsError("route '" + route.name + "' has an empty chain");
    }
    for (FrameId f : route.chain) {
      if (!frame_ids.count(f)) {
        throw InvalidParamsError("route '" + route.name + "' uses undefined frame " +
                                 to_string(f));
      }
    }
    if (!landmarks.has(route.point, route.chain.back())) {
      throw InvalidParamsError("route '" + route.name + "' point " + to_string(route.point) +
                               " has no measurement in frame " + to_string(route.chain.back()));
    }
  }
  if (!(fit_reject_rms_mm > 0.0)) {
    throw InvalidParamsError("fit_reject_rms_mm must be positive");
  }
}

const RigidBodyDef* SessionConfig::find_body(const std::string& id) const {
  for (const RigidBodyDef& body : bodies) {
    if (body.id == id) return &body;
  }
  return nullptr;
}

SnapshotResult build_snapshot(const SessionConfig& config, const MarkerFrameSample& sample) {
  SnapshotResult result;
  result.snapshot = SceneSnapshot(sample.t);

  std::map<std::string, PoseFit> fits;
  for (const RigidBodyDef& body : config.bodies) {
    try {
      fits[body.id] = fit_pose(body, sample, config.fit_reject_rms_mm);
    } catch (const Error& e) {
      result.flags.push_back({body.id, e.code(), e.what()});
    }
  }

  for (const MarkerFrameSpec& spec : config.marker_frames) {
    auto it = fits.find(spec.body);
    if (it == fits.end()) {
      continue;  // body flagged above; frame stays absent
    }
    const RigidBodyDef* body = config.find_body(spec.body);
    result.snapshot.set_frame(spec.id, compose(it->second.pose, frame_in_body(*body, spec)));
  }

  auto world_point = [&](PointId point) {
    return point_in_world(result.snapshot, config.landmarks, point);
  };

  for (const CondyleFrameSpec& spec : config.condyle_frames) {
    try {
      result.snapshot.set_frame(
          spec.id, condyle_frame(world_point(spec.b), world_point(spec.k), world_point(spec.c)));
    } catch (const Error& e) {
      result.flags.push_back({to_string(spec.id), e.code(), e.what()});
    }
  }
  for (const AxisFrameSpec& spec : config.axis_frames) {
    try {
      const Vec3 hint = result.snapshot.frame(spec.y_hint_frame).rotation().col(1);
      result.snapshot.set_frame(
          spec.id, frame_from_marker_pair(world_point(spec.origin), world_point(spec.z_to),
                                          UnitVec3::normalized(hint)));
    } catch (const Error& e) {
      result.flags.push_back({to_string(spec.id), e.code(), e.what()});
    }
  }

  result.fits = std::move(fits);
  return result;
}

}  // namespace legtrack
