#include "legtrack/simulate.hpp"

#include <cmath>
#include <functional>
#include <random>

#include "legtrack/frames.hpp"

namespace legtrack {

namespace {

RotMat3 rot_x(double deg) {
  return Eigen::AngleAxisd(rad_from_deg(deg), Vec3::UnitX()).toRotationMatrix();
}
RotMat3 rot_y(double deg) {
  return Eigen::AngleAxisd(rad_from_deg(deg), Vec3::UnitY()).toRotationMatrix();
}
RotMat3 rot_z(double deg) {
  return Eigen::AngleAxisd(rad_from_deg(deg), Vec3::UnitZ()).toRotationMatrix();
}

// Hip rotation: flexion about x, varus about y, roll about the bone axis.
RotMat3 hip_rotation(const JointCommand& cmd) {
  return rot_x(cmd.hip_flexion_deg) * rot_y(cmd.hip_varus_deg) * rot_z(cmd.hip_roll_deg);
}

// Knee rotation in the condyle frame: the tibial axis is swung to the
// direction fixed by flexion/varus, then twisted by IE about itself.
RotMat3 knee_rotation(const JointCommand& cmd) {
  const double a = rad_from_deg(cmd.knee_flexion_deg);
  const double b = rad_from_deg(cmd.knee_varus_deg);
  const Vec3 axis_dir(std::sin(b), std::cos(b) * std::sin(a), std::cos(b) * std::cos(a));
  const RotMat3 swing =
      Eigen::Quaterniond::FromTwoVectors(Vec3::UnitZ(), axis_dir).toRotationMatrix();
  return swing * rot_z(cmd.knee_ie_deg);
}

Vec3 femur_landmark(const LegModelParams& p, PointId point) {
  switch (point) {
    case PointId::B: return Vec3::Zero();
    case PointId::K: return p.neck_offset_mm;
    case PointId::C: return Vec3(0.0, 0.0, -p.femur_length_mm);
    default: throw InvalidParamsError("not a femur landmark");
  }
}

Vec3 tibia_landmark(const LegModelParams& p, PointId point) {
  switch (point) {
    case PointId::D: return Vec3::Zero();
    case PointId::E: return Vec3(0.0, 0.0, p.tibia_length_mm);
    default: throw InvalidParamsError("not a tibia landmark");
  }
}

MarkerFrameSpec marker_frame_spec(FrameId id, const RigidBodyDef& body,
                                  const std::pair<std::string, std::string>& markers) {
  MarkerFrameSpec spec;
  spec.id = id;
  spec.body = body.id;
  spec.origin_label = markers.first;
  spec.z_label = markers.second;
  return spec;
}

Transform frame_pose_in_body(const RigidBodyDef& body, const MarkerFrameSpec& spec) {
  const MarkerRef* origin = body.find(spec.origin_label);
  const MarkerRef* z_ref = body.find(spec.z_label);
  if (origin == nullptr || z_ref == nullptr) {
    throw InvalidParamsError("frame markers missing from body '" + body.id + "'");
  }
  return frame_from_marker_pair(origin->reference, z_ref->reference,
                                UnitVec3::normalized(spec.y_hint));
}

}  // namespace

LegModelParams LegModelParams::defaults() {
  LegModelParams p;

  p.femur_body.id = "femur";
  p.femur_body.markers = {
      {"H", Vec3(0.0, 90.0, -330.0)},
      {"G", Vec3(0.0, 90.0, -230.0)},
      {"F3", Vec3(50.0, 105.0, -280.0)},
      {"F4", Vec3(-45.0, 80.0, -285.0)},
  };

  p.tibia_body.id = "tibia";
  p.tibia_body.markers = {
      {"M", Vec3(0.0, 70.0, 120.0)},
      {"T2", Vec3(0.0, 70.0, 230.0)},
      {"T3", Vec3(45.0, 85.0, 175.0)},
      {"T4", Vec3(-40.0, 60.0, 180.0)},
      {"T5", Vec3(20.0, 95.0, 140.0)},
  };

  p.scope_body.id = "scope";
  p.scope_body.markers = {
      {"S", Vec3(0.0, 0.0, 0.0)},
      {"S2", Vec3(0.0, 0.0, 90.0)},
      {"S3", Vec3(35.0, 8.0, 45.0)},
      {"S4", Vec3(-30.0, -6.0, 50.0)},
  };
  p.scope_tip_local = Vec3(0.0, 0.0, -160.0);
  // Tip parked at the rest condyle centre.
  const Vec3 rest_condyle = p.hip_centre_w + Vec3(0.0, 0.0, -p.femur_length_mm);
  p.scope_pose_w = Transform::from_translation(rest_condyle - p.scope_tip_local);
  return p;
}

void LegModelParams::validate() const {
  if (!(femur_length_mm > 0.0) || !(tibia_length_mm > 0.0)) {
    throw InvalidParamsError("bone lengths must be positive");
  }
  if (!hip_centre_w.allFinite() || !neck_offset_mm.allFinite() || !scope_tip_local.allFinite()) {
    throw InvalidParamsError("leg model vectors must be finite");
  }
  femur_body.validate();
  tibia_body.validate();
  scope_body.validate();
  frame_pose_in_body(femur_body, marker_frame_spec(FrameId::H, femur_body, femur_frame_markers));
  frame_pose_in_body(tibia_body, marker_frame_spec(FrameId::M, tibia_body, tibia_frame_markers));
  frame_pose_in_body(scope_body, marker_frame_spec(FrameId::S, scope_body, scope_frame_markers));
  // The condyle frame needs K clearly off the mechanical axis.
  condyle_frame(femur_landmark(*this, PointId::B), femur_landmark(*this, PointId::K),
                femur_landmark(*this, PointId::C));
}

void MotionScript::validate() const {
  if (keys.empty()) {
    throw InvalidParamsError("motion script has no keys");
  }
  if (!(sample_rate_hz > 0.0)) {
    throw InvalidParamsError("sample rate must be positive");
  }
  double prev = -1.0;
  for (const ScriptKey& key : keys) {
    if (!(key.t >= 0.0) || !(key.t > prev)) {
      throw InvalidParamsError("script key times must be non-negative and strictly increasing");
    }
    prev = key.t;
    if (!std::isfinite(key.command.hip_flexion_deg) || !std::isfinite(key.command.hip_varus_deg) ||
        !std::isfinite(key.command.hip_roll_deg) || !std::isfinite(key.command.knee_flexion_deg) ||
        !std::isfinite(key.command.knee_varus_deg) || !std::isfinite(key.command.knee_ie_deg) ||
        !key.command.knee_translation_mm.allFinite()) {
      throw InvalidParamsError("script command is not finite");
    }
  }
}

double MotionScript::t_begin() const { return keys.front().t; }
double MotionScript::t_end() const { return keys.back().t; }

JointCommand MotionScript::at(double t) const {
  if (keys.empty() || t < t_begin() || t > t_end()) {
    throw OutOfRangeError("t=" + std::to_string(t) + " outside the scripted interval");
  }
  size_t hi = 1;
  while (hi < keys.size() && keys[hi].t < t) ++hi;
  if (hi == keys.size()) return keys.back().command;
  const ScriptKey& a = keys[hi - 1];
  const ScriptKey& b = keys[hi];
  if (t <= a.t) return a.command;
  const double w = (t - a.t) / (b.t - a.t);
  auto lerp = [w](double x, double y) { return x + w * (y - x); };
  JointCommand out;
  out.hip_flexion_deg = lerp(a.command.hip_flexion_deg, b.command.hip_flexion_deg);
  out.hip_varus_deg = lerp(a.command.hip_varus_deg, b.command.hip_varus_deg);
  out.hip_roll_deg = lerp(a.command.hip_roll_deg, b.command.hip_roll_deg);
  out.knee_flexion_deg = lerp(a.command.knee_flexion_deg, b.command.knee_flexion_deg);
  out.knee_varus_deg = lerp(a.command.knee_varus_deg, b.command.knee_varus_deg);
  out.knee_ie_deg = lerp(a.command.knee_ie_deg, b.command.knee_ie_deg);
  out.knee_translation_mm =
      a.command.knee_translation_mm + w * (b.command.knee_translation_mm - a.command.knee_translation_mm);
  return out;
}

MotionScript MotionScript::constant(const JointCommand& command, double duration_s,
                                    double rate_hz) {
  MotionScript script;
  script.sample_rate_hz = rate_hz;
  script.keys.push_back({0.0, command});
  if (duration_s > 0.0) {
    script.keys.push_back({duration_s, command});
  }
  return script;
}

void NoiseSpec::validate() const {
  if (marker_sigma_mm < 0.0 || landmark_sigma_mm < 0.0) {
    throw InvalidParamsError("noise sigma must be non-negative");
  }
  auto check_prob = [](double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw InvalidParamsError("occlusion probability must be in [0, 1]");
    }
  };
  check_prob(occlusion_probability);
  for (const auto& [label, p] : occlusion_overrides) {
    check_prob(p);
  }
}

GroundTruthSample forward_kinematics(const LegModelParams& params, const JointCommand& command,
                                     Timestamp t) {
  GroundTruthSample out;
  out.t = t;
  out.angles.hip_flexion_deg = command.hip_flexion_deg;
  out.angles.hip_varus_deg = command.hip_varus_deg;
  out.angles.hip_roll_deg = command.hip_roll_deg;
  out.angles.knee_flexion_deg = command.knee_flexion_deg;
  out.angles.knee_varus_deg = command.knee_varus_deg;
  out.angles.knee_ie_deg = command.knee_ie_deg;
  out.translation.medial_lateral_mm = command.knee_translation_mm.x();
  out.translation.posterior_anterior_mm = command.knee_translation_mm.y();
  out.translation.gap_mm = command.knee_translation_mm.z();

  const Transform femur(hip_rotation(command), params.hip_centre_w);
  const Transform condyle =
      compose(femur, condyle_frame(femur_landmark(params, PointId::B),
                                   femur_landmark(params, PointId::K),
                                   femur_landmark(params, PointId::C)));
  const Transform knee(knee_rotation(command), command.knee_translation_mm);
  const Transform tibia = compose(condyle, knee);

  out.body_poses["femur"] = femur;
  out.body_poses["tibia"] = tibia;
  out.body_poses["scope"] = params.scope_pose_w;

  out.points[PointId::B] = apply(femur, femur_landmark(params, PointId::B));
  out.points[PointId::K] = apply(femur, femur_landmark(params, PointId::K));
  out.points[PointId::C] = apply(femur, femur_landmark(params, PointId::C));
  out.points[PointId::D] = apply(tibia, tibia_landmark(params, PointId::D));
  out.points[PointId::E] = apply(tibia, tibia_landmark(params, PointId::E));
  out.points[PointId::F] = apply(params.scope_pose_w, params.scope_tip_local);

  const Transform m_frame = compose(
      tibia, frame_pose_in_body(params.tibia_body, marker_frame_spec(FrameId::M, params.tibia_body,
                                                                     params.tibia_frame_markers)));
  out.frame_poses[FrameId::H] = compose(
      femur, frame_pose_in_body(params.femur_body, marker_frame_spec(FrameId::H, params.femur_body,
                                                                     params.femur_frame_markers)));
  out.frame_poses[FrameId::M] = m_frame;
  out.frame_poses[FrameId::S] = compose(
      params.scope_pose_w,
      frame_pose_in_body(params.scope_body, marker_frame_spec(FrameId::S, params.scope_body,
                                                              params.scope_frame_markers)));
  out.frame_poses[FrameId::C] = condyle;
  out.frame_poses[FrameId::D] =
      frame_from_marker_pair(out.points[PointId::D], out.points[PointId::E],
                             UnitVec3::normalized(m_frame.rotation().col(1)));
  return out;
}

SyntheticSession synthesize(const LegModelParams& params, const MotionScript& script,
                            const NoiseSpec& noise) {
  params.validate();
  script.validate();
  noise.validate();

  SyntheticSession session;
  session.truth.params = params;
  session.truth.script = script;

  SessionConfig& config = session.config;
  config.bodies = {params.femur_body, params.tibia_body, params.scope_body};
  config.marker_frames = {
      marker_frame_spec(FrameId::H, params.femur_body, params.femur_frame_markers),
      marker_frame_spec(FrameId::M, params.tibia_body, params.tibia_frame_markers),
      marker_frame_spec(FrameId::S, params.scope_body, params.scope_frame_markers),
  };
  config.condyle_frames = {CondyleFrameSpec{}};
  config.axis_frames = {AxisFrameSpec{}};
  config.routes = {
      NamedRoute{"e_tibia", PointId::E, {FrameId::M}},
      NamedRoute{"e_cross", PointId::E, {FrameId::H, FrameId::C, FrameId::D}},
  };

  // Exact CT vectors: landmarks expressed in the marker frames that host
  // them, plus the cross-joint measurement of E in the derived tibial frame.
  const Transform h_in_femur = frame_pose_in_body(params.femur_body, config.marker_frames[0]);
  const Transform m_in_tibia = frame_pose_in_body(params.tibia_body, config.marker_frames[1]);
  const Transform s_in_scope = frame_pose_in_body(params.scope_body, config.marker_frames[2]);

  std::vector<LandmarkTable::Entry> entries;
  for (PointId point : {PointId::B, PointId::K, PointId::C}) {
    entries.push_back({point, FrameId::H, apply(invert(h_in_femur), femur_landmark(params, point))});
  }
  for (PointId point : {PointId::D, PointId::E}) {
    entries.push_back({point, FrameId::M, apply(invert(m_in_tibia), tibia_landmark(params, point))});
  }
  entries.push_back({PointId::E, FrameId::D, Vec3(0.0, 0.0, params.tibia_length_mm)});
  entries.push_back({PointId::F, FrameId::S, apply(invert(s_in_scope), params.scope_tip_local)});

  std::mt19937_64 rng(noise.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  if (noise.landmark_sigma_mm > 0.0) {
    for (LandmarkTable::Entry& entry : entries) {
      entry.local += noise.landmark_sigma_mm * Vec3(gauss(rng), gauss(rng), gauss(rng));
    }
  }
  config.landmarks = LandmarkTable(std::move(entries), "synthetic leg model", kCtSigmaMm);
  config.validate();

  auto occlusion_prob = [&](const std::string& label) {
    auto it = noise.occlusion_overrides.find(label);
    return it != noise.occlusion_overrides.end() ? it->second : noise.occlusion_probability;
  };

  const double t0 = script.t_begin();
  const auto sample_count =
      static_cast<size_t>(std::floor((script.t_end() - t0) * script.sample_rate_hz + 0.5)) + 1;
  session.stream.reserve(sample_count);
  session.truth.samples.reserve(sample_count);

  for (size_t i = 0; i < sample_count; ++i) {
    const double t = std::min(t0 + static_cast<double>(i) / script.sample_rate_hz, script.t_end());
    GroundTruthSample truth = forward_kinematics(params, script.at(t), t);

    MarkerFrameSample sample;
    sample.t = t;
    for (const RigidBodyDef* body : {&params.femur_body, &params.tibia_body, &params.scope_body}) {
      const Transform& pose = truth.body_poses.at(body->id);
      for (const MarkerRef& marker : body->markers) {
        // Fixed draw order per marker keeps streams bit-identical per seed.
        const bool occluded = uniform(rng) < occlusion_prob(marker.label);
        const Vec3 jitter(gauss(rng), gauss(rng), gauss(rng));
        MarkerObservation obs;
        obs.label = marker.label;
        obs.body = body->id;
        obs.visible = !occluded;
        if (obs.visible) {
          obs.position = apply(pose, marker.reference) + noise.marker_sigma_mm * jitter;
        }
        sample.observations.push_back(obs);
      }
    }
    session.stream.push_back(std::move(sample));
    session.truth.samples.push_back(std::move(truth));
  }
  return session;
}

GroundTruthSample ground_truth_at(const GroundTruth& truth, double t) {
  return forward_kinematics(truth.params, truth.script.at(t), t);
}

namespace {

MotionScript keyed_script(double duration_s, double rate_hz,
                          const std::function<JointCommand(double)>& command_at) {
  if (!(duration_s > 0.0)) {
    throw InvalidParamsError("script duration must be positive");
  }
  MotionScript script;
  script.sample_rate_hz = rate_hz;
  constexpr double kKeyStep = 0.25;  // seconds between interpolation keys
  const auto key_count = static_cast<size_t>(std::ceil(duration_s / kKeyStep));
  for (size_t i = 0; i <= key_count; ++i) {
    const double t = std::min(static_cast<double>(i) * kKeyStep, duration_s);
    script.keys.push_back({t, command_at(t)});
    if (t >= duration_s) break;
  }
  return script;
}

double raised_cos(double amplitude, double hz, double t) {
  return 0.5 * amplitude * (1.0 - std::cos(2.0 * kPi * hz * t));
}

double sine(double amplitude, double hz, double t) {
  return amplitude * std::sin(2.0 * kPi * hz * t);
}

}  // namespace

MotionScript default_sweep_script(double duration_s, double rate_hz) {
  return keyed_script(duration_s, rate_hz, [](double t) {
    JointCommand c;
    c.hip_flexion_deg = raised_cos(45.0, 0.020, t);
    c.hip_varus_deg = sine(10.0, 0.017, t);
    c.hip_roll_deg = sine(8.0, 0.013, t);
    c.knee_flexion_deg = raised_cos(90.0, 0.025, t);
    c.knee_varus_deg = sine(8.0, 0.019, t);
    c.knee_ie_deg = sine(12.0, 0.023, t);
    c.knee_translation_mm =
        Vec3(sine(2.0, 0.011, t), sine(3.0, 0.029, t), raised_cos(6.0, 0.015, t));
    return c;
  });
}

MotionScript full_range_sweep_script(double duration_s, double rate_hz) {
  return keyed_script(duration_s, rate_hz, [](double t) {
    JointCommand c;
    c.hip_flexion_deg = raised_cos(90.0, 0.020, t);
    c.hip_varus_deg = sine(20.0, 0.017, t);
    c.hip_roll_deg = sine(10.0, 0.013, t);
    c.knee_flexion_deg = raised_cos(120.0, 0.025, t);
    c.knee_varus_deg = sine(10.0, 0.019, t);
    c.knee_ie_deg = sine(15.0, 0.023, t);
    return c;
  });
}

}  // namespace legtrack
