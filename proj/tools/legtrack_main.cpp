#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "legtrack/pipeline.hpp"
#include "legtrack/simulate.hpp"
#include "legtrack/stream_io.hpp"

namespace {

using legtrack::Vec3;
using nlohmann::json;

Vec3 vec3_from(const json& j) { return Vec3(j.at(0), j.at(1), j.at(2)); }

json vec3_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

struct SimulateOptions {
  std::string config_path;
  std::string output_path;
  std::string truth_path;
  std::string session_config_path;
  double duration_s = 30.0;
  double rate_hz = 100.0;
  std::optional<std::uint64_t> seed;
  std::optional<double> marker_sigma;
  std::optional<double> landmark_sigma;
  std::optional<double> occlusion_prob;
};

legtrack::MotionScript script_from_json(const json& j, double duration_s, double rate_hz) {
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (name == "default") return legtrack::default_sweep_script(duration_s, rate_hz);
    if (name == "full_range") return legtrack::full_range_sweep_script(duration_s, rate_hz);
    if (name == "rest") {
      return legtrack::MotionScript::constant(legtrack::JointCommand{}, duration_s, rate_hz);
    }
    throw legtrack::InvalidParamsError("unknown script name '" + name + "'");
  }
  legtrack::MotionScript script;
  script.sample_rate_hz = j.value("rate_hz", rate_hz);
  for (const json& jk : j.at("keys")) {
    legtrack::ScriptKey key;
    key.t = jk.at("t").get<double>();
    key.command.hip_flexion_deg = jk.value("hip_flexion_deg", 0.0);
    key.command.hip_varus_deg = jk.value("hip_varus_deg", 0.0);
    key.command.hip_roll_deg = jk.value("hip_roll_deg", 0.0);
    key.command.knee_flexion_deg = jk.value("knee_flexion_deg", 0.0);
    key.command.knee_varus_deg = jk.value("knee_varus_deg", 0.0);
    key.command.knee_ie_deg = jk.value("knee_ie_deg", 0.0);
    if (jk.contains("knee_translation_mm")) {
      key.command.knee_translation_mm = vec3_from(jk.at("knee_translation_mm"));
    }
    script.keys.push_back(key);
  }
  return script;
}

int run_simulate(const SimulateOptions& opt) {
  json j = json::object();
  if (!opt.config_path.empty()) {
    j = json::parse(legtrack::load_text(opt.config_path));
  }

  auto params = legtrack::LegModelParams::defaults();
  if (j.contains("params")) {
    const json& jp = j["params"];
    params.femur_length_mm = jp.value("femur_length_mm", params.femur_length_mm);
    params.tibia_length_mm = jp.value("tibia_length_mm", params.tibia_length_mm);
    if (jp.contains("neck_offset_mm")) params.neck_offset_mm = vec3_from(jp["neck_offset_mm"]);
    if (jp.contains("hip_centre_mm")) params.hip_centre_w = vec3_from(jp["hip_centre_mm"]);
  }

  const double duration = j.value("duration_s", opt.duration_s);
  const double rate = j.value("rate_hz", opt.rate_hz);
  const legtrack::MotionScript script =
      script_from_json(j.value("script", json("default")), duration, rate);

  legtrack::NoiseSpec noise;
  if (j.contains("noise")) {
    const json& jn = j["noise"];
    noise.marker_sigma_mm = jn.value("marker_sigma_mm", 0.0);
    noise.landmark_sigma_mm = jn.value("landmark_sigma_mm", 0.0);
    noise.occlusion_probability = jn.value("occlusion_probability", 0.0);
    noise.seed = jn.value("seed", std::uint64_t{0});
    for (const auto& [label, p] : jn.value("occlusion_overrides", json::object()).items()) {
      noise.occlusion_overrides[label] = p.get<double>();
    }
  }
  if (opt.seed) noise.seed = *opt.seed;
  if (opt.marker_sigma) noise.marker_sigma_mm = *opt.marker_sigma;
  if (opt.landmark_sigma) noise.landmark_sigma_mm = *opt.landmark_sigma;
  if (opt.occlusion_prob) noise.occlusion_probability = *opt.occlusion_prob;

  const legtrack::SyntheticSession session = legtrack::synthesize(params, script, noise);

  legtrack::save_text(opt.output_path, legtrack::emit_marker_stream(session.stream));
  if (!opt.session_config_path.empty()) {
    legtrack::save_text(opt.session_config_path, legtrack::config_to_json(session.config));
  }
  if (!opt.truth_path.empty()) {
    json out;
    out["samples"] = json::array();
    for (const auto& s : session.truth.samples) {
      json js;
      js["t"] = s.t;
      js["angles"] = {{"hip_flexion_deg", s.angles.hip_flexion_deg},
                      {"hip_varus_deg", s.angles.hip_varus_deg},
                      {"hip_roll_deg", s.angles.hip_roll_deg},
                      {"knee_flexion_deg", s.angles.knee_flexion_deg},
                      {"knee_varus_deg", s.angles.knee_varus_deg},
                      {"knee_ie_deg", s.angles.knee_ie_deg}};
      js["knee_translation_mm"] = json::array({s.translation.medial_lateral_mm,
                                               s.translation.posterior_anterior_mm,
                                               s.translation.gap_mm});
      json jp;
      for (const auto& [point, pos] : s.points) {
        jp[legtrack::to_string(point)] = vec3_json(pos);
      }
      js["points"] = std::move(jp);
      out["samples"].push_back(std::move(js));
    }
    legtrack::save_text(opt.truth_path, out.dump(2) + "\n");
  }
  std::cout << "wrote " << session.stream.size() << " samples to " << opt.output_path << "\n";
  return 0;
}

std::string poses_csv(const legtrack::SessionConfig& config,
                      const std::vector<legtrack::MarkerFrameSample>& stream) {
  std::string out =
      "time_s,body,r00,r01,r02,r10,r11,r12,r20,r21,r22,tx_mm,ty_mm,tz_mm,rms_mm,markers,flags\n";
  for (const legtrack::MarkerFrameSample& sample : stream) {
    const legtrack::SnapshotResult snap = legtrack::build_snapshot(config, sample);
    for (const legtrack::RigidBodyDef& body : config.bodies) {
      out += legtrack::format_number(sample.t);
      out += ',';
      out += body.id;
      auto it = snap.fits.find(body.id);
      if (it != snap.fits.end()) {
        const legtrack::Transform& pose = it->second.pose;
        for (int r = 0; r < 3; ++r) {
          for (int c = 0; c < 3; ++c) {
            out += ',';
            out += legtrack::format_number(pose.rotation()(r, c));
          }
        }
        for (int r = 0; r < 3; ++r) {
          out += ',';
          out += legtrack::format_number(pose.translation()(r));
        }
        out += ',';
        out += legtrack::format_number(it->second.rms_residual_mm);
        out += ',';
        out += std::to_string(it->second.used_marker_count);
        out += ',';
      } else {
        out += ",,,,,,,,,,,,,,";
      }
      for (const legtrack::SampleFlag& flag : snap.flags) {
        if (flag.subject == body.id) {
          out += flag.subject;
          out += ':';
          out += legtrack::error_code_name(flag.code);
        }
      }
      out += '\n';
    }
  }
  return out;
}

int fail_with(const legtrack::Error& e) {
  json err;
  err["error"] = {{"code", legtrack::error_code_name(e.code())}, {"message", e.what()}};
  std::cerr << err.dump() << "\n";
  switch (e.code()) {
    case legtrack::ErrorCode::ParseError:
    case legtrack::ErrorCode::NonMonotonicTime:
      return 3;
    case legtrack::ErrorCode::InvalidParams:
      return 2;
    default:
      return 4;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Skeletal tracking toolkit: marker streams to leg poses and joint angles"};
  app.require_subcommand(1);

  SimulateOptions sim;
  CLI::App* simulate = app.add_subcommand("simulate", "Generate a synthetic marker stream");
  simulate->add_option("--config", sim.config_path, "Simulation config JSON");
  simulate->add_option("--output", sim.output_path, "Marker stream CSV to write")->required();
  simulate->add_option("--truth", sim.truth_path, "Ground-truth JSON to write");
  simulate->add_option("--emit-config", sim.session_config_path, "Session config JSON to write");
  simulate->add_option("--duration", sim.duration_s, "Duration, seconds");
  simulate->add_option("--rate", sim.rate_hz, "Sample rate, Hz");
  std::uint64_t seed_value = 0;
  CLI::Option* seed_opt = simulate->add_option("--seed", seed_value, "Noise seed");
  double marker_sigma = 0.0, landmark_sigma = 0.0, occlusion = 0.0;
  CLI::Option* marker_opt =
      simulate->add_option("--noise-sigma-mm", marker_sigma, "Marker noise sigma, mm");
  CLI::Option* landmark_opt =
      simulate->add_option("--landmark-sigma-mm", landmark_sigma, "Landmark noise sigma, mm");
  CLI::Option* occlusion_opt =
      simulate->add_option("--occlusion-prob", occlusion, "Per-marker occlusion probability");

  std::string config_path, input_path, output_path;
  CLI::App* track = app.add_subcommand("track", "Fit per-sample body poses");
  track->add_option("--config", config_path, "Session config JSON")->required();
  track->add_option("--input", input_path, "Marker stream CSV")->required();
  track->add_option("--output", output_path, "Pose CSV to write")->required();

  CLI::App* angles = app.add_subcommand("angles", "Compute the joint angle report");
  angles->add_option("--config", config_path, "Session config JSON")->required();
  angles->add_option("--input", input_path, "Marker stream CSV")->required();
  angles->add_option("--output", output_path, "Angle report CSV to write")->required();

  CLI::App* consistency =
      app.add_subcommand("consistency", "Cross-route error table for configured routes");
  consistency->add_option("--config", config_path, "Session config JSON")->required();
  consistency->add_option("--input", input_path, "Marker stream CSV")->required();
  consistency->add_option("--output", output_path, "Consistency CSV to write")->required();

  CLI::App* validate = app.add_subcommand("validate", "Lint a session config");
  validate->add_option("--config", config_path, "Session config JSON")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      if (*seed_opt) sim.seed = seed_value;
      if (*marker_opt) sim.marker_sigma = marker_sigma;
      if (*landmark_opt) sim.landmark_sigma = landmark_sigma;
      if (*occlusion_opt) sim.occlusion_prob = occlusion;
      return run_simulate(sim);
    }
    if (track->parsed()) {
      const legtrack::SessionConfig config = legtrack::load_config(config_path);
      config.validate();
      const auto stream = legtrack::parse_marker_stream(legtrack::load_text(input_path));
      legtrack::save_text(output_path, poses_csv(config, stream));
      std::cout << "wrote poses for " << stream.size() << " samples to " << output_path << "\n";
      return 0;
    }
    if (angles->parsed() || consistency->parsed()) {
      const legtrack::SessionConfig config = legtrack::load_config(config_path);
      const auto stream = legtrack::parse_marker_stream(legtrack::load_text(input_path));
      const legtrack::PipelineResult result = legtrack::run_pipeline(config, stream);
      if (angles->parsed()) {
        legtrack::save_text(output_path, legtrack::angle_report_csv(result, config));
      } else {
        legtrack::save_text(output_path, legtrack::consistency_report_csv(result));
      }
      std::cout << legtrack::summary_json(result);
      return 0;
    }
    if (validate->parsed()) {
      legtrack::load_config(config_path);  // parses and validates
      std::cout << "{\"ok\":true}\n";
      return 0;
    }
  } catch (const legtrack::Error& e) {
    return fail_with(e);
  }
  return 0;
}
