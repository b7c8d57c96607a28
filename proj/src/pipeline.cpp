#include "legtrack/pipeline.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "legtrack/stream_io.hpp"

namespace legtrack {

namespace {

std::string flags_field(const std::vector<SampleFlag>& flags) {
  std::string out;
  for (const SampleFlag& flag : flags) {
    if (!out.empty()) out += ';';
    out += flag.subject;
    out += ':';
    out += error_code_name(flag.code);
  }
  return out;
}

}  // namespace

PipelineResult run_pipeline(const SessionConfig& config,
                            const std::vector<MarkerFrameSample>& stream) {
  config.validate();

  // Route pairs sharing a point give the consistency columns.
  std::vector<std::pair<const NamedRoute*, const NamedRoute*>> pairs;
  for (size_t i = 0; i < config.routes.size(); ++i) {
    for (size_t j = i + 1; j < config.routes.size(); ++j) {
      if (config.routes[i].point == config.routes[j].point) {
        pairs.emplace_back(&config.routes[i], &config.routes[j]);
      }
    }
  }

  PipelineResult result;
  result.rows.reserve(stream.size());
  double error_sum = 0.0;
  size_t error_count = 0;

  double previous_t = -1.0;
  for (const MarkerFrameSample& sample : stream) {
    if (sample.t <= previous_t) {
      throw NonMonotonicTimeError(previous_t, sample.t);
    }
    previous_t = sample.t;

    SnapshotResult snap = build_snapshot(config, sample);

    AngleReportRow row;
    row.t = sample.t;
    row.flags = snap.flags;
    for (const auto& [body_id, fit] : snap.fits) {
      row.body_rms_mm[body_id] = fit.rms_residual_mm;
      row.body_marker_count[body_id] = fit.used_marker_count;
    }
    try {
      row.angles = leg_angles(snap.snapshot, config.landmarks);
    } catch (const Error& e) {
      row.angles.reset();
      row.flags.push_back({"angles", e.code(), e.what()});
    }
    try {
      KneeTranslation kt = knee_translation(snap.snapshot, config.landmarks);
      if (!kt.gap_plausible()) {
        row.flags.push_back({"knee_gap", ErrorCode::OutOfRange,
                             "gap " + std::to_string(kt.gap_mm) + " mm outside [-5, 60]"});
      }
      row.translation = kt;
    } catch (const Error& e) {
      row.translation.reset();
      row.flags.push_back({"knee_translation", e.code(), e.what()});
    }

    ConsistencyRow crow;
    crow.t = sample.t;
    for (const auto& [a, b] : pairs) {
      try {
        const double err = cross_route_error(snap.snapshot, config.landmarks, a->point,
                                             a->chain, b->chain);
        crow.error_mm[a->name + "|" + b->name] = err;
        error_sum += err;
        ++error_count;
        result.summary.max_error_mm = std::max(result.summary.max_error_mm, err);
      } catch (const Error& e) {
        crow.flags.push_back({a->name + "|" + b->name, e.code(), e.what()});
      }
    }

    if (!row.angles.has_value() || !row.translation.has_value()) {
      ++result.summary.dropout_count;
    }
    result.rows.push_back(std::move(row));
    result.consistency.push_back(std::move(crow));
  }

  result.summary.sample_count = stream.size();
  result.summary.mean_error_mm = error_count > 0 ? error_sum / static_cast<double>(error_count) : 0.0;
  return result;
}

std::string angle_report_csv(const PipelineResult& result, const SessionConfig& config) {
  std::string out =
      "time_s,hip_flexion_deg,hip_varus_deg,hip_roll_deg,knee_flexion_deg,knee_varus_deg,"
      "knee_ie_deg,knee_ml_mm,knee_ap_mm,knee_gap_mm";
  for (const RigidBodyDef& body : config.bodies) {
    out += ",rms_" + body.id + "_mm";
  }
  out += ",flags\n";

  for (const AngleReportRow& row : result.rows) {
    out += format_number(row.t);
    auto field = [&out](bool present, double value) {
      out += ',';
      if (present) out += format_number(value);
    };
    field(row.angles.has_value(), row.angles ? row.angles->hip_flexion_deg : 0.0);
    field(row.angles.has_value(), row.angles ? row.angles->hip_varus_deg : 0.0);
    field(row.angles.has_value(), row.angles ? row.angles->hip_roll_deg : 0.0);
    field(row.angles.has_value(), row.angles ? row.angles->knee_flexion_deg : 0.0);
    field(row.angles.has_value(), row.angles ? row.angles->knee_varus_deg : 0.0);
    field(row.angles.has_value(), row.angles ? row.angles->knee_ie_deg : 0.0);
    field(row.translation.has_value(), row.translation ? row.translation->medial_lateral_mm : 0.0);
    field(row.translation.has_value(),
          row.translation ? row.translation->posterior_anterior_mm : 0.0);
    field(row.translation.has_value(), row.translation ? row.translation->gap_mm : 0.0);
    for (const RigidBodyDef& body : config.bodies) {
      auto it = row.body_rms_mm.find(body.id);
      field(it != row.body_rms_mm.end(), it != row.body_rms_mm.end() ? it->second : 0.0);
    }
    out += ',';
    out += flags_field(row.flags);
    out += '\n';
  }
  return out;
}

std::string consistency_report_csv(const PipelineResult& result) {
  // Collect the full pair-column set first; individual rows may miss pairs.
  std::vector<std::string> columns;
  for (const ConsistencyRow& row : result.consistency) {
    for (const auto& [name, value] : row.error_mm) {
      if (std::find(columns.begin(), columns.end(), name) == columns.end()) {
        columns.push_back(name);
      }
    }
  }
  std::sort(columns.begin(), columns.end());

  std::string out = "time_s";
  for (const std::string& name : columns) {
    out += ",err_mm:" + name;
  }
  out += ",flags\n";
  for (const ConsistencyRow& row : result.consistency) {
    out += format_number(row.t);
    for (const std::string& name : columns) {
      out += ',';
      auto it = row.error_mm.find(name);
      if (it != row.error_mm.end()) out += format_number(it->second);
    }
    out += ',';
    out += flags_field(row.flags);
    out += '\n';
  }
  return out;
}

std::string summary_json(const PipelineResult& result) {
  nlohmann::json j;
  j["sample_count"] = result.summary.sample_count;
  j["dropout_count"] = result.summary.dropout_count;
  j["mean_error_mm"] = result.summary.mean_error_mm;
  j["max_error_mm"] = result.summary.max_error_mm;
  return j.dump(2) + "\n";
}

}  // namespace legtrack
