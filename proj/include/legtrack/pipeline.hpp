#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "legtrack/kinematics.hpp"
#include "legtrack/session.hpp"

namespace legtrack {

/// One stream sample turned into angles and translations. Absent values are
/// always explained by a flag; a bad sample never aborts the stream.
struct AngleReportRow {
  Timestamp t = 0.0;
  std::optional<LegAngles> angles;
  std::optional<KneeTranslation> translation;
  std::map<std::string, double> body_rms_mm;   // successful fits only
  std::map<std::string, int> body_marker_count;
  std::vector<SampleFlag> flags;
};

/// Cross-route disagreement of one sample, keyed "routeA|routeB" for every
/// pair of configured routes that target the same point.
struct ConsistencyRow {
  Timestamp t = 0.0;
  std::map<std::string, double> error_mm;
  std::vector<SampleFlag> flags;
};

struct PipelineSummary {
  std::size_t sample_count = 0;
  std::size_t dropout_count = 0;  // samples without a full angle solution
  double mean_error_mm = 0.0;     // over all computed cross-route errors
  double max_error_mm = 0.0;
};

struct PipelineResult {
  std::vector<AngleReportRow> rows;
  std::vector<ConsistencyRow> consistency;
  PipelineSummary summary;
};

/// Runs fits, frames, angles, translations and route consistency over the
/// whole stream. Per-sample errors become flags; config errors throw.
PipelineResult run_pipeline(const SessionConfig& config,
                            const std::vector<MarkerFrameSample>& stream);

std::string angle_report_csv(const PipelineResult& result, const SessionConfig& config);
std::string consistency_report_csv(const PipelineResult& result);
std::string summary_json(const PipelineResult& result);

}  // namespace legtrack
