#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "legtrack/session.hpp"

namespace legtrack {

// Marker stream CSV: UTF-8, header
//   time_s,body,label,x_mm,y_mm,z_mm,visible
// visible in {0,1}; decimal point, no thousands separators. Rows sharing a
// time form one sample; sample times must strictly increase. Occluded
// markers carry zero coordinates.

/// Canonical number formatting shared by every emitter (shortest %.9g),
/// so identical data always serializes to identical bytes.
std::string format_number(double value);

std::vector<MarkerFrameSample> parse_marker_stream(std::istream& in);
std::vector<MarkerFrameSample> parse_marker_stream(const std::string& text);

std::string emit_marker_stream(const std::vector<MarkerFrameSample>& stream);

SessionConfig config_from_json(const std::string& text);
std::string config_to_json(const SessionConfig& config);

SessionConfig load_config(const std::string& path);
void save_text(const std::string& path, const std::string& text);
std::string load_text(const std::string& path);

}  // namespace legtrack
