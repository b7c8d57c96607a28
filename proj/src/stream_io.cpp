#include "legtrack/stream_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace legtrack {

using nlohmann::json;

namespace {

constexpr const char* kStreamHeader = "time_s,body,label,x_mm,y_mm,z_mm,visible";

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(current);
      current.clear();
    } else if (c != '\r') {
      current += c;
    }
  }
  fields.push_back(current);
  return fields;
}

double parse_double(const std::string& field, int line, int column) {
  if (field.empty()) {
    throw ParseError(line, column, "empty numeric field");
  }
  size_t consumed = 0;
  double value = 0.0;
  try {
    value = std::stod(field, &consumed);
  } catch (const std::exception&) {
    throw ParseError(line, column, "not a number: '" + field + "'");
  }
  if (consumed != field.size() || !std::isfinite(value)) {
    throw ParseError(line, column, "not a finite number: '" + field + "'");
  }
  return value;
}

Vec3 vec3_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3) {
    throw InvalidParamsError(what + " must be a 3-element array");
  }
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

json vec3_to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

}  // namespace

std::string format_number(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.9g", value);
  return buffer;
}

std::vector<MarkerFrameSample> parse_marker_stream(std::istream& in) {
  std::vector<MarkerFrameSample> stream;
  std::string line;
  int line_no = 0;

  if (!std::getline(in, line)) {
    throw ParseError(1, 1, "missing header");
  }
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kStreamHeader) {
    throw ParseError(1, 1, std::string("expected header '") + kStreamHeader + "'");
  }

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != 7) {
      throw ParseError(line_no, static_cast<int>(fields.size()),
                       "expected 7 fields, got " + std::to_string(fields.size()));
    }
    const double t = parse_double(fields[0], line_no, 1);
    if (t < 0.0) {
      throw ParseError(line_no, 1, "time must be non-negative");
    }
    MarkerObservation obs;
    obs.body = fields[1];
    obs.label = fields[2];
    if (obs.label.empty()) {
      throw ParseError(line_no, 3, "empty marker label");
    }
    obs.position =
        Vec3(parse_double(fields[3], line_no, 4), parse_double(fields[4], line_no, 5),
             parse_double(fields[5], line_no, 6));
    if (fields[6] == "1") {
      obs.visible = true;
    } else if (fields[6] == "0") {
      obs.visible = false;
    } else {
      throw ParseError(line_no, 7, "visible must be 0 or 1, got '" + fields[6] + "'");
    }

    if (stream.empty() || t != stream.back().t) {
      if (!stream.empty() && t < stream.back().t) {
        throw NonMonotonicTimeError(stream.back().t, t);
      }
      MarkerFrameSample sample;
      sample.t = t;
      stream.push_back(std::move(sample));
    }
    MarkerFrameSample& sample = stream.back();
    if (sample.find(obs.label) != nullptr) {
      throw ParseError(line_no, 3, "duplicate label '" + obs.label + "' within one sample");
    }
    sample.observations.push_back(std::move(obs));
  }
  return stream;
}

std::vector<MarkerFrameSample> parse_marker_stream(const std::string& text) {
  std::istringstream in(text);
  return parse_marker_stream(in);
}

std::string emit_marker_stream(const std::vector<MarkerFrameSample>& stream) {
  std::string out = kStreamHeader;
  out += '\n';
  for (const MarkerFrameSample& sample : stream) {
    for (const MarkerObservation& obs : sample.observations) {
      out += format_number(sample.t);
      out += ',';
      out += obs.body;
      out += ',';
      out += obs.label;
      out += ',';
      out += format_number(obs.position.x());
      out += ',';
      out += format_number(obs.position.y());
      out += ',';
      out += format_number(obs.position.z());
      out += ',';
      out += obs.visible ? '1' : '0';
      out += '\n';
    }
  }
  return out;
}

SessionConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidParamsError(std::string("config is not valid JSON: ") + e.what());
  }

  SessionConfig config;
  try {
    for (const json& jb : j.at("bodies")) {
      RigidBodyDef body;
      body.id = jb.at("id").get<std::string>();
      for (const json& jm : jb.at("markers")) {
        body.markers.push_back(
            {jm.at("label").get<std::string>(), vec3_from_json(jm.at("ref_mm"), "marker ref")});
      }
      config.bodies.push_back(std::move(body));
    }

    const json& jf = j.at("frames");
    for (const json& js : jf.value("marker", json::array())) {
      MarkerFrameSpec spec;
      spec.id = frame_id_from_string(js.at("id").get<std::string>());
      spec.body = js.at("body").get<std::string>();
      spec.origin_label = js.at("origin").get<std::string>();
      spec.z_label = js.at("z_to").get<std::string>();
      if (js.contains("y_pair")) {
        spec.y_pair = {js.at("y_pair")[0].get<std::string>(), js.at("y_pair")[1].get<std::string>()};
      } else if (js.contains("y_hint")) {
        spec.y_hint = vec3_from_json(js.at("y_hint"), "y hint");
      }
      config.marker_frames.push_back(std::move(spec));
    }
    for (const json& js : jf.value("condyle", json::array())) {
      CondyleFrameSpec spec;
      spec.id = frame_id_from_string(js.at("id").get<std::string>());
      spec.b = point_id_from_string(js.at("b").get<std::string>());
      spec.k = point_id_from_string(js.at("k").get<std::string>());
      spec.c = point_id_from_string(js.at("c").get<std::string>());
      config.condyle_frames.push_back(spec);
    }
    for (const json& js : jf.value("axis", json::array())) {
      AxisFrameSpec spec;
      spec.id = frame_id_from_string(js.at("id").get<std::string>());
      spec.origin = point_id_from_string(js.at("origin").get<std::string>());
      spec.z_to = point_id_from_string(js.at("z_to").get<std::string>());
      spec.y_hint_frame = frame_id_from_string(js.at("y_hint_frame").get<std::string>());
      config.axis_frames.push_back(spec);
    }

    const json& jl = j.at("landmarks");
    std::vector<LandmarkTable::Entry> entries;
    for (const json& je : jl.at("entries")) {
      entries.push_back({point_id_from_string(je.at("point").get<std::string>()),
                         frame_id_from_string(je.at("frame").get<std::string>()),
                         vec3_from_json(je.at("local_mm"), "landmark local vector")});
    }
    config.landmarks = LandmarkTable(std::move(entries), jl.value("provenance", std::string()),
                                     jl.value("accuracy_mm", kCtSigmaMm));

    for (const json& jr : j.value("routes", json::array())) {
      NamedRoute route;
      route.name = jr.at("name").get<std::string>();
      route.point = point_id_from_string(jr.at("point").get<std::string>());
      for (const json& jc : jr.at("chain")) {
        route.chain.push_back(frame_id_from_string(jc.get<std::string>()));
      }
      config.routes.push_back(std::move(route));
    }

    config.fit_reject_rms_mm = j.value("fit_reject_rms_mm", kFitRejectRmsMm);
  } catch (const json::exception& e) {
    throw InvalidParamsError(std::string("config JSON: ") + e.what());
  }

  config.validate();
  return config;
}

std::string config_to_json(const SessionConfig& config) {
  json j;
  j["fit_reject_rms_mm"] = config.fit_reject_rms_mm;

  j["bodies"] = json::array();
  for (const RigidBodyDef& body : config.bodies) {
    json jb;
    jb["id"] = body.id;
    jb["markers"] = json::array();
    for (const MarkerRef& m : body.markers) {
      jb["markers"].push_back({{"label", m.label}, {"ref_mm", vec3_to_json(m.reference)}});
    }
    j["bodies"].push_back(std::move(jb));
  }

  json jf;
  jf["marker"] = json::array();
  for (const MarkerFrameSpec& spec : config.marker_frames) {
    json js;
    js["id"] = to_string(spec.id);
    js["body"] = spec.body;
    js["origin"] = spec.origin_label;
    js["z_to"] = spec.z_label;
    if (spec.y_pair.has_value()) {
      js["y_pair"] = json::array({spec.y_pair->first, spec.y_pair->second});
    } else {
      js["y_hint"] = vec3_to_json(spec.y_hint);
    }
    jf["marker"].push_back(std::move(js));
  }
  jf["condyle"] = json::array();
  for (const CondyleFrameSpec& spec : config.condyle_frames) {
    jf["condyle"].push_back({{"id", to_string(spec.id)},
                             {"b", to_string(spec.b)},
                             {"k", to_string(spec.k)},
                             {"c", to_string(spec.c)}});
  }
  jf["axis"] = json::array();
  for (const AxisFrameSpec& spec : config.axis_frames) {
    jf["axis"].push_back({{"id", to_string(spec.id)},
                          {"origin", to_string(spec.origin)},
                          {"z_to", to_string(spec.z_to)},
                          {"y_hint_frame", to_string(spec.y_hint_frame)}});
  }
  j["frames"] = std::move(jf);

  json jl;
  jl["provenance"] = config.landmarks.provenance();
  jl["accuracy_mm"] = config.landmarks.accuracy_mm();
  jl["entries"] = json::array();
  for (const LandmarkTable::Entry& e : config.landmarks.entries()) {
    jl["entries"].push_back({{"point", to_string(e.point)},
                             {"frame", to_string(e.frame)},
                             {"local_mm", vec3_to_json(e.local)}});
  }
  j["landmarks"] = std::move(jl);

  j["routes"] = json::array();
  for (const NamedRoute& route : config.routes) {
    json jr;
    jr["name"] = route.name;
    jr["point"] = to_string(route.point);
    jr["chain"] = json::array();
    for (FrameId f : route.chain) {
      jr["chain"].push_back(to_string(f));
    }
    j["routes"].push_back(std::move(jr));
  }

  return j.dump(2) + "\n";
}

SessionConfig load_config(const std::string& path) { return config_from_json(load_text(path)); }

void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw InvalidParamsError("cannot open '" + path + "' for writing");
  }
  out << text;
}

std::string load_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InvalidParamsError("cannot open '" + path + "' for reading");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace legtrack
