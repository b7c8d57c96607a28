#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "legtrack/frames.hpp"
#include "legtrack/pipeline.hpp"
#include "legtrack/simulate.hpp"
#include "legtrack/stream_io.hpp"

namespace py = pybind11;
using namespace legtrack;

namespace {

py::dict angles_dict(const LegAngles& a) {
  py::dict d;
  d["hip_flexion_deg"] = a.hip_flexion_deg;
  d["hip_varus_deg"] = a.hip_varus_deg;
  d["hip_roll_deg"] = a.hip_roll_deg;
  d["knee_flexion_deg"] = a.knee_flexion_deg;
  d["knee_varus_deg"] = a.knee_varus_deg;
  d["knee_ie_deg"] = a.knee_ie_deg;
  return d;
}

py::dict translation_dict(const KneeTranslation& t) {
  py::dict d;
  d["medial_lateral_mm"] = t.medial_lateral_mm;
  d["posterior_anterior_mm"] = t.posterior_anterior_mm;
  d["gap_mm"] = t.gap_mm;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Skeletal tracking toolkit: rigid-body poses, anatomical points and leg angles "
            "from labelled optical marker streams.";

  py::register_exception<Error>(m, "LegtrackError");

  py::class_<Transform>(m, "Transform")
      .def(py::init<>())
      .def(py::init<const RotMat3&, const Vec3&>(), py::arg("rotation"), py::arg("translation"))
      .def_static("identity", &Transform::identity)
      .def_static("from_translation", &Transform::from_translation)
      .def_property_readonly("rotation", &Transform::rotation)
      .def_property_readonly("translation", &Transform::translation)
      .def("matrix", &Transform::matrix)
      .def("__mul__", [](const Transform& a, const Transform& b) { return compose(a, b); })
      .def("__repr__", [](const Transform& t) {
        return "<legtrack.Transform t=(" + format_number(t.translation().x()) + ", " +
               format_number(t.translation().y()) + ", " + format_number(t.translation().z()) +
               ") mm>";
      });

  m.def("compose", &compose, py::arg("a"), py::arg("b"));
  m.def("invert", &invert, py::arg("t"));
  m.def("apply", &apply, py::arg("t"), py::arg("p"));

  m.def(
      "frame_from_marker_pair",
      [](const Vec3& h, const Vec3& g, const Vec3& y_hint) {
        return frame_from_marker_pair(h, g, UnitVec3::normalized(y_hint));
      },
      py::arg("h"), py::arg("g"), py::arg("y_hint") = Vec3(0, 1, 0));
  m.def("condyle_frame", &condyle_frame, py::arg("b"), py::arg("k"), py::arg("c"));

  py::class_<RigidBodyDef>(m, "RigidBodyDef")
      .def(py::init([](const std::string& id,
                       const std::vector<std::pair<std::string, Vec3>>& markers) {
             RigidBodyDef def;
             def.id = id;
             for (const auto& [label, ref] : markers) def.markers.push_back({label, ref});
             def.validate();
             return def;
           }),
           py::arg("id"), py::arg("markers"))
      .def_readonly("id", &RigidBodyDef::id)
      .def("marker_labels", [](const RigidBodyDef& def) {
        std::vector<std::string> labels;
        for (const auto& m : def.markers) labels.push_back(m.label);
        return labels;
      });

  py::class_<PoseFit>(m, "PoseFit")
      .def_readonly("body_id", &PoseFit::body_id)
      .def_readonly("pose", &PoseFit::pose)
      .def_readonly("rms_residual_mm", &PoseFit::rms_residual_mm)
      .def_readonly("used_marker_count", &PoseFit::used_marker_count);

  m.def(
      "fit_pose",
      [](const RigidBodyDef& def,
         const std::vector<std::tuple<std::string, Vec3, bool>>& observations,
         double reject_rms_mm) {
        MarkerFrameSample sample;
        for (const auto& [label, position, visible] : observations) {
          sample.observations.push_back({label, def.id, position, visible});
        }
        return fit_pose(def, sample, reject_rms_mm);
      },
      py::arg("body"), py::arg("observations"), py::arg("reject_rms_mm") = kFitRejectRmsMm,
      "Least-squares body pose from (label, position_mm, visible) observations.");

  m.def("reconstruct_markers", &reconstruct_markers, py::arg("body"), py::arg("fit"));

  py::class_<SessionConfig>(m, "SessionConfig")
      .def_static("from_json", &config_from_json, py::arg("text"))
      .def("to_json", [](const SessionConfig& c) { return config_to_json(c); })
      .def("validate", &SessionConfig::validate);

  py::class_<JointCommand>(m, "JointCommand")
      .def(py::init([](double hip_flexion_deg, double hip_varus_deg, double hip_roll_deg,
                       double knee_flexion_deg, double knee_varus_deg, double knee_ie_deg,
                       const Vec3& knee_translation_mm) {
             JointCommand c;
             c.hip_flexion_deg = hip_flexion_deg;
             c.hip_varus_deg = hip_varus_deg;
             c.hip_roll_deg = hip_roll_deg;
             c.knee_flexion_deg = knee_flexion_deg;
             c.knee_varus_deg = knee_varus_deg;
             c.knee_ie_deg = knee_ie_deg;
             c.knee_translation_mm = knee_translation_mm;
             return c;
           }),
           py::arg("hip_flexion_deg") = 0.0, py::arg("hip_varus_deg") = 0.0,
           py::arg("hip_roll_deg") = 0.0, py::arg("knee_flexion_deg") = 0.0,
           py::arg("knee_varus_deg") = 0.0, py::arg("knee_ie_deg") = 0.0,
           py::arg("knee_translation_mm") = Vec3::Zero());

  py::class_<SyntheticSession>(m, "SyntheticSession")
      .def_property_readonly("config", [](const SyntheticSession& s) { return s.config; })
      .def_property_readonly("stream_csv",
                             [](const SyntheticSession& s) { return emit_marker_stream(s.stream); })
      .def_property_readonly("sample_count",
                             [](const SyntheticSession& s) { return s.stream.size(); })
      .def("truth_angles_at", [](const SyntheticSession& s, double t) {
        return angles_dict(ground_truth_at(s.truth, t).angles);
      });

  m.def(
      "simulate",
      [](double duration_s, double rate_hz, const std::string& script, double marker_sigma_mm,
         double landmark_sigma_mm, double occlusion_probability,
         const std::map<std::string, double>& occlusion_overrides, std::uint64_t seed) {
        MotionScript motion;
        if (script == "default") {
          motion = default_sweep_script(duration_s, rate_hz);
        } else if (script == "full_range") {
          motion = full_range_sweep_script(duration_s, rate_hz);
        } else if (script == "rest") {
          motion = MotionScript::constant(JointCommand{}, duration_s, rate_hz);
        } else {
          throw InvalidParamsError("unknown script name '" + script + "'");
        }
        NoiseSpec noise;
        noise.marker_sigma_mm = marker_sigma_mm;
        noise.landmark_sigma_mm = landmark_sigma_mm;
        noise.occlusion_probability = occlusion_probability;
        noise.occlusion_overrides = occlusion_overrides;
        noise.seed = seed;
        return synthesize(LegModelParams::defaults(), motion, noise);
      },
      py::arg("duration_s") = 10.0, py::arg("rate_hz") = 100.0, py::arg("script") = "default",
      py::arg("marker_sigma_mm") = 0.0, py::arg("landmark_sigma_mm") = 0.0,
      py::arg("occlusion_probability") = 0.0,
      py::arg("occlusion_overrides") = std::map<std::string, double>{},
      py::arg("seed") = std::uint64_t{0},
      "Synthesize a marker stream from the default leg model.");

  m.def("parse_marker_stream_count", [](const std::string& text) {
    return parse_marker_stream(text).size();
  });

  m.def(
      "run_pipeline",
      [](const SessionConfig& config, const std::string& stream_csv) {
        const PipelineResult result = run_pipeline(config, parse_marker_stream(stream_csv));
        py::list rows;
        for (const AngleReportRow& row : result.rows) {
          py::dict d;
          d["t"] = row.t;
          d["angles"] = row.angles ? py::object(angles_dict(*row.angles)) : py::none();
          d["knee_translation"] =
              row.translation ? py::object(translation_dict(*row.translation)) : py::none();
          d["rms_mm"] = row.body_rms_mm;
          py::list flags;
          for (const SampleFlag& flag : row.flags) {
            flags.append(py::make_tuple(flag.subject, error_code_name(flag.code)));
          }
          d["flags"] = flags;
          rows.append(d);
        }
        py::list consistency;
        for (const ConsistencyRow& row : result.consistency) {
          py::dict d;
          d["t"] = row.t;
          d["error_mm"] = row.error_mm;
          consistency.append(d);
        }
        py::dict summary;
        summary["sample_count"] = result.summary.sample_count;
        summary["dropout_count"] = result.summary.dropout_count;
        summary["mean_error_mm"] = result.summary.mean_error_mm;
        summary["max_error_mm"] = result.summary.max_error_mm;
        py::dict out;
        out["rows"] = rows;
        out["consistency"] = consistency;
        out["summary"] = summary;
        out["angle_report_csv"] = angle_report_csv(result, config);
        return out;
      },
      py::arg("config"), py::arg("stream_csv"),
      "Run the full angle and consistency pipeline over a marker stream.");

  m.attr("OPTICAL_SIGMA_MM") = kOpticalSigmaMm;
  m.attr("CT_SIGMA_MM") = kCtSigmaMm;
  m.attr("FIT_REJECT_RMS_MM") = kFitRejectRmsMm;
}
