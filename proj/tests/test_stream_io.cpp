#include <string>

#include "doctest.h"

#include "legtrack/simulate.hpp"
#include "legtrack/stream_io.hpp"
#include "support/paper_fixture.hpp"

using namespace legtrack;

namespace {

constexpr const char* kHeader = "time_s,body,label,x_mm,y_mm,z_mm,visible\n";

std::string data_path(const std::string& name) {
  return std::string(LEGTRACK_TEST_DATA_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("canonical number formatting") {
  CHECK(format_number(1221.7) == "1221.7");
  CHECK(format_number(0.7804) == "0.7804");
  CHECK(format_number(1323.0) == "1323");
  CHECK(format_number(162.5) == "162.5");
  CHECK(format_number(-0.725) == "-0.725");
}

TEST_CASE("parse: empty body after the header gives an empty stream") {
  CHECK(parse_marker_stream(std::string(kHeader)).empty());
}

TEST_CASE("parse: a single well-formed row") {
  const auto stream = parse_marker_stream(std::string(kHeader) + "0.01,femur,H,1,2.5,-3,1\n");
  REQUIRE(stream.size() == 1);
  REQUIRE(stream[0].observations.size() == 1);
  CHECK(stream[0].t == doctest::Approx(0.01));
  const MarkerObservation& obs = stream[0].observations[0];
  CHECK(obs.body == "femur");
  CHECK(obs.label == "H");
  CHECK((obs.position - Vec3(1, 2.5, -3)).norm() == 0.0);
  CHECK(obs.visible);
}

TEST_CASE("parse: rows sharing a time form one sample") {
  const auto stream = parse_marker_stream(std::string(kHeader) +
                                          "0.5,femur,H,0,0,0,1\n"
                                          "0.5,femur,G,0,0,100,1\n"
                                          "0.6,femur,H,0,0,1,1\n");
  REQUIRE(stream.size() == 2);
  CHECK(stream[0].observations.size() == 2);
  CHECK(stream[1].observations.size() == 1);
}

TEST_CASE("parse: time regression names both timestamps") {
  try {
    parse_marker_stream(std::string(kHeader) + "1.5,f,A,0,0,0,1\n0.5,f,A,0,0,0,1\n");
    FAIL("expected NonMonotonicTime");
  } catch (const NonMonotonicTimeError& e) {
    CHECK(e.previous_s == doctest::Approx(1.5));
    CHECK(e.current_s == doctest::Approx(0.5));
    CHECK(std::string(e.what()).find("1.5") != std::string::npos);
    CHECK(std::string(e.what()).find("0.5") != std::string::npos);
  }
}

TEST_CASE("parse: malformed rows carry line and column") {
  try {
    parse_marker_stream(std::string(kHeader) + "0,f,A,0,0,0,1\n0.1,f,A,zero,0,0,1\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 3);
    CHECK(e.column == 4);
  }
  CHECK_THROWS_AS(parse_marker_stream(std::string(kHeader) + "0,f,A,0,0,0\n"), ParseError);
  CHECK_THROWS_AS(parse_marker_stream(std::string(kHeader) + "0,f,A,0,0,0,2\n"), ParseError);
  CHECK_THROWS_AS(parse_marker_stream(std::string(kHeader) + "-1,f,A,0,0,0,1\n"), ParseError);
  CHECK_THROWS_AS(
      parse_marker_stream(std::string(kHeader) + "0,f,A,0,0,0,1\n0,f,A,1,1,1,1\n"),
      ParseError);  // duplicate label within one sample
  CHECK_THROWS_AS(parse_marker_stream(std::string("wrong,header\n")), ParseError);
  CHECK_THROWS_AS(parse_marker_stream(std::string("")), ParseError);
}

TEST_CASE("stream round-trip is byte stable") {
  NoiseSpec noise;
  noise.marker_sigma_mm = 0.03;
  noise.occlusion_probability = 0.2;
  noise.seed = 99;
  const auto session =
      synthesize(LegModelParams::defaults(), default_sweep_script(0.5, 50.0), noise);
  const std::string once = emit_marker_stream(session.stream);
  const std::string twice = emit_marker_stream(parse_marker_stream(once));
  CHECK(once == twice);

  // Occluded markers survive the trip as invisible zero rows.
  bool saw_occluded = false;
  for (const MarkerFrameSample& sample : parse_marker_stream(once)) {
    for (const MarkerObservation& obs : sample.observations) {
      if (!obs.visible) {
        saw_occluded = true;
        CHECK(obs.position.norm() == 0.0);
      }
    }
  }
  CHECK(saw_occluded);
}

TEST_CASE("session config JSON round-trips") {
  const testing::PaperFixture fx = testing::make_paper_fixture();
  const std::string once = config_to_json(fx.config);
  const SessionConfig parsed = config_from_json(once);
  CHECK(config_to_json(parsed) == once);
  CHECK(parsed.bodies.size() == fx.config.bodies.size());
  CHECK(parsed.routes.size() == fx.config.routes.size());
  CHECK(parsed.landmarks.entries().size() == fx.config.landmarks.entries().size());
  CHECK(parsed.landmarks.accuracy_mm() == fx.config.landmarks.accuracy_mm());
}

TEST_CASE("config JSON rejects broken documents") {
  CHECK_THROWS_AS(config_from_json("{not json"), InvalidParamsError);
  CHECK_THROWS_AS(config_from_json("{}"), InvalidParamsError);
  // Route referencing a frame with no landmark measurement for the point.
  const testing::PaperFixture fx = testing::make_paper_fixture();
  SessionConfig broken = fx.config;
  broken.routes.push_back({"bad", PointId::B, {FrameId::M}});
  CHECK_THROWS_AS(broken.validate(), InvalidParamsError);
}

TEST_CASE("bundled fixture files match the in-memory fixture") {
  const testing::PaperFixture fx = testing::make_paper_fixture();
  CHECK(load_text(data_path("paper_stream.csv")) == emit_marker_stream(fx.stream));
  CHECK(load_text(data_path("paper_session.json")) == config_to_json(fx.config));

  // And they parse straight back into a runnable session.
  const auto stream = parse_marker_stream(load_text(data_path("paper_stream.csv")));
  REQUIRE(stream.size() == fx.stream.size());
  for (size_t i = 0; i < stream.size(); ++i) {
    CHECK(stream[i].t == doctest::Approx(fx.times_s[i]).epsilon(1e-12));
  }
  CHECK_NOTHROW(load_config(data_path("paper_session.json")));
}
