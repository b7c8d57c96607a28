#include <cmath>

#include "doctest.h"

#include "legtrack/kinematics.hpp"
#include "legtrack/pipeline.hpp"
#include "legtrack/simulate.hpp"
#include "support/test_utils.hpp"

using namespace legtrack;
using legtrack::testing::Rng;

namespace {

SnapshotResult track_one(const SyntheticSession& session, size_t index = 0) {
  return build_snapshot(session.config, session.stream.at(index));
}

SyntheticSession simulate_pose(const JointCommand& command) {
  return synthesize(LegModelParams::defaults(), MotionScript::constant(command, 0.02, 50.0),
                    NoiseSpec{});
}

}  // namespace

TEST_CASE("projected_angle basics") {
  CHECK(projected_angle(Vec3(1, 0, 1), Plane::ZX) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(projected_angle(Vec3(0, 1, 1), Plane::ZX) == doctest::Approx(45.0).epsilon(1e-9));
  CHECK(projected_angle(Vec3(3, 0, 4), Plane::ZX) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(projected_angle_signed(Vec3(0, -1, 1), Plane::ZX) == doctest::Approx(-45.0));
  CHECK_THROWS_AS(projected_angle(Vec3(0, 1, 0), Plane::ZX), DegenerateProjectionError);
}

TEST_CASE("projected_angle matches the arccos oracle") {
  Rng rng(307);
  int checked = 0;
  while (checked < 10000) {
    const Vec3 v = testing::random_vec(rng, 10.0);
    if (v.norm() < 1e-3) continue;
    for (Plane plane : {Plane::XY, Plane::YZ, Plane::ZX}) {
      Vec3 proj = v;
      proj[plane == Plane::XY ? 2 : plane == Plane::YZ ? 0 : 1] = 0.0;
      if (proj.norm() <= 1e-6 * v.norm()) continue;
      const double expected = deg_from_rad(std::acos(
          std::clamp(proj.dot(v) / (proj.norm() * v.norm()), -1.0, 1.0)));
      CHECK(projected_angle(v, plane) == doctest::Approx(expected).epsilon(1e-9));
    }
    ++checked;
  }
}

TEST_CASE("atan2 magnitude equals arccos away from the poles") {
  Rng rng(311);
  for (int i = 0; i < 100000; ++i) {
    const Vec3 a = testing::random_vec(rng, 5.0);
    const Vec3 b = testing::random_vec(rng, 5.0);
    if (a.norm() < 1e-3 || b.norm() < 1e-3) continue;
    const double cos_val = std::clamp(a.dot(b) / (a.norm() * b.norm()), -1.0, 1.0);
    if (std::abs(cos_val) > 1.0 - 1e-6) continue;
    const double via_atan2 = deg_from_rad(std::atan2(a.cross(b).norm(), a.dot(b)));
    const double via_acos = deg_from_rad(std::acos(cos_val));
    CHECK(via_atan2 == doctest::Approx(via_acos).epsilon(1e-9));
  }
}

TEST_CASE("femur vector from a hand-built scene") {
  LandmarkTable table;
  table.add(PointId::B, FrameId::H, Vec3(0, 0, 0));
  table.add(PointId::C, FrameId::H, Vec3(0, 0, -420));
  SceneSnapshot snap(0.0);
  snap.set_frame(FrameId::H, Transform::identity());
  CHECK((femur_vector(snap, table) - Vec3(0, 0, -420)).norm() == 0.0);
}

TEST_CASE("femur vector follows the simulated mechanical axis") {
  const auto session = simulate_pose(JointCommand{});
  const SnapshotResult snap = track_one(session);
  const Vec3 v = femur_vector(snap.snapshot, session.config.landmarks);
  const Vec3 axis(0, 0, -1);  // straight supine leg points distal
  CHECK(v.normalized().cross(axis).norm() < 1e-9);

  // World and condyle-frame expressions differ by the frame rotation only.
  const Vec3 in_c = femur_vector(snap.snapshot, session.config.landmarks, FrameId::C);
  const RotMat3 r = snap.snapshot.frame(FrameId::C).rotation();
  CHECK((r * in_c - v).norm() < 1e-9);
}

TEST_CASE("tibia vector at rest runs distally along the condyle z axis") {
  const auto session = simulate_pose(JointCommand{});
  const SnapshotResult snap = track_one(session);
  const Vec3 v = tibia_vector(snap.snapshot, session.config.landmarks);
  const double l = LegModelParams::defaults().tibia_length_mm;
  CHECK((v - Vec3(0, 0, l)).norm() < 1e-9);
}

TEST_CASE("tibia vector flags degenerate landmark data") {
  LandmarkTable table;
  table.add(PointId::E, FrameId::M, Vec3(0, 0, 0));
  SceneSnapshot snap(0.0);
  snap.set_frame(FrameId::M, Transform::identity());
  snap.set_frame(FrameId::C, Transform::identity());  // E lands on the condyle origin
  CHECK_THROWS_AS(tibia_vector(snap, table), InvalidBoneVectorError);
}

TEST_CASE("pure knee flexion keeps the tibia vector in the sagittal plane of C") {
  JointCommand cmd;
  cmd.knee_flexion_deg = 90.0;
  const auto session = simulate_pose(cmd);
  const SnapshotResult snap = track_one(session);
  const Vec3 v = tibia_vector(snap.snapshot, session.config.landmarks);
  CHECK(std::abs(v.x()) < 1e-9);  // no coronal component under pure flexion
  const LegAngles angles = leg_angles(snap.snapshot, session.config.landmarks);
  CHECK(angles.knee_flexion_deg == doctest::Approx(90.0).epsilon(1e-9));
}

TEST_CASE("knee angles recover commanded rotations") {
  {
    const auto session = simulate_pose(JointCommand{});
    const SnapshotResult snap = track_one(session);
    const LegAngles a = leg_angles(snap.snapshot, session.config.landmarks);
    CHECK(std::abs(a.knee_flexion_deg) < 1e-6);
    CHECK(std::abs(a.knee_varus_deg) < 1e-6);
    CHECK(std::abs(a.knee_ie_deg) < 1e-6);
  }
  {
    JointCommand cmd;
    cmd.knee_flexion_deg = 30.0;
    const auto session = simulate_pose(cmd);
    const LegAngles a = leg_angles(track_one(session).snapshot, session.config.landmarks);
    CHECK(a.knee_flexion_deg == doctest::Approx(30.0).epsilon(1e-4));
    CHECK(std::abs(a.knee_varus_deg) < 0.01);
    CHECK(std::abs(a.knee_ie_deg) < 0.01);
  }
  {
    JointCommand cmd;
    cmd.knee_flexion_deg = 45.0;
    cmd.knee_varus_deg = 5.0;
    const auto session = simulate_pose(cmd);
    const LegAngles a = leg_angles(track_one(session).snapshot, session.config.landmarks);
    CHECK(a.knee_varus_deg == doctest::Approx(5.0).epsilon(1e-4));
    CHECK(a.knee_flexion_deg == doctest::Approx(45.0).epsilon(1e-4));
  }
  {
    JointCommand cmd;
    cmd.knee_flexion_deg = 60.0;
    cmd.knee_varus_deg = -4.0;
    cmd.knee_ie_deg = 12.0;
    const auto session = simulate_pose(cmd);
    const LegAngles a = leg_angles(track_one(session).snapshot, session.config.landmarks);
    CHECK(a.knee_ie_deg == doctest::Approx(12.0).epsilon(1e-4));
  }
}

TEST_CASE("hip angles recover commanded rotations") {
  {
    const auto session = simulate_pose(JointCommand{});
    const LegAngles a = leg_angles(track_one(session).snapshot, session.config.landmarks);
    CHECK(std::abs(a.hip_flexion_deg) < 1e-6);
    CHECK(std::abs(a.hip_varus_deg) < 1e-6);
    CHECK(std::abs(a.hip_roll_deg) < 1e-6);
  }
  for (double target : {5.0, 15.0, 30.0, 45.0}) {
    JointCommand cmd;
    cmd.hip_flexion_deg = target;
    const auto session = simulate_pose(cmd);
    const LegAngles a = leg_angles(track_one(session).snapshot, session.config.landmarks);
    CHECK(a.hip_flexion_deg == doctest::Approx(target).epsilon(1e-6));
  }
  {
    JointCommand cmd;
    cmd.hip_flexion_deg = 40.0;
    cmd.hip_varus_deg = -12.0;
    cmd.hip_roll_deg = 7.0;
    const auto session = simulate_pose(cmd);
    const LegAngles a = leg_angles(track_one(session).snapshot, session.config.landmarks);
    CHECK(a.hip_flexion_deg == doctest::Approx(40.0).epsilon(1e-5));
    CHECK(a.hip_varus_deg == doctest::Approx(-12.0).epsilon(1e-5));
    CHECK(a.hip_roll_deg == doctest::Approx(7.0).epsilon(1e-5));
  }
}

TEST_CASE("a global yaw changes hip roll but not flexion of a y-aligned femur") {
  JointCommand cmd;
  cmd.hip_flexion_deg = 90.0;  // femur vector along world +Y
  const auto session = simulate_pose(cmd);
  const SnapshotResult snap = track_one(session);
  const LegAngles before = leg_angles(snap.snapshot, session.config.landmarks);

  const double yaw = 25.0;
  const Transform g(Eigen::AngleAxisd(rad_from_deg(yaw), Vec3::UnitY()).toRotationMatrix(),
                    Vec3::Zero());
  SceneSnapshot moved(snap.snapshot.t());
  for (FrameId id : {FrameId::H, FrameId::M, FrameId::S, FrameId::C, FrameId::D}) {
    moved.set_frame(id, compose(g, snap.snapshot.frame(id)));
  }
  const LegAngles after = leg_angles(moved, session.config.landmarks);
  CHECK(after.hip_flexion_deg == doctest::Approx(before.hip_flexion_deg).epsilon(1e-9));
  CHECK(after.hip_varus_deg == doctest::Approx(before.hip_varus_deg).epsilon(1e-9));
  CHECK(std::abs(std::abs(after.hip_roll_deg - before.hip_roll_deg) - yaw) < 1e-9);
}

TEST_CASE("knee angles are invariant under any global rigid motion") {
  Rng rng(313);
  JointCommand cmd;
  cmd.hip_flexion_deg = 25.0;
  cmd.knee_flexion_deg = 40.0;
  cmd.knee_varus_deg = 6.0;
  cmd.knee_ie_deg = -9.0;
  const auto session = simulate_pose(cmd);
  const SnapshotResult snap = track_one(session);
  const LegAngles before = leg_angles(snap.snapshot, session.config.landmarks);

  for (int i = 0; i < 1000; ++i) {
    const Transform g = testing::random_transform(rng);
    SceneSnapshot moved(snap.snapshot.t());
    for (FrameId id : {FrameId::H, FrameId::M, FrameId::S, FrameId::C, FrameId::D}) {
      moved.set_frame(id, compose(g, snap.snapshot.frame(id)));
    }
    const LegAngles after = leg_angles(moved, session.config.landmarks);
    CHECK(after.knee_flexion_deg == doctest::Approx(before.knee_flexion_deg).epsilon(1e-9));
    CHECK(after.knee_varus_deg == doctest::Approx(before.knee_varus_deg).epsilon(1e-9));
    CHECK(after.knee_ie_deg == doctest::Approx(before.knee_ie_deg).epsilon(1e-9));
  }
}

TEST_CASE("hip flexion and varus are invariant under global translation") {
  Rng rng(317);
  JointCommand cmd;
  cmd.hip_flexion_deg = 33.0;
  cmd.hip_varus_deg = 8.0;
  const auto session = simulate_pose(cmd);
  const SnapshotResult snap = track_one(session);
  const LegAngles before = leg_angles(snap.snapshot, session.config.landmarks);
  for (int i = 0; i < 1000; ++i) {
    const Transform g = Transform::from_translation(testing::random_vec(rng, 2000.0));
    SceneSnapshot moved(snap.snapshot.t());
    for (FrameId id : {FrameId::H, FrameId::M, FrameId::S, FrameId::C, FrameId::D}) {
      moved.set_frame(id, compose(g, snap.snapshot.frame(id)));
    }
    const LegAngles after = leg_angles(moved, session.config.landmarks);
    CHECK(after.hip_flexion_deg == doctest::Approx(before.hip_flexion_deg).epsilon(1e-9));
    CHECK(after.hip_varus_deg == doctest::Approx(before.hip_varus_deg).epsilon(1e-9));
  }
}

TEST_CASE("sign conventions against the simulated leg") {
  // Positive flexion rotates the distal segment anteriorly (+Y world).
  JointCommand flex;
  flex.hip_flexion_deg = 30.0;
  const auto hip_session = simulate_pose(flex);
  const auto rest_session = simulate_pose(JointCommand{});
  const Vec3 knee_flexed =
      point_in_world(track_one(hip_session).snapshot, hip_session.config.landmarks, PointId::C);
  const Vec3 knee_rest =
      point_in_world(track_one(rest_session).snapshot, rest_session.config.landmarks, PointId::C);
  CHECK(knee_flexed.y() > knee_rest.y());

  // Positive varus moves the distal end toward the midline, -X world for
  // the left-leg model.
  JointCommand varus;
  varus.knee_flexion_deg = 20.0;
  varus.knee_varus_deg = 10.0;
  const auto knee_session = simulate_pose(varus);
  const Vec3 ankle =
      point_in_world(track_one(knee_session).snapshot, knee_session.config.landmarks, PointId::E);
  JointCommand no_varus = varus;
  no_varus.knee_varus_deg = 0.0;
  const auto base_session = simulate_pose(no_varus);
  const Vec3 ankle_base =
      point_in_world(track_one(base_session).snapshot, base_session.config.landmarks, PointId::E);
  CHECK(ankle.x() < ankle_base.x());
}

TEST_CASE("knee translations") {
  {
    const auto session = simulate_pose(JointCommand{});  // D rests on C
    const KneeTranslation kt =
        knee_translation(track_one(session).snapshot, session.config.landmarks);
    CHECK(std::abs(kt.medial_lateral_mm) < 1e-9);
    CHECK(std::abs(kt.posterior_anterior_mm) < 1e-9);
    CHECK(std::abs(kt.gap_mm) < 1e-9);
    CHECK(kt.gap_plausible());
  }
  {
    JointCommand cmd;
    cmd.knee_translation_mm = Vec3(0, 0, 6.0);  // distraction along the axis
    const auto session = simulate_pose(cmd);
    const KneeTranslation kt =
        knee_translation(track_one(session).snapshot, session.config.landmarks);
    CHECK(kt.gap_mm == doctest::Approx(6.0).epsilon(1e-6));
  }
  {
    JointCommand cmd;
    cmd.knee_flexion_deg = 15.0;
    cmd.knee_translation_mm = Vec3(0, 3.0, 0);  // anterior drawer
    const auto session = simulate_pose(cmd);
    const KneeTranslation kt =
        knee_translation(track_one(session).snapshot, session.config.landmarks);
    CHECK(kt.posterior_anterior_mm == doctest::Approx(3.0).epsilon(1e-6));
  }
}
