#include "doctest.h"

#include "legtrack/geometry.hpp"
#include "support/test_utils.hpp"

using namespace legtrack;
using legtrack::testing::Rng;

namespace {

double max_abs_diff(const Transform& a, const Transform& b) {
  const double rot = (a.rotation() - b.rotation()).cwiseAbs().maxCoeff();
  const double tr = (a.translation() - b.translation()).cwiseAbs().maxCoeff();
  return std::max(rot, tr);
}

}  // namespace

TEST_CASE("compose: identity and inverse cases") {
  Rng rng(42);
  const Transform t = testing::random_transform(rng);
  CHECK(max_abs_diff(compose(Transform::identity(), t), t) == doctest::Approx(0.0));
  CHECK(max_abs_diff(compose(t, Transform::identity()), t) == doctest::Approx(0.0));
  CHECK(max_abs_diff(compose(t, invert(t)), Transform::identity()) < 1e-9);
  CHECK(max_abs_diff(compose(invert(t), t), Transform::identity()) < 1e-9);
}

TEST_CASE("compose matches the homogeneous 4x4 product") {
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    const Transform a = testing::random_transform(rng);
    const Transform b = testing::random_transform(rng);
    const Mat4 expected = testing::oracle_mat4(a) * testing::oracle_mat4(b);
    const Mat4 got = compose(a, b).matrix();
    CHECK((expected - got).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("invert: identity, involution, 4x4 oracle") {
  CHECK(max_abs_diff(invert(Transform::identity()), Transform::identity()) == 0.0);
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    // 1e-12 absolute is meaningful at a ~100 mm translation scale; beyond
    // that the translation roundoff grows with the magnitude.
    const Transform t = testing::random_transform(rng, 100.0);
    CHECK(max_abs_diff(invert(invert(t)), t) < 1e-12);
    const Transform big = testing::random_transform(rng, 1000.0);
    CHECK(max_abs_diff(invert(invert(big)), big) < 1e-11);
    const Mat4 expected = testing::oracle_mat4(big).inverse();
    CHECK((expected - invert(big).matrix()).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("apply: identity, pure translation, homogeneous oracle") {
  Rng rng(13);
  const Vec3 p = testing::random_vec(rng, 100.0);
  CHECK((apply(Transform::identity(), p) - p).norm() == 0.0);

  const Vec3 d(4.0, -5.0, 6.0);
  CHECK((apply(Transform::from_translation(d), Vec3::Zero()) - d).norm() == 0.0);

  for (int i = 0; i < 1000; ++i) {
    const Transform t = testing::random_transform(rng);
    const Vec3 q = testing::random_vec(rng, 1e4);
    const Vec3 expected = testing::oracle_apply(testing::oracle_mat4(t), q);
    CHECK((apply(t, q) - expected).norm() < 1e-9);
  }
}

TEST_CASE("apply distributes over compose") {
  Rng rng(17);
  for (int i = 0; i < 1000; ++i) {
    const Transform a = testing::random_transform(rng);
    const Transform b = testing::random_transform(rng);
    const Vec3 p = testing::random_vec(rng, 1e4);
    CHECK((apply(compose(a, b), p) - apply(a, apply(b, p))).norm() < 1e-9);
  }
}

TEST_CASE("rotations stay orthonormal under long compose chains") {
  Rng rng(19);
  Transform chain = Transform::identity();
  for (int i = 0; i < 10000; ++i) {
    chain = compose(chain, testing::random_transform(rng, 10.0));
    if (i % 1000 == 0) {
      CHECK(rotation_drift(chain.rotation()) < 1e-9);
      CHECK(chain.rotation().determinant() == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
  CHECK(rotation_drift(chain.rotation()) < 1e-9);
}

TEST_CASE("distance preservation") {
  Rng rng(23);
  for (int i = 0; i < 1000; ++i) {
    const Transform t = testing::random_transform(rng);
    const Vec3 p = testing::random_vec(rng, 1e3);
    const Vec3 q = testing::random_vec(rng, 1e3);
    CHECK((apply(t, p) - apply(t, q)).norm() == doctest::Approx((p - q).norm()).epsilon(1e-9));
  }
}

TEST_CASE("transform construction validates the rotation") {
  RotMat3 bad = RotMat3::Identity();
  bad(0, 0) = 1.5;
  CHECK_THROWS_AS(Transform(bad, Vec3::Zero()), InvalidParamsError);

  RotMat3 mirror = RotMat3::Identity();
  mirror(2, 2) = -1.0;  // det -1
  CHECK_THROWS_AS(Transform(mirror, Vec3::Zero()), InvalidParamsError);

  CHECK_THROWS_AS(Transform(RotMat3::Identity(), Vec3(1.0, std::nan(""), 0.0)),
                  InvalidParamsError);
}

TEST_CASE("orthonormalized returns the nearest proper rotation") {
  Rng rng(29);
  for (int i = 0; i < 200; ++i) {
    RotMat3 noisy = testing::random_rotation(rng);
    noisy += 1e-4 * RotMat3::Random();
    const RotMat3 fixed = orthonormalized(noisy);
    CHECK(is_rotation(fixed));
  }
}

TEST_CASE("unit vectors") {
  const UnitVec3 u = UnitVec3::normalized(Vec3(3.0, 4.0, 0.0));
  CHECK(u.vec().norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(u.x() == doctest::Approx(0.6));
  CHECK_THROWS_AS(UnitVec3::normalized(Vec3::Zero()), DegenerateGeometryError);
}
