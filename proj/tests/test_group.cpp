#include "orbitlab/group.hpp"

#include <cmath>

#include "doctest.h"
#include "orbitlab/errors.hpp"
#include "oracles.hpp"

using namespace orbitlab;

namespace {

constexpr double kPi = 3.14159265358979323846;

Vec coords1(double a) {
  Vec c(1);
  c << a;
  return c;
}

Vec coords2(double a, double b) {
  Vec c(2);
  c << a, b;
  return c;
}

GroupElement so2_elt(double theta) {
  return make_element(so2_group(), oracles::rot2(theta));
}

std::vector<GroupPtr> all_groups() {
  return {so2_group(), so3_group(), translations_group(2),
          se2_group(), axpb_group(), scaling_group(2)};
}

}  // namespace

TEST_CASE("rotation products follow the angle-addition law") {
  const GroupElement product = multiply(so2_elt(kPi / 3.0), so2_elt(kPi / 6.0));
  Mat expected(2, 2);
  expected << 0, -1, 1, 0;  // R(pi/2)
  CHECK((product.matrix - expected).norm() < 1e-12);
}

TEST_CASE("multiplying by the identity is a no-op") {
  SplitMix64 rng(11);
  for (const GroupPtr& group : all_groups()) {
    const GroupElement g = random_element(group, rng);
    CHECK((multiply(g, identity_element(group)).matrix - g.matrix).norm() < 1e-12);
  }
}

TEST_CASE("translations add") {
  const GroupPtr t2 = translations_group(2);
  const GroupElement a = make_element(t2, oracles::translation(coords2(1, 2)));
  const GroupElement b = make_element(t2, oracles::translation(coords2(3, 4)));
  CHECK((multiply(a, b).matrix - oracles::translation(coords2(4, 6))).norm() < 1e-12);
}

TEST_CASE("multiply rejects elements of different groups") {
  SplitMix64 rng(3);
  const GroupElement g = random_element(so2_group(), rng);
  const GroupElement h = random_element(se2_group(), rng);
  CHECK_THROWS_AS(multiply(g, h), UsageError);
}

TEST_CASE("rotation inverse is the transpose") {
  SplitMix64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const GroupElement g = random_element(so2_group(), rng);
    CHECK((inverse(g).matrix - g.matrix.transpose()).norm() < 1e-12);
  }
  CHECK((inverse(identity_element(so2_group())).matrix - Mat::Identity(2, 2)).norm() ==
        0.0);
}

TEST_CASE("affine line inverse solves the composition law") {
  const GroupElement g = make_element(axpb_group(), oracles::axpb(2.0, 3.0));
  const auto [a_inv, b_inv] = oracles::axpb_inverse(2.0, 3.0);
  CHECK(a_inv == 0.5);
  CHECK(b_inv == -1.5);
  CHECK((inverse(g).matrix - oracles::axpb(a_inv, b_inv)).norm() < 1e-12);
  CHECK((multiply(g, inverse(g)).matrix - Mat::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("conjugation is trivial in abelian groups") {
  SplitMix64 rng(7);
  for (int i = 0; i < 50; ++i) {
    const GroupElement g = random_element(so2_group(), rng);
    const GroupElement h = random_element(so2_group(), rng);
    CHECK((translate(g, h, TranslationSide::Conjugate).matrix - h.matrix).norm() < 1e-12);
  }
}

TEST_CASE("left translation of translations adds offsets") {
  const GroupPtr t2 = translations_group(2);
  const GroupElement a = make_element(t2, oracles::translation(coords2(1, 0)));
  const GroupElement b = make_element(t2, oracles::translation(coords2(0, 1)));
  CHECK((translate(a, b, TranslationSide::Left).matrix -
         oracles::translation(coords2(1, 1)))
            .norm() < 1e-12);
}

TEST_CASE("affine line conjugation matches the matrix oracle") {
  const GroupElement g = make_element(axpb_group(), oracles::axpb(2.0, 3.0));
  const GroupElement h = make_element(axpb_group(), oracles::axpb(1.0, 1.0));
  const Mat expected = oracles::axpb(2.0, 3.0) * oracles::axpb(1.0, 1.0) *
                       oracles::axpb(2.0, 3.0).inverse();
  const GroupElement conj = translate(g, h, TranslationSide::Conjugate);
  CHECK((conj.matrix - expected).norm() < 1e-12);
  CHECK(conj.matrix(0, 0) == doctest::Approx(1.0));
  CHECK(conj.matrix(0, 1) == doctest::Approx(2.0));
}

TEST_CASE("quarter-turn exponential lands on the rotation matrix") {
  const AlgebraVector j = algebra_from_coords(so2_group(), coords1(1.0));
  Mat expected(2, 2);
  expected << 0, -1, 1, 0;
  CHECK((group_exp(j, kPi / 2.0).matrix - expected).norm() < 1e-13);
}

TEST_CASE("zero-time exponential is the identity") {
  SplitMix64 rng(13);
  for (const GroupPtr& group : all_groups()) {
    const AlgebraVector v = random_algebra(group, rng);
    CHECK((group_exp(v, 0.0).matrix -
           Mat::Identity(group->matrix_dim, group->matrix_dim))
              .norm() == 0.0);
  }
}

TEST_CASE("translation exponential is affine") {
  const GroupPtr t1 = translations_group(1);
  const AlgebraVector v = algebra_from_coords(t1, coords1(1.0));
  CHECK((group_exp(v, 2.5).matrix - oracles::translation(coords1(2.5))).norm() < 1e-14);
}

TEST_CASE("series exponential matches each group's closed form") {
  SplitMix64 rng(17);
  for (const GroupPtr& group : all_groups()) {
    REQUIRE(static_cast<bool>(group->closed_form_exp));
    for (int i = 0; i < 100; ++i) {
      Vec c(group->group_dim);
      for (int k = 0; k < group->group_dim; ++k)
        c(k) = rng.uniform(-group->sample_bounds(k), group->sample_bounds(k));
      const AlgebraVector v = algebra_from_coords(group, c);
      CHECK((group_exp(v, 1.0).matrix - group->closed_form_exp(c)).norm() < 1e-12);
    }
  }
}

TEST_CASE("exponential rejects non-finite input") {
  const AlgebraVector v = algebra_from_coords(so2_group(), coords1(1.0));
  CHECK_THROWS_AS(group_exp(v, std::numeric_limits<double>::infinity()), UsageError);
}

TEST_CASE("chart is centered") {
  SplitMix64 rng(19);
  for (const GroupPtr& group : all_groups()) {
    const GroupElement center = random_element(group, rng);
    CHECK(chart_coords(center, center).norm() < 1e-14);
  }
}

TEST_CASE("rotation chart coordinate is the angle") {
  const Vec c = chart_coords(so2_elt(kPi / 4.0), identity_element(so2_group()));
  CHECK(c.size() == 1);
  CHECK(c(0) == doctest::Approx(kPi / 4.0).epsilon(1e-12));
}

TEST_CASE("chart round trips inside the injectivity radius") {
  SplitMix64 rng(23);
  for (const GroupPtr& group : all_groups()) {
    for (int i = 0; i < 100; ++i) {
      const GroupElement center = random_element(group, rng);
      Vec c(group->group_dim);
      for (int k = 0; k < group->group_dim; ++k)
        c(k) = rng.uniform(-group->sample_bounds(k), group->sample_bounds(k));
      const GroupElement g = chart_point(c, center);
      CHECK((chart_coords(g, center) - c).norm() < 1e-10);
    }
  }
}

TEST_CASE("chart rejects elements beyond the injectivity radius") {
  const GroupElement far = so2_elt(3.1);  // past pi - 0.1
  CHECK_THROWS_AS(chart_coords(far, identity_element(so2_group())), ChartDomainError);
}

TEST_CASE("rotation log recovers random axis-angle vectors") {
  SplitMix64 rng(29);
  for (int i = 0; i < 200; ++i) {
    Eigen::Vector3d w;
    for (int k = 0; k < 3; ++k) w(k) = rng.uniform(-1.0, 1.0);
    const Vec logged = so3_log(oracles::rot3(w));
    CHECK((logged - Vec(w)).norm() < 1e-9);
  }
}

TEST_CASE("rotation log at angle pi picks the nonnegative-first-component axis") {
  Eigen::Vector3d axis(-1.0, 0.0, 0.0);
  const Vec logged = so3_log(oracles::rot3(axis * kPi));
  CHECK(logged(0) == doctest::Approx(kPi).epsilon(1e-9));
  CHECK(std::abs(logged(1)) < 1e-9);
  CHECK(std::abs(logged(2)) < 1e-9);

  Eigen::Vector3d mixed(0.0, -3.0, 4.0);
  mixed.normalize();
  const Vec logged2 = so3_log(oracles::rot3(mixed * kPi));
  // First nonzero component of the returned axis is nonnegative.
  CHECK(logged2(1) > 0.0);
  CHECK((logged2.normalized() + Vec(mixed)).norm() < 1e-6);
}

TEST_CASE("membership validation rejects and repairs off-group matrices") {
  Mat skew(2, 2);
  skew << 1.0, 1.0, 0.0, 1.0;
  CHECK_THROWS_AS(make_element(so2_group(), skew), NumericalError);

  Mat drifted = oracles::rot2(0.3);
  drifted(0, 0) += 3e-10;
  const GroupElement repaired = make_element(so2_group(), drifted);
  CHECK(so2_group()->membership_defect(repaired.matrix) < 1e-12);
}

TEST_CASE("degenerate affine-line element is rejected as singular") {
  CHECK_THROWS_AS(make_element(axpb_group(), oracles::axpb(1e-12, 0.0)), NumericalError);
}

TEST_CASE("algebra vectors must lie in the span of the basis") {
  Mat symmetric = Mat::Identity(2, 2);
  CHECK_THROWS_AS(algebra_from_matrix(so2_group(), symmetric), UsageError);
  const AlgebraVector v =
      algebra_from_matrix(axpb_group(), oracles::axpb(0.0, 2.0) - Mat::Identity(2, 2));
  CHECK(v.coords(0) == doctest::Approx(-1.0));
  CHECK(v.coords(1) == doctest::Approx(2.0));
}

TEST_CASE("group law identities hold on seeded sweeps") {
  SplitMix64 rng(31);
  for (const GroupPtr& group : all_groups()) {
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const GroupElement g = random_element(group, rng);
      const GroupElement h = random_element(group, rng);
      const GroupElement k = random_element(group, rng);
      const GroupElement gh = multiply(g, h);
      worst = std::max(worst, (translate(gh, k, TranslationSide::Left).matrix -
                               translate(g, translate(h, k, TranslationSide::Left),
                                         TranslationSide::Left)
                                   .matrix)
                                  .norm());
      worst = std::max(worst, (translate(gh, k, TranslationSide::Right).matrix -
                               translate(h, translate(g, k, TranslationSide::Right),
                                         TranslationSide::Right)
                                   .matrix)
                                  .norm());
      const GroupElement c = translate(g, h, TranslationSide::Conjugate);
      worst = std::max(
          worst,
          (translate(inverse(g), c, TranslationSide::Conjugate).matrix - h.matrix).norm());
      worst = std::max(
          worst, (translate(g, multiply(h, k), TranslationSide::Conjugate).matrix -
                  multiply(c, translate(g, k, TranslationSide::Conjugate)).matrix)
                     .norm());
    }
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("one-parameter subgroup property") {
  SplitMix64 rng(37);
  for (const GroupPtr& group : all_groups()) {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const AlgebraVector v = random_algebra(group, rng);
      const double s = rng.uniform(-1.0, 1.0), t = rng.uniform(-1.0, 1.0);
      worst = std::max(worst, (multiply(group_exp(v, s), group_exp(v, t)).matrix -
                               group_exp(v, s + t).matrix)
                                  .norm());
    }
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("adjoint matrix represents matrix conjugation on the algebra") {
  SplitMix64 rng(41);
  for (const GroupPtr& group : all_groups()) {
    for (int i = 0; i < 20; ++i) {
      const GroupElement g = random_element(group, rng);
      const AlgebraVector v = random_algebra(group, rng);
      const Vec via_matrix = vee(group, g.matrix * v.matrix * g.matrix.inverse());
      CHECK((adjoint_matrix(g) * v.coords - via_matrix).norm() < 1e-11);
    }
  }
}
