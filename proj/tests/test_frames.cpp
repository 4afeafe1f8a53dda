#include "orbitlab/frames.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

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

}  // namespace

TEST_CASE("normal slice of the punctured rotation action is the radial ray") {
  const ActionPtr spec = make_builtin_action("so2-r2-punctured");
  const Point x0 = make_point(*spec, coords2(1, 0));
  const CrossSection section = build_cross_section(*spec, x0);
  REQUIRE(section.param_dim == 1);
  // Orbit tangent at (1,0) is (0,1); the slice runs along the x-axis.
  const Point at = section.embed(coords1(0.3));
  CHECK(std::abs(at.coords(1)) < 1e-12);
  CHECK(std::abs(std::abs(at.coords(0) - 1.0) - 0.3) < 1e-12);
}

TEST_CASE("transitive actions get point sections") {
  const ActionPtr spec = make_builtin_action("translations-r2");
  const Point x0 = make_point(*spec, coords2(0.4, -0.2));
  const CrossSection section = build_cross_section(*spec, x0);
  CHECK(section.param_dim == 0);
  CHECK((section.embed(Vec(0)).coords - x0.coords).norm() == 0.0);
}

TEST_CASE("scaling slice is orthogonal to the ray") {
  const ActionPtr spec = make_builtin_action("scaling-r2-punctured");
  const Point x0 = make_point(*spec, coords2(1, 0));
  const CrossSection section = build_cross_section(*spec, x0);
  REQUIRE(section.param_dim == 1);
  const Point at = section.embed(coords1(0.5));
  CHECK(at.coords(0) == doctest::Approx(1.0));
  CHECK(std::abs(at.coords(1)) == doctest::Approx(0.5));
}

TEST_CASE("cross-sections require a free action") {
  const ActionPtr spec = make_builtin_action("so2-r2");
  CHECK_THROWS_AS(build_cross_section(*spec, make_point(*spec, coords2(1, 0))),
                  ConstructionError);
}

TEST_CASE("sections are transverse to the orbits") {
  SplitMix64 rng(401);
  for (const char* id : {"so2-r2-punctured", "scaling-r2-punctured", "translations-r2"}) {
    const ActionPtr spec = make_builtin_action(id);
    const Point x0 = make_point(*spec, spec->sample_point(rng));
    for (const CrossSection& section :
         {build_cross_section(*spec, x0), analytic_cross_section(*spec, x0)}) {
      const int expected = spec->group->group_dim + section.param_dim;
      for (int i = 0; i < 20; ++i) {
        Vec z(section.param_dim);
        for (int k = 0; k < section.param_dim; ++k) z(k) = rng.uniform(-0.25, 0.25);
        CHECK(transversality_rank(section, z) == expected);
      }
    }
  }
}

TEST_CASE("flat chart solves the polar example") {
  const ActionPtr spec = make_builtin_action("so2-r2-punctured");
  const Point x0 = make_point(*spec, coords2(1, 0));
  const FlatChart chart = flat_chart(*spec, analytic_cross_section(*spec, x0), x0);

  const auto [h, z] = to_flat(chart, make_point(*spec, coords2(0, 2)));
  CHECK((h.matrix - oracles::rot2(kPi / 2.0)).norm() < 1e-12);
  REQUIRE(z.size() == 1);
  CHECK(z(0) == doctest::Approx(1.0));

  const Point back = from_flat(chart, h, z);
  CHECK((back.coords - coords2(0, 2)).norm() < 1e-12);
}

TEST_CASE("section points carry the identity group part") {
  SplitMix64 rng(409);
  for (const char* id : {"so2-r2-punctured", "scaling-r2-punctured"}) {
    const ActionPtr spec = make_builtin_action(id);
    const Point x0 = make_point(*spec, spec->sample_point(rng));
    for (bool analytic : {false, true}) {
      const CrossSection section = analytic ? analytic_cross_section(*spec, x0)
                                            : build_cross_section(*spec, x0);
      const FlatChart chart = flat_chart(*spec, section, x0);
      for (int i = 0; i < 20; ++i) {
        const Vec z = coords1(rng.uniform(-0.3, 0.3));
        const auto [h, z_back] = to_flat(chart, section.embed(z));
        CHECK((h.matrix - Mat::Identity(spec->group->matrix_dim,
                                        spec->group->matrix_dim))
                  .norm() < 1e-8);
        CHECK((z_back - z).norm() < 1e-8);
      }
    }
  }
}

TEST_CASE("newton and analytic chart solves agree on a shared section") {
  // At (1,0) the generic normal slice of the rotation action coincides
  // with the analytic radial section, so both solvers must agree.
  const ActionPtr spec = make_builtin_action("so2-r2-punctured");
  const Point x0 = make_point(*spec, coords2(1, 0));
  const FlatChart newton = flat_chart(*spec, build_cross_section(*spec, x0), x0);
  const FlatChart analytic = flat_chart(*spec, analytic_cross_section(*spec, x0), x0);
  CHECK(!newton.analytic);
  CHECK(analytic.analytic);

  SplitMix64 rng(419);
  for (int i = 0; i < 100; ++i) {
    const double theta = rng.uniform(-2.8, 2.8);
    const double radius = rng.uniform(0.6, 1.6);
    const Point x = make_point(
        *spec, coords2(radius * std::cos(theta), radius * std::sin(theta)));
    const auto [h_newton, z_newton] = to_flat(newton, x);
    const auto [h_analytic, z_analytic] = to_flat(analytic, x);
    CHECK((h_newton.matrix - h_analytic.matrix).norm() < 1e-8);
    CHECK(std::abs(std::abs(z_newton(0)) - std::abs(z_analytic(0))) < 1e-8);
  }
}

TEST_CASE("flat charts trivialize the action") {
  SplitMix64 rng(421);
  for (const char* id :
       {"so2-r2-punctured", "scaling-r2-punctured", "translations-r2", "so2-on-self"}) {
    const ActionPtr spec = make_builtin_action(id);
    const Point x0 = make_point(*spec, spec->sample_point(rng));
    const FlatChart chart = flat_chart(*spec, analytic_cross_section(*spec, x0), x0);
    for (int i = 0; i < 100; ++i) {
      Vec z(chart.section.param_dim);
      for (int k = 0; k < z.size(); ++k) z(k) = rng.uniform(-0.3, 0.3);
      const GroupElement h = random_element(spec->group, rng);
      const GroupElement g = random_element(spec->group, rng);
      const Point x = from_flat(chart, h, z);

      const auto [h_x, z_x] = to_flat(chart, x);
      CHECK((from_flat(chart, h_x, z_x).coords - x.coords).norm() < 1e-9);

      const auto [h_gx, z_gx] = to_flat(chart, act(*spec, g, x));
      CHECK((h_gx.matrix - multiply(g, h_x).matrix).norm() < 1e-9);
      CHECK((z_gx - z_x).norm() < 1e-9);
    }
  }
}

TEST_CASE("moving frame solves the polar example") {
  const ActionPtr spec = make_builtin_action("so2-r2-punctured");
  const Point x0 = make_point(*spec, coords2(1, 0));
  const FlatChart chart = flat_chart(*spec, analytic_cross_section(*spec, x0), x0);
  const GroupElement rho = moving_frame(chart, make_point(*spec, coords2(0, 2)));
  CHECK((rho.matrix - oracles::rot2(-kPi / 2.0)).norm() < 1e-12);

  // Points already on the section have identity frame.
  const GroupElement on_section =
      moving_frame(chart, chart.section.embed(coords1(0.25)));
  CHECK((on_section.matrix - Mat::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("moving frames are right equivariant and land on the section") {
  SplitMix64 rng(431);
  for (const char* id : {"so2-r2-punctured", "scaling-r2-punctured", "translations-r2"}) {
    const ActionPtr spec = make_builtin_action(id);
    const Point x0 = make_point(*spec, spec->sample_point(rng));
    const FlatChart chart = flat_chart(*spec, analytic_cross_section(*spec, x0), x0);
    for (int i = 0; i < 100; ++i) {
      Vec z(chart.section.param_dim);
      for (int k = 0; k < z.size(); ++k) z(k) = rng.uniform(-0.3, 0.3);
      const Point x = from_flat(chart, random_element(spec->group, rng), z);
      const GroupElement g = random_element(spec->group, rng);

      const GroupElement rho = moving_frame(chart, x);
      const Vec on_section = act(*spec, rho, x).coords;
      CHECK((on_section - chart.section.embed(invariant_coords(chart, x)).coords).norm() <
            1e-9);
      const GroupElement rho_moved = moving_frame(chart, act(*spec, g, x));
      CHECK((rho_moved.matrix - multiply(rho, inverse(g)).matrix).norm() < 1e-9);
    }
  }
}

TEST_CASE("invariant coordinates label orbits") {
  const ActionPtr spec = make_builtin_action("so2-r2-punctured");
  const Point x0 = make_point(*spec, coords2(1, 0));
  const FlatChart chart = flat_chart(*spec, analytic_cross_section(*spec, x0), x0);

  const Vec z = invariant_coords(chart, make_point(*spec, coords2(0, 2)));
  REQUIRE(z.size() == 1);
  CHECK(z(0) == doctest::Approx(1.0));  // |x| - 1

  SplitMix64 rng(433);
  for (int i = 0; i < 100; ++i) {
    const double theta = rng.uniform(-kPi, kPi);
    const Point x = make_point(*spec, coords2(1.3 * std::cos(theta), 1.3 * std::sin(theta)));
    CHECK(invariant_coords(chart, x)(0) == doctest::Approx(0.3).epsilon(1e-9));
  }
}

TEST_CASE("transitive quotients have empty invariant coordinates") {
  const ActionPtr spec = make_builtin_action("translations-r2");
  const Point x0 = make_point(*spec, coords2(0, 0));
  const FlatChart chart = flat_chart(*spec, analytic_cross_section(*spec, x0), x0);
  SplitMix64 rng(439);
  const Point x = make_point(*spec, spec->sample_point(rng));
  CHECK(invariant_coords(chart, x).size() == 0);
}

TEST_CASE("chart solves outside the validity window are rejected") {
  const ActionPtr spec = make_builtin_action("scaling-r2-punctured");
  const Point x0 = make_point(*spec, coords2(1, 0));
  const FlatChart chart = flat_chart(*spec, analytic_cross_section(*spec, x0), x0);
  // Angle pi - 0.1 exceeds the section's angular validity bound.
  const Point far = make_point(
      *spec, coords2(std::cos(kPi - 0.1), std::sin(kPi - 0.1)));
  CHECK_THROWS_AS(to_flat(chart, far), ChartDomainError);
}

TEST_CASE("induced action moves the base point") {
  const ActionPtr spec = make_builtin_action("so2-r2-punctured");
  const EquivariantMapHandle f{spec, make_point(*spec, coords2(1, 0))};
  const GroupElement e = identity_element(spec->group);
  CHECK((induced_act(e, f).base.coords - f.base.coords).norm() == 0.0);

  const GroupElement quarter = make_element(spec->group, oracles::rot2(kPi / 2.0));
  const Point value = eval_handle(induced_act(quarter, f), e);
  CHECK((value.coords - coords2(0, 1)).norm() < 1e-12);
}

TEST_CASE("handle orbits correspond to manifold orbits") {
  const ActionPtr spec = make_builtin_action("scaling-r2-punctured");
  SplitMix64 rng(443);
  const Point x = make_point(*spec, spec->sample_point(rng));
  const EquivariantMapHandle f{spec, x};
  const auto orbit = orbit_sample(*spec, x, 25, 999);
  SplitMix64 replay(999);
  for (const Point& sample : orbit) {
    const GroupElement g = random_element(spec->group, replay);
    CHECK((induced_act(g, f).base.coords - sample.coords).norm() == 0.0);
  }
}

TEST_CASE("decomposition residuals vanish under the induced structure") {
  SplitMix64 rng(449);
  for (const char* id :
       {"so2-r2-punctured", "scaling-r2-punctured", "so3-on-self", "axpb-on-self"}) {
    const ActionPtr spec = make_builtin_action(id);
    const Point x0 = make_point(*spec, spec->sample_point(rng));
    const FlatChart chart = flat_chart(*spec, analytic_cross_section(*spec, x0), x0);
    DecomposeConfig cfg;
    cfg.trials = 200;
    cfg.seed = 31337;
    const auto checks = decompose_check(*spec, chart, chart, cfg);
    const std::size_t expected = (chart.section.param_dim > 0) ? 3 : 2;
    REQUIRE(checks.size() == expected);
    for (const CheckResult& check : checks) {
      CAPTURE(id);
      CAPTURE(check.check_name);
      CHECK(check.max_residual < 1e-8);
      CHECK(check.pass);
    }
  }
}

TEST_CASE("translation decomposition reports the equivariance residual") {
  const ActionPtr spec = make_builtin_action("translations-r2");
  const Point x0 = make_point(*spec, coords2(0.1, 0.2));
  const FlatChart chart = flat_chart(*spec, analytic_cross_section(*spec, x0), x0);
  DecomposeConfig cfg;
  cfg.trials = 100;
  const auto checks = decompose_check(*spec, chart, chart, cfg);
  REQUIRE(checks.size() == 2);  // empty z drops the invariance residual
  CHECK(checks[0].paper_ref == "Eq (14)");
  CHECK(checks[0].max_residual < 1e-8);
  CHECK(checks[1].paper_ref == "Lemma 3.25");
  CHECK(checks[1].max_residual < 1e-8);
}

TEST_CASE("chart table export has the documented header and is deterministic") {
  const ActionPtr spec = make_builtin_action("so2-r2-punctured");
  const Point x0 = make_point(*spec, coords2(1, 0));
  const FlatChart chart = flat_chart(*spec, analytic_cross_section(*spec, x0), x0);
  std::vector<Point> points;
  SplitMix64 rng(457);
  for (int i = 0; i < 5; ++i) {
    points.push_back(make_point(
        *spec, coords2(1.2 * std::cos(rng.uniform(-1.0, 1.0)),
                       1.2 * std::sin(rng.uniform(-1.0, 1.0)))));
  }
  write_chart_table_csv("chart_a.csv", chart, points);
  write_chart_table_csv("chart_b.csv", chart, points);
  std::ifstream a("chart_a.csv"), b("chart_b.csv");
  std::stringstream sa, sb;
  sa << a.rdbuf();
  sb << b.rdbuf();
  const std::string text = sa.str();
  CHECK(text == sb.str());
  CHECK(text.rfind("coord_0,coord_1,h_chart_0,z_0\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 6);
}
