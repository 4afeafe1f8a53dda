#include "orbitlab/action.hpp"

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

Vec coords2(double a, double b) {
  Vec c(2);
  c << a, b;
  return c;
}

std::vector<ActionPtr> all_actions() {
  std::vector<ActionPtr> out;
  for (const std::string& id : builtin_action_ids()) out.push_back(make_builtin_action(id));
  return out;
}

}  // namespace

TEST_CASE("quarter turn rotates the basis point") {
  const ActionPtr spec = make_builtin_action("so2-r2");
  const GroupElement g = make_element(spec->group, oracles::rot2(kPi / 2.0));
  const Point x = make_point(*spec, coords2(1, 0));
  const Vec moved = act(*spec, g, x).coords;
  CHECK((moved - coords2(0, 1)).norm() < 1e-12);
}

TEST_CASE("identity element fixes every sampled point") {
  SplitMix64 rng(101);
  for (const ActionPtr& spec : all_actions()) {
    const GroupElement e = identity_element(spec->group);
    for (int i = 0; i < 20; ++i) {
      const Point x = make_point(*spec, spec->sample_point(rng));
      CHECK((act(*spec, e, x).coords - x.coords).norm() < 1e-12);
    }
  }
}

TEST_CASE("translations move the origin by their offset") {
  const ActionPtr spec = make_builtin_action("translations-r2");
  const GroupElement g = make_element(spec->group, oracles::translation(coords2(1, 2)));
  const Point origin = make_point(*spec, coords2(0, 0));
  CHECK((act(*spec, g, origin).coords - coords2(1, 2)).norm() < 1e-14);
}

TEST_CASE("half-turn equivariant map evaluation") {
  const ActionPtr spec = make_builtin_action("so2-r2-punctured");
  const Point x = make_point(*spec, coords2(1, 0));
  const GroupElement half_turn = make_element(spec->group, oracles::rot2(kPi));
  CHECK((psi_eval(*spec, x, half_turn).coords - coords2(-1, 0)).norm() < 1e-12);
  CHECK((psi_eval(*spec, x, identity_element(spec->group)).coords - x.coords).norm() ==
        0.0);
}

TEST_CASE("equivariant maps intertwine the product") {
  SplitMix64 rng(103);
  for (const ActionPtr& spec : all_actions()) {
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const GroupElement g = random_element(spec->group, rng);
      const GroupElement h = random_element(spec->group, rng);
      const Point x = make_point(*spec, spec->sample_point(rng));
      worst = std::max(worst, (psi_eval(*spec, x, multiply(g, h)).coords -
                               act(*spec, g, psi_eval(*spec, x, h)).coords)
                                  .norm());
    }
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("orbit samples of a transitive free action are distinct") {
  const ActionPtr spec = make_builtin_action("translations-r2");
  const Point origin = make_point(*spec, coords2(0, 0));
  const auto samples = orbit_sample(*spec, origin, 3, 99);
  REQUIRE(samples.size() == 3);
  CHECK((samples[0].coords - samples[1].coords).norm() > 1e-6);
  CHECK((samples[1].coords - samples[2].coords).norm() > 1e-6);
  CHECK((samples[0].coords - samples[2].coords).norm() > 1e-6);
}

TEST_CASE("rotation orbits preserve the norm") {
  const ActionPtr spec = make_builtin_action("so2-r2-punctured");
  const Point x = make_point(*spec, coords2(1, 0));
  for (const Point& p : orbit_sample(*spec, x, 50, 7))
    CHECK(p.coords.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("the origin is a fixed point of the rotation action") {
  const ActionPtr spec = make_builtin_action("so2-r2");
  const Point origin = make_point(*spec, coords2(0, 0));
  for (const Point& p : orbit_sample(*spec, origin, 20, 5)) CHECK(p.coords.norm() == 0.0);
}

TEST_CASE("orbit samples are deterministic per seed") {
  const ActionPtr spec = make_builtin_action("se2-r2");
  const Point x = make_point(*spec, coords2(0.3, -0.2));
  const auto a = orbit_sample(*spec, x, 10, 1234);
  const auto b = orbit_sample(*spec, x, 10, 1234);
  for (int i = 0; i < 10; ++i) CHECK((a[i].coords - b[i].coords).norm() == 0.0);
}

TEST_CASE("rank table") {
  SplitMix64 rng(107);
  const ActionPtr so2 = make_builtin_action("so2-r2");
  const Point origin = make_point(*so2, coords2(0, 0));
  const Point off = make_point(*so2, coords2(1, 0));
  for (int i = 0; i < 20; ++i) {
    const GroupElement g = random_element(so2->group, rng);
    CHECK(rank_at(*so2, origin, g) == 0);
    CHECK(rank_at(*so2, off, g) == 1);
    CHECK(rank_at(*so2, off, g, DiffMode::FiniteDiff) == 1);
  }

  for (const char* id : {"translations-r2", "translations-r3", "se2-r2", "axpb-r1",
                         "scaling-r2-punctured"}) {
    const ActionPtr spec = make_builtin_action(id);
    const int expected = std::min(spec->group->group_dim, spec->manifold_dim);
    for (int i = 0; i < 10; ++i) {
      const Point x = make_point(*spec, spec->sample_point(rng));
      CHECK(rank_at(*spec, x, random_element(spec->group, rng)) == expected);
    }
  }

  const ActionPtr se2 = make_builtin_action("se2-r2");
  const Point p_se2 = make_point(*se2, coords2(1, 0));
  CHECK(rank_at(*se2, p_se2, random_element(se2->group, rng), DiffMode::FiniteDiff) == 2);

  for (const char* id : {"so2-on-self", "so3-on-self", "se2-on-self", "axpb-on-self",
                         "scaling2-on-self", "translations2-on-self"}) {
    const ActionPtr spec = make_builtin_action(id);
    for (int i = 0; i < 10; ++i) {
      const Point x = make_point(*spec, spec->sample_point(rng));
      CHECK(rank_at(*spec, x, random_element(spec->group, rng)) ==
            spec->group->group_dim);
    }
  }
}

TEST_CASE("constant rank sweeps produce singleton rank sets") {
  const ActionPtr so2 = make_builtin_action("so2-r2-punctured");
  const RankReport r1 = constant_rank_check(*so2, make_point(*so2, coords2(1, 0)), 100, 1);
  CHECK(r1.constant);
  CHECK(*r1.observed_ranks.begin() == 1);

  const ActionPtr t2 = make_builtin_action("translations-r2");
  const RankReport r2 = constant_rank_check(*t2, make_point(*t2, coords2(3, 4)), 100, 2);
  CHECK(r2.constant);
  CHECK(*r2.observed_ranks.begin() == 2);

  const ActionPtr se2 = make_builtin_action("se2-r2");
  const RankReport r3 = constant_rank_check(*se2, make_point(*se2, coords2(1, 0)), 100, 3);
  CHECK(r3.constant);
  CHECK(*r3.observed_ranks.begin() == 2);

  CHECK_THROWS_AS(constant_rank_check(*se2, make_point(*se2, coords2(1, 0)), 1, 3),
                  UsageError);
}

TEST_CASE("analytic action Jacobians match an independent finite difference") {
  SplitMix64 rng(109);
  for (const char* id : {"so2-r2", "se2-r2", "scaling-r2-punctured", "axpb-r1"}) {
    const ActionPtr spec = make_builtin_action(id);
    for (int i = 0; i < 10; ++i) {
      const GroupElement g = random_element(spec->group, rng);
      const Point x = make_point(*spec, spec->sample_point(rng));

      const Mat jac_pt = oracles::fd_jacobian(
          [&](const Vec& p) { return spec->act_fn(g, p); }, x.coords);
      CHECK((action_point_jacobian(*spec, g, x) - jac_pt).cwiseAbs().maxCoeff() < 1e-5);

      const Mat jac_grp = oracles::fd_jacobian(
          [&](const Vec& c) {
            return act(*spec, chart_point(c, g), x).coords;
          },
          Vec::Zero(spec->group->group_dim));
      CHECK((action_group_jacobian(*spec, x, g) - jac_grp).cwiseAbs().maxCoeff() < 1e-5);
    }
  }
}

TEST_CASE("points outside the domain are rejected") {
  const ActionPtr spec = make_builtin_action("so2-r2-punctured");
  CHECK_THROWS_AS(make_point(*spec, coords2(0, 0)), DomainError);
  CHECK_THROWS_AS(make_builtin_action("no-such-action"), ConfigError);
}

TEST_CASE("acting with an element of the wrong group is a usage error") {
  const ActionPtr spec = make_builtin_action("so2-r2");
  SplitMix64 rng(1);
  const GroupElement wrong = random_element(se2_group(), rng);
  CHECK_THROWS_AS(act(*spec, wrong, make_point(*spec, coords2(1, 0))), UsageError);
}

TEST_CASE("orbit CSV export is deterministic and carries the header") {
  const ActionPtr spec = make_builtin_action("so2-r2-punctured");
  const Point x = make_point(*spec, coords2(1, 0));
  const auto samples = orbit_sample(*spec, x, 4, 77);
  write_orbit_csv("orbit_a.csv", *spec, samples);
  write_orbit_csv("orbit_b.csv", *spec, samples);

  std::ifstream a("orbit_a.csv"), b("orbit_b.csv");
  std::stringstream sa, sb;
  sa << a.rdbuf();
  sb << b.rdbuf();
  const std::string text = sa.str();
  CHECK(text == sb.str());
  CHECK(text.rfind("domain_id,i,coord_0,coord_1\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 5);

  write_orbit_csv("orbit_empty.csv", *spec, {});
  std::ifstream empty("orbit_empty.csv");
  std::stringstream se;
  se << empty.rdbuf();
  CHECK(se.str() == "domain_id,i,coord_0,coord_1\n");
}
