#include "orbitlab/action.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "orbitlab/errors.hpp"

namespace orbitlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

double wrap_angle(double a) {
  while (a > kPi) a -= 2.0 * kPi;
  while (a <= -kPi) a += 2.0 * kPi;
  return a;
}

Vec append_one(const Vec& x) {
  Vec out(x.size() + 1);
  out.head(x.size()) = x;
  out(x.size()) = 1.0;
  return out;
}

// Linear action of an n x n matrix group on R^n.
void attach_linear_action(ActionSpec& spec) {
  spec.act_fn = [](const GroupElement& g, const Vec& x) -> Vec { return g.matrix * x; };
  spec.jac_x = [](const GroupElement& g, const Vec&) -> Mat { return g.matrix; };
  spec.jac_g = [](const GroupElement& g, const Vec& x) -> Mat {
    const GroupPtr& d = g.group;
    Mat j(x.size(), d->group_dim);
    for (int i = 0; i < d->group_dim; ++i) j.col(i) = g.matrix * d->algebra_basis[i] * x;
    return j;
  };
}

// Affine action of an (m+1) x (m+1) homogeneous matrix group on R^m.
void attach_affine_action(ActionSpec& spec) {
  const int m = spec.manifold_dim;
  spec.act_fn = [m](const GroupElement& g, const Vec& x) -> Vec {
    return (g.matrix * append_one(x)).head(m);
  };
  spec.jac_x = [m](const GroupElement& g, const Vec&) -> Mat {
    return g.matrix.topLeftCorner(m, m);
  };
  spec.jac_g = [m](const GroupElement& g, const Vec& x) -> Mat {
    const GroupPtr& d = g.group;
    const Vec xh = append_one(x);
    Mat j(m, d->group_dim);
    for (int i = 0; i < d->group_dim; ++i)
      j.col(i) = (g.matrix * d->algebra_basis[i] * xh).head(m);
    return j;
  };
}

// Left multiplication of a group on itself, with M realized as the group's
// matrices flattened into R^{n^2}. The domain predicate is deliberately
// loose so finite-difference stencils straddling the submanifold stay legal.
void attach_self_action(ActionSpec& spec) {
  const int n = spec.group->matrix_dim;
  spec.manifold_dim = n * n;
  spec.act_fn = [n](const GroupElement& g, const Vec& x) -> Vec {
    return vec_of(g.matrix * mat_of(x, n, n));
  };
  spec.jac_x = [n](const GroupElement& g, const Vec&) -> Mat {
    Mat j = Mat::Zero(n * n, n * n);
    for (int b = 0; b < n; ++b) j.block(b * n, b * n, n, n) = g.matrix;
    return j;
  };
  spec.jac_g = [n](const GroupElement& g, const Vec& x) -> Mat {
    const GroupPtr& d = g.group;
    const Mat xm = mat_of(x, n, n);
    Mat j(n * n, d->group_dim);
    for (int i = 0; i < d->group_dim; ++i)
      j.col(i) = vec_of(g.matrix * d->algebra_basis[i] * xm);
    return j;
  };
  const GroupPtr group = spec.group;
  spec.domain_predicate = [group, n](const Vec& x) {
    return x.allFinite() && group->membership_defect(mat_of(x, n, n)) < 1e-3;
  };
  spec.sample_point = [group](SplitMix64& rng) -> Vec {
    return vec_of(random_element(group, rng).matrix);
  };
  spec.known_free = true;
  spec.known_regular = true;
  spec.known_transitive = true;
  spec.analytic_frame = [group, n](const Vec& x0) {
    const Mat x0_inv = mat_of(x0, n, n).inverse();
    AnalyticFrame f;
    f.param_dim = 0;
    f.embed = [x0](const Vec&) { return x0; };
    f.z_valid = [](const Vec&) { return true; };
    // Left division: x = h . x0  =>  h = X X0^-1.
    f.solve = [x0_inv, n](const Vec& x) {
      return std::make_pair(Mat(mat_of(x, n, n) * x0_inv), Vec(0));
    };
    return f;
  };
}

Vec sample_box(SplitMix64& rng, int m, double half_width) {
  Vec x(m);
  for (int i = 0; i < m; ++i) x(i) = rng.uniform(-half_width, half_width);
  return x;
}

Vec sample_annulus2(SplitMix64& rng, double r_lo, double r_hi) {
  const double rho = rng.uniform(r_lo, r_hi);
  const double th = rng.uniform(-kPi, kPi);
  Vec x(2);
  x << rho * std::cos(th), rho * std::sin(th);
  return x;
}

ActionPtr build_so2_r2(bool punctured) {
  auto spec = std::make_shared<ActionSpec>();
  spec->name = punctured ? "so2-r2-punctured" : "so2-r2";
  spec->group = so2_group();
  spec->manifold_dim = 2;
  spec->domain_id = punctured ? "r2-punctured" : "r2";
  if (punctured) {
    spec->domain_predicate = [](const Vec& x) { return x.allFinite() && x.norm() > 1e-9; };
    spec->sample_point = [](SplitMix64& rng) { return sample_annulus2(rng, 0.4, 2.2); };
    spec->known_free = true;
    spec->known_regular = true;
    spec->orbit_label = [](const Vec& x) {
      Vec l(1);
      l << x.norm();
      return l;
    };
    spec->analytic_frame = [](const Vec& x0) {
      const double rho0 = x0.norm();
      const double theta0 = std::atan2(x0(1), x0(0));
      AnalyticFrame f;
      f.param_dim = 1;
      f.embed = [rho0, theta0](const Vec& z) {
        Vec x(2);
        x << (rho0 + z(0)) * std::cos(theta0), (rho0 + z(0)) * std::sin(theta0);
        return x;
      };
      f.z_valid = [rho0](const Vec& z) { return rho0 + z(0) > 0.05; };
      // Polar solve: h rotates the section ray onto x, z is the radial offset.
      f.solve = [rho0, theta0](const Vec& x) {
        const double dth = std::atan2(x(1), x(0)) - theta0;
        Mat h(2, 2);
        h << std::cos(dth), -std::sin(dth), std::sin(dth), std::cos(dth);
        Vec z(1);
        z << x.norm() - rho0;
        return std::make_pair(h, z);
      };
      return f;
    };
  } else {
    spec->domain_predicate = [](const Vec& x) { return x.allFinite(); };
    spec->sample_point = [](SplitMix64& rng) { return sample_box(rng, 2, 2.0); };
    Vec origin = Vec::Zero(2);
    spec->known_fixed_points = {origin};
  }
  attach_linear_action(*spec);
  return spec;
}

ActionPtr build_translations(int m) {
  auto spec = std::make_shared<ActionSpec>();
  spec->name = "translations-r" + std::to_string(m);
  spec->group = translations_group(m);
  spec->manifold_dim = m;
  spec->domain_id = "r" + std::to_string(m);
  spec->domain_predicate = [](const Vec& x) { return x.allFinite(); };
  spec->sample_point = [m](SplitMix64& rng) { return sample_box(rng, m, 2.0); };
  spec->known_free = true;
  spec->known_regular = true;
  spec->known_transitive = true;
  spec->analytic_frame = [m](const Vec& x0) {
    AnalyticFrame f;
    f.param_dim = 0;
    f.embed = [x0](const Vec&) { return x0; };
    f.z_valid = [](const Vec&) { return true; };
    f.solve = [x0, m](const Vec& x) {
      Mat h = Mat::Identity(m + 1, m + 1);
      h.topRightCorner(m, 1) = x - x0;
      return std::make_pair(h, Vec(0));
    };
    return f;
  };
  attach_affine_action(*spec);
  return spec;
}

ActionPtr build_scaling_r2() {
  auto spec = std::make_shared<ActionSpec>();
  spec->name = "scaling-r2-punctured";
  spec->group = scaling_group(2);
  spec->manifold_dim = 2;
  spec->domain_id = "r2-punctured";
  spec->domain_predicate = [](const Vec& x) { return x.allFinite() && x.norm() > 1e-9; };
  spec->sample_point = [](SplitMix64& rng) { return sample_annulus2(rng, 0.4, 2.2); };
  spec->known_free = true;
  spec->known_regular = true;
  spec->orbit_label = [](const Vec& x) {
    Vec l(1);
    l << std::atan2(x(1), x(0));
    return l;
  };
  spec->analytic_frame = [](const Vec& x0) {
    const double rho0 = x0.norm();
    const double theta0 = std::atan2(x0(1), x0(0));
    AnalyticFrame f;
    f.param_dim = 1;
    // Circle of radius |x0| through x0, parameterized by angle offset.
    f.embed = [rho0, theta0](const Vec& z) {
      Vec x(2);
      x << rho0 * std::cos(theta0 + z(0)), rho0 * std::sin(theta0 + z(0));
      return x;
    };
    f.z_valid = [](const Vec& z) { return std::abs(z(0)) < kPi - 0.3; };
    // Log-radial solve: the scale carries the circle onto |x|.
    f.solve = [rho0, theta0](const Vec& x) {
      const double s = x.norm() / rho0;
      Mat h = Mat::Identity(3, 3) * s;
      h(2, 2) = 1.0;
      Vec z(1);
      z << wrap_angle(std::atan2(x(1), x(0)) - theta0);
      return std::make_pair(h, z);
    };
    return f;
  };
  attach_affine_action(*spec);
  return spec;
}

ActionPtr build_se2_r2() {
  auto spec = std::make_shared<ActionSpec>();
  spec->name = "se2-r2";
  spec->group = se2_group();
  spec->manifold_dim = 2;
  spec->domain_id = "r2";
  spec->domain_predicate = [](const Vec& x) { return x.allFinite(); };
  spec->sample_point = [](SplitMix64& rng) { return sample_box(rng, 2, 2.0); };
  spec->known_transitive = true;
  spec->known_regular = true;
  attach_affine_action(*spec);
  return spec;
}

ActionPtr build_axpb_r1() {
  auto spec = std::make_shared<ActionSpec>();
  spec->name = "axpb-r1";
  spec->group = axpb_group();
  spec->manifold_dim = 1;
  spec->domain_id = "r1";
  spec->domain_predicate = [](const Vec& x) { return x.allFinite(); };
  spec->sample_point = [](SplitMix64& rng) { return sample_box(rng, 1, 2.0); };
  spec->known_transitive = true;
  spec->known_regular = true;
  attach_affine_action(*spec);
  return spec;
}

ActionPtr build_self_action(const std::string& id, const GroupPtr& group) {
  auto spec = std::make_shared<ActionSpec>();
  spec->name = id;
  spec->group = group;
  spec->domain_id = "mat-" + group->name;
  attach_self_action(*spec);
  return spec;
}

}  // namespace

Point make_point(const ActionSpec& spec, const Vec& coords) {
  if (!coords.allFinite() || coords.size() != spec.manifold_dim)
    throw DomainError(spec.name + ": bad point coordinates");
  if (!spec.domain_predicate(coords))
    throw DomainError(spec.name + ": point outside the chart domain");
  return Point{coords, spec.domain_id};
}

Point act(const ActionSpec& spec, const GroupElement& g, const Point& x) {
  if (!g.group->same_group_as(*spec.group))
    throw UsageError(spec.name + ": element of a different group");
  if (!spec.domain_predicate(x.coords))
    throw DomainError(spec.name + ": input point outside the chart domain");
  Vec y = spec.act_fn(g, x.coords);
  if (!spec.domain_predicate(y))
    throw DomainError(spec.name + ": action left the chart domain");
  return Point{std::move(y), spec.domain_id};
}

Point psi_eval(const ActionSpec& spec, const Point& x, const GroupElement& g) {
  return act(spec, g, x);
}

std::vector<Point> orbit_sample(const ActionSpec& spec, const Point& x, int n,
                                std::uint64_t seed) {
  if (n < 0) throw UsageError("orbit_sample: negative count");
  SplitMix64 rng(seed);
  std::vector<Point> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(act(spec, random_element(spec.group, rng), x));
  return out;
}

Mat action_group_jacobian(const ActionSpec& spec, const Point& x, const GroupElement& g,
                          DiffMode mode, double fd_step) {
  if (mode == DiffMode::Analytic && spec.jac_g) return spec.jac_g(g, x.coords);
  const int r = spec.group->group_dim;
  const double h = fd_scaled_step(x.coords.norm(), fd_step);
  Mat j(spec.manifold_dim, r);
  Vec e = Vec::Zero(r);
  for (int i = 0; i < r; ++i) {
    e(i) = h;
    const Vec plus = act(spec, chart_point(e, g), x).coords;
    e(i) = -h;
    const Vec minus = act(spec, chart_point(e, g), x).coords;
    e(i) = 0.0;
    j.col(i) = (plus - minus) / (2.0 * h);
  }
  return j;
}

Mat action_point_jacobian(const ActionSpec& spec, const GroupElement& g, const Point& x,
                          DiffMode mode, double fd_step) {
  if (mode == DiffMode::Analytic && spec.jac_x) return spec.jac_x(g, x.coords);
  const int m = spec.manifold_dim;
  const double h = fd_scaled_step(x.coords.norm(), fd_step);
  Mat j(m, m);
  Vec p = x.coords;
  for (int i = 0; i < m; ++i) {
    p(i) = x.coords(i) + h;
    const Vec plus = spec.act_fn(g, p);
    p(i) = x.coords(i) - h;
    const Vec minus = spec.act_fn(g, p);
    p(i) = x.coords(i);
    j.col(i) = (plus - minus) / (2.0 * h);
  }
  return j;
}

int rank_at(const ActionSpec& spec, const Point& x, const GroupElement& g, DiffMode mode) {
  return numerical_rank(action_group_jacobian(spec, x, g, mode));
}

RankReport constant_rank_check(const ActionSpec& spec, const Point& x, int trials,
                               std::uint64_t seed) {
  if (trials < 2) throw UsageError("constant_rank_check: needs at least 2 trials");
  SplitMix64 rng(seed);
  RankReport report;
  report.trials = trials;
  for (int t = 0; t < trials; ++t)
    report.observed_ranks.insert(rank_at(spec, x, random_element(spec.group, rng)));
  report.constant = report.observed_ranks.size() == 1;
  return report;
}

void write_orbit_csv(const std::string& path, const ActionSpec& spec,
                     const std::vector<Point>& samples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "domain_id,i";
  for (int c = 0; c < spec.manifold_dim; ++c) out << ",coord_" << c;
  out << "\n";
  char buf[64];
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out << samples[i].domain_id << "," << i;
    for (int c = 0; c < spec.manifold_dim; ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", samples[i].coords(c));
      out << "," << buf;
    }
    out << "\n";
  }
  if (!out.good()) throw IoError("write failure on " + path);
}

std::vector<std::string> builtin_action_ids() {
  return {"axpb-on-self",   "axpb-r1",        "scaling-r2-punctured",
          "scaling2-on-self", "se2-on-self",  "se2-r2",
          "so2-on-self",    "so2-r2",         "so2-r2-punctured",
          "so3-on-self",    "translations-r2", "translations-r3",
          "translations2-on-self"};
}

ActionPtr make_builtin_action(const std::string& id) {
  if (id == "so2-r2") return build_so2_r2(false);
  if (id == "so2-r2-punctured") return build_so2_r2(true);
  if (id == "translations-r2") return build_translations(2);
  if (id == "translations-r3") return build_translations(3);
  if (id == "scaling-r2-punctured") return build_scaling_r2();
  if (id == "se2-r2") return build_se2_r2();
  if (id == "axpb-r1") return build_axpb_r1();
  if (id == "so2-on-self") return build_self_action(id, so2_group());
  if (id == "so3-on-self") return build_self_action(id, so3_group());
  if (id == "se2-on-self") return build_self_action(id, se2_group());
  if (id == "axpb-on-self") return build_self_action(id, axpb_group());
  if (id == "scaling2-on-self") return build_self_action(id, scaling_group(2));
  if (id == "translations2-on-self") return build_self_action(id, translations_group(2));
  throw ConfigError("unknown action id: " + id);
}

}  // namespace orbitlab
