#include "orbitlab/frames.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

#include "orbitlab/errors.hpp"

namespace orbitlab {

namespace {

ActionPtr require_catalog_spec(const ActionSpec& spec) {
  // Sections and charts hold their spec by shared pointer; rebuilding from
  // the catalog keeps the public signatures on const references.
  return make_builtin_action(spec.name);
}

}  // namespace

CrossSection build_cross_section(const ActionSpec& spec, const Point& x0) {
  if (!spec.known_free)
    throw ConstructionError(spec.name + ": cross-sections need a free action");
  const GroupElement e = identity_element(spec.group);
  const int r = spec.group->group_dim;
  const int m = spec.manifold_dim;
  const int s = rank_at(spec, x0, e);
  if (s != r)
    throw ConstructionError(spec.name + ": orbit dimension " + std::to_string(s) +
                            " below group dimension at the anchor point");

  CrossSection section;
  section.spec = require_catalog_spec(spec);
  section.base = x0;

  if (spec.known_transitive) {
    section.param_dim = 0;
    section.slice_frame = Mat::Zero(m, 0);
    const Vec coords = x0.coords;
    const std::string domain = x0.domain_id;
    section.embed = [coords, domain](const Vec&) { return Point{coords, domain}; };
    section.validity = [](const Vec&) { return true; };
    return section;
  }

  // Orthonormal basis of the Euclidean complement of the orbit tangent.
  const Mat tangent = action_group_jacobian(spec, x0, e);
  Eigen::JacobiSVD<Mat> svd(tangent, Eigen::ComputeFullU);
  const Mat n_frame = svd.matrixU().rightCols(m - s);
  section.param_dim = m - s;
  section.slice_frame = n_frame;
  const Vec base_coords = x0.coords;
  const std::string domain = x0.domain_id;
  const ActionPtr owned = section.spec;
  double radius = 0.45 * (1.0 + x0.coords.norm());

  // Regularity: a continuous scalar orbit label is injective along a
  // one-parameter slice exactly while it stays strictly monotone. March
  // outward from the anchor and cap the validity window strictly before
  // the first fold (the radial slice of a rotation action, for instance,
  // folds at the origin and re-enters every orbit beyond it).
  if (spec.orbit_label && section.param_dim == 1) {
    const int steps = 256;
    for (double direction : {1.0, -1.0}) {
      double first_slope = 0.0;
      double prev = spec.orbit_label(base_coords)(0);
      for (int k = 1; k <= steps; ++k) {
        const double z = direction * k * radius / steps;
        const Vec coords = base_coords + n_frame.col(0) * z;
        if (!owned->domain_predicate(coords)) {
          radius = std::min(radius, 0.9 * std::abs(z));
          break;
        }
        const double cur = spec.orbit_label(coords)(0);
        const double delta = cur - prev;
        prev = cur;
        if (std::abs(delta) < 1e-12) continue;
        if (first_slope == 0.0) {
          first_slope = delta;
        } else if (delta * first_slope < 0.0) {
          radius = std::min(radius, 0.9 * std::abs(z));
          break;
        }
      }
    }
  }

  const double final_radius = radius;
  section.embed = [base_coords, n_frame, domain](const Vec& z) {
    return Point{base_coords + n_frame * z, domain};
  };
  section.validity = [owned, base_coords, n_frame, final_radius](const Vec& z) {
    return z.norm() < final_radius && owned->domain_predicate(base_coords + n_frame * z);
  };
  return section;
}

CrossSection analytic_cross_section(const ActionSpec& spec, const Point& x0) {
  if (!spec.analytic_frame)
    throw ConstructionError(spec.name + ": no analytic cross-section in the catalog");
  const AnalyticFrame frame = spec.analytic_frame(x0.coords);
  CrossSection section;
  section.spec = require_catalog_spec(spec);
  section.base = x0;
  section.param_dim = frame.param_dim;
  section.slice_frame = Mat::Zero(spec.manifold_dim, 0);
  const std::string domain = x0.domain_id;
  auto embed = frame.embed;
  section.embed = [embed, domain](const Vec& z) { return Point{embed(z), domain}; };
  section.validity = frame.z_valid;
  const GroupPtr group = spec.group;
  auto solve = frame.solve;
  section.solve = [solve, group](const Point& x) {
    auto [h_mat, z] = solve(x.coords);
    return std::make_pair(make_element(group, h_mat), z);
  };
  return section;
}

int transversality_rank(const CrossSection& section, const Vec& z, DiffMode mode) {
  const ActionSpec& spec = *section.spec;
  const Point at = section.embed(z);
  const GroupElement e = identity_element(spec.group);
  const Mat orbit_tangent = action_group_jacobian(spec, at, e, mode);
  const int p = section.param_dim;
  Mat slice_tangent(spec.manifold_dim, p);
  if (p > 0 && section.slice_frame.cols() == p) {
    slice_tangent = section.slice_frame;
  } else if (p > 0) {
    const double h = fd_scaled_step(z.norm());
    Vec zp = z;
    for (int i = 0; i < p; ++i) {
      zp(i) = z(i) + h;
      const Vec plus = section.embed(zp).coords;
      zp(i) = z(i) - h;
      const Vec minus = section.embed(zp).coords;
      zp(i) = z(i);
      slice_tangent.col(i) = (plus - minus) / (2.0 * h);
    }
  }
  Mat stacked(spec.manifold_dim, orbit_tangent.cols() + p);
  stacked.leftCols(orbit_tangent.cols()) = orbit_tangent;
  if (p > 0) stacked.rightCols(p) = slice_tangent;
  return numerical_rank(stacked);
}

FlatChart flat_chart(const ActionSpec& spec, const CrossSection& section, const Point& x0) {
  if (!spec.known_free || !spec.known_regular)
    throw ConstructionError(spec.name + ": flat charts need a free regular action");
  if (!section.spec || section.spec->name != spec.name)
    throw UsageError("flat_chart: section belongs to a different action");
  (void)x0;  // the chart is anchored at the section's base point
  FlatChart chart;
  chart.spec = section.spec;
  chart.section = section;
  chart.analytic = static_cast<bool>(section.solve);
  return chart;
}

Point from_flat(const FlatChart& chart, const GroupElement& h, const Vec& z) {
  if (!chart.section.validity(z))
    throw ChartDomainError(chart.spec->name + ": slice coordinates outside the section");
  return act(*chart.spec, h, chart.section.embed(z));
}

namespace {

struct NewtonSeed {
  GroupElement h;
  Vec z;
  double residual;
};

// Coarse grid over the group's sample box, ordered by initial residual;
// seeding keeps the damped Newton iteration in the basin of the nearby
// solution instead of an antipodal one.
std::vector<NewtonSeed> newton_seeds(const FlatChart& chart, const Point& x) {
  const ActionSpec& spec = *chart.spec;
  const CrossSection& section = chart.section;
  const GroupPtr& group = spec.group;
  const int r = group->group_dim;
  const int p = section.param_dim;

  std::vector<NewtonSeed> seeds;
  Vec coords = Vec::Zero(r);
  // The grid must reach group elements that show up as products of two
  // sampled factors, so it spans twice the sampling box (five points per
  // dimension for small groups, three for the rest).
  const int per_dim = (r <= 2) ? 5 : 3;
  int total = 1;
  for (int i = 0; i < r; ++i) total *= per_dim;
  for (int index = 0; index < total; ++index) {
    int rem = index;
    for (int i = 0; i < r; ++i) {
      const double frac = 2.0 * (rem % per_dim) / (per_dim - 1.0) - 1.0;  // [-1, 1]
      coords(i) = frac * 1.8 * group->sample_bounds(i);
      rem /= per_dim;
    }
    GroupElement h;
    try {
      h = chart_point(coords, identity_element(group));
    } catch (const ChartDomainError&) {
      continue;
    }
    // Slice coordinates by least squares against this group guess.
    Vec z = Vec::Zero(p);
    Vec residual;
    try {
      if (p > 0) {
        const Mat jac_z =
            action_point_jacobian(spec, h, section.base) * section.slice_frame;
        const Vec gap = x.coords - act(spec, h, section.base).coords;
        z = jac_z.colPivHouseholderQr().solve(gap);
        if (!section.validity(z)) z = Vec::Zero(p);
      }
      residual = x.coords - act(spec, h, section.embed(z)).coords;
    } catch (const DomainError&) {
      continue;
    }
    seeds.push_back(NewtonSeed{std::move(h), std::move(z), residual.norm()});
  }
  std::sort(seeds.begin(), seeds.end(),
            [](const NewtonSeed& a, const NewtonSeed& b) { return a.residual < b.residual; });
  return seeds;
}

// Damped Newton from one seed; returns false when it stalls or resolves
// outside the section's validity window.
bool newton_solve_from(const FlatChart& chart, const Point& x, GroupElement h, Vec z,
                       std::pair<GroupElement, Vec>& out) {
  const ActionSpec& spec = *chart.spec;
  const CrossSection& section = chart.section;
  const int r = spec.group->group_dim;
  const int p = section.param_dim;
  const double target = 1e-10 * (1.0 + x.coords.norm());

  Vec residual = x.coords - act(spec, h, section.embed(z)).coords;
  for (int iter = 0; iter < 50; ++iter) {
    if (residual.norm() < target) {
      if (!section.validity(z)) return false;
      out = {h, z};
      return true;
    }
    const Point kz = section.embed(z);
    Mat jac(spec.manifold_dim, r + p);
    jac.leftCols(r) = action_group_jacobian(spec, kz, h);
    if (p > 0)
      jac.rightCols(p) = action_point_jacobian(spec, h, kz) * section.slice_frame;
    const Vec delta = jac.colPivHouseholderQr().solve(residual);

    double step = 1.0;
    bool accepted = false;
    for (int halving = 0; halving <= 6; ++halving) {
      const GroupElement h_try =
          multiply(h, chart_point(step * delta.head(r), identity_element(spec.group)));
      const Vec z_try = z + step * delta.tail(p);
      Vec res_try;
      try {
        res_try = x.coords - act(spec, h_try, section.embed(z_try)).coords;
      } catch (const DomainError&) {
        step *= 0.5;
        continue;
      }
      if (res_try.norm() < residual.norm()) {
        h = h_try;
        z = z_try;
        residual = res_try;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) return false;
  }
  if (residual.norm() < target && section.validity(z)) {
    out = {h, z};
    return true;
  }
  return false;
}

std::pair<GroupElement, Vec> newton_to_flat(const FlatChart& chart, const Point& x) {
  std::pair<GroupElement, Vec> solution{identity_element(chart.spec->group), Vec(0)};
  for (const NewtonSeed& seed : newton_seeds(chart, x)) {
    if (newton_solve_from(chart, x, seed.h, seed.z, solution)) return solution;
  }
  throw ChartDomainError(chart.spec->name +
                         ": chart solve did not converge inside the section domain");
}

}  // namespace

std::pair<GroupElement, Vec> to_flat(const FlatChart& chart, const Point& x) {
  if (!chart.spec->domain_predicate(x.coords))
    throw ChartDomainError(chart.spec->name + ": point outside the action domain");
  if (chart.analytic) {
    auto [h, z] = chart.section.solve(x);
    if (!chart.section.validity(z))
      throw ChartDomainError(chart.spec->name + ": point outside the chart domain");
    return {std::move(h), std::move(z)};
  }
  return newton_to_flat(chart, x);
}

GroupElement moving_frame(const FlatChart& chart, const Point& x) {
  return inverse(to_flat(chart, x).first);
}

Vec invariant_coords(const FlatChart& chart, const Point& x) {
  return to_flat(chart, x).second;
}

EquivariantMapHandle induced_act(const GroupElement& g, const EquivariantMapHandle& f) {
  return EquivariantMapHandle{f.spec, act(*f.spec, g, f.base)};
}

Point eval_handle(const EquivariantMapHandle& f, const GroupElement& h) {
  return act(*f.spec, h, f.base);
}

std::vector<CheckResult> decompose_check(const ActionSpec& spec, const FlatChart& chart_m,
                                         const FlatChart& chart_gm,
                                         const DecomposeConfig& cfg) {
  SplitMix64 rng(cfg.seed);
  const GroupPtr group = spec.group;
  const int p = chart_m.section.param_dim;

  // The base-point realization of psi: M -> GM, read in flat coordinates
  // on both sides.
  const auto psi_flat = [&](const GroupElement& h,
                            const Vec& z) -> std::pair<GroupElement, Vec> {
    const Point x = from_flat(chart_m, h, z);
    const EquivariantMapHandle handle{chart_gm.spec, x};
    return to_flat(chart_gm, handle.base);
  };

  const auto sample_z = [&]() -> Vec {
    if (p == 0) return Vec(0);
    for (int attempt = 0; attempt < 64; ++attempt) {
      Vec z(p);
      for (int i = 0; i < p; ++i) z(i) = rng.uniform(-0.35, 0.35);
      if (chart_m.section.validity(z)) return z;
    }
    throw ChartDomainError(spec.name + ": could not sample the section domain");
  };

  double r_equivariant = 0, r_invariant = 0, r_identity_slice = 0;
  const GroupElement e = identity_element(group);
  for (int t = 0; t < cfg.trials; ++t) {
    const GroupElement h = random_element(group, rng);
    const GroupElement g = random_element(group, rng);
    const Vec z = sample_z();

    const auto base = psi_flat(h, z);
    const auto moved = psi_flat(multiply(g, h), z);
    r_equivariant = std::max(
        r_equivariant, (moved.first.matrix - g.matrix * base.first.matrix).norm());

    if (p > 0) {
      const auto at_g = psi_flat(g, z);
      const auto at_e = psi_flat(e, z);
      r_invariant = std::max(r_invariant, (at_g.second - at_e.second).norm());
    }

    const auto on_slice = psi_flat(h, Vec::Zero(p));
    double slice_residual = (on_slice.first.matrix - h.matrix).norm();
    if (p > 0) slice_residual += on_slice.second.norm();
    r_identity_slice = std::max(r_identity_slice, slice_residual);
  }

  std::vector<CheckResult> out;
  out.push_back(make_check("group component of psi is equivariant", "Eq (14)", cfg.trials,
                           r_equivariant, 1e-8));
  if (p > 0)
    out.push_back(make_check("slice component of psi is invariant", "Eq (15)", cfg.trials,
                             r_invariant, 1e-8));
  out.push_back(make_check("psi restricted to the identity slice is the identity",
                           "Lemma 3.25", cfg.trials, r_identity_slice, 1e-8));
  return out;
}

void write_chart_table_csv(const std::string& path, const FlatChart& chart,
                           const std::vector<Point>& points) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  const int m = chart.spec->manifold_dim;
  const int r = chart.spec->group->group_dim;
  const int p = chart.section.param_dim;
  for (int c = 0; c < m; ++c) out << (c ? "," : "") << "coord_" << c;
  for (int c = 0; c < r; ++c) out << ",h_chart_" << c;
  for (int c = 0; c < p; ++c) out << ",z_" << c;
  out << "\n";
  char buf[64];
  const GroupElement e = identity_element(chart.spec->group);
  const auto put = [&](double value, bool lead_comma) {
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    if (lead_comma) out << ",";
    out << buf;
  };
  for (const Point& x : points) {
    const auto [h, z] = to_flat(chart, x);
    const Vec h_coords = chart_coords(h, e);
    for (int c = 0; c < m; ++c) put(x.coords(c), c > 0);
    for (int c = 0; c < r; ++c) put(h_coords(c), true);
    for (int c = 0; c < p; ++c) put(z(c), true);
    out << "\n";
  }
  if (!out.good()) throw IoError("write failure on " + path);
}

}  // namespace orbitlab
