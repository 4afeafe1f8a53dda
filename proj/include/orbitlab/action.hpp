#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "orbitlab/group.hpp"
#include "orbitlab/numeric.hpp"
#include "orbitlab/rng.hpp"

namespace orbitlab {

/// A manifold point in a single global chart.
struct Point {
  Vec coords;
  std::string domain_id;
};

/// Analytic cross-section data a builtin action can attach: an embedding
/// of the slice, its parameter domain, and an exact solver for the flat
/// chart equation x = h . k(z). Plain data so the frames machinery can
/// consume it without a dependency cycle.
struct AnalyticFrame {
  int param_dim = 0;
  std::function<Vec(const Vec& z)> embed;        // z -> point coords
  std::function<bool(const Vec& z)> z_valid;
  std::function<std::pair<Mat, Vec>(const Vec& x)> solve;  // x -> (group matrix, z)
};

/// A smooth left action of a matrix group on a Euclidean chart domain,
/// with optional analytic Jacobians and catalog metadata.
struct ActionSpec {
  std::string name;       // catalog id, e.g. "so2-r2-punctured"
  GroupPtr group;
  int manifold_dim = 0;   // m
  std::string domain_id;
  std::function<bool(const Vec&)> domain_predicate;
  std::function<Vec(const GroupElement&, const Vec&)> act_fn;

  /// d(g.x)/dx, m x m at fixed g (the differential of phi_g).
  std::function<Mat(const GroupElement&, const Vec&)> jac_x;
  /// m x r Jacobian of h -> h.x at h = g, columns in the left-trivialized
  /// chart at g (column i = d/ds [g exp(s B_i)].x at s = 0).
  std::function<Mat(const GroupElement&, const Vec&)> jac_g;

  bool known_free = false;
  bool known_regular = false;
  bool known_transitive = false;

  std::function<Vec(SplitMix64&)> sample_point;
  /// Analytic orbit invariant for free regular actions (test oracle).
  std::function<Vec(const Vec&)> orbit_label;
  /// Analytic cross-section through x0, when the catalog ships one.
  std::function<AnalyticFrame(const Vec& x0)> analytic_frame;
  /// Points with nontrivial isotropy that the catalog knows about.
  std::vector<Vec> known_fixed_points;
};

using ActionPtr = std::shared_ptr<const ActionSpec>;

Point make_point(const ActionSpec& spec, const Vec& coords);

/// g . x. Validates the domain on input and output.
Point act(const ActionSpec& spec, const GroupElement& g, const Point& x);

/// psi_x(g) = g . x, the equivariant map attached to the point x.
Point psi_eval(const ActionSpec& spec, const Point& x, const GroupElement& g);

/// n seeded random orbit points g_i . x, deterministic per seed.
std::vector<Point> orbit_sample(const ActionSpec& spec, const Point& x, int n,
                                std::uint64_t seed);

/// m x r Jacobian of h -> h.x at h = g in chart coordinates at g.
/// Analytic mode uses jac_g when present, else central differences.
Mat action_group_jacobian(const ActionSpec& spec, const Point& x, const GroupElement& g,
                          DiffMode mode = DiffMode::Analytic, double fd_step = 1e-6);

/// m x m Jacobian of phi_g at x.
Mat action_point_jacobian(const ActionSpec& spec, const GroupElement& g, const Point& x,
                          DiffMode mode = DiffMode::Analytic, double fd_step = 1e-6);

/// Rank of the action's group Jacobian at (x, g) = local orbit dimension.
int rank_at(const ActionSpec& spec, const Point& x, const GroupElement& g,
            DiffMode mode = DiffMode::Analytic);

struct RankReport {
  std::set<int> observed_ranks;
  int trials = 0;
  bool constant = false;
};

/// Sweeps rank_at over seeded random group elements at fixed x.
RankReport constant_rank_check(const ActionSpec& spec, const Point& x, int trials,
                               std::uint64_t seed);

/// CSV export: header "domain_id,i,coord_0..coord_{m-1}", one row per
/// sample in trial order. Deterministic bytes for a given sample list.
void write_orbit_csv(const std::string& path, const ActionSpec& spec,
                     const std::vector<Point>& samples);

// --- Builtin catalog --------------------------------------------------------

/// Sorted ids of all builtin actions.
std::vector<std::string> builtin_action_ids();
/// Construct a catalog action; throws ConfigError for unknown ids.
ActionPtr make_builtin_action(const std::string& id);

}  // namespace orbitlab
