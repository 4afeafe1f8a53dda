#pragma once

#include <functional>
#include <utility>

#include "orbitlab/action.hpp"
#include "orbitlab/check.hpp"
#include "orbitlab/fields.hpp"

namespace orbitlab {

/// A local cross-section: an (m-s)-parameter slice transverse to the
/// orbits, either the affine normal slice built at a point or an analytic
/// section shipped with the action.
struct CrossSection {
  ActionPtr spec;
  int param_dim = 0;
  Point base;  // the point the section passes through (z = 0)
  std::function<Point(const Vec& z)> embed;
  std::function<bool(const Vec& z)> validity;
  /// Exact solver for x = h . k(z), present on analytic sections.
  std::function<std::pair<GroupElement, Vec>(const Point&)> solve;
  /// Columns span the slice directions for the affine normal slice.
  Mat slice_frame;  // m x param_dim (empty for analytic sections)
};

/// Flat local coordinates (h, z): from_flat(h, z) = h . k(z) and to_flat
/// inverts it, so the action becomes g . (h, z) = (g h, z).
struct FlatChart {
  ActionPtr spec;
  CrossSection section;
  bool analytic = false;  // exact solve vs damped Newton
};

/// Base-point handle for the equivariant map psi_base in GM.
struct EquivariantMapHandle {
  ActionPtr spec;
  Point base;
};

/// Affine normal slice through x0: z -> x0 + N z with N an orthonormal
/// basis of the orthogonal complement of the orbit tangent space. For
/// actions known to be transitive the slice degenerates to the point x0.
/// Throws ConstructionError when the action is not free at x0.
CrossSection build_cross_section(const ActionSpec& spec, const Point& x0);

/// The catalog's analytic section through x0 (throws ConstructionError
/// when the action does not ship one).
CrossSection analytic_cross_section(const ActionSpec& spec, const Point& x0);

/// Transversality witness: rank of [orbit tangent | slice tangent] at
/// k(z); equals the manifold dimension on a genuine cross-section.
int transversality_rank(const CrossSection& section, const Vec& z,
                        DiffMode mode = DiffMode::Analytic);

/// Builds the flat chart over a section. Sections with an exact solver
/// invert analytically; otherwise a damped Newton iteration solves
/// x = h . k(z) with multiplicative updates of h.
FlatChart flat_chart(const ActionSpec& spec, const CrossSection& section, const Point& x0);

std::pair<GroupElement, Vec> to_flat(const FlatChart& chart, const Point& x);
Point from_flat(const FlatChart& chart, const GroupElement& h, const Vec& z);

/// Right moving frame rho(x) = h(x)^-1: carries x onto the section and
/// satisfies rho(g . x) = rho(x) g^-1.
GroupElement moving_frame(const FlatChart& chart, const Point& x);

/// z-component of the flat coordinates; a G-invariant function that
/// separates nearby orbits (the quotient chart).
Vec invariant_coords(const FlatChart& chart, const Point& x);

/// Induced action on equivariant maps: g . psi_x = psi_{g.x}.
EquivariantMapHandle induced_act(const GroupElement& g, const EquivariantMapHandle& f);
/// Evaluation of the handle as a map G -> M.
Point eval_handle(const EquivariantMapHandle& f, const GroupElement& h);

struct DecomposeConfig {
  int trials = 500;
  std::uint64_t seed = 42;
};

/// Writes the base-point realization of psi: M -> GM in matched flat
/// coordinates and reports the equivariance of its group component, the
/// invariance of its slice component, and its restriction to the identity
/// slice.
std::vector<CheckResult> decompose_check(const ActionSpec& spec, const FlatChart& chart_m,
                                         const FlatChart& chart_gm,
                                         const DecomposeConfig& cfg);

/// CSV export of flat-coordinate evaluations:
/// "coord_0..,h_chart_0..,z_0..", one row per input point in order.
void write_chart_table_csv(const std::string& path, const FlatChart& chart,
                           const std::vector<Point>& points);

}  // namespace orbitlab
