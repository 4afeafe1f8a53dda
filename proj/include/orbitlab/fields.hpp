#pragma once

#include <functional>

#include "orbitlab/action.hpp"
#include "orbitlab/check.hpp"
#include "orbitlab/group.hpp"

namespace orbitlab {

/// Tangent vector on the manifold: base point plus chart components.
struct TangentVec {
  Point base;
  Vec components;
};

/// Tangent vector on the group, components in the left-trivialized chart
/// centered at the base (coords c represent d/ds [base exp(s hat(c))]).
struct GroupTangent {
  GroupElement base;
  Vec coords;
};

enum class FieldSide { Left, Right };

/// A left- or right-invariant vector field, determined by its value at
/// the identity.
struct InvariantField {
  AlgebraVector seed;
  FieldSide side;
};

/// A differentiable map between chart domains, carried as an evaluator
/// plus an optional analytic Jacobian.
struct ChartMap {
  std::function<Vec(const Vec&)> eval;
  std::function<Mat(const Vec&)> jacobian;  // optional
};

/// Pushforward of `dir` by `map` at `at`: the analytic Jacobian when the
/// map carries one and the mode allows it, otherwise a central
/// directional difference (linear in dir by construction). fd_order 2 is
/// the plain central stencil; 4 adds one Richardson extrapolation.
Vec differential(const ChartMap& map, const Vec& at, const Vec& dir,
                 DiffMode mode = DiffMode::Analytic, double fd_step = 1e-6,
                 int fd_order = 2);

/// Field value at g: dL_g(v|e) for left fields, dR_g(v|e) for right.
/// In left-trivialized charts these are the identity and Ad_{g^-1};
/// finite-difference mode recomputes them through the chart maps.
GroupTangent field_at(const InvariantField& f, const GroupElement& g,
                      DiffMode mode = DiffMode::Analytic, double fd_step = 1e-6);

/// Same-side field seeded by dC_g(v|e) = g v g^-1.
InvariantField conjugate_field(const InvariantField& f, const GroupElement& g);

/// Transport through the equivariant map of x: dpsi_x(v_side|_g), a
/// tangent vector based at g.x. Right fields transported this way agree
/// with the global infinitesimal-generator field; left fields are defined
/// only along the orbit of x, with g supplied by the caller.
TangentVec transport(const ActionSpec& spec, const InvariantField& f, const Point& x,
                     const GroupElement& g, DiffMode mode = DiffMode::Analytic,
                     double fd_step = 1e-6);

/// Infinitesimal generator value d/dt|0 [exp(t v) . y] at an arbitrary
/// point y: the transported right field evaluated without reference to a
/// base point.
TangentVec infinitesimal(const ActionSpec& spec, const AlgebraVector& v, const Point& y,
                         DiffMode mode = DiffMode::Analytic, double fd_step = 1e-6);

struct FieldSampleConfig {
  int trials = 500;
  std::uint64_t seed = 42;
  DiffMode mode = DiffMode::Analytic;
  double tolerance = 1e-9;
  double fd_step = 1e-6;
  int fd_order = 2;  // 4 switches the differential operator to Richardson
};

/// Runs the invariance/transport identity checks for one action and one
/// differentiation mode; one CheckResult per identity.
std::vector<CheckResult> identity_residuals(const ActionSpec& spec,
                                            const FieldSampleConfig& cfg);

/// Classical RK4 flow of the transported field starting at g.x.
/// Right fields integrate the generator field on M directly; left fields
/// integrate the generating curve in the group (the field only exists on
/// the orbit presented through g) and push the endpoint down.
Point flow_integrate(const ActionSpec& spec, const InvariantField& f, const Point& x,
                     const GroupElement& g, double t_end, double dt,
                     DiffMode mode = DiffMode::Analytic);

}  // namespace orbitlab
