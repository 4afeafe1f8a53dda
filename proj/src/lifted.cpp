#include "orbitlab/lifted.hpp"

#include "orbitlab/errors.hpp"

namespace orbitlab {

LiftedPoint lift_act(const ActionSpec& spec, LiftSide side, const GroupElement& g,
                     const LiftedPoint& p) {
  if (!g.group->same_group_as(*spec.group))
    throw UsageError(spec.name + ": lifted action with element of a different group");
  GroupElement moved = (side == LiftSide::Left) ? multiply(g, p.group_part)
                                                : multiply(p.group_part, inverse(g));
  return LiftedPoint{std::move(moved), act(spec, g, p.base_part)};
}

double lifted_freeness_defect(const ActionSpec& spec, LiftSide side, const GroupElement& g,
                              const LiftedPoint& p) {
  const LiftedPoint moved = lift_act(spec, side, g, p);
  return (moved.group_part.matrix - p.group_part.matrix).norm() +
         (moved.base_part.coords - p.base_part.coords).norm();
}

LiftedPoint lifted_psi(const ActionSpec& spec, const LiftedPoint& p, const GroupElement& g) {
  return lift_act(spec, LiftSide::Left, g, p);
}

int lifted_rank(const ActionSpec& spec, const LiftedPoint& p, const GroupElement& g,
                DiffMode mode) {
  const GroupPtr& group = spec.group;
  const int r = group->group_dim;
  const int m = spec.manifold_dim;
  const GroupElement gh = multiply(g, p.group_part);
  Mat jac(r + m, r);

  if (mode == DiffMode::Analytic) {
    // d/ds [g exp(s B_i) h] in the chart at g h is Ad_{h^-1} B_i.
    const Mat ad = adjoint_matrix(inverse(p.group_part));
    jac.topRows(r) = ad;
    jac.bottomRows(m) = action_group_jacobian(spec, p.base_part, g, mode);
    return numerical_rank(jac);
  }

  const double h = fd_scaled_step(1.0);
  Vec e = Vec::Zero(r);
  for (int i = 0; i < r; ++i) {
    e(i) = h;
    const LiftedPoint plus = lifted_psi(spec, p, chart_point(e, g));
    e(i) = -h;
    const LiftedPoint minus = lifted_psi(spec, p, chart_point(e, g));
    e(i) = 0.0;
    jac.col(i).head(r) =
        (chart_coords(plus.group_part, gh) - chart_coords(minus.group_part, gh)) /
        (2.0 * h);
    jac.col(i).tail(m) = (plus.base_part.coords - minus.base_part.coords) / (2.0 * h);
  }
  return numerical_rank(jac);
}

}  // namespace orbitlab
