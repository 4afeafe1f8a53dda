#pragma once

#include "orbitlab/action.hpp"
#include "orbitlab/group.hpp"

namespace orbitlab {

/// A point of the lifted manifold G x M.
struct LiftedPoint {
  GroupElement group_part;
  Point base_part;
};

enum class LiftSide { Left, Right };

/// Diagonal lifts of the action to G x M:
///   left:  g . (h, x) = (g h, g . x)
///   right: g . (h, x) = (h g^-1, g . x)
/// Both satisfy the left action axioms; both are free regardless of the
/// base action.
LiftedPoint lift_act(const ActionSpec& spec, LiftSide side, const GroupElement& g,
                     const LiftedPoint& p);

/// How far g . p is from p, summed over both components; zero (to
/// rounding) exactly when g is the identity.
double lifted_freeness_defect(const ActionSpec& spec, LiftSide side, const GroupElement& g,
                              const LiftedPoint& p);

/// Equivariant map of the left-lifted action: psi_{(h,x)}(g) = (g h, g.x),
/// componentwise (R_h(g), psi_x(g)).
LiftedPoint lifted_psi(const ActionSpec& spec, const LiftedPoint& p, const GroupElement& g);

/// Rank of the lifted equivariant map's Jacobian at (p, g); equals the
/// group dimension at every point of every lifted action.
int lifted_rank(const ActionSpec& spec, const LiftedPoint& p, const GroupElement& g,
                DiffMode mode = DiffMode::Analytic);

/// Projection to the base manifold.
inline const Point& project_to_base(const LiftedPoint& p) { return p.base_part; }

}  // namespace orbitlab
