#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "orbitlab/numeric.hpp"
#include "orbitlab/rng.hpp"

namespace orbitlab {

/// One matrix Lie group: dimension data, a basis of its algebra, the
/// defining relations (as a defect measure plus a projector back onto the
/// group), and the chart conventions used throughout the library.
///
/// Descriptors are immutable after construction and shared by pointer;
/// two descriptors describe the same group iff name and dimensions agree.
struct GroupDescriptor {
  std::string name;
  int matrix_dim = 0;  // n: elements are n x n matrices
  int group_dim = 0;   // r: dimension of the group manifold
  std::vector<Mat> algebra_basis;
  double membership_tol = 1e-9;

  /// Injectivity bound for the exponential chart, measured by chart_norm
  /// of the coordinates. Infinite for groups whose exp is injective.
  double chart_radius = std::numeric_limits<double>::infinity();

  /// Per-coordinate bounds used when sampling random elements; chosen so
  /// sampled coordinates stay inside the chart domain.
  Vec sample_bounds;

  /// Distance of a matrix from the group's defining relations.
  std::function<double(const Mat&)> membership_defect;
  /// Nearest-point style re-projection onto the group.
  std::function<Mat(const Mat&)> project;
  /// Norm of chart coordinates compared against chart_radius. Defaults to
  /// the Euclidean norm; rotational groups measure only the angle block.
  std::function<double(const Vec&)> chart_norm;
  /// Closed-form exponential, shipped as a test oracle for the builtin
  /// groups. The production path is the generic series exponential.
  std::function<Mat(const Vec&)> closed_form_exp;

  // Derived data (filled by finalize_descriptor).
  Mat basis_flat;  // n^2 x r, column i = vec(algebra_basis[i])
  Mat basis_pinv;  // r x n^2 pseudo-inverse of basis_flat

  bool same_group_as(const GroupDescriptor& other) const {
    return name == other.name && matrix_dim == other.matrix_dim &&
           group_dim == other.group_dim;
  }
};

using GroupPtr = std::shared_ptr<const GroupDescriptor>;

/// An element of a matrix Lie group. Construct through make_element so
/// the membership invariants hold; all operations return validated
/// (and, when drifted, re-projected) elements.
struct GroupElement {
  GroupPtr group;
  Mat matrix;
};

/// A tangent vector at the identity, stored both as a matrix in the
/// group's algebra and as coefficients in the algebra basis.
struct AlgebraVector {
  GroupPtr group;
  Mat matrix;
  Vec coords;
};

enum class TranslationSide { Left, Right, Conjugate };

// --- Builtin descriptors -------------------------------------------------

GroupPtr so2_group();
GroupPtr so3_group();
GroupPtr translations_group(int m);  // (m+1)x(m+1) homogeneous form
GroupPtr se2_group();
GroupPtr axpb_group();               // upper-triangular [[a,b],[0,1]], a > 0
GroupPtr scaling_group(int m);       // diag(s,...,s,1), s > 0

// --- Element and algebra construction ------------------------------------

/// Validates membership and invertibility; re-projects when the defect
/// exceeds membership_tol/10 and throws NumericalError when projection
/// cannot restore the invariants.
GroupElement make_element(const GroupPtr& group, const Mat& matrix);

GroupElement identity_element(const GroupPtr& group);

AlgebraVector algebra_from_coords(const GroupPtr& group, const Vec& coords);
/// Least-squares coordinates in the basis; throws UsageError when the
/// matrix is not in the algebra's span to membership tolerance.
AlgebraVector algebra_from_matrix(const GroupPtr& group, const Mat& matrix);

/// Linear combination of algebra basis matrices ("hat" map).
Mat hat(const GroupPtr& group, const Vec& coords);
/// Coordinates of an algebra matrix in the basis ("vee" map).
Vec vee(const GroupPtr& group, const Mat& matrix);

// --- Group operations -----------------------------------------------------

GroupElement multiply(const GroupElement& g, const GroupElement& h);
GroupElement inverse(const GroupElement& g);
/// L_g(h) = gh, R_g(h) = hg, C_g(h) = g h g^-1.
GroupElement translate(const GroupElement& g, const GroupElement& h, TranslationSide side);

/// exp(t v) through the series matrix exponential.
GroupElement group_exp(const AlgebraVector& v, double t = 1.0);

/// Left-trivialized exponential chart centered at `center`:
/// chart_point(c, center) = center * exp(hat(c)). In these coordinates
/// dL_g is the identity map.
GroupElement chart_point(const Vec& coords, const GroupElement& center);
/// Local inverse of chart_point; throws ChartDomainError outside the
/// injectivity domain.
Vec chart_coords(const GroupElement& g, const GroupElement& center);

/// Matrix of Ad_g: v -> g v g^-1 in algebra basis coordinates. This is
/// the differential of C_g in left-trivialized charts (dL_g = id and
/// dR_g = Ad_{g^-1} in the same convention).
Mat adjoint_matrix(const GroupElement& g);

/// Seeded random element exp(hat(c)) with per-coordinate uniform c.
GroupElement random_element(const GroupPtr& group, SplitMix64& rng);
/// Same, resampling until chart_norm(c) exceeds min_chart_norm.
GroupElement random_element_away_from_identity(const GroupPtr& group, SplitMix64& rng,
                                               double min_chart_norm);
/// Seeded random algebra vector with coordinates in [-1, 1].
AlgebraVector random_algebra(const GroupPtr& group, SplitMix64& rng);

// --- Closed-form logs, shipped as oracles for the builtin groups ---------

double so2_log_angle(const Mat& rotation);
/// Rodrigues log; the angle-pi ambiguity is resolved by flipping the axis
/// so its first nonzero component is nonnegative.
Vec so3_log(const Mat& rotation);

}  // namespace orbitlab
