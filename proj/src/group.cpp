#include "orbitlab/group.hpp"

#include <cmath>
#include <limits>

#include "orbitlab/errors.hpp"

namespace orbitlab {

namespace {

constexpr double kPi = 3.14159265358979323846;

void finalize_descriptor(GroupDescriptor& d) {
  const int n = d.matrix_dim;
  const int r = d.group_dim;
  if (static_cast<int>(d.algebra_basis.size()) != r)
    throw ConstructionError(d.name + ": algebra basis must have one matrix per dimension");
  d.basis_flat.resize(n * n, r);
  for (int i = 0; i < r; ++i) d.basis_flat.col(i) = vec_of(d.algebra_basis[i]);
  // Basis independence: full column rank of the flattened basis.
  if (numerical_rank(d.basis_flat) != r)
    throw ConstructionError(d.name + ": algebra basis is not linearly independent");
  d.basis_pinv = (d.basis_flat.transpose() * d.basis_flat)
                     .ldlt()
                     .solve(d.basis_flat.transpose());
  if (!d.chart_norm) d.chart_norm = [](const Vec& c) { return c.norm(); };
}

Mat polar_rotation(const Mat& m) {
  // Nearest special-orthogonal matrix.
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat u = svd.matrixU();
  Mat v = svd.matrixV();
  Mat rot = u * v.transpose();
  if (rot.determinant() < 0) {
    u.col(u.cols() - 1) *= -1.0;
    rot = u * v.transpose();
  }
  return rot;
}

double rotation_defect(const Mat& m) {
  const int n = static_cast<int>(m.rows());
  double d = (m.transpose() * m - Mat::Identity(n, n)).cwiseAbs().maxCoeff();
  return std::max(d, std::abs(m.determinant() - 1.0));
}

double homogeneous_bottom_row_defect(const Mat& m) {
  const int n = static_cast<int>(m.rows());
  double d = std::abs(m(n - 1, n - 1) - 1.0);
  for (int j = 0; j + 1 < n; ++j) d = std::max(d, std::abs(m(n - 1, j)));
  return d;
}

GroupPtr make_shared_descriptor(GroupDescriptor d) {
  finalize_descriptor(d);
  return std::make_shared<const GroupDescriptor>(std::move(d));
}

Vec bounds(std::initializer_list<double> v) {
  Vec out(static_cast<int>(v.size()));
  int i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

}  // namespace

// --- Builtin descriptors ---------------------------------------------------

GroupPtr so2_group() {
  static const GroupPtr g = [] {
    GroupDescriptor d;
    d.name = "SO(2)";
    d.matrix_dim = 2;
    d.group_dim = 1;
    Mat j(2, 2);
    j << 0, -1, 1, 0;
    d.algebra_basis = {j};
    d.chart_radius = kPi - 0.1;
    d.sample_bounds = bounds({1.5});
    d.membership_defect = rotation_defect;
    d.project = polar_rotation;
    d.closed_form_exp = [](const Vec& c) {
      const double t = c(0);
      Mat m(2, 2);
      m << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
      return m;
    };
    return make_shared_descriptor(std::move(d));
  }();
  return g;
}

GroupPtr so3_group() {
  static const GroupPtr g = [] {
    GroupDescriptor d;
    d.name = "SO(3)";
    d.matrix_dim = 3;
    d.group_dim = 3;
    Mat l1 = Mat::Zero(3, 3), l2 = Mat::Zero(3, 3), l3 = Mat::Zero(3, 3);
    l1(1, 2) = -1, l1(2, 1) = 1;
    l2(0, 2) = 1, l2(2, 0) = -1;
    l3(0, 1) = -1, l3(1, 0) = 1;
    d.algebra_basis = {l1, l2, l3};
    d.chart_radius = kPi - 0.1;
    d.sample_bounds = bounds({0.8, 0.8, 0.8});
    d.membership_defect = rotation_defect;
    d.project = polar_rotation;
    d.closed_form_exp = [](const Vec& c) {
      // Rodrigues formula.
      const double theta = c.norm();
      Mat k = Mat::Zero(3, 3);
      k(0, 1) = -c(2), k(0, 2) = c(1), k(1, 0) = c(2);
      k(1, 2) = -c(0), k(2, 0) = -c(1), k(2, 1) = c(0);
      if (theta < 1e-12) return Mat(Mat::Identity(3, 3) + k);
      return Mat(Mat::Identity(3, 3) + (std::sin(theta) / theta) * k +
                 ((1.0 - std::cos(theta)) / (theta * theta)) * (k * k));
    };
    return make_shared_descriptor(std::move(d));
  }();
  return g;
}

GroupPtr translations_group(int m) {
  GroupDescriptor d;
  d.name = "T(" + std::to_string(m) + ")";
  d.matrix_dim = m + 1;
  d.group_dim = m;
  for (int i = 0; i < m; ++i) {
    Mat b = Mat::Zero(m + 1, m + 1);
    b(i, m) = 1.0;
    d.algebra_basis.push_back(b);
  }
  d.sample_bounds = Vec::Constant(m, 1.5);
  d.membership_defect = [m](const Mat& g) {
    double def = homogeneous_bottom_row_defect(g);
    const Mat block = g.topLeftCorner(m, m) - Mat::Identity(m, m);
    return std::max(def, block.cwiseAbs().maxCoeff());
  };
  d.project = [m](const Mat& g) {
    Mat out = Mat::Identity(m + 1, m + 1);
    out.topRightCorner(m, 1) = g.topRightCorner(m, 1);
    return out;
  };
  d.closed_form_exp = [m](const Vec& c) {
    Mat out = Mat::Identity(m + 1, m + 1);
    out.topRightCorner(m, 1) = c;
    return out;
  };
  return make_shared_descriptor(std::move(d));
}

GroupPtr se2_group() {
  static const GroupPtr g = [] {
    GroupDescriptor d;
    d.name = "SE(2)";
    d.matrix_dim = 3;
    d.group_dim = 3;
    Mat btheta = Mat::Zero(3, 3), bx = Mat::Zero(3, 3), by = Mat::Zero(3, 3);
    btheta(0, 1) = -1, btheta(1, 0) = 1;
    bx(0, 2) = 1;
    by(1, 2) = 1;
    d.algebra_basis = {btheta, bx, by};  // coords = (theta, ux, uy)
    d.chart_radius = kPi - 0.1;
    d.sample_bounds = bounds({1.3, 1.5, 1.5});
    d.chart_norm = [](const Vec& c) { return std::abs(c(0)); };
    d.membership_defect = [](const Mat& g) {
      double def = homogeneous_bottom_row_defect(g);
      return std::max(def, rotation_defect(g.topLeftCorner(2, 2)));
    };
    d.project = [](const Mat& g) {
      Mat out = Mat::Identity(3, 3);
      out.topLeftCorner(2, 2) = polar_rotation(g.topLeftCorner(2, 2));
      out.topRightCorner(2, 1) = g.topRightCorner(2, 1);
      return out;
    };
    d.closed_form_exp = [](const Vec& c) {
      const double th = c(0);
      Mat v(2, 2);
      if (std::abs(th) < 1e-12) {
        v = Mat::Identity(2, 2);
      } else {
        v << std::sin(th) / th, -(1.0 - std::cos(th)) / th,
            (1.0 - std::cos(th)) / th, std::sin(th) / th;
      }
      Mat out = Mat::Identity(3, 3);
      out(0, 0) = std::cos(th), out(0, 1) = -std::sin(th);
      out(1, 0) = std::sin(th), out(1, 1) = std::cos(th);
      out.topRightCorner(2, 1) = v * c.segment(1, 2);
      return out;
    };
    return make_shared_descriptor(std::move(d));
  }();
  return g;
}

GroupPtr axpb_group() {
  static const GroupPtr g = [] {
    GroupDescriptor d;
    d.name = "AxPlusB";
    d.matrix_dim = 2;
    d.group_dim = 2;
    Mat a = Mat::Zero(2, 2), b = Mat::Zero(2, 2);
    a(0, 0) = 1.0;  // scaling direction
    b(0, 1) = 1.0;  // translation direction
    d.algebra_basis = {a, b};
    d.sample_bounds = bounds({1.2, 1.5});
    d.membership_defect = [](const Mat& g) {
      double def = std::max(std::abs(g(1, 0)), std::abs(g(1, 1) - 1.0));
      if (g(0, 0) <= 0.0) def = std::max(def, 1.0 - g(0, 0));
      return def;
    };
    d.project = [](const Mat& g) {
      Mat out = g;
      out(1, 0) = 0.0;
      out(1, 1) = 1.0;
      return out;
    };
    d.closed_form_exp = [](const Vec& c) {
      const double alpha = c(0), beta = c(1);
      Mat out = Mat::Identity(2, 2);
      if (std::abs(alpha) < 1e-12) {
        out(0, 1) = beta;
      } else {
        out(0, 0) = std::exp(alpha);
        out(0, 1) = beta * (std::exp(alpha) - 1.0) / alpha;
      }
      return out;
    };
    return make_shared_descriptor(std::move(d));
  }();
  return g;
}

GroupPtr scaling_group(int m) {
  GroupDescriptor d;
  d.name = "Scaling(" + std::to_string(m) + ")";
  d.matrix_dim = m + 1;
  d.group_dim = 1;
  Mat s = Mat::Identity(m + 1, m + 1);
  s(m, m) = 0.0;
  d.algebra_basis = {s};
  d.sample_bounds = bounds({1.2});
  d.membership_defect = [m](const Mat& g) {
    double def = homogeneous_bottom_row_defect(g);
    const double s0 = g(0, 0);
    if (s0 <= 0.0) def = std::max(def, 1.0 - s0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        def = std::max(def, std::abs(g(i, j) - (i == j ? s0 : 0.0)));
    for (int i = 0; i < m; ++i) def = std::max(def, std::abs(g(i, m)));
    return def;
  };
  d.project = [m](const Mat& g) {
    double s0 = 0.0;
    for (int i = 0; i < m; ++i) s0 += g(i, i);
    s0 /= m;
    Mat out = Mat::Identity(m + 1, m + 1) * s0;
    out(m, m) = 1.0;
    return out;
  };
  d.closed_form_exp = [m](const Vec& c) {
    Mat out = Mat::Identity(m + 1, m + 1) * std::exp(c(0));
    out(m, m) = 1.0;
    return out;
  };
  return make_shared_descriptor(std::move(d));
}

// --- Element and algebra construction --------------------------------------

GroupElement make_element(const GroupPtr& group, const Mat& matrix) {
  if (!group) throw UsageError("make_element: null group descriptor");
  if (matrix.rows() != group->matrix_dim || matrix.cols() != group->matrix_dim)
    throw UsageError(group->name + ": wrong matrix dimensions");
  if (!matrix.allFinite()) throw UsageError(group->name + ": non-finite matrix entries");

  Mat m = matrix;
  const double tol = group->membership_tol;
  double defect = group->membership_defect(m);
  if (defect > tol / 10.0) {
    // Re-projection repairs accumulated drift, not arbitrary matrices: the
    // repaired element must stay close to the input.
    const Mat projected = group->project(m);
    if ((projected - m).norm() > 1e-6 * (1.0 + m.norm()))
      throw NumericalError(group->name + ": matrix violates group relations (defect " +
                           std::to_string(defect) + ")");
    m = projected;
    defect = group->membership_defect(m);
  }
  if (defect > tol)
    throw NumericalError(group->name + ": matrix violates group relations (defect " +
                         std::to_string(defect) + ")");
  if (std::abs(m.determinant()) <= tol)
    throw NumericalError(group->name + ": matrix is numerically singular");
  return GroupElement{group, std::move(m)};
}

GroupElement identity_element(const GroupPtr& group) {
  return GroupElement{group, Mat::Identity(group->matrix_dim, group->matrix_dim)};
}

Mat hat(const GroupPtr& group, const Vec& coords) {
  if (coords.size() != group->group_dim)
    throw UsageError(group->name + ": coordinate vector has wrong length");
  Mat out = Mat::Zero(group->matrix_dim, group->matrix_dim);
  for (int i = 0; i < group->group_dim; ++i) out += coords(i) * group->algebra_basis[i];
  return out;
}

Vec vee(const GroupPtr& group, const Mat& matrix) {
  return group->basis_pinv * vec_of(matrix);
}

AlgebraVector algebra_from_coords(const GroupPtr& group, const Vec& coords) {
  if (!coords.allFinite()) throw UsageError(group->name + ": non-finite coordinates");
  return AlgebraVector{group, hat(group, coords), coords};
}

AlgebraVector algebra_from_matrix(const GroupPtr& group, const Mat& matrix) {
  const Vec coords = vee(group, matrix);
  const double residual = (hat(group, coords) - matrix).norm();
  if (residual > group->membership_tol * (1.0 + matrix.norm()))
    throw UsageError(group->name + ": matrix is not in the algebra span (residual " +
                     std::to_string(residual) + ")");
  return AlgebraVector{group, hat(group, coords), coords};
}

// --- Group operations -------------------------------------------------------

namespace {
void require_same_group(const GroupElement& g, const GroupElement& h, const char* op) {
  if (!g.group->same_group_as(*h.group))
    throw UsageError(std::string(op) + ": elements of different groups (" + g.group->name +
                     " vs " + h.group->name + ")");
}
}  // namespace

GroupElement multiply(const GroupElement& g, const GroupElement& h) {
  require_same_group(g, h, "multiply");
  return make_element(g.group, g.matrix * h.matrix);
}

GroupElement inverse(const GroupElement& g) {
  const double det = g.matrix.determinant();
  if (std::abs(det) <= g.group->membership_tol)
    throw NumericalError(g.group->name + ": inverse of numerically singular element");
  return make_element(g.group, g.matrix.inverse());
}

GroupElement translate(const GroupElement& g, const GroupElement& h, TranslationSide side) {
  require_same_group(g, h, "translate");
  switch (side) {
    case TranslationSide::Left:
      return multiply(g, h);
    case TranslationSide::Right:
      return multiply(h, g);
    case TranslationSide::Conjugate:
      return make_element(g.group, g.matrix * h.matrix * g.matrix.inverse());
  }
  throw UsageError("translate: bad side");
}

GroupElement group_exp(const AlgebraVector& v, double t) {
  if (!std::isfinite(t)) throw UsageError("group_exp: non-finite time");
  if (!v.matrix.allFinite()) throw UsageError("group_exp: non-finite algebra vector");
  return make_element(v.group, expm(t * v.matrix));
}

GroupElement chart_point(const Vec& coords, const GroupElement& center) {
  if (!coords.allFinite()) throw UsageError("chart_point: non-finite coordinates");
  return make_element(center.group, center.matrix * expm(hat(center.group, coords)));
}

Vec chart_coords(const GroupElement& g, const GroupElement& center) {
  require_same_group(g, center, "chart_coords");
  const GroupPtr& d = g.group;
  Mat rel = center.matrix.inverse() * g.matrix;
  Mat log_rel;
  try {
    log_rel = logm(rel);
  } catch (const NumericalError&) {
    throw ChartDomainError(d->name + ": element outside chart injectivity domain");
  }
  const Vec coords = vee(d, log_rel);
  if ((hat(d, coords) - log_rel).norm() > 1e-8 * (1.0 + log_rel.norm()))
    throw ChartDomainError(d->name + ": logarithm not in the algebra span");
  if (d->chart_norm(coords) >= d->chart_radius)
    throw ChartDomainError(d->name + ": element outside chart injectivity radius");
  // Round-trip guard against a wrong logarithm branch.
  if ((center.matrix * expm(hat(d, coords)) - g.matrix).norm() >
      1e-9 * (1.0 + g.matrix.norm()))
    throw ChartDomainError(d->name + ": chart round trip failed");
  return coords;
}

Mat adjoint_matrix(const GroupElement& g) {
  const GroupPtr& d = g.group;
  const Mat ginv = g.matrix.inverse();
  Mat ad(d->group_dim, d->group_dim);
  for (int i = 0; i < d->group_dim; ++i)
    ad.col(i) = vee(d, g.matrix * d->algebra_basis[i] * ginv);
  return ad;
}

GroupElement random_element(const GroupPtr& group, SplitMix64& rng) {
  Vec c(group->group_dim);
  for (int i = 0; i < group->group_dim; ++i)
    c(i) = rng.uniform(-group->sample_bounds(i), group->sample_bounds(i));
  return chart_point(c, identity_element(group));
}

GroupElement random_element_away_from_identity(const GroupPtr& group, SplitMix64& rng,
                                               double min_chart_norm) {
  for (int attempt = 0; attempt < 256; ++attempt) {
    Vec c(group->group_dim);
    for (int i = 0; i < group->group_dim; ++i)
      c(i) = rng.uniform(-group->sample_bounds(i), group->sample_bounds(i));
    if (group->chart_norm(c) > min_chart_norm) return chart_point(c, identity_element(group));
  }
  throw NumericalError(group->name + ": could not sample away from identity");
}

AlgebraVector random_algebra(const GroupPtr& group, SplitMix64& rng) {
  Vec c(group->group_dim);
  for (int i = 0; i < group->group_dim; ++i) c(i) = rng.uniform(-1.0, 1.0);
  return algebra_from_coords(group, c);
}

// --- Closed-form logs --------------------------------------------------------

double so2_log_angle(const Mat& rotation) {
  return std::atan2(rotation(1, 0), rotation(0, 0));
}

Vec so3_log(const Mat& r) {
  const double cos_theta = std::min(1.0, std::max(-1.0, (r.trace() - 1.0) / 2.0));
  const double theta = std::acos(cos_theta);
  Vec axis(3);
  if (theta < 1e-10) {
    axis << 0.5 * (r(2, 1) - r(1, 2)), 0.5 * (r(0, 2) - r(2, 0)), 0.5 * (r(1, 0) - r(0, 1));
    return axis;  // first-order log near the identity
  }
  if (kPi - theta > 1e-6) {
    axis << r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1);
    axis *= theta / (2.0 * std::sin(theta));
    return axis;
  }
  // Near angle pi the antisymmetric part vanishes; recover the axis from
  // the symmetric part and fix the sign by the first nonzero component.
  const Mat b = 0.5 * (r + Mat::Identity(3, 3));
  axis << std::sqrt(std::max(0.0, b(0, 0))), std::sqrt(std::max(0.0, b(1, 1))),
      std::sqrt(std::max(0.0, b(2, 2)));
  // Off-diagonal signs relative to the largest component.
  int k = 0;
  b.diagonal().maxCoeff(&k);
  for (int i = 0; i < 3; ++i) {
    if (i != k && b(k, i) < 0) axis(i) = -axis(i);
  }
  for (int i = 0; i < 3; ++i) {
    if (std::abs(axis(i)) > 1e-12) {
      if (axis(i) < 0) axis = -axis;
      break;
    }
  }
  return theta * axis;
}

}  // namespace orbitlab
