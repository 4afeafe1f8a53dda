#pragma once

#include <Eigen/Dense>

namespace orbitlab {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

/// Which differentiation path to use where both exist. Analytic falls
/// back to central differences when no closed-form Jacobian is attached.
enum class DiffMode { Analytic, FiniteDiff };

/// Matrix exponential by scaling-and-squaring with a Taylor series run
/// to machine precision.
Mat expm(const Mat& a);

/// Principal matrix logarithm by inverse scaling-and-squaring:
/// repeated Denman-Beavers square roots until close to identity, then a
/// Mercator series. Valid for matrices with no eigenvalues on the closed
/// negative real axis; throws NumericalError when the iteration stalls.
Mat logm(const Mat& a);

/// Square root via the Denman-Beavers iteration.
Mat sqrtm(const Mat& a);

/// Numerical rank with a scale-aware threshold: singular values above
/// rank_tol_factor * (sigma_max + 1) count.
int numerical_rank(const Mat& a, double rank_tol_factor = 1e-7);

/// Column-major flattening and its inverse.
inline Vec vec_of(const Mat& m) { return Eigen::Map<const Vec>(m.data(), m.size()); }
inline Mat mat_of(const Vec& v, int rows, int cols) {
  return Eigen::Map<const Mat>(v.data(), rows, cols);
}

/// Central-difference step scaled to the magnitude of the base point.
inline double fd_scaled_step(double base_scale, double step = 1e-6) {
  return step * (1.0 + base_scale);
}

}  // namespace orbitlab
