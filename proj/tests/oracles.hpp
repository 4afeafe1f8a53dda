#pragma once

// Closed-form references used as independent oracles. Everything here is
// written directly from the textbook formulas and deliberately avoids the
// library's exponential/logarithm/Jacobian code paths.

#include <cmath>
#include <functional>

#include <Eigen/Dense>

namespace oracles {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

inline Mat rot2(double theta) {
  Mat m(2, 2);
  m << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return m;
}

inline Mat rot3(const Eigen::Vector3d& axis_angle) {
  const double theta = axis_angle.norm();
  Mat k = Mat::Zero(3, 3);
  k(0, 1) = -axis_angle(2), k(0, 2) = axis_angle(1);
  k(1, 0) = axis_angle(2), k(1, 2) = -axis_angle(0);
  k(2, 0) = -axis_angle(1), k(2, 1) = axis_angle(0);
  if (theta < 1e-14) return Mat::Identity(3, 3) + k;
  return Mat::Identity(3, 3) + (std::sin(theta) / theta) * k +
         ((1.0 - std::cos(theta)) / (theta * theta)) * (k * k);
}

inline Mat translation(const Vec& t) {
  const int m = static_cast<int>(t.size());
  Mat g = Mat::Identity(m + 1, m + 1);
  g.topRightCorner(m, 1) = t;
  return g;
}

inline Mat se2(double theta, double tx, double ty) {
  Mat g = Mat::Identity(3, 3);
  g.topLeftCorner(2, 2) = rot2(theta);
  g(0, 2) = tx;
  g(1, 2) = ty;
  return g;
}

inline Mat axpb(double a, double b) {
  Mat g(2, 2);
  g << a, b, 0.0, 1.0;
  return g;
}

inline Mat scaling2(double s) {
  Mat g = Mat::Identity(3, 3) * s;
  g(2, 2) = 1.0;
  return g;
}

// Composition law of x -> a x + b solved for the inverse: the element
// (1/a, -b/a) undoes (a, b).
inline std::pair<double, double> axpb_inverse(double a, double b) {
  return {1.0 / a, -b / a};
}

// Independent central-difference Jacobian of f: R^n -> R^m.
inline Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& at,
                       double step = 1e-6) {
  const Vec f0 = f(at);
  Mat jac(f0.size(), at.size());
  Vec x = at;
  for (int i = 0; i < at.size(); ++i) {
    x(i) = at(i) + step;
    const Vec plus = f(x);
    x(i) = at(i) - step;
    const Vec minus = f(x);
    x(i) = at(i);
    jac.col(i) = (plus - minus) / (2.0 * step);
  }
  return jac;
}

}  // namespace oracles
