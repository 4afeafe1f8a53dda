#include "orbitlab/numeric.hpp"

#include <cmath>

#include "orbitlab/errors.hpp"

namespace orbitlab {

Mat expm(const Mat& a) {
  const int n = static_cast<int>(a.rows());
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();  // inf-norm
  int squarings = 0;
  if (norm > 0.5) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  }
  const double scale = std::ldexp(1.0, -squarings);
  const Mat b = a * scale;

  Mat term = Mat::Identity(n, n);
  Mat sum = term;
  for (int k = 1; k <= 40; ++k) {
    term = term * b / static_cast<double>(k);
    sum += term;
    if (term.norm() <= 1e-18 * sum.norm()) break;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

Mat sqrtm(const Mat& a) {
  const int n = static_cast<int>(a.rows());
  Mat y = a;
  Mat z = Mat::Identity(n, n);
  for (int it = 0; it < 60; ++it) {
    const Mat yn = 0.5 * (y + z.inverse());
    const Mat zn = 0.5 * (z + y.inverse());
    const double delta = (yn - y).norm();
    y = yn;
    z = zn;
    if (delta <= 1e-15 * (1.0 + y.norm())) return y;
  }
  throw NumericalError("matrix square root iteration did not converge");
}

Mat logm(const Mat& a) {
  const int n = static_cast<int>(a.rows());
  const Mat eye = Mat::Identity(n, n);
  Mat b = a;
  int halvings = 0;
  while ((b - eye).norm() > 0.3) {
    if (++halvings > 60)
      throw NumericalError("matrix logarithm: square-root stage did not contract");
    b = sqrtm(b);
  }
  const Mat x = b - eye;
  Mat power = x;
  Mat sum = x;
  for (int k = 2; k <= 60; ++k) {
    power = power * x;
    const Mat term = power * (((k % 2) ? 1.0 : -1.0) / static_cast<double>(k));
    sum += term;
    if (term.norm() <= 1e-18 * (1.0 + sum.norm())) break;
  }
  return std::ldexp(1.0, halvings) * sum;
}

int numerical_rank(const Mat& a, double rank_tol_factor) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(a);
  const Vec sv = svd.singularValues();
  const double tol = rank_tol_factor * (sv.size() > 0 ? sv(0) + 1.0 : 1.0);
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol) ++rank;
  }
  return rank;
}

}  // namespace orbitlab
