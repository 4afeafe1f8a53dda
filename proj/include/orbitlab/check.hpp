#pragma once

#include <string>
#include <vector>

namespace orbitlab {

/// One verified identity. Most checks pass when the residual stays below
/// the tolerance; lower-bound checks (freeness defects, separation,
/// deliberate non-invariance witnesses) pass when the statistic exceeds it.
enum class Comparison { Below, Above };

struct CheckResult {
  std::string check_name;
  std::string paper_ref;
  int samples = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  Comparison comparison = Comparison::Below;
  bool pass = false;
};

inline CheckResult make_check(std::string name, std::string ref, int samples,
                              double residual, double tolerance,
                              Comparison cmp = Comparison::Below) {
  CheckResult c;
  c.check_name = std::move(name);
  c.paper_ref = std::move(ref);
  c.samples = samples;
  c.max_residual = residual;
  c.tolerance = tolerance;
  c.comparison = cmp;
  c.pass = (cmp == Comparison::Below) ? residual < tolerance : residual > tolerance;
  return c;
}

}  // namespace orbitlab
