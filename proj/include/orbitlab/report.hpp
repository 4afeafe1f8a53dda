#pragma once

#include <string>

#include "orbitlab/suites.hpp"

namespace orbitlab {

/// Fixed-key-order JSON with floats printed to 17 significant digits, so
/// identical (config, version) pairs produce identical bytes.
std::string render_report_json(const Report& report);

void write_report_file(const Report& report, const std::string& path);

/// Flat "key = value" config format with '#' comments. Recognized keys:
/// actions, suites, trials, seed, fd_step, tol_fd, tol_analytic, report.
RunConfig parse_config_file(const std::string& path);

std::string format_double17(double value);

}  // namespace orbitlab
