#include "orbitlab/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "orbitlab/errors.hpp"

namespace orbitlab {

namespace {

constexpr const char* kToolVersion = "0.1.0";

std::string escape_json(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 8);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

void append_string_list(std::ostringstream& out, const std::vector<std::string>& items) {
  out << "[";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out << ", ";
    out << '"' << escape_json(items[i]) << '"';
  }
  out << "]";
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream stream(s);
  while (std::getline(stream, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

std::string format_double17(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::string render_report_json(const Report& report) {
  std::ostringstream out;
  const RunConfig& cfg = report.config;
  out << "{\n";
  out << "  \"tool\": \"orbitlab\",\n";
  out << "  \"version\": \"" << kToolVersion << "\",\n";
  out << "  \"rng\": \"" << escape_json(report.rng_id) << "\",\n";
  out << "  \"config\": {\n";
  out << "    \"actions\": ";
  append_string_list(out, cfg.action_ids);
  out << ",\n    \"suites\": ";
  append_string_list(out, cfg.suites);
  out << ",\n    \"trials\": " << cfg.trials;
  out << ",\n    \"seed\": " << cfg.seed;
  out << ",\n    \"fd_step\": " << format_double17(cfg.fd_step);
  out << ",\n    \"tol_fd\": " << format_double17(cfg.tol_fd);
  out << ",\n    \"tol_analytic\": " << format_double17(cfg.tol_analytic);
  out << ",\n    \"report_path\": \"" << escape_json(cfg.report_path) << "\"\n";
  out << "  },\n";
  out << "  \"results\": [";
  for (std::size_t i = 0; i < report.results.size(); ++i) {
    const SuiteResult& suite = report.results[i];
    out << (i ? ",\n" : "\n");
    out << "    {\"action\": \"" << escape_json(suite.action) << "\", \"suite\": \""
        << escape_json(suite.suite) << "\", \"checks\": [";
    for (std::size_t j = 0; j < suite.checks.size(); ++j) {
      const CheckResult& c = suite.checks[j];
      out << (j ? ",\n" : "\n");
      out << "      {\"check_name\": \"" << escape_json(c.check_name) << "\", "
          << "\"paper_ref\": \"" << escape_json(c.paper_ref) << "\", "
          << "\"samples\": " << c.samples << ", "
          << "\"max_residual\": " << format_double17(c.max_residual) << ", "
          << "\"tolerance\": " << format_double17(c.tolerance) << ", "
          << "\"comparison\": \""
          << (c.comparison == Comparison::Below ? "below" : "above") << "\", "
          << "\"pass\": " << (c.pass ? "true" : "false") << "}";
    }
    out << "\n    ]}";
  }
  out << "\n  ],\n";
  out << "  \"overall_pass\": " << (report.overall_pass ? "true" : "false") << "\n";
  out << "}\n";
  return out.str();
}

void write_report_file(const Report& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << render_report_json(report);
  if (!out.good()) throw IoError("write failure on " + path);
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  RunConfig cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "actions") {
        cfg.action_ids = split_list(value);
      } else if (key == "suites") {
        cfg.suites = split_list(value);
      } else if (key == "trials") {
        cfg.trials = std::stoi(value);
      } else if (key == "seed") {
        cfg.seed = std::stoull(value);
      } else if (key == "fd_step") {
        cfg.fd_step = std::stod(value);
      } else if (key == "tol_fd") {
        cfg.tol_fd = std::stod(value);
      } else if (key == "tol_analytic") {
        cfg.tol_analytic = std::stod(value);
      } else if (key == "report") {
        cfg.report_path = value;
      } else {
        throw ConfigError(path + ":" + std::to_string(line_no) + ": unknown key '" + key +
                          "'");
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": bad value for '" + key +
                        "'");
    }
  }
  return cfg;
}

}  // namespace orbitlab
