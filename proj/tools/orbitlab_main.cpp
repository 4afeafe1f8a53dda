#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "orbitlab/action.hpp"
#include "orbitlab/errors.hpp"
#include "orbitlab/report.hpp"
#include "orbitlab/suites.hpp"

namespace {

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream stream(s);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int run_verify(const std::string& config_path, const std::string& actions,
               const std::string& suites, int trials, bool trials_set,
               unsigned long long seed, bool seed_set, double tol, bool tol_set,
               double tol_analytic, bool tol_analytic_set, const std::string& report_path) {
  orbitlab::RunConfig cfg;
  if (!config_path.empty()) cfg = orbitlab::parse_config_file(config_path);
  if (!actions.empty()) cfg.action_ids = split_commas(actions);
  if (!suites.empty()) cfg.suites = split_commas(suites);
  if (trials_set) cfg.trials = trials;
  if (seed_set) cfg.seed = seed;
  if (tol_set) cfg.tol_fd = tol;
  if (tol_analytic_set) cfg.tol_analytic = tol_analytic;
  if (!report_path.empty()) cfg.report_path = report_path;

  const orbitlab::Report report = orbitlab::run_suite(cfg);
  for (const orbitlab::SuiteResult& suite : report.results) {
    int failed = 0;
    for (const orbitlab::CheckResult& check : suite.checks)
      if (!check.pass) ++failed;
    std::printf("%-4s %s / %s (%zu checks)\n", failed ? "FAIL" : "ok",
                suite.action.c_str(), suite.suite.c_str(), suite.checks.size());
    for (const orbitlab::CheckResult& check : suite.checks) {
      if (!check.pass)
        std::printf("     failed: %s [%s] residual %s vs %s\n", check.check_name.c_str(),
                    check.paper_ref.c_str(),
                    orbitlab::format_double17(check.max_residual).c_str(),
                    orbitlab::format_double17(check.tolerance).c_str());
    }
  }
  std::printf("%s: report written to %s (%.2fs)\n",
              report.overall_pass ? "PASS" : "FAIL", report.config.report_path.c_str(),
              report.wall_seconds);
  return report.overall_pass ? 0 : 1;
}

int run_orbit(const std::string& action_id, const std::string& point_csv, int n,
              unsigned long long seed, const std::string& out_path) {
  const orbitlab::ActionPtr spec = orbitlab::make_builtin_action(action_id);
  const std::vector<std::string> parts = split_commas(point_csv);
  if (static_cast<int>(parts.size()) != spec->manifold_dim)
    throw orbitlab::ConfigError("--point needs " + std::to_string(spec->manifold_dim) +
                                " coordinates for " + action_id);
  orbitlab::Vec coords(spec->manifold_dim);
  for (int i = 0; i < spec->manifold_dim; ++i) coords(i) = std::stod(parts[i]);
  const orbitlab::Point x = orbitlab::make_point(*spec, coords);
  const std::vector<orbitlab::Point> samples = orbitlab::orbit_sample(*spec, x, n, seed);
  orbitlab::write_orbit_csv(out_path, *spec, samples);
  std::printf("wrote %zu orbit samples to %s\n", samples.size(), out_path.c_str());
  return 0;
}

int run_list(bool machine) {
  for (const std::string& id : orbitlab::builtin_action_ids()) {
    if (machine) {
      std::printf("%s\n", id.c_str());
      continue;
    }
    const orbitlab::ActionPtr spec = orbitlab::make_builtin_action(id);
    std::printf("%-24s group=%-12s dim(G)=%d dim(M)=%d%s%s%s\n", id.c_str(),
                spec->group->name.c_str(), spec->group->group_dim, spec->manifold_dim,
                spec->known_free ? " free" : "", spec->known_regular ? " regular" : "",
                spec->known_transitive ? " transitive" : "");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"orbitlab: numerical checks for Lie group actions on manifolds"};
  app.require_subcommand(1);

  auto* verify = app.add_subcommand("verify", "run property suites and write a JSON report");
  std::string config_path, actions, suites, report_path;
  int trials = 500;
  unsigned long long seed = 42;
  double tol = 1e-6, tol_analytic = 1e-9;
  verify->add_option("--config", config_path, "config file (key = value lines)");
  verify->add_option("--actions", actions, "comma-separated action ids");
  verify->add_option("--suites", suites, "comma-separated suite names");
  auto* trials_opt = verify->add_option("--trials", trials, "samples per check");
  auto* seed_opt = verify->add_option("--seed", seed, "RNG seed");
  auto* tol_opt = verify->add_option("--tol", tol, "finite-difference tolerance");
  auto* tol_an_opt = verify->add_option("--tol-analytic", tol_analytic, "analytic tolerance");
  verify->add_option("--report", report_path, "report output path");

  auto* orbit = app.add_subcommand("orbit", "export seeded orbit samples as CSV");
  std::string orbit_action, orbit_point, orbit_out;
  int orbit_n = 100;
  unsigned long long orbit_seed = 42;
  orbit->add_option("--action", orbit_action, "action id")->required();
  orbit->add_option("--point", orbit_point, "start point, comma-separated")->required();
  orbit->add_option("--n", orbit_n, "number of samples");
  orbit->add_option("--seed", orbit_seed, "RNG seed");
  orbit->add_option("--out", orbit_out, "output CSV path")->required();

  auto* list = app.add_subcommand("list-actions", "list builtin action ids");
  bool machine = false;
  list->add_flag("--machine", machine, "one id per line, no decoration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  }

  try {
    if (verify->parsed())
      return run_verify(config_path, actions, suites, trials, trials_opt->count() > 0, seed,
                        seed_opt->count() > 0, tol, tol_opt->count() > 0, tol_analytic,
                        tol_an_opt->count() > 0, report_path);
    if (orbit->parsed())
      return run_orbit(orbit_action, orbit_point, orbit_n, orbit_seed, orbit_out);
    if (list->parsed()) return run_list(machine);
  } catch (const orbitlab::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const orbitlab::UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const orbitlab::IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
