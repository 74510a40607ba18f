// Acceptance gate: runs each criterion with the default configuration and
// prints one PASS/FAIL line per criterion, including its wall-clock limit.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "pam/selftest.hpp"

#ifndef PAM_CLI
#error "PAM_CLI must name the pam executable"
#endif
#ifndef PAM_FIXTURES
#error "PAM_FIXTURES must name the fixtures directory"
#endif

namespace {

struct Criterion {
  int id;
  std::string title;
  std::vector<std::string> suites;
  double limit_s;
};

int cli_exit(const std::string& args) {
  const std::string cmd = std::string("\"") + PAM_CLI + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// Each corrupted fixture must make its verb exit with code 2.
std::vector<std::string> mutation_cli_failures() {
  const std::string dir = std::string(PAM_FIXTURES) + "/mutations/";
  const std::vector<std::pair<std::string, std::string>> cases{
      {"perturbed c_k", "stochastic verify --xi \"" + dir + "xi_perturbed_c.json\" --max-level 2"},
      {"perturbed measure atom", "stochastic verify --xi \"" + dir + "xi_perturbed_measure_atom.json\" --max-level 1"},
      {"transposed matrix entry", "trace --matrix \"" + dir + "matrix_transposed_entry.json\""},
  };
  std::vector<std::string> bad;
  for (const auto& [name, args] : cases) {
    const int code = cli_exit(args);
    if (code != 2) bad.push_back(name + ": exit " + std::to_string(code) + ", expected 2");
  }
  return bad;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "ultrametric axioms", {"ultrametric"}, 1},
      {2, "N_mu characterizes ||A||_mu", {"n-characterization"}, 5},
      {3, "exhaustive M-conditions", {"m-conditions"}, 10},
      {4, "stochastic integral isometry", {"isometry"}, 30},
      {5, "weighted measure roundtrip", {"weighted-roundtrip"}, 10},
      {6, "stochastic Fubini", {"stochastic-fubini"}, 30},
      {7, "product measure Fubini and N-product", {"product"}, 10},
      {8, "trace suite", {"trace"}, 5},
      {9, "characters and characteristic functionals", {"characters"}, 20},
      {10, "spectral roundtrip", {"spectral"}, 60},
      {11, "mutation sensitivity", {"mutation"}, 10},
  };
  const pam::selftest::Config cfg;
  bool all = true;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::string> failures;
    std::size_t cases = 0;
    for (const std::string& s : c.suites) {
      for (const auto& r : pam::selftest::run_suite(s, cfg)) {
        cases += r.cases;
        if (!r.pass) failures.push_back(r.name + ": " + r.detail);
      }
    }
    if (c.id == 11) {
      for (const std::string& f : mutation_cli_failures()) failures.push_back(f);
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (dt > c.limit_s) failures.push_back("took " + std::to_string(dt) + " s");
    const bool pass = failures.empty();
    all = all && pass;
    std::printf("criterion %2d %-44s %s  %7.3f s (limit %g s, %zu checks)\n", c.id, c.title.c_str(),
                pass ? "PASS" : "FAIL", dt, c.limit_s, cases);
    for (const std::string& f : failures) std::printf("    %s\n", f.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
