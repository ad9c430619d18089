// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion drives the library end to end at its stated
// replicate count and tolerance.

#include "translin/verification.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <vector>

using namespace translin;
using montecarlo::Report;

namespace {

int hardware_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 2 : static_cast<int>(hw);
}

struct Criterion {
  int number;
  std::string label;
  std::function<Report()> run;
  double max_seconds;  // 0 = no runtime requirement
};

bool run_criterion(const Criterion& c) {
  const auto start = std::chrono::steady_clock::now();
  const Report report = c.run();
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  bool pass = report.all_pass();
  std::string note;
  if (c.max_seconds > 0.0 && elapsed > c.max_seconds) {
    pass = false;
    note = " [runtime " + std::to_string(elapsed) + "s exceeds " +
           std::to_string(c.max_seconds) + "s]";
  }
  std::printf("[%s] criterion %d: %s (%.1fs)%s\n", pass ? "PASS" : "FAIL", c.number,
              c.label.c_str(), elapsed, note.c_str());
  for (const auto& row : report.rows) {
    if (!row.pass)
      std::printf("       failed: %s: measured %.6g, reference %.6g (%s)\n", row.name.c_str(),
                  row.measured, row.reference, row.criterion.c_str());
  }
  return pass;
}

}  // namespace

int main() {
  const std::uint64_t seed = 20260810;
  const int threads = hardware_threads();
  using namespace montecarlo;

  const std::vector<Criterion> criteria = {
      {1, "underparameterized transferring error matches 5/89",
       [&] { return verify_transfer_error_exact(seed, 10000, threads); }, 10.0},
      {2, "overparameterized noise term matches 500/6490",
       [&] { return verify_noise_term_exact(seed, 10000, threads); }, 0.0},
      {3, "option A/B errors with zero transferring error across a p2 grid",
       [&] { return verify_option_exactness(seed, 10000, threads); }, 0.0},
      {4, "noiseless transferring error stays under min(b1^2,b2^2,b3^2)",
       [&] { return verify_transfer_bounds(seed, 600, threads); }, 0.0},
      {5, "random-matrix lemma suite",
       [&] { return verify_lemma_suite(seed, 10000); }, 60.0},
      {6, "descent-floor locations match the derivative lemmas",
       [&] { return verify_descent_floors(seed, 3000, threads); }, 0.0},
      {7, "transferring error non-decreasing in p at fixed budget",
       [&] { return verify_budget_monotonicity(seed, 10000, threads); }, 0.0},
      {8, "discussion insights hold as ordering tests",
       [&] { return insight_checks(seed, 200, threads); }, 0.0},
      {9, "sample-transfer decomposition matches its expectations",
       [&] { return verify_sample_transfer(seed, 1500, threads); }, 0.0},
      {10, "figure presets reproduce the described regime-wise features",
       [&] { return verify_figures(seed, threads); }, 0.0},
  };

  int failures = 0;
  for (const Criterion& c : criteria)
    if (!run_criterion(c)) ++failures;

  if (failures == 0) {
    std::printf("all %zu criteria passed\n", criteria.size());
    return 0;
  }
  std::printf("%d criteria FAILED\n", failures);
  return 1;
}
