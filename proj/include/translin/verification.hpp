#pragma once

#include "translin/montecarlo.hpp"

#include <cstdint>

namespace translin {
namespace montecarlo {

/// Monte Carlo checks of the projection, inverse-Wishart, chi-square and
/// singular-value facts the closed forms rest on. One row per identity.
Report verify_lemma_suite(std::uint64_t seed, int draws = 10000);

/// Exactness of the underparameterized transferring-error formula
/// (expected value 5/89 at p=5, p1=5, n1=100, sigma1=1).
Report verify_transfer_error_exact(std::uint64_t seed, int replicates = 10000, int threads = 1);

/// Exactness of the overparameterized noise term with an all-zero truth
/// (expected value 500/6490 at p=10, p1=100, n1=50, sigma1=1).
Report verify_noise_term_exact(std::uint64_t seed, int replicates = 10000, int threads = 1);

/// Option A/B model-error formulas with the transferring error forced to
/// zero, across a five-point p2 grid.
Report verify_option_exactness(std::uint64_t seed, int replicates = 10000, int threads = 1);

/// All of the above in one report.
Report verify_exactness(std::uint64_t seed, int replicates = 10000, int threads = 1);

/// Upper-bound checks of the noiseless transferring error against
/// min(b1^2, b2^2, b3^2) on the tightness-figure configurations.
Report verify_transfer_bounds(std::uint64_t seed, int replicates = 600, int threads = 1);

/// Empirical descent-floor locations against the derivative-lemma formulas.
Report verify_descent_floors(std::uint64_t seed, int replicates = 3000, int threads = 1);

/// Monotonicity of the transferring error in p at a fixed feature budget.
Report verify_budget_monotonicity(std::uint64_t seed, int replicates = 10000, int threads = 1);

/// Sample-transfer decomposition expectations, similarity-interval coverage,
/// and the fine-tuned bias term.
Report verify_sample_transfer(std::uint64_t seed, int replicates = 1500, int threads = 1);

/// The discussion insights rendered as sign/ordering tests on sweep output.
Report insight_checks(std::uint64_t seed, int replicates = 200, int threads = 1);

/// Regime-wise orderings of the figure presets (reduced grids, 200 runs per
/// point).
Report verify_figures(std::uint64_t seed, int threads = 1);

}  // namespace montecarlo
}  // namespace translin
