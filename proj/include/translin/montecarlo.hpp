#pragma once

#include "translin/pipeline.hpp"
#include "translin/theory.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace translin {
namespace montecarlo {

enum class TransferMethod { OptionA, OptionB, SampleTransfer, SampleTransferFineTuned };

/// What each replicate measures: the target model error L, or the realized
/// transferring error ||w2 - w~1||^2 of step 1 alone.
enum class Quantity { ModelError, TransferError };

enum class SweepVariable { P, P1, P2, N1, N2, Sigma1, Sigma2 };

const char* to_string(TransferMethod m);
const char* to_string(Quantity q);
const char* to_string(SweepVariable v);

struct SweepSpec {
  SweepVariable variable = SweepVariable::P1;
  std::vector<double> grid;
  int replicates = 100;
  std::uint64_t master_seed = 0;
  TransferMethod method = TransferMethod::OptionA;
  Quantity quantity = Quantity::ModelError;
  int threads = 1;

  void validate() const;
};

/// One grid point of a sweep: empirical aggregate plus the matching theory
/// value. The theory field is absent at threshold points (and wherever the
/// closed forms decline to evaluate).
struct SweepRecord {
  double value = 0.0;
  Regime regime = Regime::Threshold;
  double empirical_mean = 0.0;
  double empirical_se = 0.0;
  std::optional<double> term1_mean, term2_mean;
  std::optional<theory::TheoryResult> theory;
  // Per-point noiseless-bias bound values, populated for overparameterized
  // transfer-error sweeps (the tightness figure plots them).
  std::optional<theory::BiasBounds> bias_bounds;
};

/// Deterministic given the master seed, regardless of thread count: every
/// (point, replicate) pair draws from its own derived stream and results are
/// reduced in replicate order.
std::vector<SweepRecord> run_sweep(const SweepSpec& spec, const GroundTruth& gt,
                                   const LearnerConfig& cfg);

struct ReplicateResult {
  double value = 0.0;
  std::optional<double> term1, term2;
};

/// One Monte Carlo replicate of the full procedure selected by
/// (method, quantity). Exposed so callers can pair streams across configs.
ReplicateResult run_replicate(const ExtendedTruth& truth, const LearnerConfig& cfg,
                              TransferMethod method, Quantity quantity, Rng& rng);

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
  int count = 0;
};

/// Compensated mean and standard error; order-independent to rounding noise.
MeanSe aggregate(std::span<const double> values);

struct ExactCheck {
  bool pass = false;
  double z = 0.0;
};

/// Pass iff |empirical mean - exact theory value| <= 3 SE.
ExactCheck check_exact(const SweepRecord& record);

/// Pass iff the empirical mean lies in [lower - slack*SE, upper + slack*SE].
bool check_bounds(const SweepRecord& record, double slack);

/// Plain-text verification report.
struct CheckRow {
  std::string name;
  double measured = 0.0;
  double reference = 0.0;
  std::string criterion;  // human-readable comparison, e.g. "within 3 SE"
  bool pass = false;
};

struct Report {
  std::string title;
  std::vector<CheckRow> rows;
  bool all_pass() const;
};

void print_report(const Report& report, std::ostream& os);

}  // namespace montecarlo
}  // namespace translin
