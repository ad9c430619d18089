#pragma once

#include "translin/model.hpp"
#include "translin/types.hpp"

#include <optional>

namespace translin {
namespace theory {

/// Scalar summary of a scenario; the closed forms depend on the truth only
/// through these norms and counts. sigma1/sigma2 are the effective noise
/// levels (they already include any sacrificed-feature power).
struct ScenarioParams {
  double norm_w1 = 0.0, norm_w2 = 0.0;
  double norm_q1 = 0.0, norm_q2 = 0.0;
  double delta = 0.0;   // ||w2 - w1||
  double sigma1 = 0.0, sigma2 = 0.0;
  int p = 0, p1 = 0, p2 = 0;
  int n1 = 0, n2 = 0;

  /// Overparameterization ratio r = 1 - n1/(p + p1) of the source fit.
  double overparam_ratio() const;
  int pooled_samples() const { return n1 + n2; }

  /// Triangle inequality and sign checks; throws std::invalid_argument.
  void validate() const;

  static ScenarioParams from(const GroundTruth& gt, const LearnerConfig& cfg,
                             const Sacrifice& sacrifice = {});
};

/// Either an exact expected value or a [lower, upper] interval, tagged with
/// the regime the formula was evaluated in. term1/term2 carry the named
/// per-term split where the formulas define one.
struct TheoryResult {
  enum class Kind { Exact, Bounds };
  Kind kind = Kind::Exact;
  double value = 0.0;            // Exact only
  double lower = 0.0, upper = 0.0;  // Bounds only
  Regime regime = Regime::Underparameterized;
  std::optional<double> term1, term2;

  bool is_exact() const { return kind == Kind::Exact; }
  double midpoint() const { return is_exact() ? value : 0.5 * (lower + upper); }

  static TheoryResult exact(double v, Regime r);
  static TheoryResult bounds(double lo, double hi, Regime r);
};

/// Noise contribution to the overparameterized transferring error:
/// p/(p+p1) * n1 sigma1^2 / (p+p1-n1-1). Requires p+p1 > n1+1.
double bnoise(const ScenarioParams& sp);

/// The three upper bounds on the noiseless transferring error in the
/// overparameterized source regime.
struct BiasBounds {
  double b1 = 0.0, b2 = 0.0, b3 = 0.0;
  double min_squared() const;
};
BiasBounds bias_bounds(const ScenarioParams& sp);

/// Transferring error L_co: exact when the source fit is underparameterized,
/// an interval [bnoise, min_i bi^2 + bnoise] when overparameterized.
TheoryResult transferring_error(const ScenarioParams& sp);

/// Expected target model error when the learned common part is copied
/// verbatim (Option A), given the transferring error lco.
TheoryResult option_a_error(const ScenarioParams& sp, double lco);
/// Endpoint-wise propagation of an interval-valued lco.
TheoryResult option_a_error(const ScenarioParams& sp, const TheoryResult& lco);

/// Expected target model error when the learned common part seeds the
/// initialization (Option B); independent of lco when underparameterized.
TheoryResult option_b_error(const ScenarioParams& sp, double lco);
TheoryResult option_b_error(const ScenarioParams& sp, const TheoryResult& lco);

/// Interior minimizer of the Option A overparameterized error in p2, when
/// one exists: (n2+1) / (1 - sqrt(lco + sigma2^2)/||q2||). nullopt means the
/// curve is monotone decreasing for all p2 > n2 + 1.
std::optional<double> descent_floor_option_a(const ScenarioParams& sp, double lco);

/// Option B analogue: t - p with t = (n2+1) / (1 - sigma2/sqrt(lco+||q2||^2)),
/// absent when sigma2^2 >= lco + ||q2||^2 or p >= t.
std::optional<double> descent_floor_option_b(const ScenarioParams& sp, double lco);

enum class Trend { Increasing, Decreasing, Stationary };

/// Sign of d bnoise / d p in the overparameterized source regime:
/// decreasing iff p^2 > p1 (p1 - n1 - 1).
Trend bnoise_trend(int p, int p1, int n1);

/// Best split of a fixed feature budget C between the common part and the
/// source-specific part. L_co is monotone non-decreasing in p at fixed C, so
/// the minimizer keeps p at the number of true common features.
struct BudgetSplit {
  int p = 0;
  int p1 = 0;
  bool lco_increasing_in_p = true;  // monotonicity claim behind the choice
};
BudgetSplit allocate_budget(int budget, int s);

/// Feature-sacrifice construction at fixed budget C > n1 + 1 with two true
/// common features: q1_bound is the guaranteed L_co lower bound without
/// sacrifice, q2_bound the upper bound after sacrificing one true feature of
/// the given parameter value. recommend = sacrifice provably helps.
struct SacrificeAnalysis {
  double q1_bound = 0.0;
  double q2_bound = 0.0;
  bool recommend = false;
};
SacrificeAnalysis sacrifice_analysis(int budget, int n1, double sigma1, double sacrifice_value);

/// Expected error decomposition of pooled-sample transfer on the common
/// features. k_bias and k_noise are exact; k_similarity is an interval that
/// holds with probability at least 1 - 4/n1.
struct SampleTransferTheory {
  TheoryResult k_bias;
  TheoryResult k_noise;
  TheoryResult k_similarity;
  TheoryResult total() const;
};
SampleTransferTheory sample_transfer_theory(const ScenarioParams& sp);

/// Constants of the fine-tuning variance bound.
struct FineTuneConstants {
  double k_tilde = 0.0;
  double c_const = 0.0;
};
FineTuneConstants fine_tune_constants(const ScenarioParams& sp);

/// Expected fine-tuned bias term (1 - n2/p2) ||q2||^2, defined for p2 > n2+1.
double fine_tune_bias(const ScenarioParams& sp);

}  // namespace theory
}  // namespace translin
