#include "translin/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace translin {
namespace theory {
namespace {

void check(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

void require_not_threshold(int params, int samples, const std::string& what) {
  if (classify_regime(params, samples) == Regime::Threshold)
    throw TheoryUndefinedAtThreshold(what + ": |" + std::to_string(params) + " - " +
                                     std::to_string(samples) + "| <= 1");
}

double sq(double x) { return x * x; }

/// Upper (and lower) chi-square concentration endpoints for D degrees of
/// freedom at deviation parameter x.
double chi_upper(double dof, double x) { return dof + 2.0 * std::sqrt(dof * x) + 2.0 * x; }
double chi_lower(double dof, double x) { return dof - 2.0 * std::sqrt(dof * x); }

}  // namespace

double ScenarioParams::overparam_ratio() const {
  check(p + p1 > 0, "ScenarioParams: p + p1 must be positive for r");
  return 1.0 - static_cast<double>(n1) / static_cast<double>(p + p1);
}

void ScenarioParams::validate() const {
  check(norm_w1 >= 0 && norm_w2 >= 0 && norm_q1 >= 0 && norm_q2 >= 0,
        "ScenarioParams: negative norm");
  check(sigma1 >= 0 && sigma2 >= 0, "ScenarioParams: negative noise level");
  check(delta >= 0, "ScenarioParams: negative delta");
  check(delta <= norm_w1 + norm_w2 + 1e-9 * (1.0 + norm_w1 + norm_w2),
        "ScenarioParams: delta violates the triangle inequality");
  check(p >= 0 && p1 >= 0 && p2 >= 0, "ScenarioParams: negative feature count");
  check(n1 >= 1 && n2 >= 1, "ScenarioParams: sample counts must be positive");
}

ScenarioParams ScenarioParams::from(const GroundTruth& gt, const LearnerConfig& cfg,
                                    const Sacrifice& sacrifice) {
  const ExtendedTruth ext = extend_truth(gt, cfg, sacrifice);
  ScenarioParams sp;
  sp.norm_w1 = ext.w1e.norm();
  sp.norm_w2 = ext.w2e.norm();
  sp.norm_q1 = ext.q1e.norm();
  sp.norm_q2 = ext.q2e.norm();
  sp.delta = (ext.w2e - ext.w1e).norm();
  sp.sigma1 = ext.effective_sigma1;
  sp.sigma2 = ext.effective_sigma2;
  sp.p = cfg.p;
  sp.p1 = cfg.p1;
  sp.p2 = cfg.p2;
  sp.n1 = cfg.n1;
  sp.n2 = cfg.n2;
  sp.validate();
  return sp;
}

TheoryResult TheoryResult::exact(double v, Regime r) {
  TheoryResult t;
  t.kind = Kind::Exact;
  t.value = v;
  t.lower = t.upper = v;
  t.regime = r;
  return t;
}

TheoryResult TheoryResult::bounds(double lo, double hi, Regime r) {
  check(lo <= hi, "TheoryResult: lower bound above upper bound");
  TheoryResult t;
  t.kind = Kind::Bounds;
  t.lower = lo;
  t.upper = hi;
  t.value = std::numeric_limits<double>::quiet_NaN();
  t.regime = r;
  return t;
}

double bnoise(const ScenarioParams& sp) {
  check(sp.p + sp.p1 > sp.n1 + 1, "bnoise: requires p + p1 > n1 + 1");
  if (sp.p == 0) return 0.0;
  const double total = sp.p + sp.p1;
  return (sp.p / total) * (sp.n1 * sq(sp.sigma1)) / (total - sp.n1 - 1.0);
}

double BiasBounds::min_squared() const {
  return std::min({b1 * b1, b2 * b2, b3 * b3});
}

BiasBounds bias_bounds(const ScenarioParams& sp) {
  check(sp.p + sp.p1 > sp.n1 + 1, "bias_bounds: requires p + p1 > n1 + 1");
  const double r = sp.overparam_ratio();
  const double min_r = std::min(r, 1.0 - r);
  BiasBounds b;
  b.b1 = sp.delta + std::sqrt(r * (sq(sp.norm_w1) + sq(sp.norm_q1)));
  b.b2 = sp.norm_w2 + std::sqrt(1.0 - r) * sp.norm_w1 + std::sqrt(min_r) * sp.norm_q1;
  b.b3 = std::sqrt(r) * sp.norm_w1 + sp.delta + std::sqrt(min_r) * sp.norm_q1;
  return b;
}

TheoryResult transferring_error(const ScenarioParams& sp) {
  sp.validate();
  const int params = sp.p + sp.p1;
  require_not_threshold(params, sp.n1, "transferring_error");
  if (sp.n1 > params + 1) {
    const double noise = sp.p * sq(sp.sigma1) / (sp.n1 - params - 1.0);
    return TheoryResult::exact(sq(sp.delta) + noise, Regime::Underparameterized);
  }
  const double noise = bnoise(sp);
  const double bias_cap = bias_bounds(sp).min_squared();
  return TheoryResult::bounds(noise, bias_cap + noise, Regime::Overparameterized);
}

TheoryResult option_a_error(const ScenarioParams& sp, double lco) {
  sp.validate();
  check(lco >= 0, "option_a_error: lco must be non-negative");
  require_not_threshold(sp.p2, sp.n2, "option_a_error");
  if (sp.p2 > sp.n2 + 1) {
    const double term_a1 = lco + sp.n2 * (lco + sq(sp.sigma2)) / (sp.p2 - sp.n2 - 1.0);
    const double term_a2 = (1.0 - static_cast<double>(sp.n2) / sp.p2) * sq(sp.norm_q2);
    TheoryResult t = TheoryResult::exact(term_a1 + term_a2, Regime::Overparameterized);
    t.term1 = term_a1;
    t.term2 = term_a2;
    return t;
  }
  const double v = lco + sp.p2 * (lco + sq(sp.sigma2)) / (sp.n2 - sp.p2 - 1.0);
  return TheoryResult::exact(v, Regime::Underparameterized);
}

TheoryResult option_b_error(const ScenarioParams& sp, double lco) {
  sp.validate();
  check(lco >= 0, "option_b_error: lco must be non-negative");
  const int params = sp.p + sp.p2;
  require_not_threshold(params, sp.n2, "option_b_error");
  if (params > sp.n2 + 1) {
    const double term_b1 = (1.0 - static_cast<double>(sp.n2) / params) * (lco + sq(sp.norm_q2));
    const double term_b2 = sp.n2 * sq(sp.sigma2) / (params - sp.n2 - 1.0);
    TheoryResult t = TheoryResult::exact(term_b1 + term_b2, Regime::Overparameterized);
    t.term1 = term_b1;
    t.term2 = term_b2;
    return t;
  }
  const double v = params * sq(sp.sigma2) / (sp.n2 - params - 1.0);
  return TheoryResult::exact(v, Regime::Underparameterized);
}

namespace {

/// Both option errors are monotone non-decreasing in lco, so an interval for
/// lco propagates endpoint-wise.
template <class Eval>
TheoryResult propagate_lco(const TheoryResult& lco, Eval eval) {
  if (lco.is_exact()) return eval(lco.value);
  const TheoryResult at_lower = eval(lco.lower);
  const TheoryResult at_upper = eval(lco.upper);
  if (at_lower.value == at_upper.value) return at_lower;  // independent of lco
  return TheoryResult::bounds(at_lower.value, at_upper.value, at_lower.regime);
}

}  // namespace

TheoryResult option_a_error(const ScenarioParams& sp, const TheoryResult& lco) {
  return propagate_lco(lco, [&](double v) { return option_a_error(sp, v); });
}

TheoryResult option_b_error(const ScenarioParams& sp, const TheoryResult& lco) {
  return propagate_lco(lco, [&](double v) { return option_b_error(sp, v); });
}

std::optional<double> descent_floor_option_a(const ScenarioParams& sp, double lco) {
  check(lco >= 0, "descent_floor_option_a: lco must be non-negative");
  const double level = lco + sq(sp.sigma2);
  if (sp.norm_q2 <= 0.0 || level >= sq(sp.norm_q2)) return std::nullopt;
  return (sp.n2 + 1.0) / (1.0 - std::sqrt(level) / sp.norm_q2);
}

std::optional<double> descent_floor_option_b(const ScenarioParams& sp, double lco) {
  check(lco >= 0, "descent_floor_option_b: lco must be non-negative");
  const double level = lco + sq(sp.norm_q2);
  if (level <= 0.0 || sq(sp.sigma2) >= level) return std::nullopt;
  const double t = (sp.n2 + 1.0) / (1.0 - sp.sigma2 / std::sqrt(level));
  if (sp.p >= t) return std::nullopt;
  return t - sp.p;
}

Trend bnoise_trend(int p, int p1, int n1) {
  check(p > 0, "bnoise_trend: requires p > 0");
  const double lhs = static_cast<double>(p) * p;
  const double rhs = static_cast<double>(p1) * (static_cast<double>(p1) - n1 - 1.0);
  if (lhs > rhs) return Trend::Decreasing;
  if (lhs < rhs) return Trend::Increasing;
  return Trend::Stationary;
}

BudgetSplit allocate_budget(int budget, int s) {
  check(s >= 0, "allocate_budget: negative s");
  check(budget > s, "allocate_budget: budget must exceed s");
  return BudgetSplit{s, budget - s, true};
}

SacrificeAnalysis sacrifice_analysis(int budget, int n1, double sigma1, double sacrifice_value) {
  check(budget > n1 + 1, "sacrifice_analysis: requires C > n1 + 1");
  check(sigma1 >= 0, "sacrifice_analysis: negative noise level");
  const double c = budget;
  const double keep_noise = n1 * sq(sigma1) / (c - n1 - 1.0);
  const double drop_noise = n1 * (sq(sigma1) + sq(sacrifice_value)) / (c - n1 - 1.0);
  SacrificeAnalysis out;
  out.q1_bound = (2.0 / c) * keep_noise;
  out.q2_bound = 1.0 + (1.0 / c) * drop_noise;
  out.recommend = out.q1_bound > out.q2_bound;
  return out;
}

TheoryResult SampleTransferTheory::total() const {
  const double lo = k_bias.lower + k_noise.lower + k_similarity.lower;
  const double hi = k_bias.upper + k_noise.upper + k_similarity.upper;
  if (k_bias.is_exact() && k_noise.is_exact() && k_similarity.is_exact())
    return TheoryResult::exact(k_bias.value + k_noise.value + k_similarity.value, k_bias.regime);
  return TheoryResult::bounds(lo, hi, k_bias.regime);
}

SampleTransferTheory sample_transfer_theory(const ScenarioParams& sp) {
  sp.validate();
  const int pooled = sp.pooled_samples();
  require_not_threshold(sp.p, pooled, "sample_transfer_theory");
  const double noise_power =
      sp.n1 * (sq(sp.sigma1) + sq(sp.norm_q1)) + sp.n2 * (sq(sp.sigma2) + sq(sp.norm_q2));
  const double ln_n1 = std::log(static_cast<double>(sp.n1));

  SampleTransferTheory out;
  if (sp.p > pooled + 1) {
    const Regime reg = Regime::Overparameterized;
    out.k_bias = TheoryResult::exact(
        (1.0 - static_cast<double>(pooled) / sp.p) * sq(sp.norm_w2) + sq(sp.norm_q2), reg);
    out.k_noise = TheoryResult::exact(noise_power / (sp.p - pooled - 1.0), reg);
    if (sp.delta == 0.0) {
      out.k_similarity = TheoryResult::exact(0.0, reg);
      return out;
    }
    const double denom_lo = std::sqrt(static_cast<double>(sp.p)) - std::sqrt(pooled) -
                            std::sqrt(2.0 * ln_n1);
    if (denom_lo <= 0.0)
      throw std::invalid_argument(
          "sample_transfer_theory: similarity interval needs sqrt(p) - sqrt(n1+n2) - "
          "sqrt(2 ln n1) > 0");
    const double denom_hi =
        std::sqrt(static_cast<double>(sp.p)) + std::sqrt(pooled) + std::sqrt(2.0 * ln_n1);
    const double lo = std::max(0.0, chi_lower(sp.n1, ln_n1)) * sq(sp.delta) / sq(denom_hi);
    const double hi = chi_upper(sp.n1, ln_n1) * sq(sp.delta) / sq(denom_lo);
    out.k_similarity = TheoryResult::bounds(lo, hi, reg);
    return out;
  }

  const Regime reg = Regime::Underparameterized;
  out.k_bias = TheoryResult::exact(sq(sp.norm_q2), reg);
  out.k_noise = TheoryResult::exact(
      sp.p * noise_power / (static_cast<double>(pooled) * (pooled - sp.p - 1.0)), reg);
  if (sp.delta == 0.0) {
    out.k_similarity = TheoryResult::exact(0.0, reg);
    return out;
  }
  const double denom = std::sqrt(static_cast<double>(pooled)) -
                       std::sqrt(static_cast<double>(sp.p)) -
                       std::sqrt(2.0 * std::log(static_cast<double>(pooled)));
  if (denom <= 0.0)
    throw std::invalid_argument(
        "sample_transfer_theory: similarity bound needs sqrt(n1+n2) - sqrt(p) - "
        "sqrt(2 ln (n1+n2)) > 0");
  const double hi = chi_upper(sp.n1, ln_n1) * sq(sp.delta) / sq(denom);
  out.k_similarity = TheoryResult::bounds(0.0, hi, reg);
  return out;
}

FineTuneConstants fine_tune_constants(const ScenarioParams& sp) {
  sp.validate();
  const double pooled = sp.pooled_samples();
  const double denom = pooled - 2.0 * std::sqrt(pooled * std::log(pooled));
  check(denom > 0.0, "fine_tune_constants: requires n1 + n2 > 2 sqrt((n1+n2) ln(n1+n2))");
  const double p = sp.p;
  check(p >= 1, "fine_tune_constants: requires p >= 1");

  FineTuneConstants out;
  out.k_tilde = (p + 2.0 * std::sqrt(p * std::log(p)) + 2.0 * std::log(p)) / denom;
  const double ln_n1 = std::log(static_cast<double>(sp.n1));
  const double ln_n2 = std::log(static_cast<double>(sp.n2));
  out.c_const =
      3.0 * (out.k_tilde * sq(sp.sigma1) + out.k_tilde * sq(sp.norm_q1) + sq(sp.delta)) *
          chi_upper(sp.n1, ln_n1) +
      3.0 * (sq(sp.sigma2) + out.k_tilde * sq(sp.sigma2) + out.k_tilde * sq(sp.norm_q2)) *
          chi_upper(sp.n2, ln_n2);
  return out;
}

double fine_tune_bias(const ScenarioParams& sp) {
  check(sp.p2 > sp.n2 + 1, "fine_tune_bias: requires p2 > n2 + 1");
  return (1.0 - static_cast<double>(sp.n2) / sp.p2) * sq(sp.norm_q2);
}

}  // namespace theory
}  // namespace translin
