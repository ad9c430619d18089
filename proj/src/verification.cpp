#include "translin/verification.hpp"

#include "translin/driver.hpp"
#include "translin/linalg.hpp"
#include "translin/presets.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <thread>

namespace translin {
namespace montecarlo {
namespace {

CheckRow row(std::string name, double measured, double reference, std::string criterion,
             bool pass) {
  return CheckRow{std::move(name), measured, reference, std::move(criterion), pass};
}

CheckRow within_rel(std::string name, double measured, double target, double rel_tol) {
  const bool pass = std::abs(measured - target) <= rel_tol * std::abs(target);
  return row(std::move(name), measured, target,
             "relative error <= " + format_double(rel_tol), pass);
}

/// Replicate values of one configuration, each from its own derived stream.
/// Mirrors the sweep runner's seeding, so results match run_sweep point 0.
std::vector<double> replicate_values(const GroundTruth& gt, const LearnerConfig& cfg,
                                     TransferMethod method, Quantity quantity, int replicates,
                                     std::uint64_t master, int threads) {
  const ExtendedTruth truth = extend_truth(gt, cfg);
  std::vector<double> values(replicates);
  auto worker = [&](int tid, int stride) {
    for (int rep = tid; rep < replicates; rep += stride) {
      Rng rng(Rng::derive(master, 0, static_cast<std::uint64_t>(rep)));
      values[rep] = run_replicate(truth, cfg, method, quantity, rng).value;
    }
  };
  const int used = std::max(1, std::min(threads, replicates));
  if (used == 1) {
    worker(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < used; ++t) pool.emplace_back(worker, t, used);
    for (auto& t : pool) t.join();
  }
  return values;
}

MeanSe measure(const GroundTruth& gt, const LearnerConfig& cfg, TransferMethod method,
               Quantity quantity, int replicates, std::uint64_t master, int threads) {
  return aggregate(replicate_values(gt, cfg, method, quantity, replicates, master, threads));
}

GroundTruth truth_from(int s, int s1, int s2, double norm_w, double delta, TruthMode mode,
                       double norm_q1, double norm_q2, double sigma1, double sigma2) {
  GroundTruth gt;
  gt.s = s;
  gt.s1 = s1;
  gt.s2 = s2;
  auto [w1, w2] = make_truth_vectors(s, norm_w, delta, mode);
  gt.w1 = w1;
  gt.w2 = w2;
  gt.q1 = uniform_norm_vector(s1, norm_q1);
  gt.q2 = uniform_norm_vector(s2, norm_q2);
  gt.sigma1 = sigma1;
  gt.sigma2 = sigma2;
  return gt;
}

LearnerConfig learner_from(int p, int p1, int p2, int n1, int n2) {
  LearnerConfig cfg;
  cfg.p = p;
  cfg.p1 = p1;
  cfg.p2 = p2;
  cfg.n1 = n1;
  cfg.n2 = n2;
  return cfg;
}

double comb_se(const MeanSe& a, const MeanSe& b) {
  return std::sqrt(a.se * a.se + b.se * b.se);
}

/// Curve of (mean, se) points over a grid of one learner variable.
struct Curve {
  std::vector<double> grid;
  std::vector<MeanSe> points;

  int argmin() const {
    int best = 0;
    for (int i = 1; i < static_cast<int>(points.size()); ++i)
      if (points[i].mean < points[best].mean) best = i;
    return best;
  }
};

Curve sweep_curve(const GroundTruth& gt, const LearnerConfig& cfg, SweepVariable variable,
                  const std::vector<double>& grid, TransferMethod method, Quantity quantity,
                  int replicates, std::uint64_t master, int threads) {
  SweepSpec spec;
  spec.variable = variable;
  spec.grid = grid;
  spec.replicates = replicates;
  spec.master_seed = master;
  spec.method = method;
  spec.quantity = quantity;
  spec.threads = threads;
  Curve out;
  out.grid = grid;
  for (const SweepRecord& r : run_sweep(spec, gt, cfg)) out.points.push_back({
      r.empirical_mean, r.empirical_se, replicates});
  return out;
}

/// mean[last] < mean[first] by 3 SE and no 3-SE-significant increase along
/// the way.
bool significantly_decreasing(const Curve& c) {
  const MeanSe& first = c.points.front();
  const MeanSe& last = c.points.back();
  if (first.mean - last.mean < 3.0 * comb_se(first, last)) return false;
  for (std::size_t i = 0; i + 1 < c.points.size(); ++i) {
    const double rise = c.points[i + 1].mean - c.points[i].mean;
    if (rise > 3.0 * comb_se(c.points[i], c.points[i + 1])) return false;
  }
  return true;
}

/// Interior minimum followed by a 3-SE-significant rise to the last point.
bool has_interior_floor(const Curve& c) {
  const int at = c.argmin();
  if (at == static_cast<int>(c.points.size()) - 1) return false;
  const MeanSe& last = c.points.back();
  const MeanSe& best = c.points[at];
  return last.mean - best.mean >= 3.0 * comb_se(last, best);
}

/// Two significant descents: indices a < b < c < d with drops a->b and c->d
/// and a rise b->c, all at 3 combined SE.
bool has_two_descents(const Curve& c) {
  const int n = static_cast<int>(c.points.size());
  auto sig_drop = [&](int i, int j) {
    return c.points[i].mean - c.points[j].mean >= 3.0 * comb_se(c.points[i], c.points[j]);
  };
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      if (!sig_drop(a, b)) continue;
      for (int cc = b + 1; cc < n; ++cc) {
        if (!sig_drop(cc, b)) continue;  // rise b -> cc
        for (int d = cc + 1; d < n; ++d)
          if (sig_drop(cc, d)) return true;
      }
    }
  return false;
}

}  // namespace

// ---------------------------------------------------------------------------
// Lemma suite

Report verify_lemma_suite(std::uint64_t seed, int draws) {
  Report report;
  report.title = "random-matrix lemma suite";
  Rng rng(Rng::derive(seed, 101, 0));

  {  // Projection norms: E||P0 a||^2 = (n/p)||a||^2 and the complement.
    const int p = 10, n = 4;
    const Vector a = uniform_norm_vector(p, 1.0);
    double proj_sum = 0.0, resid_sum = 0.0;
    for (int i = 0; i < draws; ++i) {
      const Matrix k = rng.normal_matrix(p, n);
      const auto parts = DesignSvd<double>(k, "lemma").split(a);
      proj_sum += parts.proj.squaredNorm();
      resid_sum += parts.resid.squaredNorm();
    }
    report.rows.push_back(within_rel("projection energy E||P0 a||^2 (p=10, n=4)",
                                     proj_sum / draws, static_cast<double>(n) / p, 0.02));
    report.rows.push_back(within_rel("residual energy E||(I-P0)a||^2 (p=10, n=4)",
                                     resid_sum / draws, 1.0 - static_cast<double>(n) / p, 0.02));
  }

  {  // Inverse-Wishart identities at a = 10, b = 3.
    const int a_dim = 10, b_dim = 3;
    const double denom = a_dim - b_dim - 1.0;
    Vector diag_weights(a_dim);
    for (int i = 0; i < a_dim; ++i) diag_weights[i] = (i + 1.0) / a_dim;
    double trace_sum = 0.0, beta_sum = 0.0, alpha_sum = 0.0, gamma_sum = 0.0;
    for (int i = 0; i < draws; ++i) {
      const Matrix k = rng.normal_matrix(a_dim, b_dim);
      const Matrix gram_inv = (k.transpose() * k).inverse();
      trace_sum += gram_inv.trace() / b_dim;
      const Vector beta = rng.normal_vector(b_dim);
      beta_sum += (k * (gram_inv * beta)).squaredNorm();
      const Vector alpha = rng.normal_vector(a_dim);
      alpha_sum += (gram_inv * (k.transpose() * alpha)).squaredNorm();
      const Vector gamma = diag_weights.cwiseProduct(rng.normal_vector(a_dim));
      gamma_sum += (gram_inv * (k.transpose() * gamma)).squaredNorm();
    }
    report.rows.push_back(within_rel("inverse-Wishart mean diag of (K^T K)^{-1} (a=10, b=3)",
                                     trace_sum / draws, 1.0 / denom, 0.02));
    report.rows.push_back(within_rel("E||K (K^T K)^{-1} beta||^2", beta_sum / draws,
                                     b_dim / denom, 0.02));
    report.rows.push_back(within_rel("E||(K^T K)^{-1} K^T alpha||^2", alpha_sum / draws,
                                     b_dim / denom, 0.02));
    report.rows.push_back(within_rel("E||(K^T K)^{-1} K^T gamma||^2", gamma_sum / draws,
                                     b_dim * diag_weights.squaredNorm() / (a_dim * denom), 0.02));
  }

  {  // Chi-square concentration interval at D = 100, x = ln 100.
    const int dof = 100;
    const double x = std::log(100.0);
    const double lo = dof - 2.0 * std::sqrt(dof * x);
    const double hi = dof + 2.0 * std::sqrt(dof * x) + 2.0 * x;
    int inside = 0;
    for (int i = 0; i < draws; ++i) {
      const double u = rng.normal_vector(dof).squaredNorm();
      if (u >= lo && u <= hi) ++inside;
    }
    const double coverage = static_cast<double>(inside) / draws;
    const double target = 1.0 - 2.0 * std::exp(-x);
    report.rows.push_back(row("chi-square interval coverage (D=100, x=ln 100)", coverage, target,
                              "coverage >= 1 - 2 e^{-x}", coverage >= target));
  }

  {  // Singular-value concentration at t = sqrt(2 ln n) for 100 x 30 draws.
    const int rows_n = 100, cols_n = 30;
    const double t = std::sqrt(2.0 * std::log(static_cast<double>(rows_n)));
    const double lo = std::sqrt(static_cast<double>(rows_n)) - std::sqrt(cols_n) - t;
    const double hi = std::sqrt(static_cast<double>(rows_n)) + std::sqrt(cols_n) + t;
    int violations = 0;
    for (int i = 0; i < draws; ++i) {
      const Matrix k = rng.normal_matrix(rows_n, cols_n);
      const DesignSvd<double> svd(k, "lemma");
      const auto& sigma = svd.singular_values();
      if (sigma[sigma.size() - 1] < lo || sigma[0] > hi) ++violations;
    }
    const double rate = static_cast<double>(violations) / draws;
    const double bound = 2.0 * std::exp(-t * t / 2.0);
    report.rows.push_back(row("singular-value interval violation rate (100x30)", rate, bound,
                              "rate <= 2 exp(-t^2/2)", rate <= bound));
  }

  {  // ||(K K^T)^{-1} K a||^2 <= ||a||^2 / lambda_min^2 on every draw.
    const int p = 10, n = 40;
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const Matrix k = rng.normal_matrix(p, n);
      const Vector a = rng.normal_vector(n);
      const DesignSvd<double> svd(k, "lemma");
      const double lhs = svd.pseudo_solve(a).squaredNorm();
      const auto& sigma = svd.singular_values();
      const double cap = a.squaredNorm() / (sigma[sigma.size() - 1] * sigma[sigma.size() - 1]);
      worst = std::max(worst, lhs / cap);
    }
    report.rows.push_back(row("min-eigenvalue cap on ||(K K^T)^{-1} K a||^2 (10x40)", worst, 1.0,
                              "ratio <= 1", worst <= 1.0 + 1e-9));
  }

  return report;
}

// ---------------------------------------------------------------------------
// Exactness of the closed forms

Report verify_transfer_error_exact(std::uint64_t seed, int replicates, int threads) {
  Report report;
  report.title = "transferring error, underparameterized source";
  const GroundTruth gt = truth_from(5, 5, 5, 1.0, 0.0, TruthMode::Equal, 1.0, 1.0, 1.0, 0.2);
  const LearnerConfig cfg = learner_from(5, 5, 5, 100, 50);
  const auto agg = measure(gt, cfg, TransferMethod::OptionA, Quantity::TransferError, replicates,
                           Rng::derive(seed, 1, 0), threads);
  const double target = 5.0 / 89.0;
  report.rows.push_back(row("transferring error, underparameterized (p=5, p1=5, n1=100)",
                            agg.mean, target, "within 3 SE",
                            std::abs(agg.mean - target) <= 3.0 * agg.se));
  return report;
}

Report verify_noise_term_exact(std::uint64_t seed, int replicates, int threads) {
  Report report;
  report.title = "transferring error, overparameterized noise term";
  const GroundTruth gt = truth_from(0, 0, 0, 0.0, 0.0, TruthMode::Equal, 0.0, 0.0, 1.0, 0.0);
  const LearnerConfig cfg = learner_from(10, 100, 5, 50, 50);
  const auto agg = measure(gt, cfg, TransferMethod::OptionA, Quantity::TransferError, replicates,
                           Rng::derive(seed, 2, 0), threads);
  const double target = 500.0 / 6490.0;
  report.rows.push_back(row("transferring error, overparameterized zero truth (p=10, p1=100)",
                            agg.mean, target, "within 3 SE",
                            std::abs(agg.mean - target) <= 3.0 * agg.se));
  return report;
}

Report verify_option_exactness(std::uint64_t seed, int replicates, int threads) {
  Report report;
  report.title = "option A/B exactness with zero transferring error";
  // Transferring error forced to zero: noiseless aligned source,
  // underparameterized step 1.
  const GroundTruth gt = truth_from(5, 5, 5, 1.0, 0.0, TruthMode::Equal, 1.0, 1.0, 0.0, 1.0);
  for (int point = 0; point < 5; ++point) {
    const int p2 = 5 + 5 * point;
    const LearnerConfig cfg = learner_from(5, 5, p2, 100, 50);
    const auto agg_a = measure(gt, cfg, TransferMethod::OptionA, Quantity::ModelError,
                               replicates, Rng::derive(seed, 3, point), threads);
    const double target_a = p2 * 1.0 / (50.0 - p2 - 1.0);
    report.rows.push_back(row("option A error with zero transfer error, p2=" + std::to_string(p2),
                              agg_a.mean, target_a, "within 3 SE",
                              std::abs(agg_a.mean - target_a) <= 3.0 * agg_a.se));
    const auto agg_b = measure(gt, cfg, TransferMethod::OptionB, Quantity::ModelError,
                               replicates, Rng::derive(seed, 4, point), threads);
    const double target_b = (5.0 + p2) / (50.0 - (5.0 + p2) - 1.0);
    report.rows.push_back(row("option B error with zero transfer error, p2=" + std::to_string(p2),
                              agg_b.mean, target_b, "within 3 SE",
                              std::abs(agg_b.mean - target_b) <= 3.0 * agg_b.se));
  }
  return report;
}

Report verify_exactness(std::uint64_t seed, int replicates, int threads) {
  Report report;
  report.title = "closed-form exactness";
  for (const Report& part : {verify_transfer_error_exact(seed, replicates, threads),
                             verify_noise_term_exact(seed, replicates, threads),
                             verify_option_exactness(seed, replicates, threads)}) {
    report.rows.insert(report.rows.end(), part.rows.begin(), part.rows.end());
  }
  return report;
}

// ---------------------------------------------------------------------------
// Theorem 1 bounds on the tightness configurations

Report verify_transfer_bounds(std::uint64_t seed, int replicates, int threads) {
  Report report;
  report.title = "noiseless transferring-error bounds";
  struct Case {
    const char* tag;
    TruthMode mode;
    double delta, norm_q1;
  };
  const Case cases[] = {
      {"w2=w1, |q1|=1", TruthMode::Equal, 0.0, 1.0},
      {"w2=-w1, |q1|=1", TruthMode::Opposite, 2.0, 1.0},
      {"w2=w1, |q1|=5", TruthMode::Equal, 0.0, 5.0},
      {"w2=-w1, |q1|=5", TruthMode::Opposite, 2.0, 5.0},
  };
  int case_index = 0;
  for (const Case& c : cases) {
    const GroundTruth gt =
        truth_from(5, 5, 5, 1.0, c.delta, c.mode, c.norm_q1, 0.0, 0.0, 0.0);
    LearnerConfig cfg = learner_from(105, 20, 5, 100, 50);
    SweepSpec spec;
    spec.variable = SweepVariable::P;
    spec.grid = {110, 150, 200, 400};
    spec.replicates = replicates;
    spec.master_seed = Rng::derive(seed, 5, case_index++);
    spec.method = TransferMethod::OptionA;
    spec.quantity = Quantity::TransferError;
    spec.threads = threads;
    for (const SweepRecord& r : run_sweep(spec, gt, cfg)) {
      const bool pass = check_bounds(r, 3.0);
      report.rows.push_back(row(std::string("L_co^noiseless vs min bound, ") + c.tag +
                                    ", p=" + format_double(r.value),
                                r.empirical_mean, r.theory->upper,
                                "mean <= min(b1^2,b2^2,b3^2) + 3 SE", pass));
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Descent floors

Report verify_descent_floors(std::uint64_t seed, int replicates, int threads) {
  Report report;
  report.title = "descent-floor locations";
  // Transferring error forced to zero so the floor formulas apply exactly.
  const GroundTruth gt = truth_from(5, 5, 5, 1.0, 0.0, TruthMode::Equal, 1.0, 1.0, 0.0, 0.1);
  theory::ScenarioParams sp = theory::ScenarioParams::from(gt, learner_from(5, 5, 60, 100, 50));

  {
    std::vector<double> grid;
    for (int p2 = 52; p2 <= 120; p2 += 2) grid.push_back(p2);
    const Curve curve = sweep_curve(gt, learner_from(5, 5, 60, 100, 50), SweepVariable::P2, grid,
                                    TransferMethod::OptionA, Quantity::ModelError, replicates,
                                    Rng::derive(seed, 6, 0), threads);
    const double floor = *theory::descent_floor_option_a(sp, 0.0);
    const double at = curve.grid[curve.argmin()];
    report.rows.push_back(row("option A argmin over p2 vs predicted floor", at, floor,
                              "within one grid step (2)", std::abs(at - floor) <= 2.0));
  }
  {
    std::vector<double> grid;
    for (int p2 = 48; p2 <= 120; p2 += 2) grid.push_back(p2);
    const Curve curve = sweep_curve(gt, learner_from(5, 5, 60, 100, 50), SweepVariable::P2, grid,
                                    TransferMethod::OptionB, Quantity::ModelError, replicates,
                                    Rng::derive(seed, 7, 0), threads);
    const double floor = *theory::descent_floor_option_b(sp, 0.0);
    const double at = curve.grid[curve.argmin()];
    report.rows.push_back(row("option B argmin over p2 vs predicted floor", at, floor,
                              "within one grid step (2)", std::abs(at - floor) <= 2.0));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Budget monotonicity (fixed p + p1)

Report verify_budget_monotonicity(std::uint64_t seed, int replicates, int threads) {
  Report report;
  report.title = "transferring error along a fixed feature budget";
  const int budget = 60;
  const int splits[] = {5, 15, 30, 55};
  std::vector<MeanSe> stats;
  for (int i = 0; i < 4; ++i) {
    const int p = splits[i];
    const GroundTruth gt = truth_from(5, 5, 5, 1.0, 0.0, TruthMode::Equal, 1.0, 1.0, 1.0, 0.2);
    const LearnerConfig cfg = learner_from(p, budget - p, 5, 100, 50);
    stats.push_back(measure(gt, cfg, TransferMethod::OptionA, Quantity::TransferError, replicates,
                            Rng::derive(seed, 8, i), threads));
  }
  for (int i = 0; i + 1 < 4; ++i) {
    const double rise = stats[i + 1].mean - stats[i].mean;
    const bool pass = rise >= -3.0 * comb_se(stats[i], stats[i + 1]);
    report.rows.push_back(row("L_co non-decreasing from p=" + std::to_string(splits[i]) + " to p=" +
                                  std::to_string(splits[i + 1]),
                              rise, 0.0, "no 3-SE-significant decrease", pass));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Sample transfer

Report verify_sample_transfer(std::uint64_t seed, int replicates, int threads) {
  Report report;
  report.title = "sample transfer decomposition";
  const GroundTruth gt = truth_from(5, 5, 5, 1.0, 2.0, TruthMode::Opposite, 0.5, 0.5, 0.3, 0.3);

  auto run_terms = [&](const LearnerConfig& cfg, bool fine_tune, std::uint64_t master,
                       std::vector<double>& bias, std::vector<double>& noise,
                       std::vector<double>& similarity) {
    const ExtendedTruth truth = extend_truth(gt, cfg);
    bias.resize(replicates);
    noise.resize(replicates);
    similarity.resize(replicates);
    auto worker = [&](int tid, int stride) {
      for (int rep = tid; rep < replicates; rep += stride) {
        Rng rng(Rng::derive(master, 0, static_cast<std::uint64_t>(rep)));
        const TransferOutcome out = sample_transfer(truth, cfg, rng, fine_tune);
        bias[rep] = fine_tune ? *out.decomposition.t_bias : *out.decomposition.k_bias;
        noise[rep] = fine_tune ? *out.decomposition.t_var : *out.decomposition.k_noise;
        similarity[rep] = *out.decomposition.k_similarity;
      }
    };
    const int used = std::max(1, std::min(threads, replicates));
    if (used == 1) {
      worker(0, 1);
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < used; ++t) pool.emplace_back(worker, t, used);
      for (auto& t : pool) t.join();
    }
  };

  {  // Overparameterized pooled regression: p = 400 over nbar = 100.
    const LearnerConfig cfg = learner_from(400, 5, 5, 50, 50);
    const theory::SampleTransferTheory th =
        theory::sample_transfer_theory(theory::ScenarioParams::from(gt, cfg));
    std::vector<double> bias, noise, similarity;
    run_terms(cfg, false, Rng::derive(seed, 9, 0), bias, noise, similarity);
    const MeanSe bias_agg = aggregate(bias);
    const MeanSe noise_agg = aggregate(noise);
    report.rows.push_back(row("E[K_bias], overparameterized (p=400, nbar=100)", bias_agg.mean,
                              th.k_bias.value, "within 3 SE",
                              std::abs(bias_agg.mean - th.k_bias.value) <=
                                  3.0 * bias_agg.se + 1e-9 * (1.0 + std::abs(th.k_bias.value))));
    report.rows.push_back(row("E[K_noise], overparameterized", noise_agg.mean, th.k_noise.value,
                              "within 3 SE",
                              std::abs(noise_agg.mean - th.k_noise.value) <= 3.0 * noise_agg.se));
    int inside = 0;
    for (double v : similarity)
      if (v >= th.k_similarity.lower && v <= th.k_similarity.upper) ++inside;
    const double coverage = static_cast<double>(inside) / replicates;
    report.rows.push_back(row("K_similarity interval coverage (holds w.p. >= 0.92)", coverage,
                              0.9, "coverage >= 0.90", coverage >= 0.90));
  }

  {  // Underparameterized pooled regression: p = 40 under nbar = 100.
    const LearnerConfig cfg = learner_from(40, 5, 5, 50, 50);
    const theory::SampleTransferTheory th =
        theory::sample_transfer_theory(theory::ScenarioParams::from(gt, cfg));
    std::vector<double> bias, noise, similarity;
    run_terms(cfg, false, Rng::derive(seed, 9, 1), bias, noise, similarity);
    const MeanSe bias_agg = aggregate(bias);
    const MeanSe noise_agg = aggregate(noise);
    report.rows.push_back(row("E[K_bias], underparameterized (p=40, nbar=100)", bias_agg.mean,
                              th.k_bias.value, "within 3 SE",
                              std::abs(bias_agg.mean - th.k_bias.value) <=
                                  3.0 * bias_agg.se + 1e-9 * (1.0 + std::abs(th.k_bias.value))));
    report.rows.push_back(row("E[K_noise], underparameterized", noise_agg.mean, th.k_noise.value,
                              "within 3 SE",
                              std::abs(noise_agg.mean - th.k_noise.value) <= 3.0 * noise_agg.se));
    int inside = 0;
    for (double v : similarity)
      if (v <= th.k_similarity.upper) ++inside;
    const double coverage = static_cast<double>(inside) / replicates;
    report.rows.push_back(row("K_similarity upper bound coverage", coverage, 0.9,
                              "coverage >= 0.90", coverage >= 0.90));
  }

  {  // Fine-tuned bias: E[T_bias] = (1 - n2/p2) ||q2||^2.
    const LearnerConfig cfg = learner_from(40, 5, 100, 50, 50);
    std::vector<double> bias, noise, similarity;
    run_terms(cfg, true, Rng::derive(seed, 9, 2), bias, noise, similarity);
    const MeanSe bias_agg = aggregate(bias);
    const double target = (1.0 - 50.0 / 100.0) * 0.25;
    report.rows.push_back(row("E[T_bias], fine-tuned (p2=100, n2=50)", bias_agg.mean, target,
                              "within 3 SE",
                              std::abs(bias_agg.mean - target) <=
                                  3.0 * bias_agg.se + 1e-9 * (1.0 + std::abs(target))));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Insight checks

Report insight_checks(std::uint64_t seed, int replicates, int threads) {
  Report report;
  report.title = "discussion insights as ordering tests";

  {  // (1) Benign overfitting in p1 needs a noisy source.
    const std::vector<double> under = {10, 30, 50, 80};
    const std::vector<double> over = {110, 200, 400, 800};
    for (double sigma1 : {3.0, 0.1}) {
      const GroundTruth gt =
          truth_from(5, 5, 5, 0.1, 0.0, TruthMode::Equal, 0.1, 0.1, sigma1, 0.1);
      const LearnerConfig cfg = learner_from(5, 10, 20, 100, 50);
      const Curve cu = sweep_curve(gt, cfg, SweepVariable::P1, under, TransferMethod::OptionA,
                                   Quantity::ModelError, replicates,
                                   Rng::derive(seed, 10, sigma1 > 1), threads);
      const Curve co = sweep_curve(gt, cfg, SweepVariable::P1, over, TransferMethod::OptionA,
                                   Quantity::ModelError, replicates,
                                   Rng::derive(seed, 11, sigma1 > 1), threads);
      const MeanSe& under_best = cu.points[cu.argmin()];
      const MeanSe& over_best = co.points[co.argmin()];
      const double gap = under_best.mean - over_best.mean;
      if (sigma1 > 1.0) {
        report.rows.push_back(row("(1) sigma1=3: overparameterized tail descends",
                                  co.points.front().mean - co.points.back().mean, 0.0,
                                  "first - last > 3 SE",
                                  co.points.front().mean - co.points.back().mean >
                                      3.0 * comb_se(co.points.front(), co.points.back())));
        report.rows.push_back(row("(1) sigma1=3: best overparameterized beats underparameterized",
                                  gap, 0.0, "gap > 3 SE",
                                  gap > 3.0 * comb_se(under_best, over_best)));
      } else {
        report.rows.push_back(row("(1) sigma1=0.1: overparameterized tail ascends",
                                  co.points.back().mean - co.points.front().mean, 0.0,
                                  "last - first > 3 SE",
                                  co.points.back().mean - co.points.front().mean >
                                      3.0 * comb_se(co.points.front(), co.points.back())));
        report.rows.push_back(row("(1) sigma1=0.1: underparameterized stays ahead", -gap, 0.0,
                                  "gap > 3 SE", -gap > 3.0 * comb_se(under_best, over_best)));
      }
    }
  }

  {  // (2) Benign overfitting in p2 needs a noisy target.
    const std::vector<double> grid = {54, 60, 80, 120, 200, 400};
    for (double sigma2 : {2.0, 0.2}) {
      const GroundTruth gt =
          truth_from(5, 5, 5, 0.1, 0.0, TruthMode::Equal, 0.1, 1.0, 0.5, sigma2);
      const LearnerConfig cfg = learner_from(5, 20, 60, 100, 50);
      const Curve c = sweep_curve(gt, cfg, SweepVariable::P2, grid, TransferMethod::OptionA,
                                  Quantity::ModelError, replicates,
                                  Rng::derive(seed, 12, sigma2 > 1), threads);
      if (sigma2 > 1.0) {
        report.rows.push_back(row("(2) sigma2=2: error decreasing across overparameterized p2",
                                  c.points.front().mean - c.points.back().mean, 0.0,
                                  "significantly decreasing", significantly_decreasing(c)));
      } else {
        report.rows.push_back(row("(2) sigma2=0.2: error turns back up at large p2",
                                  c.points.back().mean - c.points[c.argmin()].mean, 0.0,
                                  "interior floor with 3-SE rise", has_interior_floor(c)));
      }
    }
  }

  {  // (3) The floor condition flips between the options with the size of the
     // transferring error.
    const std::vector<double> grid = {54, 58, 64, 80, 130};
    const GroundTruth noisy =
        truth_from(5, 5, 5, 1.0, 0.0, TruthMode::Equal, 1.0, 0.7, 3.0, 0.2);
    const LearnerConfig cfg = learner_from(5, 20, 60, 100, 50);
    const Curve a = sweep_curve(noisy, cfg, SweepVariable::P2, grid, TransferMethod::OptionA,
                                Quantity::ModelError, replicates, Rng::derive(seed, 13, 0),
                                threads);
    const Curve b = sweep_curve(noisy, cfg, SweepVariable::P2, grid, TransferMethod::OptionB,
                                Quantity::ModelError, replicates, Rng::derive(seed, 13, 1),
                                threads);
    report.rows.push_back(row("(3) large L_co: option A has no interior floor",
                              a.points.front().mean - a.points.back().mean, 0.0,
                              "significantly decreasing", significantly_decreasing(a)));
    report.rows.push_back(row("(3) large L_co: option B keeps a floor",
                              b.points.back().mean - b.points[b.argmin()].mean, 0.0,
                              "interior floor with 3-SE rise", has_interior_floor(b)));

    const GroundTruth quiet =
        truth_from(5, 5, 5, 1.0, 0.0, TruthMode::Equal, 1.0, 1.0, 0.1, 0.2);
    const std::vector<double> wide = {54, 58, 64, 70, 80, 100, 130};
    const Curve a2 = sweep_curve(quiet, cfg, SweepVariable::P2, wide, TransferMethod::OptionA,
                                 Quantity::ModelError, replicates, Rng::derive(seed, 13, 2),
                                 threads);
    report.rows.push_back(row("(3) small L_co: option A has a floor",
                              a2.points.back().mean - a2.points[a2.argmin()].mean, 0.0,
                              "interior floor with 3-SE rise", has_interior_floor(a2)));
  }

  {  // (4) The source-specific block matters only at intermediate
     // overparameterization.
    const LearnerConfig base = learner_from(5, 101, 20, 100, 50);
    const int points[] = {101, 200, 2000};
    double diffs[3], diff_se[3];
    for (int i = 0; i < 3; ++i) {
      LearnerConfig cfg = base;
      cfg.p1 = points[i];
      const GroundTruth small_q =
          truth_from(5, 5, 5, 1.0, 0.0, TruthMode::Equal, 1.0, 0.0, 0.0, 0.0);
      const GroundTruth large_q =
          truth_from(5, 5, 5, 1.0, 0.0, TruthMode::Equal, 5.0, 0.0, 0.0, 0.0);
      // Paired streams: identical seeds feed both truths.
      const auto vs = replicate_values(small_q, cfg, TransferMethod::OptionA,
                                       Quantity::TransferError, replicates,
                                       Rng::derive(seed, 14, i), threads);
      const auto vl = replicate_values(large_q, cfg, TransferMethod::OptionA,
                                       Quantity::TransferError, replicates,
                                       Rng::derive(seed, 14, i), threads);
      std::vector<double> delta(vs.size());
      for (std::size_t k = 0; k < vs.size(); ++k) delta[k] = vl[k] - vs[k];
      const MeanSe agg = aggregate(delta);
      diffs[i] = agg.mean;
      diff_se[i] = agg.se;
    }
    report.rows.push_back(row("(4) q1 effect significant at r near 1/2", diffs[1], 0.0,
                              "paired diff > 3 SE", diffs[1] > 3.0 * diff_se[1]));
    report.rows.push_back(
        row("(4) q1 effect fades when slightly overparameterized", diffs[1] - 2.0 * diffs[0], 0.0,
            "mid diff > 2x slight diff + 3 SE",
            diffs[1] - 2.0 * diffs[0] >
                3.0 * std::sqrt(diff_se[1] * diff_se[1] + 4.0 * diff_se[0] * diff_se[0])));
    report.rows.push_back(
        row("(4) q1 effect fades when heavily overparameterized", diffs[1] - 2.0 * diffs[2], 0.0,
            "mid diff > 2x heavy diff + 3 SE",
            diffs[1] - 2.0 * diffs[2] >
                3.0 * std::sqrt(diff_se[1] * diff_se[1] + 4.0 * diff_se[2] * diff_se[2])));
  }

  {  // (A1) Benign overfitting in p2 is easier with small knowledge transfer.
    const std::vector<double> grid = {54, 60, 70, 90, 130};
    const LearnerConfig cfg = learner_from(5, 20, 60, 100, 50);
    const GroundTruth large_lco =
        truth_from(5, 5, 5, 1.0, 0.0, TruthMode::Equal, 1.0, 1.0, 3.0, 0.2);
    const Curve cl = sweep_curve(large_lco, cfg, SweepVariable::P2, grid, TransferMethod::OptionA,
                                 Quantity::ModelError, replicates, Rng::derive(seed, 15, 0),
                                 threads);
    report.rows.push_back(row("(A1) large L_co: option A descends across the grid",
                              cl.points.front().mean - cl.points.back().mean, 0.0,
                              "significantly decreasing", significantly_decreasing(cl)));
    const GroundTruth small_lco =
        truth_from(5, 5, 5, 1.0, 0.0, TruthMode::Equal, 1.0, 1.0, 0.1, 0.2);
    const Curve cs = sweep_curve(small_lco, cfg, SweepVariable::P2, grid, TransferMethod::OptionA,
                                 Quantity::ModelError, replicates, Rng::derive(seed, 15, 1),
                                 threads);
    report.rows.push_back(row("(A1) small L_co: option A turns back up",
                              cs.points.back().mean - cs.points[cs.argmin()].mean, 0.0,
                              "interior floor with 3-SE rise", has_interior_floor(cs)));
  }

  {  // (A2) bnoise is not monotone in p.
    const GroundTruth gt = truth_from(5, 5, 5, 0.1, 0.0, TruthMode::Equal, 0.1, 0.1, 1.0, 0.2);
    const LearnerConfig cfg = learner_from(5, 120, 60, 100, 50);
    const std::vector<double> grid = {5, 20, 48, 150, 400};
    const Curve c = sweep_curve(gt, cfg, SweepVariable::P, grid, TransferMethod::OptionA,
                                Quantity::ModelError, replicates, Rng::derive(seed, 16, 0),
                                threads);
    const MeanSe& peak = c.points[2];  // p = 48, near sqrt(p1 (p1 - n1 - 1))
    report.rows.push_back(row("(A2) error rises toward p near sqrt(p1(p1-n1-1))",
                              peak.mean - c.points.front().mean, 0.0, "rise > 3 SE",
                              peak.mean - c.points.front().mean >
                                  3.0 * comb_se(peak, c.points.front())));
    report.rows.push_back(row("(A2) error falls again at large p",
                              peak.mean - c.points.back().mean, 0.0, "fall > 3 SE",
                              peak.mean - c.points.back().mean >
                                  3.0 * comb_se(peak, c.points.back())));
  }

  {  // (B1) Option B benign overfitting wants large transfer and small q2.
    const std::vector<double> grid = {48, 54, 60, 70, 120, 400};
    const LearnerConfig cfg = learner_from(5, 20, 60, 100, 50);
    const GroundTruth small_q2 =
        truth_from(5, 5, 5, 1.0, 0.0, TruthMode::Equal, 1.0, 0.1, 0.1, 0.2);
    const Curve cs = sweep_curve(small_q2, cfg, SweepVariable::P2, grid, TransferMethod::OptionB,
                                 Quantity::ModelError, replicates, Rng::derive(seed, 17, 0),
                                 threads);
    report.rows.push_back(row("(B1) small q2: option B descends across the grid",
                              cs.points.front().mean - cs.points.back().mean, 0.0,
                              "significantly decreasing", significantly_decreasing(cs)));
    const GroundTruth large_q2 =
        truth_from(5, 5, 5, 1.0, 0.0, TruthMode::Equal, 1.0, 1.0, 0.1, 0.2);
    const Curve cl = sweep_curve(large_q2, cfg, SweepVariable::P2, grid, TransferMethod::OptionB,
                                 Quantity::ModelError, replicates, Rng::derive(seed, 17, 1),
                                 threads);
    report.rows.push_back(row("(B1) large q2: option B turns back up",
                              cl.points.back().mean - cl.points[cl.argmin()].mean, 0.0,
                              "interior floor with 3-SE rise", has_interior_floor(cl)));
  }

  {  // (B2) Multiple descents of option B along p.
    const GroundTruth gt = truth_from(2, 2, 2, 0.1, 0.0, TruthMode::Equal, 0.1, 0.1, 2.0, 0.5);
    const LearnerConfig cfg = learner_from(2, 120, 60, 100, 50);
    const std::vector<double> grid = {2, 5, 10, 15, 20, 30, 48, 100, 200, 400};
    const Curve c = sweep_curve(gt, cfg, SweepVariable::P, grid, TransferMethod::OptionB,
                                Quantity::ModelError, replicates, Rng::derive(seed, 18, 0),
                                threads);
    report.rows.push_back(row("(B2) option B error has two descents in p",
                              has_two_descents(c) ? 2.0 : 1.0, 2.0,
                              "two 3-SE-significant descents", has_two_descents(c)));
  }

  {  // (C3) The options meet as p2 grows without bound.
    const GroundTruth gt = truth_from(5, 5, 5, 1.0, 0.0, TruthMode::Equal, 1.0, 1.0, 0.5, 0.5);
    const LearnerConfig cfg = learner_from(5, 5, 2000, 100, 50);
    const MeanSe a = measure(gt, cfg, TransferMethod::OptionA, Quantity::ModelError, replicates,
                             Rng::derive(seed, 19, 0), threads);
    const MeanSe b = measure(gt, cfg, TransferMethod::OptionB, Quantity::ModelError, replicates,
                             Rng::derive(seed, 19, 1), threads);
    const double gap = std::abs(a.mean - b.mean);
    report.rows.push_back(row("(C3) |option A - option B| at p2=2000", gap, 0.0,
                              "below 3 combined SE", gap <= 3.0 * comb_se(a, b)));
  }

  return report;
}

// ---------------------------------------------------------------------------
// Figure features

namespace {

struct FigureRun {
  ExperimentConfig exp;
  Curve curve;
};

/// Runs one preset config on a reduced grid with 200 replicates per point.
FigureRun run_preset(const Preset& preset, const std::vector<double>& grid, int threads) {
  ExperimentConfig exp = experiment_from_config(Config::parse(preset.config_text));
  exp.grid = grid;
  exp.replicates = 200;
  exp.threads = threads;
  FigureRun out;
  out.exp = exp;
  const GroundTruth gt = make_ground_truth(exp);
  out.curve = sweep_curve(gt, exp.learner, parse_variable(exp.variable), grid,
                          parse_method(exp.method), parse_quantity(exp.quantity), exp.replicates,
                          exp.seed, threads);
  return out;
}

const Preset& find_preset(const std::vector<Preset>& presets, const std::string& name) {
  for (const Preset& p : presets)
    if (p.name == name) return p;
  throw ConfigError("no preset named " + name);
}

}  // namespace

Report verify_figures(std::uint64_t seed, int threads) {
  (void)seed;  // presets carry their own seeds
  Report report;
  report.title = "figure preset features";

  {  // fig1a: the p1 story.
    const auto presets = figure_presets("fig1a");
    for (const char* method : {"a", "b"}) {
      const FigureRun noisy = run_preset(
          find_preset(presets, std::string("fig1a_s3_q1_") + method), {10, 80, 110, 200}, threads);
      const auto& pts = noisy.curve.points;
      report.rows.push_back(row(std::string("fig1a sigma1=3 option ") + method +
                                    ": overparameterized tail descends below the threshold side",
                                pts[2].mean - pts[3].mean, 0.0, "p1=110 above p1=200 by 3 SE",
                                pts[2].mean - pts[3].mean > 3.0 * comb_se(pts[2], pts[3])));
      report.rows.push_back(row(std::string("fig1a sigma1=3 option ") + method +
                                    ": tail dips below the late underparameterized regime",
                                pts[1].mean - pts[3].mean, 0.0, "p1=80 above p1=200 by 3 SE",
                                pts[1].mean - pts[3].mean > 3.0 * comb_se(pts[1], pts[3])));
      const FigureRun quiet = run_preset(
          find_preset(presets, std::string("fig1a_s01_q1_") + method), {10, 110, 200}, threads);
      const auto& qts = quiet.curve.points;
      report.rows.push_back(row(std::string("fig1a sigma1=0.1 option ") + method +
                                    ": overparameterized regime stays above",
                                qts[2].mean - qts[0].mean, 0.0, "p1=200 above p1=10 by 3 SE",
                                qts[2].mean - qts[0].mean > 3.0 * comb_se(qts[2], qts[0])));
    }
  }

  {  // fig1b: the p2 story.
    const auto presets = figure_presets("fig1b");
    for (const char* method : {"a", "b"}) {
      const FigureRun plus = run_preset(find_preset(presets, std::string("fig1b_plus_") + method),
                                        {54, 60, 64, 70, 90, 200}, threads);
      report.rows.push_back(row(std::string("fig1b small noise option ") + method +
                                    ": descent floor inside the overparameterized regime",
                                plus.curve.grid[plus.curve.argmin()], 64.0,
                                "interior floor with 3-SE rise",
                                has_interior_floor(plus.curve)));
      const FigureRun nabla = run_preset(
          find_preset(presets, std::string("fig1b_nabla_") + method), {60, 100, 200, 2000},
          threads);
      report.rows.push_back(row(std::string("fig1b sigma2=2 option ") + method +
                                    ": error keeps descending",
                                nabla.curve.points.front().mean - nabla.curve.points.back().mean,
                                0.0, "significantly decreasing",
                                significantly_decreasing(nabla.curve)));
    }
    {  // sigma1 = 3: option A descends, option B keeps a floor.
      const FigureRun xa = run_preset(find_preset(presets, "fig1b_times_a"), {60, 100, 200},
                                      threads);
      report.rows.push_back(row("fig1b sigma1=3 option a: no floor in the plotted range",
                                xa.curve.points.front().mean - xa.curve.points.back().mean, 0.0,
                                "significantly decreasing", significantly_decreasing(xa.curve)));
      const FigureRun xb = run_preset(find_preset(presets, "fig1b_times_b"), {50, 60, 70, 200},
                                      threads);
      report.rows.push_back(row("fig1b sigma1=3 option b: floor stays",
                                xb.curve.grid[xb.curve.argmin()], 55.5,
                                "interior floor with 3-SE rise", has_interior_floor(xb.curve)));
    }
    {  // The options overlap at very large p2.
      const FigureRun pa = run_preset(find_preset(presets, "fig1b_plus_a"), {2000}, threads);
      const FigureRun pb = run_preset(find_preset(presets, "fig1b_plus_b"), {2000}, threads);
      const double gap = std::abs(pa.curve.points[0].mean - pb.curve.points[0].mean);
      report.rows.push_back(row("fig1b: options A and B overlap at p2=2000", gap, 0.0,
                                "below 3 combined SE",
                                gap <= 3.0 * comb_se(pa.curve.points[0], pb.curve.points[0])));
    }
  }

  {  // fig1c: the p story.
    const auto presets = figure_presets("fig1c");
    const FigureRun a = run_preset(find_preset(presets, "fig1c_a"), {5, 48, 400}, threads);
    const auto& pts = a.curve.points;
    report.rows.push_back(row("fig1c option a: error rises into the bnoise peak",
                              pts[1].mean - pts[0].mean, 0.0, "rise > 3 SE",
                              pts[1].mean - pts[0].mean > 3.0 * comb_se(pts[1], pts[0])));
    report.rows.push_back(row("fig1c option a: error falls past the bnoise peak",
                              pts[1].mean - pts[2].mean, 0.0, "fall > 3 SE",
                              pts[1].mean - pts[2].mean > 3.0 * comb_se(pts[1], pts[2])));
    const FigureRun b =
        run_preset(find_preset(presets, "fig1c_b"), {5, 15, 100, 400}, threads);
    report.rows.push_back(row("fig1c option b: multiple descents", has_two_descents(b.curve) ? 2.0
                                                                                            : 1.0,
                              2.0, "two 3-SE-significant descents", has_two_descents(b.curve)));
  }

  {  // tightness: empirical noiseless transferring error under min(b_i^2).
    for (const Preset& preset : figure_presets("tightness")) {
      ExperimentConfig exp = experiment_from_config(Config::parse(preset.config_text));
      exp.replicates = 200;
      exp.threads = threads;
      const GroundTruth gt = make_ground_truth(exp);
      SweepSpec spec = make_sweep_spec(exp);
      spec.grid = {110, 150, 200, 400};
      for (const SweepRecord& r : run_sweep(spec, gt, exp.learner)) {
        report.rows.push_back(row(preset.name + ": bound holds at p=" + format_double(r.value),
                                  r.empirical_mean, r.theory->upper,
                                  "mean <= min(b1^2,b2^2,b3^2) + 3 SE", check_bounds(r, 3.0)));
      }
    }
  }

  return report;
}

}  // namespace montecarlo
}  // namespace translin
