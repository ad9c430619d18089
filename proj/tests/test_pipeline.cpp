#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <doctest.h>

#include "translin/montecarlo.hpp"
#include "translin/pipeline.hpp"

#include <cmath>
#include <functional>
#include <vector>

using namespace translin;

namespace {

struct Scenario {
  GroundTruth gt;
  LearnerConfig cfg;
};

Scenario make_scenario(double norm_w, double delta, TruthMode mode, double norm_q1,
                       double norm_q2, double sigma1, double sigma2, LearnerConfig cfg) {
  Scenario s;
  s.gt.s = std::min(5, cfg.p);
  s.gt.s1 = std::min(5, cfg.p1);
  s.gt.s2 = std::min(5, cfg.p2);
  auto [w1, w2] = make_truth_vectors(s.gt.s, norm_w, delta, mode);
  s.gt.w1 = w1;
  s.gt.w2 = w2;
  s.gt.q1 = uniform_norm_vector(s.gt.s1, norm_q1);
  s.gt.q2 = uniform_norm_vector(s.gt.s2, norm_q2);
  s.gt.sigma1 = sigma1;
  s.gt.sigma2 = sigma2;
  s.cfg = cfg;
  return s;
}

LearnerConfig config(int p, int p1, int p2, int n1, int n2) {
  LearnerConfig cfg;
  cfg.p = p;
  cfg.p1 = p1;
  cfg.p2 = p2;
  cfg.n1 = n1;
  cfg.n2 = n2;
  return cfg;
}

montecarlo::MeanSe replicate_mean(int reps, std::uint64_t seed,
                                  const std::function<double(Rng&)>& fn) {
  std::vector<double> values(reps);
  for (int i = 0; i < reps; ++i) {
    Rng rng(Rng::derive(seed, 0, i));
    values[i] = fn(rng);
  }
  return montecarlo::aggregate(values);
}

}  // namespace

TEST_CASE("model_error basics") {
  ExtendedTruth truth;
  truth.w1e = truth.w2e = Vector::Constant(3, 1.0);
  truth.q1e = Vector(0);
  truth.q2e = Vector::Constant(2, -1.0);

  LearnedModel exact{truth.w2e, truth.q2e};
  CHECK(model_error(exact, truth) == 0.0);

  LearnedModel zero{Vector::Zero(3), Vector::Zero(2)};
  CHECK(model_error(zero, truth) == doctest::Approx(3.0 + 2.0));

  LearnedModel offset = exact;
  offset.w_tilde[0] += 1.0;
  offset.q_tilde[1] -= 1.0;
  CHECK(model_error(offset, truth) == doctest::Approx(2.0));

  LearnedModel bad{Vector::Zero(2), Vector::Zero(2)};
  CHECK_THROWS_AS(model_error(bad, truth), std::invalid_argument);
}

TEST_CASE("noiseless identifiable source training recovers the truth") {
  const Scenario s =
      make_scenario(1.0, 0.0, TruthMode::Equal, 1.0, 1.0, 0.0, 0.0, config(8, 6, 5, 100, 50));
  const ExtendedTruth truth = extend_truth(s.gt, s.cfg);
  Rng rng(3);
  const auto [model, data] = train_source(truth, s.cfg, rng);
  CHECK((model.w_tilde - truth.w1e).norm() <= 1e-8);
  CHECK((model.q_tilde - truth.q1e).norm() <= 1e-8);
}

TEST_CASE("overparameterized source training interpolates") {
  const Scenario s =
      make_scenario(1.0, 0.0, TruthMode::Equal, 1.0, 1.0, 2.0, 0.0, config(30, 30, 5, 20, 50));
  const ExtendedTruth truth = extend_truth(s.gt, s.cfg);
  Rng rng(4);
  const auto [model, data] = train_source(truth, s.cfg, rng);
  const Vector fitted =
      data.X.transpose() * model.w_tilde + data.Z.transpose() * model.q_tilde;
  const double mse = (fitted - data.y).squaredNorm() / data.y.size();
  CHECK(mse <= 1e-12 * (1.0 + data.y.squaredNorm() / data.y.size()));
}

TEST_CASE("source transferring error matches the closed form") {
  // delta = 0, p = 5, p1 = 5, n1 = 100, sigma1 = 1: expectation 5/89.
  const Scenario s =
      make_scenario(1.0, 0.0, TruthMode::Equal, 1.0, 1.0, 1.0, 0.0, config(5, 5, 5, 100, 50));
  const ExtendedTruth truth = extend_truth(s.gt, s.cfg);
  const auto agg = replicate_mean(10000, 101, [&](Rng& rng) {
    const auto [model, data] = train_source(truth, s.cfg, rng);
    return (truth.w2e - model.w_tilde).squaredNorm();
  });
  const double expected = 5.0 / 89.0;
  CHECK(std::abs(agg.mean - expected) <= 3.0 * agg.se);
}

TEST_CASE("option A with perfect transfer and clean target is exact") {
  const Scenario s =
      make_scenario(1.0, 0.0, TruthMode::Equal, 0.0, 0.0, 0.0, 0.0, config(5, 5, 5, 100, 50));
  const ExtendedTruth truth = extend_truth(s.gt, s.cfg);
  LearnedModel source{truth.w2e, Vector::Zero(5)};  // copy equals the target truth
  Rng rng(7);
  const TransferOutcome out = transfer_option_a(source, truth, s.cfg, rng);
  CHECK(out.model_error <= 1e-16);
  CHECK(out.model_error ==
        doctest::Approx((out.model.w_tilde - truth.w2e).squaredNorm() +
                        (out.model.q_tilde - truth.q2e).squaredNorm()));
}

TEST_CASE("option A underparameterized matches Eq-15 style closed form") {
  // L_co forced to zero: sigma1 = 0, delta = 0, step 1 underparameterized.
  // Expectation p2 sigma2^2 / (n2 - p2 - 1) = 5/44.
  const Scenario s =
      make_scenario(1.0, 0.0, TruthMode::Equal, 1.0, 1.0, 0.0, 1.0, config(5, 5, 5, 100, 50));
  const ExtendedTruth truth = extend_truth(s.gt, s.cfg);
  const auto agg = replicate_mean(4000, 103, [&](Rng& rng) {
    const auto [source, data] = train_source(truth, s.cfg, rng);
    return transfer_option_a(source, truth, s.cfg, rng).model_error;
  });
  CHECK(std::abs(agg.mean - 5.0 / 44.0) <= 3.0 * agg.se);
}

TEST_CASE("option B keeps an already-interpolating init") {
  const Scenario s =
      make_scenario(1.0, 0.0, TruthMode::Equal, 1.0, 0.0, 0.0, 0.0, config(5, 5, 10, 100, 10));
  const ExtendedTruth truth = extend_truth(s.gt, s.cfg);
  // q2 = 0 and sigma2 = 0, so the init (w2, 0) satisfies the target data.
  LearnedModel source{truth.w2e, Vector::Zero(5)};
  Rng rng(8);
  const TransferOutcome out = transfer_option_b(source, truth, s.cfg, rng);
  CHECK((out.model.w_tilde - truth.w2e).norm() <= 1e-9);
  CHECK(out.model.q_tilde.norm() <= 1e-9);
}

TEST_CASE("option B underparameterized matches Eq-17 style closed form") {
  // Expectation (p + p2) sigma2^2 / (n2 - (p + p2) - 1) = 10/39.
  const Scenario s =
      make_scenario(1.0, 0.0, TruthMode::Equal, 1.0, 1.0, 0.0, 1.0, config(5, 5, 5, 100, 50));
  const ExtendedTruth truth = extend_truth(s.gt, s.cfg);
  const auto agg = replicate_mean(4000, 105, [&](Rng& rng) {
    const auto [source, data] = train_source(truth, s.cfg, rng);
    return transfer_option_b(source, truth, s.cfg, rng).model_error;
  });
  CHECK(std::abs(agg.mean - 10.0 / 39.0) <= 3.0 * agg.se);
}

TEST_CASE("options A and B coincide when there is no common part") {
  GroundTruth gt;
  gt.s = 0;
  gt.s1 = 2;
  gt.s2 = 2;
  gt.w1 = gt.w2 = Vector(0);
  gt.q1 = uniform_norm_vector(2, 1.0);
  gt.q2 = uniform_norm_vector(2, 0.5);
  gt.sigma1 = 0.5;
  gt.sigma2 = 0.5;
  const LearnerConfig cfg = config(0, 6, 8, 10, 5);
  const ExtendedTruth truth = extend_truth(gt, cfg);

  for (int rep = 0; rep < 10; ++rep) {
    Rng rng_source(Rng::derive(11, 0, rep));
    const auto [source, data] = train_source(truth, cfg, rng_source);
    Rng rng_a(Rng::derive(13, 1, rep));
    Rng rng_b(Rng::derive(13, 1, rep));
    const TransferOutcome a = transfer_option_a(source, truth, cfg, rng_a);
    const TransferOutcome b = transfer_option_b(source, truth, cfg, rng_b);
    CHECK((a.model.q_tilde - b.model.q_tilde).norm() == 0.0);
  }
}

TEST_CASE("option B overparameterized output satisfies the KKT conditions") {
  const Scenario s =
      make_scenario(1.0, 0.5, TruthMode::Offset, 1.0, 1.0, 0.5, 0.5, config(10, 10, 30, 15, 20));
  const ExtendedTruth truth = extend_truth(s.gt, s.cfg);
  Rng rng(17);
  const auto [source, data] = train_source(truth, s.cfg, rng);
  Rng rng_target(18);
  // Rebuild the same target data the transfer step would draw.
  Rng rng_b(18);
  const TransferOutcome out = transfer_option_b(source, truth, s.cfg, rng_b);
  const Dataset target = sample_dataset(truth, Task::Target, s.cfg.n2, rng_target);

  Matrix stacked(s.cfg.p + s.cfg.p2, s.cfg.n2);
  stacked.topRows(s.cfg.p) = target.X;
  stacked.bottomRows(s.cfg.p2) = target.Z;
  Vector solution(s.cfg.p + s.cfg.p2);
  solution.head(s.cfg.p) = out.model.w_tilde;
  solution.tail(s.cfg.p2) = out.model.q_tilde;
  Vector init = Vector::Zero(s.cfg.p + s.cfg.p2);
  init.head(s.cfg.p) = source.w_tilde;

  // Feasibility and stationarity: the step lies in the column space of the
  // stacked design, so no null-space perturbation can shrink it.
  CHECK((stacked.transpose() * solution - target.y).norm() <=
        1e-8 * (1.0 + target.y.norm()));
  const auto parts = projection_residual<double>(stacked, solution - init);
  CHECK(parts.resid.norm() <= 1e-8 * (1.0 + (solution - init).norm()));
}

TEST_CASE("gradient descent from the init converges to the closed-form solution") {
  Rng rng(19);
  const Matrix a = rng.normal_matrix(30, 20);
  const Vector y = rng.normal_vector(20);
  const Vector a0 = rng.normal_vector(30);
  const Vector closed = min_norm_fit_from_init<double>(a, y, a0);

  // Plain full-batch gradient descent on the mean squared error.
  const double n = 20.0;
  Eigen::BDCSVD<Matrix> svd(a);
  const double sigma_max = svd.singularValues()[0];
  const double step = 0.45 * n / (sigma_max * sigma_max);
  Vector iterate = a0;
  for (int it = 0; it < 200000; ++it) {
    const Vector residual = a.transpose() * iterate - y;
    if (residual.lpNorm<Eigen::Infinity>() < 1e-10) break;
    iterate -= step * (2.0 / n) * (a * residual);
  }
  CHECK((a.transpose() * iterate - y).lpNorm<Eigen::Infinity>() < 1e-10);
  CHECK((iterate - closed).norm() <= 1e-6 * (1.0 + closed.norm()));
}

TEST_CASE("sample transfer with aligned clean tasks is exact") {
  const Scenario s =
      make_scenario(1.0, 0.0, TruthMode::Equal, 0.0, 0.0, 0.0, 0.0, config(5, 5, 5, 30, 30));
  const ExtendedTruth truth = extend_truth(s.gt, s.cfg);
  Rng rng(23);
  const TransferOutcome out = sample_transfer(truth, s.cfg, rng, false);
  CHECK(out.model_error <= 1e-16);
}

TEST_CASE("sample transfer decomposition reassembles the realized error") {
  for (bool overparam : {true, false}) {
    const LearnerConfig cfg =
        overparam ? config(90, 3, 4, 20, 20) : config(15, 3, 4, 20, 20);
    const Scenario s = make_scenario(1.0, 1.0, TruthMode::Offset, 0.7, 0.4, 0.5, 0.3, cfg);
    const ExtendedTruth truth = extend_truth(s.gt, s.cfg);
    for (int rep = 0; rep < 20; ++rep) {
      Rng rng(Rng::derive(29, overparam, rep));
      const TransferOutcome out = sample_transfer(truth, s.cfg, rng, false);
      const auto& d = out.decomposition;
      REQUIRE(d.k_bias.has_value());
      const double total = *d.k_bias + *d.k_noise + *d.k_similarity + 2.0 * *d.cross;
      CHECK(out.model_error == doctest::Approx(total).epsilon(1e-10));
    }
  }
}

TEST_CASE("sample transfer bias matches the stated expectation when overparameterized") {
  // E[K_bias] = (1 - nbar/p) ||w2||^2 + ||q2||^2.
  const Scenario s =
      make_scenario(1.0, 0.0, TruthMode::Equal, 0.5, 0.5, 0.3, 0.3, config(120, 3, 4, 20, 20));
  const ExtendedTruth truth = extend_truth(s.gt, s.cfg);
  std::vector<double> bias(2000);
  for (int i = 0; i < 2000; ++i) {
    Rng rng(Rng::derive(31, 0, i));
    bias[i] = *sample_transfer(truth, s.cfg, rng, false).decomposition.k_bias;
  }
  const auto agg = montecarlo::aggregate(bias);
  const double expected = (1.0 - 40.0 / 120.0) * 1.0 + 0.25;
  CHECK(std::abs(agg.mean - expected) <= 3.0 * agg.se);
}

TEST_CASE("cross terms of the decomposition vanish in expectation") {
  const Scenario s =
      make_scenario(1.0, 1.0, TruthMode::Offset, 0.5, 0.5, 0.4, 0.4, config(120, 3, 4, 20, 20));
  const ExtendedTruth truth = extend_truth(s.gt, s.cfg);
  std::vector<double> cross(3000);
  for (int i = 0; i < 3000; ++i) {
    Rng rng(Rng::derive(37, 0, i));
    cross[i] = *sample_transfer(truth, s.cfg, rng, false).decomposition.cross;
  }
  const auto agg = montecarlo::aggregate(cross);
  CHECK(std::abs(agg.mean) <= 3.0 * agg.se);
}

TEST_CASE("fine-tuned bias term matches its expectation") {
  // Overparameterized fine-tuning: E[T_bias] = (1 - n2/p2) ||q2||^2.
  const Scenario s =
      make_scenario(1.0, 0.0, TruthMode::Equal, 0.5, 0.8, 0.3, 0.3, config(30, 3, 60, 20, 20));
  const ExtendedTruth truth = extend_truth(s.gt, s.cfg);
  std::vector<double> tbias(2000);
  for (int i = 0; i < 2000; ++i) {
    Rng rng(Rng::derive(41, 0, i));
    const auto out = sample_transfer(truth, s.cfg, rng, true);
    REQUIRE(out.decomposition.t_bias.has_value());
    tbias[i] = *out.decomposition.t_bias;
  }
  const auto agg = montecarlo::aggregate(tbias);
  const double expected = (1.0 - 20.0 / 60.0) * 0.64;
  CHECK(std::abs(agg.mean - expected) <= 3.0 * agg.se);
}

TEST_CASE("fine tuning reuses the option A step-3 program on residuals") {
  const Scenario s =
      make_scenario(1.0, 0.0, TruthMode::Equal, 0.5, 0.8, 0.3, 0.2, config(10, 3, 6, 40, 30));
  const ExtendedTruth truth = extend_truth(s.gt, s.cfg);
  Rng rng(43);
  const TransferOutcome out = sample_transfer(truth, s.cfg, rng, true);

  // Replay the same streams and solve the step-3 program by hand.
  Rng replay(43);
  const Dataset source = sample_dataset(truth, Task::Source, s.cfg.n1, replay);
  const Dataset target = sample_dataset(truth, Task::Target, s.cfg.n2, replay);
  const Vector residual = target.y - target.X.transpose() * out.model.w_tilde;
  const Vector manual = least_squares_fit<double>(target.Z, residual);
  CHECK((out.model.q_tilde - manual).norm() <= 1e-12 * (1.0 + manual.norm()));

  // Underparameterized fine-tuning has no bias term.
  REQUIRE(out.decomposition.t_bias.has_value());
  CHECK(*out.decomposition.t_bias == 0.0);
}
