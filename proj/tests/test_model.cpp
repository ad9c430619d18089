#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "translin/model.hpp"

#include <cmath>

using namespace translin;

namespace {

GroundTruth small_truth() {
  GroundTruth gt;
  gt.s = 2;
  gt.s1 = 1;
  gt.s2 = 1;
  gt.w1 = Vector(2);
  gt.w1 << 0.3, 0.4;
  gt.w2 = gt.w1;
  gt.q1 = Vector::Constant(1, 0.5);
  gt.q2 = Vector::Constant(1, -0.5);
  gt.sigma1 = 1.0;
  gt.sigma2 = 0.2;
  return gt;
}

LearnerConfig small_config() {
  LearnerConfig cfg;
  cfg.p = 5;
  cfg.p1 = 3;
  cfg.p2 = 4;
  cfg.n1 = 10;
  cfg.n2 = 8;
  return cfg;
}

}  // namespace

TEST_CASE("extend_truth zero-pads into the leading coordinates") {
  const auto ext = extend_truth(small_truth(), small_config());
  CHECK(ext.w1e.size() == 5);
  CHECK(ext.w1e[0] == doctest::Approx(0.3));
  CHECK(ext.w1e[1] == doctest::Approx(0.4));
  CHECK(ext.w1e.tail(3).norm() == 0.0);
  CHECK(ext.q1e.size() == 3);
  CHECK(ext.q1e[0] == doctest::Approx(0.5));
  CHECK(ext.effective_sigma1 == doctest::Approx(1.0));
  CHECK(ext.effective_sigma2 == doctest::Approx(0.2));
}

TEST_CASE("sacrificed features feed the effective noise") {
  GroundTruth gt = small_truth();
  gt.w1 << 0.1, 0.2;
  gt.w2 = gt.w1;
  Sacrifice sac;
  sac.common = {0};
  const auto ext = extend_truth(gt, small_config(), sac);
  CHECK(ext.w1e[0] == doctest::Approx(0.2));
  CHECK(ext.w1e.tail(4).norm() == 0.0);
  CHECK(ext.effective_sigma1 == doctest::Approx(std::sqrt(1.0 + 0.01)));
  CHECK(ext.effective_sigma2 == doctest::Approx(std::sqrt(0.04 + 0.01)));
}

TEST_CASE("empty truth extends to zeros with zero noise") {
  GroundTruth gt;
  gt.s = gt.s1 = gt.s2 = 0;
  gt.w1 = gt.w2 = Vector(0);
  gt.q1 = gt.q2 = Vector(0);
  gt.sigma1 = gt.sigma2 = 0.0;
  const auto ext = extend_truth(gt, small_config());
  CHECK(ext.w1e.norm() == 0.0);
  CHECK(ext.q2e.norm() == 0.0);
  CHECK(ext.effective_sigma1 == 0.0);
  CHECK(ext.effective_sigma2 == 0.0);
}

TEST_CASE("signal power is conserved across sacrifice choices") {
  const GroundTruth gt = small_truth();
  const LearnerConfig cfg = small_config();
  auto total_power = [&](const Sacrifice& sac) {
    const auto ext = extend_truth(gt, cfg, sac);
    return ext.w1e.squaredNorm() + ext.q1e.squaredNorm() +
           ext.effective_sigma1 * ext.effective_sigma1;
  };
  const double base = total_power({});
  Sacrifice drop_one;
  drop_one.common = {1};
  Sacrifice drop_two;
  drop_two.common = {0, 1};
  drop_two.source_specific = {0};
  CHECK(total_power(drop_one) == doctest::Approx(base).epsilon(1e-12));
  CHECK(total_power(drop_two) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("extend_truth rejects bad input") {
  GroundTruth gt = small_truth();
  LearnerConfig cfg = small_config();

  SUBCASE("too few selected features") {
    cfg.p = 1;
    CHECK_THROWS_AS(extend_truth(gt, cfg), std::invalid_argument);
  }
  SUBCASE("sacrifice index out of range") {
    Sacrifice sac;
    sac.common = {5};
    CHECK_THROWS_AS(extend_truth(gt, cfg, sac), std::invalid_argument);
  }
  SUBCASE("duplicate sacrifice index") {
    Sacrifice sac;
    sac.source_specific = {0, 0};
    CHECK_THROWS_AS(extend_truth(gt, cfg, sac), std::invalid_argument);
  }
  SUBCASE("mismatched vector length") {
    gt.w1 = Vector::Zero(3);
    CHECK_THROWS_AS(extend_truth(gt, cfg), std::invalid_argument);
  }
  SUBCASE("negative noise") {
    gt.sigma1 = -1;
    CHECK_THROWS_AS(extend_truth(gt, cfg), std::invalid_argument);
  }
}

TEST_CASE("make_truth_vectors modes") {
  auto [w1, w2] = make_truth_vectors(4, 2.0, 0.0, TruthMode::Equal);
  CHECK(w1.norm() == doctest::Approx(2.0));
  CHECK((w2 - w1).norm() == 0.0);

  auto [o1, o2] = make_truth_vectors(4, 1.5, 3.0, TruthMode::Opposite);
  CHECK(o1.norm() == doctest::Approx(1.5));
  CHECK((o2 + o1).norm() == 0.0);
  CHECK((o2 - o1).norm() == doctest::Approx(3.0));

  auto [f1, f2] = make_truth_vectors(4, 1.0, 0.7, TruthMode::Offset);
  CHECK(f1.norm() == doctest::Approx(1.0));
  CHECK((f2 - f1).norm() == doctest::Approx(0.7));
}

TEST_CASE("sampled datasets satisfy the reconstruction identity") {
  const auto ext = extend_truth(small_truth(), small_config());
  Rng rng(123);
  for (int trial = 0; trial < 50; ++trial) {
    const Dataset d = sample_dataset(ext, trial % 2 == 0 ? Task::Source : Task::Target, 20, rng);
    const Vector& w = trial % 2 == 0 ? ext.w1e : ext.w2e;
    const Vector& q = trial % 2 == 0 ? ext.q1e : ext.q2e;
    const Vector recon = d.X.transpose() * w + d.Z.transpose() * q + d.eps;
    const double err = (d.y - recon).lpNorm<Eigen::Infinity>();
    CHECK(err < 1e-10 * (1.0 + d.y.lpNorm<Eigen::Infinity>()));
  }
}

TEST_CASE("sampling is deterministic under a fixed seed") {
  const auto ext = extend_truth(small_truth(), small_config());
  Rng a(99), b(99);
  const Dataset da = sample_dataset(ext, Task::Source, 12, a);
  const Dataset db = sample_dataset(ext, Task::Source, 12, b);
  CHECK(da.X == db.X);
  CHECK(da.Z == db.Z);
  CHECK(da.y == db.y);
  CHECK(da.eps == db.eps);
}

TEST_CASE("degenerate samplers behave") {
  GroundTruth gt;
  gt.s = 1;
  gt.s1 = 0;
  gt.s2 = 0;
  gt.w1 = Vector::Constant(1, 1.0);
  gt.w2 = gt.w1;
  gt.q1 = Vector(0);
  gt.q2 = Vector(0);
  LearnerConfig cfg;
  cfg.p = 1;
  cfg.p1 = 0;
  cfg.p2 = 0;
  cfg.n1 = 5;
  cfg.n2 = 5;
  const auto ext = extend_truth(gt, cfg);
  Rng rng(5);

  SUBCASE("noiseless single-feature outputs equal the feature row") {
    const Dataset d = sample_dataset(ext, Task::Source, 6, rng);
    CHECK((d.y - d.X.row(0).transpose()).norm() == 0.0);
  }
  SUBCASE("all-zero truth gives all-zero outputs") {
    GroundTruth zero = gt;
    zero.w1.setZero();
    zero.w2.setZero();
    const auto zext = extend_truth(zero, cfg);
    const Dataset d = sample_dataset(zext, Task::Target, 6, rng);
    CHECK(d.y.norm() == 0.0);
  }
}

TEST_CASE("feature second moments match the standard normal design") {
  GroundTruth gt = small_truth();
  LearnerConfig cfg = small_config();
  const auto ext = extend_truth(gt, cfg);
  Rng rng(2024);
  double sum_sq = 0.0;
  long count = 0;
  while (count < 100000) {
    const Dataset d = sample_dataset(ext, Task::Source, 50, rng);
    sum_sq += d.X.squaredNorm();
    count += d.X.size();
  }
  const double second = sum_sq / static_cast<double>(count);
  // Var(x^2) = 2 for standard normals, so 3 SE = 3 sqrt(2/count).
  CHECK(std::abs(second - 1.0) < 3.0 * std::sqrt(2.0 / static_cast<double>(count)));
}
