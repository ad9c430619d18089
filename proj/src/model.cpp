#include "translin/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace translin {
namespace {

void check(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

/// Splits a true-parameter vector into kept entries (in order) and the
/// squared norm of the sacrificed entries.
std::pair<Vector, double> split_kept(const Vector& v, const std::vector<int>& dropped,
                                     const std::string& what) {
  std::set<int> drop(dropped.begin(), dropped.end());
  check(drop.size() == dropped.size(), what + ": duplicate sacrifice index");
  for (int i : dropped)
    check(i >= 0 && i < v.size(), what + ": sacrifice index " + std::to_string(i) +
                                      " outside [0, " + std::to_string(v.size()) + ")");
  Vector kept(v.size() - static_cast<Index>(drop.size()));
  double missing_sq = 0.0;
  Index k = 0;
  for (Index i = 0; i < v.size(); ++i) {
    if (drop.count(static_cast<int>(i)))
      missing_sq += v[i] * v[i];
    else
      kept[k++] = v[i];
  }
  return {kept, missing_sq};
}

Vector zero_pad(const Vector& head, Index len, const std::string& what) {
  check(head.size() <= len, what + ": " + std::to_string(head.size()) +
                                " kept true features do not fit in " + std::to_string(len) +
                                " selected ones");
  Vector out = Vector::Zero(len);
  out.head(head.size()) = head;
  return out;
}

}  // namespace

void GroundTruth::validate() const {
  check(s >= 0 && s1 >= 0 && s2 >= 0, "GroundTruth: negative feature count");
  check(w1.size() == s, "GroundTruth: w1 length != s");
  check(w2.size() == s, "GroundTruth: w2 length != s");
  check(q1.size() == s1, "GroundTruth: q1 length != s1");
  check(q2.size() == s2, "GroundTruth: q2 length != s2");
  check(sigma1 >= 0.0 && sigma2 >= 0.0, "GroundTruth: negative noise level");
}

void LearnerConfig::validate() const {
  check(p >= 0 && p1 >= 0 && p2 >= 0, "LearnerConfig: negative feature count");
  check(n1 >= 1 && n2 >= 1, "LearnerConfig: sample counts must be positive");
}

std::pair<Vector, Vector> make_truth_vectors(int s, double norm_w1, double delta, TruthMode mode) {
  check(s >= 0, "make_truth_vectors: negative s");
  check(norm_w1 >= 0.0 && delta >= 0.0, "make_truth_vectors: negative norm");
  Vector w1 = uniform_norm_vector(s, norm_w1);
  switch (mode) {
    case TruthMode::Equal:
      check(delta == 0.0, "make_truth_vectors: equal mode requires delta = 0");
      return {w1, w1};
    case TruthMode::Opposite:
      check(std::abs(delta - 2.0 * norm_w1) <= 1e-9 * (1.0 + norm_w1),
            "make_truth_vectors: opposite mode implies delta = 2 norm_w1");
      return {w1, -w1};
    case TruthMode::Offset: {
      check(s >= 1 || delta == 0.0, "make_truth_vectors: offset needs at least one feature");
      Vector w2 = w1;
      if (s >= 1) w2[0] += delta;
      return {w1, w2};
    }
  }
  throw std::invalid_argument("make_truth_vectors: unknown mode");
}

Vector uniform_norm_vector(int n, double norm) {
  check(n >= 0, "uniform_norm_vector: negative length");
  check(norm >= 0.0, "uniform_norm_vector: negative norm");
  if (n == 0) {
    check(norm == 0.0, "uniform_norm_vector: cannot place norm on empty vector");
    return Vector(0);
  }
  return Vector::Constant(n, norm / std::sqrt(static_cast<double>(n)));
}

ExtendedTruth extend_truth(const GroundTruth& gt, const LearnerConfig& cfg,
                           const Sacrifice& sacrifice) {
  gt.validate();
  cfg.validate();

  auto [w1_kept, w1_missing] = split_kept(gt.w1, sacrifice.common, "extend_truth common");
  auto [w2_kept, w2_missing] = split_kept(gt.w2, sacrifice.common, "extend_truth common");
  auto [q1_kept, q1_missing] = split_kept(gt.q1, sacrifice.source_specific, "extend_truth q1");
  auto [q2_kept, q2_missing] = split_kept(gt.q2, sacrifice.target_specific, "extend_truth q2");

  ExtendedTruth out;
  out.w1e = zero_pad(w1_kept, cfg.p, "extend_truth w1");
  out.w2e = zero_pad(w2_kept, cfg.p, "extend_truth w2");
  out.q1e = zero_pad(q1_kept, cfg.p1, "extend_truth q1");
  out.q2e = zero_pad(q2_kept, cfg.p2, "extend_truth q2");
  out.effective_sigma1 = std::sqrt(gt.sigma1 * gt.sigma1 + w1_missing + q1_missing);
  out.effective_sigma2 = std::sqrt(gt.sigma2 * gt.sigma2 + w2_missing + q2_missing);
  return out;
}

Dataset sample_dataset(const ExtendedTruth& truth, Task task, int n, Rng& rng) {
  check(n >= 1, "sample_dataset: need at least one sample");
  const Vector& w = task == Task::Source ? truth.w1e : truth.w2e;
  const Vector& q = task == Task::Source ? truth.q1e : truth.q2e;
  const double sigma = task == Task::Source ? truth.effective_sigma1 : truth.effective_sigma2;

  Dataset d;
  d.X = rng.normal_matrix(w.size(), n);
  d.Z = rng.normal_matrix(q.size(), n);
  d.eps = sigma == 0.0 ? Vector::Zero(n) : Vector(sigma * rng.normal_vector(n));
  d.y = d.X.transpose() * w + d.Z.transpose() * q + d.eps;
  return d;
}

}  // namespace translin
