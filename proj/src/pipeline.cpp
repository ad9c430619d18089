#include "translin/pipeline.hpp"

#include <string>

namespace translin {
namespace {

void check(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

/// Interpolate when parameters outnumber samples, least squares otherwise.
/// At params == samples the two closed forms coincide (exact solve).
Vector fit(const Matrix& a, const Vector& y) {
  if (a.rows() == 0) return Vector(0);
  return a.rows() > a.cols() ? min_norm_fit<double>(a, y) : least_squares_fit<double>(a, y);
}

Matrix stack_rows(const Matrix& top, const Matrix& bottom) {
  Matrix out(top.rows() + bottom.rows(), top.cols());
  out.topRows(top.rows()) = top;
  out.bottomRows(bottom.rows()) = bottom;
  return out;
}

/// Fits the target-specific block on residuals y2 - X2^T w_common, the step-3
/// program shared by Option A and fine-tuning.
Vector fit_specific_on_residual(const Dataset& target, const Vector& w_common) {
  const Vector residual = target.y - target.X.transpose() * w_common;
  return fit(target.Z, residual);
}

TransferOutcome finish(LearnedModel model, const LearnedModel& source,
                       const ExtendedTruth& truth) {
  TransferOutcome out;
  out.model = std::move(model);
  out.source_model = source;
  out.model_error = model_error(out.model, truth);
  out.transfer_error = (truth.w2e - source.w_tilde).squaredNorm();
  return out;
}

}  // namespace

double model_error(const LearnedModel& model, const ExtendedTruth& truth) {
  check(model.w_tilde.size() == truth.w2e.size(),
        "model_error: common-part length mismatch");
  check(model.q_tilde.size() == truth.q2e.size(),
        "model_error: specific-part length mismatch");
  return (model.w_tilde - truth.w2e).squaredNorm() + (model.q_tilde - truth.q2e).squaredNorm();
}

std::pair<LearnedModel, Dataset> train_source(const ExtendedTruth& truth,
                                              const LearnerConfig& cfg, Rng& rng) {
  Dataset data = sample_dataset(truth, Task::Source, cfg.n1, rng);
  const Vector solution = fit(stack_rows(data.X, data.Z), data.y);
  LearnedModel model{solution.head(cfg.p), solution.tail(cfg.p1)};
  return {std::move(model), std::move(data)};
}

TransferOutcome transfer_option_a(const LearnedModel& source, const ExtendedTruth& truth,
                                  const LearnerConfig& cfg, Rng& rng) {
  check(source.w_tilde.size() == cfg.p, "transfer_option_a: source model length mismatch");
  const Dataset target = sample_dataset(truth, Task::Target, cfg.n2, rng);
  LearnedModel model;
  model.w_tilde = source.w_tilde;
  model.q_tilde = fit_specific_on_residual(target, source.w_tilde);
  return finish(std::move(model), source, truth);
}

TransferOutcome transfer_option_b(const LearnedModel& source, const ExtendedTruth& truth,
                                  const LearnerConfig& cfg, Rng& rng) {
  check(source.w_tilde.size() == cfg.p, "transfer_option_b: source model length mismatch");
  const Dataset target = sample_dataset(truth, Task::Target, cfg.n2, rng);
  const Matrix stacked = stack_rows(target.X, target.Z);

  Vector solution;
  if (cfg.p + cfg.p2 > cfg.n2) {
    Vector init = Vector::Zero(cfg.p + cfg.p2);
    init.head(cfg.p) = source.w_tilde;
    solution = min_norm_fit_from_init<double>(stacked, target.y, init);
  } else {
    solution = fit(stacked, target.y);
  }
  LearnedModel model{solution.head(cfg.p), solution.tail(cfg.p2)};
  return finish(std::move(model), source, truth);
}

TransferOutcome sample_transfer(const ExtendedTruth& truth, const LearnerConfig& cfg, Rng& rng,
                                bool fine_tune) {
  const Dataset source_data = sample_dataset(truth, Task::Source, cfg.n1, rng);
  const Dataset target_data = sample_dataset(truth, Task::Target, cfg.n2, rng);
  const int pooled = cfg.n1 + cfg.n2;

  Matrix v(cfg.p, pooled);
  v.leftCols(cfg.n1) = source_data.X;
  v.rightCols(cfg.n2) = target_data.X;
  Vector y(pooled);
  y.head(cfg.n1) = source_data.y;
  y.tail(cfg.n2) = target_data.y;

  LearnedModel model;
  model.q_tilde = Vector::Zero(cfg.p2);

  // Realized decomposition. The pooled outputs split as
  // y = V^T w2 + xi + eps_tilde with xi carrying the task dissimilarity and
  // eps_tilde the noise plus the task-specific signal acting as noise.
  // One factorization of V serves the fit and every decomposition term.
  Decomposition dec;
  if (cfg.p > 0) {
    const DesignSvd<double> svd(v, "sample_transfer");
    model.w_tilde = svd.pseudo_solve(y);

    Vector eps_tilde(pooled);
    eps_tilde.head(cfg.n1) = source_data.Z.transpose() * truth.q1e + source_data.eps;
    eps_tilde.tail(cfg.n2) = target_data.Z.transpose() * truth.q2e + target_data.eps;
    const bool has_shift = (truth.w1e - truth.w2e).squaredNorm() > 0.0;

    const Vector noise_part = svd.pseudo_solve(eps_tilde);
    Vector shift_part = Vector::Zero(cfg.p);
    if (has_shift) {
      Vector xi = Vector::Zero(pooled);
      xi.head(cfg.n1) = source_data.X.transpose() * (truth.w1e - truth.w2e);
      shift_part = svd.pseudo_solve(xi);
    }
    dec.k_noise = noise_part.squaredNorm();
    dec.k_similarity = shift_part.squaredNorm();
    dec.cross = shift_part.dot(noise_part);
    if (cfg.p > pooled)
      dec.k_bias = svd.split(truth.w2e).resid.squaredNorm() + truth.q2e.squaredNorm();
    else
      dec.k_bias = truth.q2e.squaredNorm();
  } else {
    model.w_tilde = Vector(0);
    dec.k_noise = 0.0;
    dec.k_similarity = 0.0;
    dec.cross = 0.0;
    dec.k_bias = truth.q2e.squaredNorm();
  }

  if (fine_tune) {
    // gamma collects everything the fine-tuning step sees besides the true
    // target-specific signal.
    const Vector gamma =
        target_data.eps + target_data.X.transpose() * (truth.w2e - model.w_tilde);
    if (cfg.p2 > 0) {
      const DesignSvd<double> zsvd(target_data.Z, "sample_transfer fine-tune");
      model.q_tilde = zsvd.pseudo_solve(target_data.y - target_data.X.transpose() * model.w_tilde);
      if (cfg.p2 > cfg.n2) {
        dec.t_bias = zsvd.split(truth.q2e).resid.squaredNorm();
        dec.t_var = zsvd.pseudo_solve(gamma).squaredNorm();
      } else {
        dec.t_bias = 0.0;
        dec.t_var = zsvd.pseudo_solve(gamma).squaredNorm();
      }
    } else {
      dec.t_bias = 0.0;
      dec.t_var = 0.0;
    }
  }

  LearnedModel source_equivalent{model.w_tilde, Vector::Zero(cfg.p1)};
  TransferOutcome out = finish(std::move(model), source_equivalent, truth);
  out.decomposition = dec;
  return out;
}

}  // namespace translin
