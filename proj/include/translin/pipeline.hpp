#pragma once

#include "translin/linalg.hpp"
#include "translin/model.hpp"
#include "translin/rng.hpp"

#include <optional>
#include <utility>

namespace translin {

/// Learned parameters for one task.
struct LearnedModel {
  Vector w_tilde;  // length p
  Vector q_tilde;  // length p_i of the task
};

/// Realized per-replicate error decomposition, populated by sample transfer
/// (k terms) and fine-tuning (t terms).
struct Decomposition {
  std::optional<double> k_bias, k_noise, k_similarity;
  std::optional<double> cross;  // inner product between similarity and noise pieces
  std::optional<double> t_bias, t_var;
};

struct TransferOutcome {
  LearnedModel model;         // target task
  LearnedModel source_model;  // step-1 result
  double model_error = 0.0;   // ||w~2 - w2||^2 + ||q~2 - q2||^2
  double transfer_error = 0.0;  // ||w2 - w~1||^2
  Decomposition decomposition;
};

/// Squared parameter distance of a learned target model to the target truth.
double model_error(const LearnedModel& model, const ExtendedTruth& truth);

/// Step 1: fit (w~1, q~1) on a freshly sampled source dataset. Min-l2-norm
/// interpolation when p + p1 > n1, unique least squares otherwise.
std::pair<LearnedModel, Dataset> train_source(const ExtendedTruth& truth,
                                              const LearnerConfig& cfg, Rng& rng);

/// Option A: copy w~1 verbatim, train only the target-specific block on a
/// fresh target dataset.
TransferOutcome transfer_option_a(const LearnedModel& source, const ExtendedTruth& truth,
                                  const LearnerConfig& cfg, Rng& rng);

/// Option B: use w~1 as the initialization and train all target parameters.
TransferOutcome transfer_option_b(const LearnedModel& source, const ExtendedTruth& truth,
                                  const LearnerConfig& cfg, Rng& rng);

/// Pooled-sample transfer: fit w~2 on the common features of the combined
/// source+target samples with q~2 = 0; optionally fine-tune q~2 on target
/// residuals afterwards. Populates the realized decomposition terms.
TransferOutcome sample_transfer(const ExtendedTruth& truth, const LearnerConfig& cfg, Rng& rng,
                                bool fine_tune);

}  // namespace translin
