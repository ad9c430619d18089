#pragma once

#include "translin/rng.hpp"
#include "translin/types.hpp"

#include <vector>

namespace translin {

enum class Task { Source, Target };

/// Generative model of one source/target task pair: true common parameters
/// w1, w2 on s shared features, task-specific parameters q1, q2, and
/// Gaussian noise levels.
struct GroundTruth {
  int s = 0;    // true common features
  int s1 = 0;   // true source-specific features
  int s2 = 0;   // true target-specific features
  Vector w1, w2;  // length s
  Vector q1;      // length s1
  Vector q2;      // length s2
  double sigma1 = 0.0;
  double sigma2 = 0.0;

  /// Validates lengths and noise signs; throws std::invalid_argument.
  void validate() const;

  double delta() const { return (w2 - w1).norm(); }
};

/// How w2 relates to w1 in the constructed truth. The paper's figures use
/// equal (w2 = w1) and opposite (w2 = -w1); offset places w2 = w1 + delta u
/// for a fixed unit direction u.
enum class TruthMode { Equal, Opposite, Offset };

/// Builds (w1, w2) of length s with ||w1|| = norm_w1 and ||w2 - w1|| = delta.
/// w1 spreads its norm uniformly over the s coordinates; Offset displaces
/// along the first coordinate. Coordinates are exchangeable under the
/// Gaussian design, so the directions carry no statistical meaning.
std::pair<Vector, Vector> make_truth_vectors(int s, double norm_w1, double delta, TruthMode mode);

/// Vector of length n with uniform entries and the requested norm.
Vector uniform_norm_vector(int n, double norm);

/// Feature/sample budget chosen by the learner.
struct LearnerConfig {
  int p = 0;    // selected common features
  int p1 = 0;   // selected source-specific features
  int p2 = 0;   // selected target-specific features
  int n1 = 0;   // source training samples
  int n2 = 0;   // target training samples

  void validate() const;
};

/// True-feature indices deliberately left out of the learner's selection,
/// one set per feature block.
struct Sacrifice {
  std::vector<int> common;           // indices into w1/w2 (affects both tasks)
  std::vector<int> source_specific;  // indices into q1
  std::vector<int> target_specific;  // indices into q2

  bool empty() const {
    return common.empty() && source_specific.empty() && target_specific.empty();
  }
};

/// Ground truth re-expressed on the learner's selected features: kept true
/// parameters occupy the first coordinates, redundant coordinates are zero,
/// and sacrificed parameters are absorbed into the effective noise.
struct ExtendedTruth {
  Vector w1e, w2e;  // length p
  Vector q1e;       // length p1
  Vector q2e;       // length p2
  double effective_sigma1 = 0.0;
  double effective_sigma2 = 0.0;
};

ExtendedTruth extend_truth(const GroundTruth& gt, const LearnerConfig& cfg,
                           const Sacrifice& sacrifice = {});

/// One task's stacked training data (columns are samples).
struct Dataset {
  Matrix X;    // p x n common-feature values
  Matrix Z;    // p_i x n task-specific feature values
  Vector y;    // n outputs
  Vector eps;  // n realized noise, retained for decompositions
};

Dataset sample_dataset(const ExtendedTruth& truth, Task task, int n, Rng& rng);

}  // namespace translin
