#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace translin {

template <class Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = MatrixX<double>;
using Vector = VectorX<double>;
using Index = Eigen::Index;

/// Parameter-count vs sample-count regime of a least-squares problem.
/// Threshold marks |params - samples| <= 1, where the closed-form error
/// expressions have vanishing denominators.
enum class Regime { Overparameterized, Underparameterized, Threshold };

inline Regime classify_regime(Index params, Index samples) {
  if (params > samples + 1) return Regime::Overparameterized;
  if (samples > params + 1) return Regime::Underparameterized;
  return Regime::Threshold;
}

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::Overparameterized: return "overparameterized";
    case Regime::Underparameterized: return "underparameterized";
    default: return "threshold";
  }
}

/// Thrown when a Gram matrix is numerically rank-deficient. Gaussian designs
/// are full rank almost surely, so this signals a caller error (e.g. n = 0).
class SingularMatrixError : public std::runtime_error {
 public:
  explicit SingularMatrixError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown by closed-form evaluators inside the threshold band, where the
/// denominators of the error formulas vanish.
class TheoryUndefinedAtThreshold : public std::domain_error {
 public:
  explicit TheoryUndefinedAtThreshold(const std::string& what) : std::domain_error(what) {}
};

}  // namespace translin
