#pragma once

#include "translin/types.hpp"

#include <cstdint>

namespace translin {

/// Deterministic Gaussian stream built on splitmix64 with Box-Muller.
/// Streams seeded from the same value produce identical draws on every
/// platform, independent of the standard library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  /// Derives an independent stream seed from (master, a, b). Used to give
  /// every (grid point, replicate) pair its own stream, so results do not
  /// depend on scheduling order.
  static std::uint64_t derive(std::uint64_t master, std::uint64_t a, std::uint64_t b);

  std::uint64_t next_u64();

  /// Uniform on (0, 1].
  double uniform();

  /// Standard normal draw.
  double normal();

  /// n i.i.d. N(0, 1) entries.
  Vector normal_vector(Index n);

  /// rows x cols matrix of i.i.d. N(0, 1) entries, filled column-major.
  Matrix normal_matrix(Index rows, Index cols);

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace translin
