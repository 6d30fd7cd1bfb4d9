#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace graphrec {

/// Seedable 64-bit generator with deterministic stream splitting.
///
/// Every stochastic routine takes an explicit Rng so that Monte-Carlo trials
/// are reproducible and can run in parallel: trial t of a run seeded with s
/// uses Rng(s).split(t), which does not depend on how many draws other
/// trials made.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0);

  std::uint64_t seed() const { return seed_; }

  /// Independent child stream identified by `stream`.
  Rng split(std::uint64_t stream) const;

  double uniform(double lo, double hi);
  double normal(double mean, double stddev);
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  bool bernoulli(double p);

  /// k distinct indices drawn uniformly from [0, n), returned sorted.
  std::vector<int> choose(int n, int k);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace graphrec
