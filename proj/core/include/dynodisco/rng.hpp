#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace dynodisco {

/// Deterministic random stream. Every source of randomness in the project is
/// an RngStream derived from one root seed through named substreams, so the
/// dataset, initialization, and adaptation stages can be re-seeded
/// independently without perturbing each other.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  /// Child stream whose seed depends only on this stream's seed and `name`
  /// (not on how much of this stream has been consumed).
  RngStream substream(std::string_view name) const;
  RngStream substream(std::string_view name, std::uint64_t index) const;

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64();
  double uniform(double lo, double hi);
  /// Normal draw parameterized by standard deviation (not variance).
  double normal(double mean, double stddev);
  int uniform_int(int lo, int hi);  // inclusive bounds

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

/// splitmix64 finalizer; used for substream seed derivation.
std::uint64_t mix_seed(std::uint64_t x);
std::uint64_t hash_name(std::string_view name);

}  // namespace dynodisco
