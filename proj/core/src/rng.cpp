#include "dynodisco/rng.hpp"

namespace dynodisco {

std::uint64_t mix_seed(std::uint64_t x) {
  // splitmix64 finalizer (Steele, Lea, Flood 2014).
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t hash_name(std::string_view name) {
  // FNV-1a.
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

RngStream::RngStream(std::uint64_t seed) : seed_(seed), gen_(seed) {}

RngStream RngStream::substream(std::string_view name) const {
  return RngStream(mix_seed(seed_ ^ hash_name(name)));
}

RngStream RngStream::substream(std::string_view name, std::uint64_t index) const {
  return RngStream(mix_seed(mix_seed(seed_ ^ hash_name(name)) + index));
}

std::uint64_t RngStream::next_u64() { return gen_(); }

double RngStream::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(gen_);
}

double RngStream::normal(double mean, double stddev) {
  // A fresh distribution per call discards the Box-Muller spare, keeping the
  // stream state a pure function of the number of draws.
  return std::normal_distribution<double>(mean, stddev)(gen_);
}

int RngStream::uniform_int(int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(gen_);
}

}  // namespace dynodisco
