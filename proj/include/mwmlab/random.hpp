#pragma once

#include <cstdint>
#include <limits>

namespace mwmlab {

// SplitMix64 output finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t combine(std::uint64_t h, std::uint64_t v) {
  return mix64(h ^ mix64(v));
}

// Maps 64 random bits onto [0, 1) with 53-bit resolution.
constexpr double to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Counter-based stream: every draw is a pure function of (key, counters), so
// any consumer reading position (t, n, k) sees the same value regardless of
// what else it has read.
class CounterStream {
 public:
  constexpr explicit CounterStream(std::uint64_t key) : key_(key) {}

  constexpr std::uint64_t key() const { return key_; }
  constexpr CounterStream substream(std::uint64_t tag) const { return CounterStream(combine(key_, tag)); }

  constexpr std::uint64_t bits(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) const {
    return combine(combine(combine(key_, a), b), c);
  }
  constexpr double uniform(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) const {
    return to_unit(bits(a, b, c));
  }
  // p = 0 never fires, p = 1 always fires.
  constexpr bool bernoulli(double p, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) const {
    return uniform(a, b, c) < p;
  }

 private:
  std::uint64_t key_;
};

// Sequential SplitMix64 generator for policy-private randomness. Satisfies
// UniformRandomBitGenerator; `below` is used instead of std distributions so
// draws are identical across standard library implementations.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  constexpr explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform integer in [0, bound) by rejection; bound must be > 0.
  constexpr std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t r = (*this)();
    while (r >= limit) r = (*this)();
    return r % bound;
  }

 private:
  std::uint64_t state_;
};

// Stream domains within one replication.
enum class StreamDomain : std::uint64_t { connectivity = 1, arrivals = 2, policy = 3 };

// All random inputs of one replication. Connectivity and arrivals form the
// coupled sample path; the policy stream is private to baselines and is never
// read by the sample path.
struct PathStreams {
  CounterStream connectivity;
  CounterStream arrivals;
  CounterStream policy;

  static PathStreams for_replication(std::uint64_t seed, std::uint64_t replication) {
    const CounterStream root = CounterStream(seed).substream(replication);
    return {root.substream(static_cast<std::uint64_t>(StreamDomain::connectivity)),
            root.substream(static_cast<std::uint64_t>(StreamDomain::arrivals)),
            root.substream(static_cast<std::uint64_t>(StreamDomain::policy))};
  }

  SplitMix64 policy_rng(std::uint64_t slot) const { return SplitMix64(policy.bits(slot)); }
};

}  // namespace mwmlab
