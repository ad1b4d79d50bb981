#pragma once

#include <cstdint>
#include <random>

namespace tb {

/**
 * Reproducible random stream identified by (seed, stream_id).
 *
 * Each trajectory in an ensemble owns one stream, so results do not depend on
 * how trajectories are partitioned across workers. Streams with distinct ids
 * are seeded through SplitMix64 and std::seed_seq, which decorrelates the
 * underlying Mersenne Twister states.
 */
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  /// Uniform double on the open interval (0, 1); consumes one 64-bit draw.
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  std::uint64_t next_u64() { return engine_(); }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  /// Access for std distributions (Poisson counts and similar).
  std::mt19937_64 &engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Disjoint stream-id ranges used by the ensemble code.
enum class StreamDomain : std::uint64_t {
  Chain = 1,
  Selection = 2,
  Lambda = 3,
  Control = 4,
  Launch = 5,
  Probe = 6,
  Quadrature = 7,
  Subsample = 8,
  Initial = 9,
};

constexpr std::uint64_t stream_id(StreamDomain domain, std::uint64_t index) {
  return (static_cast<std::uint64_t>(domain) << 40) | (index & ((std::uint64_t{1} << 40) - 1));
}

constexpr StreamDomain domain_of(std::uint64_t id) {
  return static_cast<StreamDomain>(id >> 40);
}

}  // namespace tb
