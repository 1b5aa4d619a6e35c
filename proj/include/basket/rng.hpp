#pragma once

#include <array>
#include <cstdint>

namespace basket {

// Deterministic pseudo-random stream addressed by a 64-bit master seed plus a
// hierarchical path of integer indices (scenario, sample size, replication,
// method, chain, ...). A child stream is derived from the path alone, never
// from the parent's consumed state, so draws taken from a parent do not
// perturb any of its children. The generator is xoshiro256++ seeded through a
// splitmix64 expansion of the path hash.
class RngStream {
 public:
  explicit RngStream(std::uint64_t master_seed);

  // Derives the sub-stream for one path element. Streams with distinct paths
  // are statistically independent.
  [[nodiscard]] RngStream child(std::uint64_t index) const;

  std::uint64_t next_u64();

  // Uniform draw on the open interval (0, 1).
  double next_double();

 private:
  RngStream() = default;
  void seed_state();

  std::uint64_t path_hash_ = 0;
  std::array<std::uint64_t, 4> state_{};
};

}  // namespace basket
