#include "basket/rng.hpp"

namespace basket {

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

// splitmix64 finalizer; also used to fold path elements into the stream id.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t combine(std::uint64_t h, std::uint64_t v) {
  return mix64(h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed) {
  path_hash_ = mix64(master_seed);
  seed_state();
}

RngStream RngStream::child(std::uint64_t index) const {
  RngStream derived;
  derived.path_hash_ = combine(path_hash_, index);
  derived.seed_state();
  return derived;
}

void RngStream::seed_state() {
  std::uint64_t s = path_hash_;
  for (auto& word : state_) {
    s = mix64(s);
    word = s;
  }
  // xoshiro forbids the all-zero state; mix64 output of a fixed chain cannot
  // produce four zeros, but guard anyway.
  if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) {
    state_[0] = 0x9e3779b97f4a7c15ULL;
  }
}

std::uint64_t RngStream::next_u64() {
  const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double RngStream::next_double() {
  // 53-bit mantissa centered in its cell: strictly inside (0, 1).
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace basket
