#pragma once

// Counter-based random streams: every variate is a pure function of
// (master_seed, stream_id, counter), so replay is exact and streams are
// independent regardless of worker scheduling. Mixing is SplitMix64 over a
// per-stream key; distribution transforms are hand-rolled so sequences are
// bit-identical across platforms.

#include <cmath>
#include <cstdint>

namespace greenlab {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
      : key_(derive_key(master_seed, stream_id)),
        master_seed_(master_seed),
        stream_id_(stream_id) {}

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t next_u64() { return detail::splitmix64(key_ + ++counter_); }

  // uniform in [0, 1), 53-bit mantissa
  double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

  // uniform in (0, 1), safe under log()
  double uniform_pos() {
    return ((next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double exponential() { return -std::log(uniform_pos()); }

  // standard normal, Box-Muller; one draw per call keeps replay simple
  double normal() {
    const double u = uniform_pos();
    const double v = uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
  }

 private:
  static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream) {
    return detail::splitmix64(detail::splitmix64(seed) ^
                              detail::splitmix64(stream * 0xda942042e4dd58b5ULL + 1));
  }

  std::uint64_t key_;
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::uint64_t counter_ = 0;
};

}  // namespace greenlab
