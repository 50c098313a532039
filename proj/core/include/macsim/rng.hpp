#pragma once

#include <cstdint>

namespace macsim {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based stream: draw k is hash(seed, stream, k). Per-node streams are
// independent of scheduling, so adversary choices cannot leak coin flips.
class HashRng {
 public:
  HashRng() : base_(0) {}
  HashRng(std::uint64_t seed, std::uint64_t stream)
      : base_(splitmix64(splitmix64(seed) ^ splitmix64(stream ^ 0xa5a5a5a5a5a5a5a5ULL))) {}

  std::uint64_t next_u64() { return splitmix64(base_ + 0x9e3779b97f4a7c15ULL * (++counter_)); }

  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform in [0, n), n > 0 (Lemire reduction; bias negligible for our use)
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  bool coin() { return next_u64() & 1u; }

  std::uint64_t draws() const { return counter_; }

 private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

// Stream ids for the derived per-entity streams of one run seed.
namespace rng_stream {
inline constexpr std::uint64_t node(int id) { return 0x100000 + static_cast<std::uint64_t>(id); }
inline constexpr std::uint64_t byz(int id) { return 0x200000 + static_cast<std::uint64_t>(id); }
inline constexpr std::uint64_t adversary() { return 0x300000; }
inline constexpr std::uint64_t workload(int id) { return 0x400000 + static_cast<std::uint64_t>(id); }
inline constexpr std::uint64_t inputs() { return 0x500000; }
}  // namespace rng_stream

}  // namespace macsim
