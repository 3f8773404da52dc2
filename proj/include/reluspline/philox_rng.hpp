#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>

#include "reluspline/inference.hpp"

namespace reluspline {

// Philox 4x32 block function, 10 rounds: a counter-based generator.  Each
// (key, counter) pair maps to four 32-bit words; replications own disjoint
// counter ranges, so draws are order-independent across replications.
struct Philox4x32 {
  static constexpr uint32_t kMul0 = 0xD2511F53u;
  static constexpr uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr uint32_t kWeyl1 = 0xBB67AE85u;

  static std::array<uint32_t, 4> block(std::array<uint32_t, 4> c,
                                       std::array<uint32_t, 2> k) {
    for (int round = 0; round < 10; ++round) {
      if (round) {
        k[0] += kWeyl0;
        k[1] += kWeyl1;
      }
      const uint64_t p0 = static_cast<uint64_t>(kMul0) * c[0];
      const uint64_t p1 = static_cast<uint64_t>(kMul1) * c[2];
      c = {static_cast<uint32_t>(p1 >> 32) ^ c[1] ^ k[0],
           static_cast<uint32_t>(p1),
           static_cast<uint32_t>(p0 >> 32) ^ c[3] ^ k[1],
           static_cast<uint32_t>(p0)};
    }
    return c;
  }
};

inline uint64_t splitmix64(uint64_t& s) {
  uint64_t z = (s += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Stream id for replication `rep` of a run at sample size `n`: a splitmix64
// chain folds the coordinates in one at a time.
inline uint64_t derive_stream(uint64_t master_seed, uint64_t n, uint64_t rep) {
  uint64_t s = master_seed;
  splitmix64(s);
  s ^= n;
  splitmix64(s);
  s ^= rep;
  return splitmix64(s);
}

// One replication's random stream: key = master seed, counter = (block index
// low/high, stream id low/high).
class RandomStream {
 public:
  RandomStream(uint64_t master_seed, uint64_t stream_id)
      : key_{static_cast<uint32_t>(master_seed),
             static_cast<uint32_t>(master_seed >> 32)},
        stream_{static_cast<uint32_t>(stream_id),
                static_cast<uint32_t>(stream_id >> 32)} {}

  uint64_t next64() {
    if (have_ == 0) {
      const auto out = Philox4x32::block(
          {static_cast<uint32_t>(block_), static_cast<uint32_t>(block_ >> 32),
           stream_[0], stream_[1]},
          key_);
      ++block_;
      buf_[0] = out[0] | (static_cast<uint64_t>(out[1]) << 32);
      buf_[1] = out[2] | (static_cast<uint64_t>(out[3]) << 32);
      have_ = 2;
    }
    const uint64_t v = buf_[2 - have_];
    --have_;
    return v;
  }

  // Strictly inside (0,1): 52 random bits centered in the cell.
  double uniform() {
    return ((next64() >> 12) + 0.5) * 0x1.0p-52;
  }

  double normal() { return normal_quantile(uniform()); }

  // Student t with 5 degrees of freedom, scaled to unit variance.
  double student_t5() {
    const double z = normal();
    double chi2 = 0.0;
    for (int i = 0; i < 5; ++i) {
      const double g = normal();
      chi2 += g * g;
    }
    return z / std::sqrt(chi2 / 5.0) * std::sqrt(3.0 / 5.0);
  }

 private:
  std::array<uint32_t, 2> key_;
  std::array<uint32_t, 2> stream_;
  uint64_t block_ = 0;
  std::array<uint64_t, 2> buf_{};
  int have_ = 0;
};

}  // namespace reluspline
