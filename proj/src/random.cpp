// SPDX-License-Identifier: Apache-2.0
#include "lse/random.hpp"

#include <cmath>
#include <numbers>

#include "lse/error.hpp"

namespace lse {

namespace {

constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;
constexpr std::uint64_t kBlockMask = (std::uint64_t{1} << 40) - 1;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
  const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  hi = static_cast<std::uint64_t>(p >> 64);
  lo = static_cast<std::uint64_t>(p);
}

}  // namespace

Philox4x64::Counter Philox4x64::generate(Counter ctr, Key key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

RandomStream::RandomStream(const StreamKey& key) {
  if (key.replicate >> 56) throw RangeError("stream key: replicate exceeds 56 bits");
  if (key.cell.level < 0 || key.cell.level > 255) throw RangeError("stream key: level exceeds 8 bits");
  if (key.vertex > 0xFFFF) throw RangeError("stream key: vertex exceeds 16 bits");
  key_ = {key.seed, (key.replicate << 8) | static_cast<std::uint64_t>(key.purpose)};
  for (int w = 0; w < 3; ++w) {
    counter_[w] = static_cast<std::uint32_t>(key.cell.index[2 * w]) |
                  (static_cast<std::uint64_t>(static_cast<std::uint32_t>(key.cell.index[2 * w + 1])) << 32);
  }
  counter_[3] = (static_cast<std::uint64_t>(key.cell.level) << 56) | (static_cast<std::uint64_t>(key.vertex) << 40);
}

std::uint64_t RandomStream::next_u64() {
  if (used_ == 4) {
    if ((counter_[3] & kBlockMask) == kBlockMask) throw RangeError("random stream exhausted");
    block_ = Philox4x64::generate(counter_, key_);
    ++counter_[3];
    used_ = 0;
  }
  return block_[used_++];
}

double RandomStream::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double RandomStream::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

}  // namespace lse
