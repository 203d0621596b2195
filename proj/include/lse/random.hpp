// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>

#include "lse/grid.hpp"

namespace lse {

/// Philox4x64-10 counter-based generator (Salmon et al., Random123).
/// Stateless: each (counter, key) pair maps to four independent words.
struct Philox4x64 {
  using Counter = std::array<std::uint64_t, 4>;
  using Key = std::array<std::uint64_t, 2>;

  static Counter generate(Counter counter, Key key);
};

/// What a random stream is used for; part of the key so that streams for
/// different purposes never collide.
enum class StreamPurpose : std::uint8_t {
  kVertexSample = 1,
  kErrorPoints = 2,
  kPointScramble = 3,
};

/// Identity of one random stream. Samples depend only on these fields,
/// never on execution order.
///
/// Layout: key = (seed, replicate << 8 | purpose); counter words 0..2 pack
/// the six 32-bit cell indices, word 3 packs level (8 bits), vertex (16 bits)
/// and the 40-bit block number of the stream.
struct StreamKey {
  std::uint64_t seed = 0;
  std::uint64_t replicate = 0;
  StreamPurpose purpose = StreamPurpose::kVertexSample;
  Cell cell{};
  std::uint32_t vertex = 0;
};

/// Sequential draws from one keyed stream.
class RandomStream {
 public:
  explicit RandomStream(const StreamKey& key);

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal via Box-Muller; values come in cached pairs.
  double normal();

 private:
  Philox4x64::Key key_{};
  Philox4x64::Counter counter_{};
  Philox4x64::Counter block_{};
  int used_ = 4;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace lse
