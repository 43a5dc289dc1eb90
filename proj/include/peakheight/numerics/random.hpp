#pragma once

#include <array>
#include <cstdint>

namespace peakheight::numerics {

/// Philox4x32-10 block function (Salmon et al., counter-based RNG).
/// Maps a 128-bit counter and 64-bit key to 128 random bits.
std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> counter,
                                           std::array<std::uint32_t, 2> key);

/// Reproducible stream of standard normal variates.
///
/// The variate sequence is a pure function of (seed, stream_index,
/// substream): the counter layout is {block, substream, index_lo, index_hi}
/// and the key is the seed. Distinct indices never share a counter, so
/// streams cannot overlap. Each instance is meant for a single consumer;
/// parallel code hands out substreams per chunk.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_index,
               std::uint32_t substream = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_index() const { return stream_index_; }
  std::uint32_t substream_id() const { return substream_; }

  /// Fresh stream at block 0 of the given substream.
  RandomStream substream(std::uint32_t k) const;

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double next_uniform();
  /// Standard normal via Box-Muller on consecutive uniform pairs.
  double next_normal();

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_index_;
  std::uint32_t substream_;
  std::uint32_t block_ = 0;
  std::array<std::uint32_t, 4> bits_{};
  int bits_used_ = 4;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// Convenience factory matching the library-wide naming.
inline RandomStream normal_stream(std::uint64_t seed, std::uint64_t stream_index) {
  return RandomStream(seed, stream_index);
}

}  // namespace peakheight::numerics
