#include "peakheight/numerics/random.hpp"

#include <cmath>
#include <stdexcept>

#include "peakheight/numerics/normal.hpp"

namespace peakheight::numerics {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                           std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_index,
                           std::uint32_t substream)
    : seed_(seed), stream_index_(stream_index), substream_(substream) {}

RandomStream RandomStream::substream(std::uint32_t k) const {
  return RandomStream(seed_, stream_index_, k);
}

void RandomStream::refill() {
  if (block_ == 0xFFFFFFFFu) throw std::overflow_error("RandomStream: substream exhausted");
  const std::array<std::uint32_t, 4> ctr = {
      block_, substream_, static_cast<std::uint32_t>(stream_index_),
      static_cast<std::uint32_t>(stream_index_ >> 32)};
  const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed_),
                                            static_cast<std::uint32_t>(seed_ >> 32)};
  bits_ = philox4x32_10(ctr, key);
  ++block_;
  bits_used_ = 0;
}

double RandomStream::next_uniform() {
  if (bits_used_ > 2) refill();
  const std::uint64_t word =
      (static_cast<std::uint64_t>(bits_[bits_used_]) << 32) | bits_[bits_used_ + 1];
  bits_used_ += 2;
  return (static_cast<double>(word >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::next_normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_normal_;
  }
  const double u1 = next_uniform();
  const double u2 = next_uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * kPi * u2;
  spare_normal_ = r * std::sin(angle);
  has_spare_ = true;
  return r * std::cos(angle);
}

}  // namespace peakheight::numerics
