#include "diffmdp/rng.hpp"

#include <cmath>
#include <numbers>

namespace diffmdp {

namespace {

constexpr std::uint32_t kMult0 = 0xD2511F53u;
constexpr std::uint32_t kMult1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_phase_seed(std::uint64_t master_seed, std::uint64_t phase_tag) {
  return splitmix64(master_seed ^ splitmix64(phase_tag));
}

std::array<std::uint32_t, 4> Philox4x32::block(const std::array<std::uint32_t, 4>& ctr,
                                               const std::array<std::uint32_t, 2>& key) {
  std::array<std::uint32_t, 4> c = ctr;
  std::array<std::uint32_t, 2> k = key;
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMult0, c[0], hi0, lo0);
    mulhilo(kMult1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kWeyl0;
    k[1] += kWeyl1;
  }
  return c;
}

Philox4x32::Philox4x32(RandomSource src) {
  key_ = {static_cast<std::uint32_t>(src.master_seed),
          static_cast<std::uint32_t>(src.master_seed >> 32)};
  ctr_ = {0u, 0u, static_cast<std::uint32_t>(src.stream_id),
          static_cast<std::uint32_t>(src.stream_id >> 32)};
}

void Philox4x32::refill() {
  buf_ = block(ctr_, key_);
  pos_ = 0;
  // 64-bit block counter in the low words; the stream id stays in the
  // high words untouched.
  if (++ctr_[0] == 0u) ++ctr_[1];
}

std::uint32_t Philox4x32::next_u32() {
  if (pos_ >= 4) refill();
  return buf_[pos_++];
}

std::uint64_t Philox4x32::next_u64() {
  const std::uint64_t lo = next_u32();
  const std::uint64_t hi = next_u32();
  return (hi << 32) | lo;
}

double Philox4x32::next_uniform() {
  // (0,1): shift to 53 bits and offset by half an ulp so 0 never occurs.
  const std::uint64_t bits = next_u64() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double GaussianStream::next() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = uni_.next_uniform();
  const double u2 = uni_.next_uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

void GaussianStream::fill(std::span<double> out) {
  for (double& x : out) x = next();
}

}  // namespace diffmdp
