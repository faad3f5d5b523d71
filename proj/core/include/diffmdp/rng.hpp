#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace diffmdp {

/// Identifies one reproducible stream of Gaussian increments. Identical
/// (master_seed, stream_id) pairs always produce identical sequences;
/// distinct stream_ids give statistically independent streams, so
/// parallel workers can consume streams in any order without affecting
/// results.
struct RandomSource {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;

  RandomSource stream(std::uint64_t id) const { return {master_seed, id}; }
};

/// Mixes a phase tag into a master seed so that different pipeline stages
/// (kernel estimation, rollouts, coupling, ...) draw from disjoint stream
/// families even when they share stream ids.
std::uint64_t derive_phase_seed(std::uint64_t master_seed, std::uint64_t phase_tag);

/// Pipeline stages; each combines with the master seed and a salt (e.g.
/// the index into an h sweep) to give an independent stream family.
enum PhaseTag : std::uint64_t {
  kPhaseKernel = 1,
  kPhaseDiscountedRollout = 2,
  kPhaseErgodicRollout = 3,
  kPhaseCoupling = 4,
  kPhaseLongRun = 5,
  kPhaseGapCheck = 6,
  kPhaseQLearning = 7,
  kPhaseValidation = 8,
};

inline RandomSource phase_source(std::uint64_t master_seed, std::uint64_t phase_tag,
                                 std::uint64_t salt = 0) {
  return {derive_phase_seed(derive_phase_seed(master_seed, phase_tag), salt), 0};
}

/// Counter-based Philox4x32-10 generator (Salmon et al., SC'11).
/// The key holds the master seed, the high counter words hold the stream
/// id, and the low words count blocks, so any block can be regenerated
/// from (seed, stream, block) alone.
class Philox4x32 {
public:
  explicit Philox4x32(RandomSource src);

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  /// Uniform double in (0, 1), 53 usable bits.
  double next_uniform();

  /// One keyed block of four 32-bit words; exposed for known-answer tests.
  static std::array<std::uint32_t, 4> block(const std::array<std::uint32_t, 4>& ctr,
                                            const std::array<std::uint32_t, 2>& key);

private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> ctr_;
  std::array<std::uint32_t, 4> buf_{};
  int pos_ = 4;  // forces refill on first use
};

/// Standard Gaussian stream: Box-Muller over Philox uniforms. Exactly two
/// variates are produced per uniform pair, so the sequence is a pure
/// function of the RandomSource.
class GaussianStream {
public:
  explicit GaussianStream(RandomSource src) : uni_(src) {}

  double next();
  void fill(std::span<double> out);

private:
  Philox4x32 uni_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace diffmdp
