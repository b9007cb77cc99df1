#pragma once

#include <array>
#include <cstdint>

namespace hypoheat {

/// Philox4x32-10 counter-based generator.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32(PhiloxCounter counter, PhiloxKey key);

/**
 * Stream of variates for one (seed, stream) pair. Blocks are addressed by
 * counter (block_lo, block_hi, stream_lo, stream_hi), so two streams never
 * share a block and the output does not depend on thread scheduling.
 */
class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1) with 53 random bits.
  double next_uniform();
  /// Standard normal by inverse CDF.
  double next_normal();

 private:
  PhiloxKey key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  PhiloxCounter buffer_{};
  int used_ = 2;  // 64-bit words consumed from buffer_
};

/// Inverse of the standard normal CDF on (0, 1).
double normal_quantile(double u);

}  // namespace hypoheat
