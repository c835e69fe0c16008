#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace pcic {

/// Seeded random stream. Equal (master_seed, stream_index) pairs yield
/// identical sequences on every platform: the engine and the seed_seq
/// mixing are both fully specified by the standard.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

  std::uint64_t master_seed() const noexcept { return master_; }
  std::uint64_t stream_index() const noexcept { return index_; }

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  /// Uniform on the open interval (0, 1), 53 bits of resolution.
  double uniform01();

 private:
  std::uint64_t master_;
  std::uint64_t index_;
  std::mt19937_64 engine_;
};

/// Child stream `index` of `master`.
RngStream substream(std::uint64_t master, std::uint64_t index);

/// SplitMix64 finaliser; used to derive independent master seeds for
/// nested replication structures (cell -> replication -> purpose).
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t tag);

}  // namespace pcic
