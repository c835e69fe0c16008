#include "pcic/numkit/rng.hpp"

#include <array>

namespace pcic {

namespace {

constexpr std::uint32_t kStreamTag = 0x70636963u;  // "pcic"

std::mt19937_64 seeded_engine(std::uint64_t master, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(master & 0xffffffffu),
                    static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(index & 0xffffffffu),
                    static_cast<std::uint32_t>(index >> 32), kStreamTag};
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : master_(master_seed), index_(stream_index), engine_(seeded_engine(master_seed, stream_index)) {}

double RngStream::uniform01() {
  // (k + 0.5) / 2^53 for k in [0, 2^53): never exactly 0 or 1.
  const std::uint64_t k = engine_() >> 11;
  return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

RngStream substream(std::uint64_t master, std::uint64_t index) { return RngStream(master, index); }

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t tag) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ull * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace pcic
