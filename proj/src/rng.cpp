// SPDX-License-Identifier: Apache-2.0

#include "ggmrelax/rng.hpp"

namespace ggm {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, Stream purpose,
                          std::uint64_t index, std::uint64_t sub_index) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ static_cast<std::uint64_t>(purpose));
  h = splitmix64(h ^ index);
  h = splitmix64(h ^ sub_index);
  return h;
}

Rng substream(std::uint64_t master, Stream purpose, std::uint64_t index,
              std::uint64_t sub_index) {
  const std::uint64_t h = derive_seed(master, purpose, index, sub_index);
  std::seed_seq seq{static_cast<std::uint32_t>(h),
                    static_cast<std::uint32_t>(h >> 32)};
  return Rng(seq);
}

}  // namespace ggm
