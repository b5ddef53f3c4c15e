// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

namespace ggm {

/// Purpose tags for independent random substreams.
enum class Stream : std::uint64_t {
  kPositions = 1,
  kSigns = 2,
  kWeights = 3,
  kRewiring = 4,
  kSamples = 5,
  kPerturbation = 6,
  kModel = 7,
  kOracle = 8,
};

using Rng = std::mt19937_64;

/// Generator keyed by (master seed, purpose, index, sub-index). Streams for
/// different keys are statistically independent, so results never depend on
/// the order in which cells are evaluated.
Rng substream(std::uint64_t master, Stream purpose, std::uint64_t index = 0,
              std::uint64_t sub_index = 0);

/// Derived 64-bit seed for the same key, for APIs that take a plain seed.
std::uint64_t derive_seed(std::uint64_t master, Stream purpose,
                          std::uint64_t index = 0, std::uint64_t sub_index = 0);

}  // namespace ggm
