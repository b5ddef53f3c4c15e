// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ggm {

using Index = int;

/// Ordered index pair (row, column).
using Pair = std::pair<Index, Index>;

/// Set of index pairs. Off-diagonal pairs are stored in both orientations
/// unless a function documents otherwise.
using PairSet = std::set<Pair>;

/// Sorted, duplicate-free list of node indices.
using NodeSet = std::vector<Index>;

enum class ErrorCode {
  kInvalidArgument = 1,
  kNotPositiveDefinite,
  kSingular,
  kNonConvergence,
  kIo,
  kConfig,
  kDimension,
  kAssertion,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline Pair canonical(Index m, Index n) {
  return m <= n ? Pair{m, n} : Pair{n, m};
}

}  // namespace ggm
