#pragma once

#include <cstdint>
#include <vector>

namespace omega {

/// Strongly connected components of the subgraph reachable from `root`
/// (iterative Tarjan).  Unreached vertices get component -1.
struct SccResult {
  std::vector<std::int32_t> component;
  std::int32_t count = 0;
};

SccResult reachable_sccs(const std::vector<std::vector<std::uint32_t>>& adj, std::uint32_t root);

}  // namespace omega
