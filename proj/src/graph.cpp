#include "omega/graph.hpp"

#include <algorithm>

namespace omega {

SccResult reachable_sccs(const std::vector<std::vector<std::uint32_t>>& adj, std::uint32_t root) {
  const std::size_t n = adj.size();
  SccResult out;
  out.component.assign(n, -1);
  if (root >= n) return out;

  constexpr std::int32_t unvisited = -1;
  std::vector<std::int32_t> index(n, unvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::uint32_t> stack;
  struct Frame {
    std::uint32_t v;
    std::size_t next_edge;
  };
  std::vector<Frame> call;
  std::int32_t counter = 0;

  index[root] = low[root] = counter++;
  stack.push_back(root);
  on_stack[root] = true;
  call.push_back({root, 0});
  while (!call.empty()) {
    Frame& f = call.back();
    const auto& edges = adj[f.v];
    if (f.next_edge < edges.size()) {
      const std::uint32_t w = edges[f.next_edge++];
      if (index[w] == unvisited) {
        index[w] = low[w] = counter++;
        stack.push_back(w);
        on_stack[w] = true;
        call.push_back({w, 0});
      } else if (on_stack[w]) {
        low[f.v] = std::min(low[f.v], index[w]);
      }
      continue;
    }
    const std::uint32_t v = f.v;
    call.pop_back();
    if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
    if (low[v] == index[v]) {
      for (;;) {
        const std::uint32_t w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        out.component[w] = out.count;
        if (w == v) break;
      }
      ++out.count;
    }
  }
  return out;
}

}  // namespace omega
