#pragma once

// Slow, independent reference computations. They share no code path with the
// production algorithms they are compared against.

#include "gridbalance/exact_mst.hpp"
#include "gridbalance/grid_model.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace gridbalance::oracle {

/// Component sizes of the forest formed by `edge_ids` minus `removed`,
/// measured from vertex 0's side.
inline int component_size_from_zero(const Graph& graph, std::span<const int> edge_ids, int removed) {
  std::vector<std::vector<int>> adjacency(graph.vertex_count());
  for (int id : edge_ids) {
    if (id == removed) continue;
    adjacency[graph.edge(id).u].push_back(graph.edge(id).v);
    adjacency[graph.edge(id).v].push_back(graph.edge(id).u);
  }
  std::vector<char> seen(graph.vertex_count(), 0);
  std::vector<int> queue{0};
  seen[0] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (int w : adjacency[queue[head]]) {
      if (!seen[w]) {
        seen[w] = 1;
        queue.push_back(w);
      }
    }
  }
  return static_cast<int>(queue.size());
}

/// Balanced cut edges by deleting each tree edge and counting both sides.
inline std::vector<int> balanced_cut_edges_by_deletion(const Graph& graph, std::span<const int> edge_ids) {
  const int n = graph.vertex_count();
  std::vector<int> out;
  for (int id : edge_ids) {
    int side = component_size_from_zero(graph, edge_ids, id);
    if (side * 2 == n) out.push_back(id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Linear extensions by filtering every permutation of the elements.
inline std::uint64_t count_linear_extensions_by_permutation(const CyclePoset& poset) {
  if (poset.element_count > 11) throw std::invalid_argument("permutation oracle: poset too large");
  std::vector<int> order(poset.element_count);
  std::iota(order.begin(), order.end(), 0);
  std::uint64_t count = 0;
  do {
    std::uint64_t placed = 0;
    bool ok = true;
    for (int e : order) {
      if ((poset.predecessors[e] & ~placed) != 0) {
        ok = false;
        break;
      }
      placed |= std::uint64_t{1} << e;
    }
    if (ok) ++count;
  } while (std::next_permutation(order.begin(), order.end()));
  return count;
}

/// Edge ids of the tree path between u and v, by breadth-first search.
inline std::vector<int> tree_path_edges(const Graph& graph, std::span<const int> edge_ids, int u, int v) {
  std::vector<std::vector<Incidence>> adjacency(graph.vertex_count());
  for (int id : edge_ids) {
    adjacency[graph.edge(id).u].push_back({graph.edge(id).v, id});
    adjacency[graph.edge(id).v].push_back({graph.edge(id).u, id});
  }
  std::vector<int> via(graph.vertex_count(), -1);
  std::vector<int> from(graph.vertex_count(), -1);
  std::vector<int> queue{u};
  from[u] = u;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    int x = queue[head];
    for (const Incidence& inc : adjacency[x]) {
      if (from[inc.neighbor] != -1) continue;
      from[inc.neighbor] = x;
      via[inc.neighbor] = inc.edge_id;
      queue.push_back(inc.neighbor);
    }
  }
  std::vector<int> path;
  for (int x = v; x != u; x = from[x]) path.push_back(via[x]);
  std::sort(path.begin(), path.end());
  return path;
}

}  // namespace gridbalance::oracle
