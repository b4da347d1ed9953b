#pragma once

#include "gridbalance/bignum.hpp"
#include "gridbalance/errors.hpp"
#include "gridbalance/grid_model.hpp"
#include "gridbalance/random_sampling.hpp"
#include "gridbalance/spanning_enumeration.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

namespace gridbalance {

inline constexpr int kDefaultExtensionLimit = 22;
// 2^30 counters of 16 bytes is already 16 GiB; nothing larger is attempted.
inline constexpr int kMaxExtensionLimit = 30;
inline constexpr std::uint64_t kDefaultPermutationCap = 4'000'000;

/// Precedence constraints of the cycle property for one spanning tree. The
/// elements are the graph's edges; a non-tree edge must come after every
/// tree edge on its fundamental cycle. Tree edges have no predecessors.
struct CyclePoset {
  int element_count = 0;
  std::vector<std::uint64_t> predecessors;  // bitmask over edge ids, one per element
};

/// Builds the cycle-property poset of `tree` by walking the tree path
/// between the endpoints of every non-tree edge.
inline CyclePoset fundamental_cycle_poset(const Graph& graph, const SpanningTree& tree) {
  if (&tree.graph() != &graph) throw std::invalid_argument("fundamental_cycle_poset: tree belongs to another graph");
  if (graph.edge_count() > 64) {
    throw ResourceLimitError("fundamental_cycle_poset: more than 64 edges cannot be encoded as bitmasks");
  }
  const int n = graph.vertex_count();
  // Root the tree at 0: parent vertex, parent edge and depth per vertex.
  std::vector<int> parent(n, -1);
  std::vector<int> parent_edge(n, -1);
  std::vector<int> depth(n, 0);
  std::vector<std::vector<Incidence>> adjacency(n);
  for (int id : tree.edge_ids()) {
    const Edge& e = graph.edge(id);
    adjacency[e.u].push_back({e.v, id});
    adjacency[e.v].push_back({e.u, id});
  }
  std::vector<int> stack{0};
  std::vector<char> seen(n, 0);
  seen[0] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (const Incidence& inc : adjacency[v]) {
      if (seen[inc.neighbor]) continue;
      seen[inc.neighbor] = 1;
      parent[inc.neighbor] = v;
      parent_edge[inc.neighbor] = inc.edge_id;
      depth[inc.neighbor] = depth[v] + 1;
      stack.push_back(inc.neighbor);
    }
  }

  CyclePoset poset;
  poset.element_count = graph.edge_count();
  poset.predecessors.assign(graph.edge_count(), 0);
  for (int id = 0; id < graph.edge_count(); ++id) {
    if (tree.contains(id)) continue;
    int a = graph.edge(id).u;
    int b = graph.edge(id).v;
    std::uint64_t path = 0;
    while (a != b) {
      if (depth[a] < depth[b]) std::swap(a, b);
      path |= std::uint64_t{1} << parent_edge[a];
      a = parent[a];
    }
    poset.predecessors[id] = path;
  }
  return poset;
}

namespace detail {

template <typename Count>
Count count_extensions_dp(const CyclePoset& poset) {
  const int m = poset.element_count;
  const std::uint64_t full = m == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
  std::vector<Count> ways(static_cast<std::size_t>(full) + 1, Count{0});
  std::uint64_t constrained = 0;
  std::vector<std::uint64_t> successors(m, 0);
  for (int e = 0; e < m; ++e) {
    if (poset.predecessors[e] != 0) constrained |= std::uint64_t{1} << e;
    for (std::uint64_t rest = poset.predecessors[e]; rest != 0; rest &= rest - 1) {
      successors[std::countr_zero(rest)] |= std::uint64_t{1} << e;
    }
  }
  ways[0] = 1;
  // Every D \ {e} is numerically smaller than D, so ascending order visits
  // sub-downsets first. Non-downsets keep zero ways.
  for (std::uint64_t set = 1; set <= full; ++set) {
    bool downset = true;
    for (std::uint64_t rest = set & constrained; rest != 0; rest &= rest - 1) {
      if ((poset.predecessors[std::countr_zero(rest)] & ~set) != 0) {
        downset = false;
        break;
      }
    }
    if (!downset) continue;
    Count total{0};
    for (std::uint64_t rest = set; rest != 0; rest &= rest - 1) {
      int e = std::countr_zero(rest);
      // e can be placed last only if nothing else in the set must follow it.
      if ((successors[e] & set) == 0) total += ways[set & ~(std::uint64_t{1} << e)];
    }
    ways[set] = total;
  }
  return ways[full];
}

inline BigUnsigned to_big(unsigned __int128 value) {
  BigUnsigned hi = static_cast<std::uint64_t>(value >> 64);
  return (hi << 64) + static_cast<std::uint64_t>(value);
}

}  // namespace detail

/// Number of linear extensions, by dynamic programming over downsets:
/// ways(empty) = 1 and ways(D) sums ways(D \ {e}) over the maximal elements
/// e of D. Throws ResourceLimitError when the poset exceeds `limit` elements.
inline BigUnsigned count_linear_extensions(const CyclePoset& poset, int limit = kDefaultExtensionLimit) {
  if (static_cast<int>(poset.predecessors.size()) != poset.element_count) {
    throw std::invalid_argument("count_linear_extensions: predecessor list size mismatch");
  }
  int effective = std::min(limit, kMaxExtensionLimit);
  if (poset.element_count > effective) {
    throw ResourceLimitError("count_linear_extensions: " + std::to_string(poset.element_count) +
                             " elements exceed the limit of " + std::to_string(effective));
  }
  if (poset.element_count == 0) return 1;
  // 20! < 2^64 < 21!; 33! < 2^128.
  if (poset.element_count <= 20) return detail::count_extensions_dp<std::uint64_t>(poset);
  return detail::to_big(detail::count_extensions_dp<unsigned __int128>(poset));
}

/// Probability that Kruskal on a uniformly random edge order returns `tree`.
inline BigRational mst_tree_probability(const Graph& graph, const SpanningTree& tree,
                                        int limit = kDefaultExtensionLimit) {
  CyclePoset poset = fundamental_cycle_poset(graph, tree);
  BigUnsigned extensions = count_linear_extensions(poset, limit);
  return BigRational(extensions, factorial(static_cast<unsigned>(graph.edge_count())));
}

struct ExactMstOptions {
  int extension_limit = kDefaultExtensionLimit;
  std::uint64_t tree_cap = kDefaultTreeCap;
  unsigned workers = 1;
};

/// Exact probability that the MST of uniformly random edge weights is
/// balanced: sum of per-tree linear-extension counts over balanced trees.
inline BigRational mst_balance_probability_exact(const Graph& graph, const ExactMstOptions& options = {}) {
  if (graph.vertex_count() % 2 != 0) throw std::invalid_argument("mst_balance_probability_exact: odd vertex count");
  int effective = std::min(options.extension_limit, kMaxExtensionLimit);
  if (graph.edge_count() > effective) {
    throw ResourceLimitError("mst_balance_probability_exact: " + std::to_string(graph.edge_count()) +
                             " edges exceed the extension limit of " + std::to_string(effective));
  }
  std::vector<std::vector<int>> balanced;
  CutFinder finder(graph);
  for_each_spanning_tree(
      graph,
      [&](std::span<const int> ids) {
        if (finder.has_balanced_cut(ids)) balanced.emplace_back(ids.begin(), ids.end());
      },
      options.tree_cap);

  const unsigned workers = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(balanced.size())));
  std::vector<BigUnsigned> partial(workers, 0);
  auto work = [&](unsigned w) {
    for (std::size_t i = w; i < balanced.size(); i += workers) {
      SpanningTree tree(graph, balanced[i]);
      partial[w] += count_linear_extensions(fundamental_cycle_poset(graph, tree), options.extension_limit);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < workers; ++w) threads.emplace_back(work, w);
    for (auto& t : threads) t.join();
  }
  BigUnsigned total = std::accumulate(partial.begin(), partial.end(), BigUnsigned(0));
  return BigRational(total, factorial(static_cast<unsigned>(graph.edge_count())));
}

/// Oracle: run Kruskal under every permutation of the edges and tally
/// balanced outcomes. Refuses when m! exceeds `permutation_cap`.
inline BigRational mst_balance_probability_bruteforce(const Graph& graph,
                                                      std::uint64_t permutation_cap = kDefaultPermutationCap) {
  if (graph.vertex_count() % 2 != 0) {
    throw std::invalid_argument("mst_balance_probability_bruteforce: odd vertex count");
  }
  require_connected(graph, "mst_balance_probability_bruteforce");
  const int m = graph.edge_count();
  BigUnsigned permutations = factorial(static_cast<unsigned>(m));
  if (permutations > permutation_cap) {
    throw ResourceLimitError("mst_balance_probability_bruteforce: " + std::to_string(m) + "! permutations exceed the cap of " +
                             std::to_string(permutation_cap) + "; use the linear-extension method");
  }
  KruskalSampler kruskal(graph);
  CutFinder finder(graph);
  std::unordered_map<std::uint64_t, bool> verdicts;
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::vector<int> accepted;
  std::uint64_t balanced = 0;
  do {
    kruskal.scan(order, accepted);
    std::uint64_t mask = 0;
    for (int id : accepted) mask |= std::uint64_t{1} << id;
    auto [it, inserted] = verdicts.try_emplace(mask, false);
    if (inserted) it->second = finder.has_balanced_cut(accepted);
    if (it->second) ++balanced;
  } while (std::next_permutation(order.begin(), order.end()));
  return BigRational(BigUnsigned(balanced), permutations);
}

}  // namespace gridbalance
