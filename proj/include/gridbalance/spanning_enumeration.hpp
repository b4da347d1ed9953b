#pragma once

#include "gridbalance/bignum.hpp"
#include "gridbalance/errors.hpp"
#include "gridbalance/grid_model.hpp"

#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gridbalance {

inline constexpr std::uint64_t kDefaultTreeCap = 1'000'000;

namespace detail {

// Include-first backtracking over edge ids. Every branch that can still be
// completed to a spanning tree is explored, so trees come out in
// lexicographic order of their sorted edge-id lists.
class TreeEnumerator {
 public:
  TreeEnumerator(const Graph& graph, std::uint64_t cap, const std::function<void(std::span<const int>)>& visit)
      : graph_(graph), cap_(cap), visit_(visit), state_(graph.edge_count(), kUndecided) {}

  std::uint64_t run() {
    if (!graph_.is_connected()) throw std::invalid_argument("enumerate_spanning_trees: graph is disconnected");
    chosen_.reserve(graph_.vertex_count());
    recurse(0);
    return count_;
  }

 private:
  static constexpr char kUndecided = 0;
  static constexpr char kIn = 1;
  static constexpr char kOut = 2;

  void recurse(int edge_id) {
    const int needed = graph_.vertex_count() - 1;
    if (static_cast<int>(chosen_.size()) == needed) {
      if (++count_ > cap_) {
        throw ResourceLimitError("spanning tree enumeration exceeded the cap of " + std::to_string(cap_) + " trees");
      }
      visit_(chosen_);
      return;
    }
    if (edge_id == graph_.edge_count()) return;
    if (!closes_cycle(edge_id)) {
      state_[edge_id] = kIn;
      chosen_.push_back(edge_id);
      recurse(edge_id + 1);
      chosen_.pop_back();
    }
    state_[edge_id] = kOut;
    if (still_connected()) recurse(edge_id + 1);
    state_[edge_id] = kUndecided;
  }

  // Does edge_id join two vertices already linked by chosen edges?
  bool closes_cycle(int edge_id) const {
    std::vector<int> parent(graph_.vertex_count());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (int id : chosen_) parent[find(graph_.edge(id).u)] = find(graph_.edge(id).v);
    return find(graph_.edge(edge_id).u) == find(graph_.edge(edge_id).v);
  }

  // Is the graph without the excluded edges still connected?
  bool still_connected() const {
    std::vector<char> seen(graph_.vertex_count(), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (const Incidence& inc : graph_.incident(v)) {
        if (state_[inc.edge_id] == kOut || seen[inc.neighbor]) continue;
        seen[inc.neighbor] = 1;
        ++reached;
        stack.push_back(inc.neighbor);
      }
    }
    return reached == graph_.vertex_count();
  }

  const Graph& graph_;
  std::uint64_t cap_;
  const std::function<void(std::span<const int>)>& visit_;
  std::vector<char> state_;
  std::vector<int> chosen_;
  std::uint64_t count_ = 0;
};

}  // namespace detail

/// Calls `visit` with the sorted edge ids of every spanning tree, in
/// lexicographic order. Returns the number of trees.
/// Throws std::invalid_argument on a disconnected graph and
/// ResourceLimitError once more than `cap` trees have been produced.
inline std::uint64_t for_each_spanning_tree(const Graph& graph, const std::function<void(std::span<const int>)>& visit,
                                            std::uint64_t cap = kDefaultTreeCap) {
  return detail::TreeEnumerator(graph, cap, visit).run();
}

inline std::vector<SpanningTree> enumerate_spanning_trees(const Graph& graph, std::uint64_t cap = kDefaultTreeCap) {
  std::vector<SpanningTree> trees;
  for_each_spanning_tree(
      graph, [&](std::span<const int> ids) { trees.emplace_back(graph, std::vector<int>(ids.begin(), ids.end())); },
      cap);
  return trees;
}

struct EnumerationResult {
  BigUnsigned total_trees;
  BigUnsigned balanced_trees;
  std::optional<std::vector<SpanningTree>> trees;
};

struct EnumerationOptions {
  std::uint64_t cap = kDefaultTreeCap;
  bool keep_trees = false;
};

/// Brute-force tally of balanced spanning trees.
inline EnumerationResult count_balanced_brute(const Graph& graph, const EnumerationOptions& options = {}) {
  if (graph.vertex_count() % 2 != 0) throw std::invalid_argument("count_balanced_brute: vertex count is odd");
  CutFinder finder(graph);
  std::uint64_t balanced = 0;
  EnumerationResult result;
  if (options.keep_trees) result.trees.emplace();
  std::uint64_t total = for_each_spanning_tree(
      graph,
      [&](std::span<const int> ids) {
        if (finder.has_balanced_cut(ids)) ++balanced;
        if (result.trees) result.trees->emplace_back(graph, std::vector<int>(ids.begin(), ids.end()));
      },
      options.cap);
  result.total_trees = total;
  result.balanced_trees = balanced;
  return result;
}

/// Writes every spanning tree as one line of comma-separated edge ids.
inline std::uint64_t dump_spanning_trees(const Graph& graph, std::ostream& out, std::uint64_t cap = kDefaultTreeCap) {
  return for_each_spanning_tree(
      graph,
      [&](std::span<const int> ids) {
        for (std::size_t i = 0; i < ids.size(); ++i) {
          if (i > 0) out << ',';
          out << ids[i];
        }
        out << '\n';
      },
      cap);
}

}  // namespace gridbalance
