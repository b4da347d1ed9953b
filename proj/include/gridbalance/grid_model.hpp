#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace gridbalance {

struct Edge {
  int u;
  int v;
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Incidence {
  int neighbor;
  int edge_id;
};

/// Simple undirected graph with a fixed edge order. Edge ids are positions in
/// that order. Immutable after construction.
class Graph {
 public:
  Graph(int vertex_count, std::vector<Edge> edges) : vertex_count_(vertex_count), edges_(std::move(edges)) {
    if (vertex_count_ < 1) throw std::invalid_argument("Graph: vertex count must be positive");
    std::vector<std::vector<int>> seen(static_cast<std::size_t>(vertex_count_));
    for (const Edge& e : edges_) {
      if (e.u < 0 || e.v < 0 || e.u >= vertex_count_ || e.v >= vertex_count_) {
        throw std::invalid_argument("Graph: edge endpoint out of range");
      }
      if (e.u == e.v) throw std::invalid_argument("Graph: self-loop");
      int lo = std::min(e.u, e.v);
      int hi = std::max(e.u, e.v);
      auto& row = seen[static_cast<std::size_t>(lo)];
      if (std::find(row.begin(), row.end(), hi) != row.end()) {
        throw std::invalid_argument("Graph: parallel edge");
      }
      row.push_back(hi);
    }
    build_adjacency();
  }

  int vertex_count() const { return vertex_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(int id) const { return edges_.at(static_cast<std::size_t>(id)); }

  /// Incident edges of v in ascending edge-id order.
  std::span<const Incidence> incident(int v) const {
    auto begin = static_cast<std::size_t>(offsets_[static_cast<std::size_t>(v)]);
    auto end = static_cast<std::size_t>(offsets_[static_cast<std::size_t>(v) + 1]);
    return std::span<const Incidence>(adjacency_).subspan(begin, end - begin);
  }

  int degree(int v) const { return static_cast<int>(incident(v).size()); }

  bool is_connected() const {
    std::vector<char> seen(static_cast<std::size_t>(vertex_count_), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (const Incidence& inc : incident(v)) {
        if (!seen[static_cast<std::size_t>(inc.neighbor)]) {
          seen[static_cast<std::size_t>(inc.neighbor)] = 1;
          ++reached;
          stack.push_back(inc.neighbor);
        }
      }
    }
    return reached == vertex_count_;
  }

 private:
  void build_adjacency() {
    offsets_.assign(static_cast<std::size_t>(vertex_count_) + 1, 0);
    for (const Edge& e : edges_) {
      ++offsets_[static_cast<std::size_t>(e.u) + 1];
      ++offsets_[static_cast<std::size_t>(e.v) + 1];
    }
    std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
    adjacency_.resize(edges_.size() * 2);
    std::vector<int> fill(offsets_.begin(), offsets_.end() - 1);
    for (int id = 0; id < edge_count(); ++id) {
      const Edge& e = edges_[static_cast<std::size_t>(id)];
      adjacency_[static_cast<std::size_t>(fill[static_cast<std::size_t>(e.u)]++)] = {e.v, id};
      adjacency_[static_cast<std::size_t>(fill[static_cast<std::size_t>(e.v)]++)] = {e.u, id};
    }
  }

  int vertex_count_;
  std::vector<Edge> edges_;
  std::vector<int> offsets_;
  std::vector<Incidence> adjacency_;
};

/// The 2-by-n ladder. Vertex (row r, column c) has id 2c + r. Edges: all
/// verticals (2c, 2c+1) by column, then for each c < n-1 the top horizontal
/// (2c, 2c+2) followed by the bottom horizontal (2c+1, 2c+3).
class GridGraph : public Graph {
 public:
  explicit GridGraph(int columns) : Graph(checked_vertices(columns), grid_edges(columns)), columns_(columns) {}

  int columns() const { return columns_; }

  static int vertex_id(int row, int column) { return 2 * column + row; }
  static int vertical_edge(int column) { return column; }
  int top_edge(int column) const { return columns_ + 2 * column; }
  int bottom_edge(int column) const { return columns_ + 2 * column + 1; }

 private:
  static int checked_vertices(int columns) {
    if (columns < 1) throw std::invalid_argument("build_grid: n must be at least 1");
    return 2 * columns;
  }

  static std::vector<Edge> grid_edges(int columns) {
    checked_vertices(columns);  // argument evaluation order is unspecified
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(3 * columns - 2));
    for (int c = 0; c < columns; ++c) edges.push_back({2 * c, 2 * c + 1});
    for (int c = 0; c + 1 < columns; ++c) {
      edges.push_back({2 * c, 2 * c + 2});
      edges.push_back({2 * c + 1, 2 * c + 3});
    }
    return edges;
  }

  int columns_;
};

inline GridGraph build_grid(int n) { return GridGraph(n); }

/// Arbitrary small graph used as oracle input.
class SmallGraph : public Graph {
 public:
  static constexpr int kMaxVertices = 24;
  static constexpr int kMaxEdges = 32;

  SmallGraph(int vertex_count, std::vector<Edge> edges)
      : Graph(checked(vertex_count, edges.size()), std::move(edges)) {}

 private:
  static int checked(int vertex_count, std::size_t edge_count) {
    if (vertex_count > kMaxVertices) throw std::invalid_argument("SmallGraph: too many vertices");
    if (edge_count > static_cast<std::size_t>(kMaxEdges)) {
      throw std::invalid_argument("SmallGraph: too many edges");
    }
    return vertex_count;
  }
};

/// Edge subset of a graph forming a spanning tree. Keeps a non-owning pointer
/// to its graph; the graph must outlive the tree. Edge ids are stored sorted.
class SpanningTree {
 public:
  SpanningTree(const Graph& graph, std::vector<int> edge_ids) : graph_(&graph), edge_ids_(std::move(edge_ids)) {
    std::sort(edge_ids_.begin(), edge_ids_.end());
    validate();
  }

  const Graph& graph() const { return *graph_; }
  std::span<const int> edge_ids() const { return edge_ids_; }
  bool contains(int edge_id) const { return std::binary_search(edge_ids_.begin(), edge_ids_.end(), edge_id); }

  friend bool operator==(const SpanningTree& a, const SpanningTree& b) {
    return a.graph_ == b.graph_ && a.edge_ids_ == b.edge_ids_;
  }

 private:
  void validate() const {
    const int n = graph_->vertex_count();
    if (static_cast<int>(edge_ids_.size()) != n - 1) {
      throw std::invalid_argument("SpanningTree: edge count must be vertex_count - 1");
    }
    std::vector<int> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[static_cast<std::size_t>(x)] != x) {
        parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        x = parent[static_cast<std::size_t>(x)];
      }
      return x;
    };
    for (std::size_t i = 0; i < edge_ids_.size(); ++i) {
      int id = edge_ids_[i];
      if (id < 0 || id >= graph_->edge_count()) throw std::invalid_argument("SpanningTree: edge id out of range");
      if (i > 0 && edge_ids_[i - 1] == id) throw std::invalid_argument("SpanningTree: duplicate edge id");
      const Edge& e = graph_->edge(id);
      int a = find(e.u);
      int b = find(e.v);
      if (a == b) throw std::invalid_argument("SpanningTree: edges contain a cycle");
      parent[static_cast<std::size_t>(a)] = b;
    }
  }

  const Graph* graph_;
  std::vector<int> edge_ids_;
};

/// Reusable scratch space for subtree-size cut detection on one graph. Not
/// thread-safe; give each worker its own.
class CutFinder {
 public:
  explicit CutFinder(const Graph& graph)
      : graph_(&graph),
        offsets_(static_cast<std::size_t>(graph.vertex_count()) + 1),
        adjacency_(static_cast<std::size_t>(2 * (graph.vertex_count() - 1))),
        order_(static_cast<std::size_t>(graph.vertex_count())),
        parent_edge_(static_cast<std::size_t>(graph.vertex_count())),
        parent_(static_cast<std::size_t>(graph.vertex_count())),
        size_(static_cast<std::size_t>(graph.vertex_count())) {}

  /// Tree edges whose removal leaves two components of vertex_count/2
  /// vertices each, ascending. `tree_edges` must form a spanning tree.
  void balanced_cut_edges(std::span<const int> tree_edges, std::vector<int>& out) {
    out.clear();
    const int n = graph_->vertex_count();
    if (n % 2 != 0) throw std::invalid_argument("balanced_cut_edges: vertex count is odd");
    subtree_sizes(tree_edges);
    const int half = n / 2;
    for (int v = 1; v < n; ++v) {
      if (size_[static_cast<std::size_t>(v)] == half) out.push_back(parent_edge_[static_cast<std::size_t>(v)]);
    }
    std::sort(out.begin(), out.end());
  }

  bool has_balanced_cut(std::span<const int> tree_edges) {
    const int n = graph_->vertex_count();
    if (n % 2 != 0) throw std::invalid_argument("is_balanced: vertex count is odd");
    subtree_sizes(tree_edges);
    const int half = n / 2;
    for (int v = 1; v < n; ++v) {
      if (size_[static_cast<std::size_t>(v)] == half) return true;
    }
    return false;
  }

 private:
  // Roots the tree at vertex 0; size_[v] is the vertex count below and
  // including v, parent_edge_[v] the edge to v's parent.
  void subtree_sizes(std::span<const int> tree_edges) {
    const auto n = static_cast<std::size_t>(graph_->vertex_count());
    std::fill(offsets_.begin(), offsets_.end(), 0);
    for (int id : tree_edges) {
      const Edge& e = graph_->edge(id);
      ++offsets_[static_cast<std::size_t>(e.u) + 1];
      ++offsets_[static_cast<std::size_t>(e.v) + 1];
    }
    for (std::size_t v = 0; v < n; ++v) offsets_[v + 1] += offsets_[v];
    std::copy(offsets_.begin(), offsets_.end() - 1, order_.begin());  // order_ as fill cursor
    for (int id : tree_edges) {
      const Edge& e = graph_->edge(id);
      adjacency_[static_cast<std::size_t>(order_[static_cast<std::size_t>(e.u)]++)] = {e.v, id};
      adjacency_[static_cast<std::size_t>(order_[static_cast<std::size_t>(e.v)]++)] = {e.u, id};
    }
    std::size_t head = 0;
    std::size_t tail = 0;
    order_[tail++] = 0;
    parent_[0] = -1;
    parent_edge_[0] = -1;
    while (head < tail) {
      int v = order_[head++];
      auto vi = static_cast<std::size_t>(v);
      for (int k = offsets_[vi]; k < offsets_[vi + 1]; ++k) {
        const Incidence& inc = adjacency_[static_cast<std::size_t>(k)];
        if (inc.neighbor == parent_[vi]) continue;
        auto wi = static_cast<std::size_t>(inc.neighbor);
        parent_[wi] = v;
        parent_edge_[wi] = inc.edge_id;
        order_[tail++] = inc.neighbor;
      }
    }
    std::fill(size_.begin(), size_.end(), 1);
    for (std::size_t i = n; i-- > 1;) {
      auto v = static_cast<std::size_t>(order_[i]);
      size_[static_cast<std::size_t>(parent_[v])] += size_[v];
    }
  }

  const Graph* graph_;
  std::vector<int> offsets_;
  std::vector<Incidence> adjacency_;
  std::vector<int> order_;
  std::vector<int> parent_edge_;
  std::vector<int> parent_;
  std::vector<int> size_;
};

/// Tree edges whose removal splits the vertices into equal halves, ascending.
inline std::vector<int> balanced_cut_edges(const SpanningTree& tree) {
  CutFinder finder(tree.graph());
  std::vector<int> out;
  finder.balanced_cut_edges(tree.edge_ids(), out);
  return out;
}

inline bool is_balanced(const SpanningTree& tree) {
  CutFinder finder(tree.graph());
  return finder.has_balanced_cut(tree.edge_ids());
}

/// Canonical text form: ascending edge ids, comma-separated.
inline std::string to_string(const SpanningTree& tree) {
  std::string out;
  for (int id : tree.edge_ids()) {
    if (!out.empty()) out += ',';
    out += std::to_string(id);
  }
  return out;
}

inline SpanningTree parse_tree(const Graph& graph, const std::string& text) {
  std::vector<int> ids;
  std::stringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    std::size_t used = 0;
    int id = 0;
    try {
      id = std::stoi(token, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("parse_tree: bad edge id '" + token + "'");
    }
    if (used != token.size()) throw std::invalid_argument("parse_tree: bad edge id '" + token + "'");
    ids.push_back(id);
  }
  return SpanningTree(graph, std::move(ids));
}

}  // namespace gridbalance
