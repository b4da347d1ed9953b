#pragma once

#include "gridbalance/bignum.hpp"
#include "gridbalance/grid_model.hpp"
#include "gridbalance/random_source.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace gridbalance {

enum class Distribution { ust, mst };

inline std::string to_string(Distribution d) { return d == Distribution::ust ? "UST" : "MST"; }

inline Distribution parse_distribution(std::string text) {
  std::transform(text.begin(), text.end(), text.begin(), [](unsigned char c) { return std::tolower(c); });
  if (text == "ust") return Distribution::ust;
  if (text == "mst") return Distribution::mst;
  throw std::invalid_argument("unknown distribution '" + text + "' (expected ust or mst)");
}

/// Uniform spanning trees by Wilson's loop-erased random walk, rooted at
/// vertex 0, starting walks from vertices in ascending id order.
/// Holds scratch buffers; one instance per thread.
class WilsonSampler {
 public:
  explicit WilsonSampler(const Graph& graph)
      : graph_(&graph), in_tree_(graph.vertex_count()), next_vertex_(graph.vertex_count()),
        next_edge_(graph.vertex_count()) {}

  /// Fills `tree_edges` with the sampled tree's edge ids (unsorted).
  void sample(RandomSource& rng, std::vector<int>& tree_edges) {
    const int n = graph_->vertex_count();
    tree_edges.clear();
    std::fill(in_tree_.begin(), in_tree_.end(), 0);
    in_tree_[0] = 1;
    for (int start = 1; start < n; ++start) {
      int u = start;
      while (!in_tree_[u]) {
        auto adj = graph_->incident(u);
        const Incidence& step = adj[rng.uniform_below(static_cast<std::uint32_t>(adj.size()))];
        next_vertex_[u] = step.neighbor;
        next_edge_[u] = step.edge_id;
        u = step.neighbor;
      }
      // Retracing the last exit from each vertex erases the loops.
      for (u = start; !in_tree_[u]; u = next_vertex_[u]) {
        in_tree_[u] = 1;
        tree_edges.push_back(next_edge_[u]);
      }
    }
  }

 private:
  const Graph* graph_;
  std::vector<char> in_tree_;
  std::vector<int> next_vertex_;
  std::vector<int> next_edge_;
};

/// Minimum spanning trees under a uniformly random edge order: Fisher-Yates
/// shuffle of the edge ids, then a Kruskal scan.
class KruskalSampler {
 public:
  explicit KruskalSampler(const Graph& graph)
      : graph_(&graph), order_(graph.edge_count()), parent_(graph.vertex_count()), rank_(graph.vertex_count()) {}

  void sample(RandomSource& rng, std::vector<int>& tree_edges) {
    std::iota(order_.begin(), order_.end(), 0);
    for (std::size_t i = order_.size(); i > 1; --i) {
      std::size_t j = rng.uniform_below(static_cast<std::uint32_t>(i));
      std::swap(order_[i - 1], order_[j]);
    }
    scan(order_, tree_edges);
  }

  /// Kruskal scan: accepts edges in the given order unless they close a
  /// cycle. `tree_edges` receives the accepted ids in acceptance order.
  void scan(std::span<const int> order, std::vector<int>& tree_edges) {
    const int n = graph_->vertex_count();
    tree_edges.clear();
    std::iota(parent_.begin(), parent_.end(), 0);
    std::fill(rank_.begin(), rank_.end(), 0);
    for (int id : order) {
      if (static_cast<int>(tree_edges.size()) == n - 1) break;
      const Edge& e = graph_->edge(id);
      int a = find(e.u);
      int b = find(e.v);
      if (a == b) continue;
      if (rank_[a] < rank_[b]) std::swap(a, b);
      parent_[b] = a;
      if (rank_[a] == rank_[b]) ++rank_[a];
      tree_edges.push_back(id);
    }
  }

 private:
  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }

  const Graph* graph_;
  std::vector<int> order_;
  std::vector<int> parent_;
  std::vector<int> rank_;
};

inline void require_connected(const Graph& graph, const char* what) {
  if (!graph.is_connected()) throw std::invalid_argument(std::string(what) + ": graph is disconnected");
}

inline SpanningTree sample_ust(const Graph& graph, RandomSource& rng) {
  require_connected(graph, "sample_ust");
  std::vector<int> edges;
  WilsonSampler(graph).sample(rng, edges);
  return SpanningTree(graph, std::move(edges));
}

inline SpanningTree sample_mst(const Graph& graph, RandomSource& rng) {
  require_connected(graph, "sample_mst");
  std::vector<int> edges;
  KruskalSampler(graph).sample(rng, edges);
  return SpanningTree(graph, std::move(edges));
}

struct MonteCarloSummary {
  Distribution distribution = Distribution::ust;
  int n = 0;  // columns, i.e. vertex_count / 2
  std::uint64_t samples = 0;
  std::uint64_t successes = 0;
  double estimate = 0;
  double std_error = 0;
  double ci95_low = 0;
  double ci95_high = 0;
  std::uint64_t seed = 0;

  BigRational exact_fraction() const { return BigRational(successes, samples); }
  std::string estimate_6dp() const { return to_decimal(exact_fraction(), 6); }

  friend bool operator==(const MonteCarloSummary&, const MonteCarloSummary&) = default;
};

struct EstimateOptions {
  unsigned workers = 0;  // 0 = hardware concurrency
};

/// Fraction of sampled trees that are balanced. Sample i is drawn from
/// RandomSource(seed, i), so the result depends only on (graph,
/// distribution, samples, seed).
inline MonteCarloSummary estimate_balance_probability(const Graph& graph, Distribution distribution,
                                                      std::uint64_t samples, std::uint64_t seed,
                                                      const EstimateOptions& options = {}) {
  if (samples == 0) throw std::invalid_argument("estimate_balance_probability: samples must be at least 1");
  if (graph.vertex_count() % 2 != 0) throw std::invalid_argument("estimate_balance_probability: odd vertex count");
  require_connected(graph, "estimate_balance_probability");

  unsigned workers = options.workers != 0 ? options.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, samples));

  auto run_range = [&graph, distribution, seed](std::uint64_t begin, std::uint64_t end) {
    CutFinder finder(graph);
    WilsonSampler wilson(graph);
    KruskalSampler kruskal(graph);
    std::vector<int> edges;
    std::uint64_t hits = 0;
    for (std::uint64_t i = begin; i < end; ++i) {
      RandomSource rng(seed, i);
      if (distribution == Distribution::ust) {
        wilson.sample(rng, edges);
      } else {
        kruskal.sample(rng, edges);
      }
      if (finder.has_balanced_cut(edges)) ++hits;
    }
    return hits;
  };

  std::vector<std::uint64_t> hits(workers, 0);
  if (workers == 1) {
    hits[0] = run_range(0, samples);
  } else {
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < workers; ++w) {
      std::uint64_t begin = samples * w / workers;
      std::uint64_t end = samples * (w + 1) / workers;
      threads.emplace_back([&, w, begin, end] { hits[w] = run_range(begin, end); });
    }
    for (auto& t : threads) t.join();
  }

  MonteCarloSummary summary;
  summary.distribution = distribution;
  summary.n = graph.vertex_count() / 2;
  summary.samples = samples;
  summary.successes = std::accumulate(hits.begin(), hits.end(), std::uint64_t{0});
  summary.seed = seed;
  summary.estimate = static_cast<double>(summary.successes) / static_cast<double>(samples);
  summary.std_error = std::sqrt(summary.estimate * (1.0 - summary.estimate) / static_cast<double>(samples));
  summary.ci95_low = std::max(0.0, summary.estimate - 1.96 * summary.std_error);
  summary.ci95_high = std::min(1.0, summary.estimate + 1.96 * summary.std_error);
  return summary;
}

enum class Tail { greater, less };

namespace detail {

// Natural log of sum_{j in tail} P(X = j), walking away from `start` until
// the terms are past the mode and below e^-80 of the peak.
inline long double binomial_log_tail(std::uint64_t start, std::uint64_t samples, long double log_p, long double log_q,
                                     bool upward) {
  const auto total = static_cast<long double>(samples);
  auto k = static_cast<long double>(start);
  long double term = std::lgamma(total + 1) - std::lgamma(k + 1) - std::lgamma(total - k + 1) + k * log_p +
                     (total - k) * log_q;
  long double log_max = term;
  long double scaled_sum = 1;  // sum of exp(term - log_max)
  long double previous = term;
  constexpr long double kNegligible = 80;
  std::uint64_t j = start;
  while (upward ? j < samples : j > 0) {
    if (upward) {
      term += std::log(static_cast<long double>(samples - j) / static_cast<long double>(j + 1)) + log_p - log_q;
      ++j;
    } else {
      term += std::log(static_cast<long double>(j) / static_cast<long double>(samples - j + 1)) + log_q - log_p;
      --j;
    }
    if (term > log_max) {
      scaled_sum = scaled_sum * std::exp(log_max - term) + 1;
      log_max = term;
    } else {
      scaled_sum += std::exp(term - log_max);
    }
    if (term < previous && term < log_max - kNegligible) break;
    previous = term;
  }
  return log_max + std::log(scaled_sum);
}

}  // namespace detail

/// log10 of the exact one-sided binomial tail P(X >= successes) (greater) or
/// P(X <= successes) (less) for X ~ Binomial(samples, p0). Summed in log
/// space, so results far below 1e-300 are representable. When the tail
/// holds the mean it is taken as 1 minus the opposite tail instead.
inline double binomial_log10_pvalue(std::uint64_t successes, std::uint64_t samples, const BigRational& p0,
                                    Tail tail) {
  if (successes > samples) throw std::invalid_argument("binomial_log10_pvalue: successes exceed samples");
  if (p0 <= 0 || p0 >= 1) throw std::invalid_argument("binomial_log10_pvalue: p0 must lie strictly in (0, 1)");
  if (tail == Tail::greater && successes == 0) return 0.0;
  if (tail == Tail::less && successes == samples) return 0.0;

  const long double log_p = std::log(p0.convert_to<long double>());
  const long double log_q = std::log(BigRational(1 - p0).convert_to<long double>());
  const bool upward = tail == Tail::greater;
  const bool holds_mean = upward ? BigRational(successes) <= p0 * samples : BigRational(successes) >= p0 * samples;

  long double log_value;
  if (holds_mean) {
    std::uint64_t other_start = upward ? successes - 1 : successes + 1;
    long double other = std::exp(detail::binomial_log_tail(other_start, samples, log_p, log_q, !upward));
    log_value = std::log1p(-std::min(other, 1.0L));
  } else {
    log_value = detail::binomial_log_tail(successes, samples, log_p, log_q, upward);
  }
  return static_cast<double>(std::min(log_value / std::log(10.0L), 0.0L));
}

/// Pearson statistic and upper-tail p-value against equal expected counts.
struct ChiSquareResult {
  double statistic = 0;
  int degrees_of_freedom = 0;
  double p_value = 1;
};

inline ChiSquareResult chi_square_uniform(std::span<const std::uint64_t> observed) {
  if (observed.size() < 2) throw std::invalid_argument("chi_square_uniform: need at least two categories");
  double total = 0;
  for (auto o : observed) total += static_cast<double>(o);
  double expected = total / static_cast<double>(observed.size());
  ChiSquareResult result;
  for (auto o : observed) {
    double d = static_cast<double>(o) - expected;
    result.statistic += d * d / expected;
  }
  result.degrees_of_freedom = static_cast<int>(observed.size()) - 1;
  result.p_value = boost::math::gamma_q(result.degrees_of_freedom / 2.0, result.statistic / 2.0);
  return result;
}

inline std::string format_double(double value, int precision = 8) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*f", precision, value);
  return buffer;
}

inline nlohmann::ordered_json to_json(const MonteCarloSummary& s) {
  nlohmann::ordered_json j;
  j["n"] = s.n;
  j["dist"] = to_string(s.distribution);
  j["samples"] = s.samples;
  j["successes"] = s.successes;
  j["estimate"] = s.estimate;
  j["estimate_6dp"] = s.estimate_6dp();
  j["stderr"] = s.std_error;
  j["ci95_low"] = s.ci95_low;
  j["ci95_high"] = s.ci95_high;
  j["seed"] = s.seed;
  return j;
}

inline const char* monte_carlo_csv_header() { return "n,dist,samples,successes,estimate6dp,stderr,ci_low,ci_high,seed"; }

inline std::string to_csv_row(const MonteCarloSummary& s) {
  std::ostringstream out;
  out << s.n << ',' << to_string(s.distribution) << ',' << s.samples << ',' << s.successes << ','
      << s.estimate_6dp() << ',' << format_double(s.std_error) << ',' << format_double(s.ci95_low) << ','
      << format_double(s.ci95_high) << ',' << s.seed;
  return out.str();
}

}  // namespace gridbalance
