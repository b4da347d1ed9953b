#include "gridbalance/exact_mst.hpp"
#include "gridbalance/exact_sequences.hpp"
#include "gridbalance/oracles.hpp"
#include "gridbalance/random_sampling.hpp"
#include "gridbalance/spanning_enumeration.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>

namespace gb = gridbalance;
using gb::BigRational;
using gb::Distribution;
using gb::RandomSource;

namespace {

constexpr std::uint64_t kSeed = 424242;

using TreeKey = std::vector<int>;

std::map<TreeKey, std::uint64_t> tally(const gb::Graph& g, Distribution dist, std::uint64_t samples,
                                       std::uint64_t seed) {
  std::map<TreeKey, std::uint64_t> counts;
  for (const auto& t : gb::enumerate_spanning_trees(g)) counts[TreeKey(t.edge_ids().begin(), t.edge_ids().end())] = 0;
  gb::WilsonSampler wilson(g);
  gb::KruskalSampler kruskal(g);
  std::vector<int> edges;
  for (std::uint64_t i = 0; i < samples; ++i) {
    RandomSource rng(seed, i);
    if (dist == Distribution::ust) wilson.sample(rng, edges);
    else kruskal.sample(rng, edges);
    std::sort(edges.begin(), edges.end());
    ++counts.at(edges);
  }
  return counts;
}

}  // namespace

TEST(Philox, KnownAnswerVectors) {
  using W = std::array<std::uint32_t, 4>;
  EXPECT_EQ(gb::philox4x32({0, 0, 0, 0}, {0, 0}), (W{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(gb::philox4x32({~0u, ~0u, ~0u, ~0u}, {~0u, ~0u}), (W{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(gb::philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (W{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(RandomSource, StreamsArePureFunctionsOfSeedAndIndex) {
  RandomSource a(7, 99);
  RandomSource b(7, 99);
  RandomSource c(7, 100);
  RandomSource d(8, 99);
  bool differs_c = false;
  bool differs_d = false;
  for (int i = 0; i < 50; ++i) {
    auto x = a.next_u32();
    ASSERT_EQ(x, b.next_u32());
    differs_c |= x != c.next_u32();
    differs_d |= x != d.next_u32();
  }
  EXPECT_TRUE(differs_c);
  EXPECT_TRUE(differs_d);
}

TEST(RandomSource, UniformBelowStaysInRangeAndIsFlat) {
  RandomSource rng(1, 0);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) {
    auto v = rng.uniform_below(7);
    ASSERT_LT(v, 7u);
    ++counts[v];
  }
  for (int c : counts) EXPECT_NEAR(c, 10000, 500);
  for (int i = 0; i < 1000; ++i) {
    double u = rng.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(SampleUst, SingleColumnIsDeterministic) {
  auto g = gb::build_grid(1);
  for (std::uint64_t i = 0; i < 10; ++i) {
    RandomSource rng(kSeed, i);
    EXPECT_EQ(gb::to_string(gb::sample_ust(g, rng)), "0");
    RandomSource rng2(kSeed, i);
    EXPECT_EQ(gb::to_string(gb::sample_mst(g, rng2)), "0");
  }
}

TEST(SampleUst, RejectsDisconnectedGraph) {
  gb::SmallGraph g(4, {{0, 1}, {2, 3}});
  RandomSource rng(1, 1);
  EXPECT_THROW(gb::sample_ust(g, rng), std::invalid_argument);
  EXPECT_THROW(gb::sample_mst(g, rng), std::invalid_argument);
}

TEST(SampleUst, C4TreesEquallyLikely) {
  auto counts = tally(gb::build_grid(2), Distribution::ust, 400000, kSeed);
  ASSERT_EQ(counts.size(), 4u);
  for (const auto& [tree, c] : counts) EXPECT_NEAR(c / 400000.0, 0.25, 0.005);
}

TEST(SampleUst, ChiSquareUniformOnSmallGrids) {
  for (int n : {2, 3}) {
    auto counts = tally(gb::build_grid(n), Distribution::ust, 1000000, kSeed + n);
    std::vector<std::uint64_t> observed;
    for (const auto& [tree, c] : counts) observed.push_back(c);
    auto chi = gb::chi_square_uniform(observed);
    EXPECT_GE(chi.p_value, 1e-3) << "n = " << n << " chi2 = " << chi.statistic;
  }
}

TEST(SampleUst, UniformOnCompleteGraph) {
  gb::SmallGraph k4(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  auto counts = tally(k4, Distribution::ust, 320000, kSeed);
  ASSERT_EQ(counts.size(), 16u);
  std::vector<std::uint64_t> observed;
  for (const auto& [tree, c] : counts) observed.push_back(c);
  EXPECT_GE(gb::chi_square_uniform(observed).p_value, 1e-3);
}

TEST(SampleUst, ThreeColumnBalancedFraction) {
  auto s = gb::estimate_balance_probability(gb::build_grid(3), Distribution::ust, 1500000, kSeed);
  EXPECT_NEAR(s.estimate, 0.6, 0.002);
}

TEST(SampleMst, FixedOrderOnC4TakesFirstThree) {
  auto g = gb::build_grid(2);
  gb::KruskalSampler kruskal(g);
  std::vector<int> order{0, 1, 2, 3};
  std::vector<int> accepted;
  do {
    kruskal.scan(order, accepted);
    EXPECT_EQ(accepted, std::vector<int>(order.begin(), order.begin() + 3));
  } while (std::next_permutation(order.begin(), order.end()));
}

// For a fixed order the scan result is the unique MST: every non-tree edge
// ranks above every tree edge on its fundamental cycle.
TEST(SampleMst, ScanSatisfiesCycleProperty) {
  for (int n = 2; n <= 4; ++n) {
    auto g = gb::build_grid(n);
    gb::KruskalSampler kruskal(g);
    std::vector<int> accepted;
    for (std::uint64_t trial = 0; trial < 300; ++trial) {
      RandomSource rng(kSeed, trial);
      std::vector<int> order(g.edge_count());
      std::iota(order.begin(), order.end(), 0);
      for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.uniform_below(i)]);
      std::vector<int> rank(g.edge_count());
      for (int i = 0; i < g.edge_count(); ++i) rank[order[i]] = i;
      kruskal.scan(order, accepted);
      gb::SpanningTree tree(g, accepted);
      for (int f = 0; f < g.edge_count(); ++f) {
        if (tree.contains(f)) continue;
        for (int e : gb::oracle::tree_path_edges(g, tree.edge_ids(), g.edge(f).u, g.edge(f).v)) {
          ASSERT_LT(rank[e], rank[f]);
        }
      }
    }
  }
}

TEST(SampleMst, SampledTreesAreValid) {
  auto g = gb::build_grid(7);
  for (std::uint64_t i = 0; i < 200; ++i) {
    RandomSource a(kSeed, i);
    RandomSource b(kSeed, i);
    EXPECT_NO_THROW(gb::sample_mst(g, a));
    EXPECT_NO_THROW(gb::sample_ust(g, b));
  }
}

TEST(SampleMst, ThreeColumnBalancedFraction) {
  auto s = gb::estimate_balance_probability(gb::build_grid(3), Distribution::mst, 1000000, kSeed);
  EXPECT_NEAR(s.estimate, 4.0 / 7.0, 0.002);
}

TEST(SampleMst, PerTreeFrequenciesMatchExactProbabilities) {
  for (int n : {3, 4}) {
    auto g = gb::build_grid(n);
    constexpr std::uint64_t kSamples = 1000000;
    auto counts = tally(g, Distribution::mst, kSamples, kSeed + 10 * n);
    for (const auto& tree : gb::enumerate_spanning_trees(g)) {
      double p = gb::to_double(gb::mst_tree_probability(g, tree));
      double se = std::sqrt(p * (1 - p) / kSamples);
      double freq = counts.at(TreeKey(tree.edge_ids().begin(), tree.edge_ids().end())) / double(kSamples);
      EXPECT_LE(std::abs(freq - p), 4 * se) << "n=" << n << " tree " << gb::to_string(tree);
    }
  }
}

TEST(Estimate, C4IsAlwaysBalanced) {
  auto s = gb::estimate_balance_probability(gb::build_grid(2), Distribution::mst, 1000, 5);
  EXPECT_EQ(s.estimate, 1.0);
  EXPECT_EQ(s.successes, 1000u);
  EXPECT_EQ(s.std_error, 0.0);
  EXPECT_EQ(s.ci95_low, 1.0);
  EXPECT_EQ(s.ci95_high, 1.0);
}

TEST(Estimate, RejectsZeroSamplesAndOddGraphs) {
  EXPECT_THROW(gb::estimate_balance_probability(gb::build_grid(2), Distribution::ust, 0, 1), std::invalid_argument);
  gb::SmallGraph path3(3, {{0, 1}, {1, 2}});
  EXPECT_THROW(gb::estimate_balance_probability(path3, Distribution::ust, 10, 1), std::invalid_argument);
}

TEST(Estimate, IndependentOfWorkerCount) {
  auto g = gb::build_grid(6);
  auto one = gb::estimate_balance_probability(g, Distribution::mst, 20000, 9, {.workers = 1});
  auto three = gb::estimate_balance_probability(g, Distribution::mst, 20000, 9, {.workers = 3});
  auto seven = gb::estimate_balance_probability(g, Distribution::ust, 20001, 9, {.workers = 7});
  auto seven_again = gb::estimate_balance_probability(g, Distribution::ust, 20001, 9, {.workers = 1});
  EXPECT_EQ(one, three);
  EXPECT_EQ(gb::to_csv_row(one), gb::to_csv_row(three));
  EXPECT_EQ(gb::to_json(one).dump(), gb::to_json(three).dump());
  EXPECT_EQ(seven, seven_again);
}

TEST(Estimate, SummaryInvariants) {
  auto s = gb::estimate_balance_probability(gb::build_grid(5), Distribution::ust, 5000, 3);
  EXPECT_EQ(s.n, 5);
  EXPECT_EQ(s.estimate, s.successes / 5000.0);
  EXPECT_LE(s.ci95_low, s.estimate);
  EXPECT_GE(s.ci95_high, s.estimate);
  EXPECT_NEAR(s.std_error, std::sqrt(s.estimate * (1 - s.estimate) / 5000), 1e-15);
}

TEST(Estimate, SixColumnMst) {
  auto s = gb::estimate_balance_probability(gb::build_grid(6), Distribution::mst, 1000000, kSeed);
  EXPECT_NEAR(s.estimate, 0.779764, 0.002);
}

TEST(Estimate, SevenColumnUst) {
  auto s = gb::estimate_balance_probability(gb::build_grid(7), Distribution::ust, 1000000, kSeed);
  EXPECT_NEAR(s.estimate, 0.525936, 0.002);
}

TEST(Serialization, CsvAndJsonFields) {
  gb::MonteCarloSummary s;
  s.distribution = Distribution::mst;
  s.n = 4;
  s.samples = 8;
  s.successes = 3;
  s.estimate = 0.375;
  s.std_error = 0.1711632992203644;
  s.ci95_low = 0.04;
  s.ci95_high = 0.71;
  s.seed = 12;
  EXPECT_EQ(gb::to_csv_row(s), "4,MST,8,3,0.375000,0.17116330,0.04000000,0.71000000,12");
  auto j = gb::to_json(s);
  EXPECT_EQ(j["dist"], "MST");
  EXPECT_EQ(j["estimate_6dp"], "0.375000");
  EXPECT_EQ(j["seed"], 12);
}

// Exact tail by rational summation, for small samples.
TEST(BinomialPValue, MatchesExactSummation) {
  const BigRational p(1, 3);
  const std::uint64_t total = 30;
  for (std::uint64_t k = 0; k <= total; ++k) {
    BigRational greater = 0;
    BigRational less = 0;
    for (std::uint64_t j = 0; j <= total; ++j) {
      gb::BigInteger choose = gb::factorial(total) / (gb::factorial(j) * gb::factorial(total - j));
      // p^j (1-p)^(N-j) = 2^(N-j) / 3^N
      BigRational term(choose * boost::multiprecision::pow(gb::BigInteger(2), static_cast<unsigned>(total - j)),
                       boost::multiprecision::pow(gb::BigInteger(3), static_cast<unsigned>(total)));
      if (j >= k) greater += term;
      if (j <= k) less += term;
    }
    EXPECT_NEAR(gb::binomial_log10_pvalue(k, total, p, gb::Tail::greater), std::log10(gb::to_double(greater)), 1e-9);
    EXPECT_NEAR(gb::binomial_log10_pvalue(k, total, p, gb::Tail::less), std::log10(gb::to_double(less)), 1e-9);
  }
}

TEST(BinomialPValue, MedianIsNearOneHalf) {
  const BigRational p0 = gb::ust_balance_probability(10);
  const std::uint64_t samples = 1000000;
  auto median = static_cast<std::uint64_t>(std::llround(samples * gb::to_double(p0)));
  EXPECT_NEAR(gb::binomial_log10_pvalue(median, samples, p0, gb::Tail::greater), -0.3, 0.3);
}

TEST(BinomialPValue, AllSuccessesAtOneHalf) {
  double v = gb::binomial_log10_pvalue(1000000, 1000000, BigRational(1, 2), gb::Tail::greater);
  EXPECT_NEAR(v, -1e6 * std::log10(2.0), 1e-3);
}

TEST(BinomialPValue, TenColumnMstClaim) {
  const BigRational p0 = gb::ust_balance_probability(10);
  EXPECT_LT(gb::binomial_log10_pvalue(783300, 1000000, p0, gb::Tail::greater), -100);
}

TEST(BinomialPValue, MonotoneInSuccesses) {
  const BigRational p0(3, 4);
  double previous = 1;
  for (std::uint64_t k = 0; k <= 2000; k += 25) {
    double v = gb::binomial_log10_pvalue(k, 2000, p0, gb::Tail::greater);
    ASSERT_LE(v, previous);
    ASSERT_LE(v, 0);
    previous = v;
  }
}

TEST(BinomialPValue, RangeErrors) {
  EXPECT_THROW(gb::binomial_log10_pvalue(11, 10, BigRational(1, 2), gb::Tail::greater), std::invalid_argument);
  EXPECT_THROW(gb::binomial_log10_pvalue(1, 10, BigRational(0), gb::Tail::greater), std::invalid_argument);
  EXPECT_THROW(gb::binomial_log10_pvalue(1, 10, BigRational(1), gb::Tail::less), std::invalid_argument);
}

TEST(ChiSquare, KnownStatistic) {
  std::vector<std::uint64_t> observed{10, 20, 30};
  auto chi = gb::chi_square_uniform(observed);
  EXPECT_DOUBLE_EQ(chi.statistic, 10.0);
  EXPECT_EQ(chi.degrees_of_freedom, 2);
  EXPECT_NEAR(chi.p_value, std::exp(-5.0), 1e-12);  // 2 dof: p = e^{-x/2}
}
