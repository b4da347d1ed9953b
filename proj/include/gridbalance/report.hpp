#pragma once

#include "gridbalance/bignum.hpp"
#include "gridbalance/errors.hpp"
#include "gridbalance/exact_mst.hpp"
#include "gridbalance/exact_sequences.hpp"
#include "gridbalance/grid_model.hpp"
#include "gridbalance/oracles.hpp"
#include "gridbalance/quadratic.hpp"
#include "gridbalance/random_sampling.hpp"
#include "gridbalance/spanning_enumeration.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace gridbalance {

inline constexpr std::uint64_t kDefaultSeed = 20250601;
inline constexpr std::uint64_t kDefaultSamples = 1'000'000;
inline constexpr int kDefaultExactMstMax = 5;

enum class OutputFormat { csv, json, text };

inline OutputFormat parse_format(const std::string& text) {
  if (text == "csv") return OutputFormat::csv;
  if (text == "json") return OutputFormat::json;
  if (text == "text") return OutputFormat::text;
  throw std::invalid_argument("unknown format '" + text + "' (expected csv, json or text)");
}

enum class MstMethod { extensions, bruteforce, automatic };

inline MstMethod parse_method(const std::string& text) {
  if (text == "extensions") return MstMethod::extensions;
  if (text == "bruteforce") return MstMethod::bruteforce;
  if (text == "auto") return MstMethod::automatic;
  throw std::invalid_argument("unknown method '" + text + "' (expected extensions, bruteforce or auto)");
}

inline std::string to_string(MstMethod method) {
  switch (method) {
    case MstMethod::extensions: return "extensions";
    case MstMethod::bruteforce: return "bruteforce";
    case MstMethod::automatic: return "auto";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Exact rows

struct ExactRow {
  int n = 0;
  BigUnsigned tree_count;      // T_n
  BigUnsigned balanced_count;  // S_n
  BigRational ratio;           // reduced probability
  std::string ratio_6dp;
  std::optional<std::string> method;  // set for MST rows
};

inline ExactRow ust_exact_row(int n) {
  ExactRow row;
  row.n = n;
  row.tree_count = tree_count(n);
  row.balanced_count = balanced_count(n);
  row.ratio = BigRational(row.balanced_count, row.tree_count);
  row.ratio_6dp = to_decimal(row.ratio, 6);
  return row;
}

struct MstExactOptions {
  MstMethod method = MstMethod::automatic;
  int extension_limit = kDefaultExtensionLimit;
  std::uint64_t permutation_cap = kDefaultPermutationCap;
  unsigned workers = 1;
};

inline ExactRow mst_exact_row(int n, const MstExactOptions& options = {}) {
  GridGraph grid(n);
  MstMethod method = options.method;
  if (method == MstMethod::automatic) {
    method = grid.edge_count() <= std::min(options.extension_limit, kMaxExtensionLimit) ? MstMethod::extensions
                                                                                         : MstMethod::bruteforce;
  }
  ExactRow row;
  row.n = n;
  row.tree_count = tree_count(n);
  row.balanced_count = balanced_count(n);
  if (method == MstMethod::extensions) {
    ExactMstOptions exact;
    exact.extension_limit = options.extension_limit;
    exact.workers = options.workers;
    row.ratio = mst_balance_probability_exact(grid, exact);
  } else {
    row.ratio = mst_balance_probability_bruteforce(grid, options.permutation_cap);
  }
  row.ratio_6dp = to_decimal(row.ratio, 6);
  row.method = to_string(method);
  return row;
}

inline nlohmann::ordered_json to_json(const ExactRow& row) {
  nlohmann::ordered_json j;
  j["n"] = row.n;
  j["T"] = row.tree_count.str();
  j["S"] = row.balanced_count.str();
  j["ratio_num"] = numerator_of(row.ratio).str();
  j["ratio_den"] = denominator_of(row.ratio).str();
  j["ratio_6dp"] = row.ratio_6dp;
  if (row.method) j["method"] = *row.method;
  return j;
}

inline std::string exact_csv_header(bool with_method) {
  return with_method ? "n,T,S,ratio_num,ratio_den,ratio_6dp,method" : "n,T,S,ratio_num,ratio_den,ratio_6dp";
}

inline std::string to_csv_row(const ExactRow& row) {
  std::string out = std::to_string(row.n) + "," + row.tree_count.str() + "," + row.balanced_count.str() + "," +
                    numerator_of(row.ratio).str() + "," + denominator_of(row.ratio).str() + "," + row.ratio_6dp;
  if (row.method) out += "," + *row.method;
  return out;
}

inline void write_exact_rows(const std::vector<ExactRow>& rows, OutputFormat format, std::ostream& out) {
  bool with_method = !rows.empty() && rows.front().method.has_value();
  switch (format) {
    case OutputFormat::json: {
      nlohmann::ordered_json array = nlohmann::ordered_json::array();
      for (const auto& row : rows) array.push_back(to_json(row));
      out << array.dump(2) << '\n';
      break;
    }
    case OutputFormat::csv:
      out << exact_csv_header(with_method) << '\n';
      for (const auto& row : rows) out << to_csv_row(row) << '\n';
      break;
    case OutputFormat::text:
      for (const auto& row : rows) {
        out << "n=" << row.n << "  T=" << row.tree_count << "  S=" << row.balanced_count
            << "  S/T=" << row.balanced_count << '/' << row.tree_count << "  ratio=" << to_fraction_string(row.ratio)
            << "  ~ " << row.ratio_6dp;
        if (row.method) out << "  method=" << *row.method;
        out << '\n';
      }
      break;
  }
}

// ---------------------------------------------------------------------------
// Table of balance probabilities, UST vs MST

struct TableRow {
  int n = 0;
  BigRational ust_exact;
  std::string ust_6dp;
  std::optional<BigRational> mst_exact;
  std::optional<MonteCarloSummary> mst_estimate;
  std::string mst_6dp;
  bool approx_marker = false;  // true iff the MST cell is a Monte Carlo estimate
};

struct TableOptions {
  int max_n = 19;
  std::uint64_t samples = kDefaultSamples;
  std::uint64_t seed = kDefaultSeed;
  int exact_mst_max = kDefaultExactMstMax;
  unsigned workers = 0;
};

inline std::vector<TableRow> build_table(const TableOptions& options) {
  if (options.max_n < 2) throw std::invalid_argument("table: max_n must be at least 2");
  std::vector<TableRow> rows;
  for (int n = 2; n <= options.max_n; ++n) {
    TableRow row;
    row.n = n;
    row.ust_exact = ust_balance_probability(n);
    row.ust_6dp = to_decimal(row.ust_exact, 6);
    if (n <= options.exact_mst_max) {
      ExactMstOptions exact;
      exact.extension_limit = std::max(kDefaultExtensionLimit, 3 * options.exact_mst_max - 2);
      row.mst_exact = mst_balance_probability_exact(GridGraph(n), exact);
      row.mst_6dp = to_decimal(*row.mst_exact, 6);
    } else {
      EstimateOptions estimate;
      estimate.workers = options.workers;
      row.mst_estimate =
          estimate_balance_probability(GridGraph(n), Distribution::mst, options.samples, options.seed, estimate);
      row.mst_6dp = row.mst_estimate->estimate_6dp();
      row.approx_marker = true;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace detail {

// "1", "3/5 = 0.6", "11/14 ≈ 0.785714" or just the 6dp decimal.
inline std::string exact_cell(const BigRational& value, const std::string& decimal, bool show_fraction) {
  if (denominator_of(value) == 1) return numerator_of(value).str();
  if (!show_fraction) return decimal;
  std::string fraction = to_fraction_string(value);
  BigRational scaled = value * BigRational(pow10(6));
  if (denominator_of(scaled) == 1) {
    std::string exact = decimal;
    while (exact.back() == '0') exact.pop_back();
    if (exact.back() == '.') exact.pop_back();
    return fraction + " = " + exact;
  }
  return fraction + " ≈ " + decimal;
}

inline std::string pad(const std::string& s, std::size_t width) {
  // Width counts code points so the "≈" and "∼" glyphs align.
  std::size_t points = 0;
  for (unsigned char c : s) points += (c & 0xC0) != 0x80;
  return points >= width ? s : s + std::string(width - points, ' ');
}

}  // namespace detail

inline std::string ust_cell(const TableRow& row) {
  return detail::exact_cell(row.ust_exact, row.ust_6dp, row.n <= kDefaultExactMstMax);
}

inline std::string mst_cell(const TableRow& row) {
  if (row.approx_marker) return "∼" + row.mst_6dp;
  return detail::exact_cell(*row.mst_exact, row.mst_6dp, row.n <= kDefaultExactMstMax);
}

inline nlohmann::ordered_json to_json(const TableRow& row) {
  nlohmann::ordered_json j;
  j["n"] = row.n;
  j["ust_num"] = numerator_of(row.ust_exact).str();
  j["ust_den"] = denominator_of(row.ust_exact).str();
  j["ust_6dp"] = row.ust_6dp;
  j["mst_method"] = row.approx_marker ? "montecarlo" : "exact";
  if (row.mst_exact) {
    j["mst_num"] = numerator_of(*row.mst_exact).str();
    j["mst_den"] = denominator_of(*row.mst_exact).str();
  }
  j["mst_6dp"] = row.mst_6dp;
  j["approx"] = row.approx_marker;
  if (row.mst_estimate) {
    j["samples"] = row.mst_estimate->samples;
    j["successes"] = row.mst_estimate->successes;
    j["seed"] = row.mst_estimate->seed;
  }
  return j;
}

inline void write_table(const std::vector<TableRow>& rows, OutputFormat format, std::ostream& out) {
  std::vector<const TableRow*> even;
  std::vector<const TableRow*> odd;
  for (const auto& row : rows) (row.n % 2 == 0 ? even : odd).push_back(&row);

  switch (format) {
    case OutputFormat::json: {
      nlohmann::ordered_json j;
      j["even"] = nlohmann::ordered_json::array();
      j["odd"] = nlohmann::ordered_json::array();
      for (const auto* row : even) j["even"].push_back(to_json(*row));
      for (const auto* row : odd) j["odd"].push_back(to_json(*row));
      out << j.dump(2) << '\n';
      break;
    }
    case OutputFormat::csv:
      out << "parity,n,ust_num,ust_den,ust_6dp,mst_method,mst_num,mst_den,mst_6dp,approx,samples,seed\n";
      for (const auto* group : {&even, &odd}) {
        for (const auto* row : *group) {
          out << (row->n % 2 == 0 ? "even" : "odd") << ',' << row->n << ',' << numerator_of(row->ust_exact) << ','
              << denominator_of(row->ust_exact) << ',' << row->ust_6dp << ','
              << (row->approx_marker ? "montecarlo" : "exact") << ',';
          if (row->mst_exact) out << numerator_of(*row->mst_exact) << ',' << denominator_of(*row->mst_exact);
          else out << ',';
          out << ',' << row->mst_6dp << ',' << (row->approx_marker ? 1 : 0) << ',';
          if (row->mst_estimate) out << row->mst_estimate->samples << ',' << row->mst_estimate->seed;
          else out << ',';
          out << '\n';
        }
      }
      break;
    case OutputFormat::text: {
      auto emit = [&](const char* title, const std::vector<const TableRow*>& group) {
        if (group.empty()) return;
        out << title << '\n';
        out << detail::pad("n", 4) << detail::pad("UST", 22) << "MST\n";
        for (const auto* row : group) {
          out << detail::pad(std::to_string(row->n), 4) << detail::pad(ust_cell(*row), 22) << mst_cell(*row) << '\n';
        }
        out << '\n';
      };
      emit("EVEN n", even);
      emit("ODD n", odd);
      std::uint64_t samples = 0;
      std::uint64_t seed = 0;
      for (const auto& row : rows) {
        if (row.mst_estimate) {
          samples = row.mst_estimate->samples;
          seed = row.mst_estimate->seed;
        }
      }
      if (samples != 0) {
        out << "∼ marks Monte Carlo estimates from " << samples << " random edge orders (seed " << seed
            << ").\n";
      }
      break;
    }
  }
}

// ---------------------------------------------------------------------------
// Limit constants

struct LimitGap {
  int n = 0;
  std::string ratio_6dp;
  Quadratic gap;
};

struct LimitsReport {
  Quadratic odd;
  Quadratic even;
  std::vector<LimitGap> gaps;
  bool series_identities = false;
};

inline LimitsReport build_limits_report(int max_n) {
  LimitsReport report;
  report.odd = limit_constant(Parity::odd);
  report.even = limit_constant(Parity::even);
  report.series_identities = series_identity_check();
  for (int n = 1; n <= max_n; ++n) report.gaps.push_back({n, to_decimal(ust_balance_probability(n), 6), limit_gap(n)});
  return report;
}

inline std::string scientific(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.6e", value);
  return buffer;
}

inline void write_limits(const LimitsReport& report, OutputFormat format, std::ostream& out) {
  switch (format) {
    case OutputFormat::json: {
      nlohmann::ordered_json j;
      for (auto [name, value] : {std::pair{"odd", &report.odd}, std::pair{"even", &report.even}}) {
        j[name] = {{"exact", value->to_string()}, {"decimal_6dp", value->to_decimal(6)},
                   {"decimal_12dp", value->to_decimal(12)}};
      }
      j["series_identities"] = report.series_identities;
      j["gaps"] = nlohmann::ordered_json::array();
      for (const auto& g : report.gaps) {
        j["gaps"].push_back({{"n", g.n}, {"ratio_6dp", g.ratio_6dp}, {"gap", scientific(g.gap.to_double())}});
      }
      out << j.dump(2) << '\n';
      break;
    }
    case OutputFormat::csv:
      out << "n,parity,ratio_6dp,gap\n";
      for (const auto& g : report.gaps) {
        out << g.n << ',' << (g.n % 2 == 0 ? "even" : "odd") << ',' << g.ratio_6dp << ','
            << scientific(g.gap.to_double()) << '\n';
      }
      break;
    case OutputFormat::text:
      out << "odd limit  (3+sqrt3)/9          = " << report.odd.to_string() << " = " << report.odd.to_decimal(12)
          << '\n';
      out << "even limit (1+4sqrt3)/(6sqrt3)  = " << report.even.to_string() << " = " << report.even.to_decimal(12)
          << '\n';
      out << "series identities: " << (report.series_identities ? "hold" : "FAIL") << '\n';
      for (const auto& g : report.gaps) {
        out << "n=" << g.n << "  ratio=" << g.ratio_6dp << "  |ratio - limit| = " << scientific(g.gap.to_double())
            << '\n';
      }
      break;
  }
}

// ---------------------------------------------------------------------------
// Cross-module verification

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  int max_n = 8;
  std::uint64_t chi_square_samples = kDefaultSamples;
  std::uint64_t seed = kDefaultSeed;
  unsigned workers = 0;
  // Replaceable for fault-injection tests.
  std::function<BigUnsigned(int)> balanced_count_fn = [](int n) { return balanced_count(n); };
};

inline std::vector<CheckResult> run_verification(const VerifyOptions& options) {
  if (options.max_n < 1) throw std::invalid_argument("verify: max_n must be at least 1");
  std::vector<CheckResult> results;
  auto record = [&](std::string name, auto&& body) {
    CheckResult r;
    r.name = std::move(name);
    try {
      r.detail = body();
      r.passed = r.detail.empty();
    } catch (const std::exception& e) {
      r.detail = std::string("exception: ") + e.what();
    }
    results.push_back(std::move(r));
  };

  record("tree counts: recurrence = closed form = series coefficients (n <= 200)", [] {
    auto coefficients = generating_coefficients(200);
    for (int n = 1; n <= 200; ++n) {
      BigUnsigned t = tree_count(n);
      if (t != tree_count_closed(n) || t != coefficients[n - 1]) return "mismatch at n = " + std::to_string(n);
    }
    return std::string();
  });

  record("super-multiplicativity T_a T_b T_c <= T_{a+b+c} and T_a T_b <= T_{a+b} (a,b,c <= 20)", [] {
    for (int a = 1; a <= 20; ++a) {
      for (int b = 1; b <= 20; ++b) {
        if (tree_count(a) * tree_count(b) > tree_count(a + b)) return "fails at " + std::to_string(a) + "," + std::to_string(b);
        for (int c = 1; c <= 20; ++c) {
          if (tree_count(a) * tree_count(b) * tree_count(c) > tree_count(a + b + c)) {
            return "fails at " + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c);
          }
        }
      }
    }
    return std::string();
  });

  record("end-block bound T_{m-i}^2 T_{2i+1} <= T_{2m+1} (0 <= i < m <= 20)", [] {
    for (int m = 1; m <= 20; ++m) {
      for (int i = 0; i < m; ++i) {
        BigUnsigned t = tree_count(m - i);
        if (t * t * tree_count(2 * i + 1) > tree_count(2 * m + 1)) {
          return "fails at m=" + std::to_string(m) + ", i=" + std::to_string(i);
        }
      }
    }
    return std::string();
  });

  record("balanced term decomposition sums to S_n (2 <= n <= 100)", [&] {
    for (int n = 2; n <= 100; ++n) {
      BigUnsigned sum = 0;
      for (const auto& term : balanced_terms(n)) sum += term.value();
      if (sum != options.balanced_count_fn(n)) return "mismatch at n = " + std::to_string(n);
    }
    return std::string();
  });

  record("enumeration matches (T_n, S_n) for n <= " + std::to_string(options.max_n), [&] {
    for (int n = 1; n <= options.max_n; ++n) {
      auto counted = count_balanced_brute(GridGraph(n));
      if (counted.total_trees != tree_count(n)) return "T mismatch at n = " + std::to_string(n);
      if (counted.balanced_trees != options.balanced_count_fn(n)) return "S mismatch at n = " + std::to_string(n);
    }
    return std::string();
  });

  record("subtree-size cut edges = delete-and-count cut edges, every tree, n <= " + std::to_string(options.max_n),
         [&] {
           for (int n = 1; n <= options.max_n; ++n) {
             GridGraph grid(n);
             CutFinder finder(grid);
             std::vector<int> fast;
             std::string failure;
             for_each_spanning_tree(grid, [&](std::span<const int> ids) {
               finder.balanced_cut_edges(ids, fast);
               if (failure.empty() && fast != oracle::balanced_cut_edges_by_deletion(grid, ids)) {
                 failure = "mismatch at n = " + std::to_string(n);
               }
             });
             if (!failure.empty()) return failure;
           }
           return std::string();
         });

  record("limits: series identities, 6dp expansions, gap < 1e-6 for 13 <= n <= 100", [] {
    if (!series_identity_check()) return std::string("series identities fail");
    if (limit_constant(Parity::odd).to_decimal(6) != "0.525783") return std::string("odd constant != 0.525783");
    if (limit_constant(Parity::even).to_decimal(6) != "0.762892") return std::string("even constant != 0.762892");
    const Quadratic tolerance(BigRational(1, 1'000'000));
    for (int n = 13; n <= 100; ++n) {
      if (limit_gap(n) >= tolerance) return "gap too large at n = " + std::to_string(n);
    }
    return std::string();
  });

  const int mst_max = std::min(options.max_n, 6);
  record("MST per-tree probabilities sum to 1, n <= " + std::to_string(mst_max), [&] {
    for (int n = 1; n <= mst_max; ++n) {
      GridGraph grid(n);
      BigRational total = 0;
      for (const auto& tree : enumerate_spanning_trees(grid)) total += mst_tree_probability(grid, tree);
      if (total != 1) return "sum is " + to_fraction_string(total) + " at n = " + std::to_string(n);
    }
    return std::string();
  });

  const int brute_max = std::min(options.max_n, 4);
  record("MST exact (extensions) = permutation brute force, 2 <= n <= " + std::to_string(brute_max), [&] {
    for (int n = 2; n <= brute_max; ++n) {
      GridGraph grid(n);
      if (mst_balance_probability_exact(grid) != mst_balance_probability_bruteforce(grid)) {
        return "mismatch at n = " + std::to_string(n);
      }
    }
    return std::string();
  });

  record("downset DP = permutation filtering on every cycle poset, n <= " + std::to_string(std::min(options.max_n, 3)),
         [&] {
           for (int n = 1; n <= std::min(options.max_n, 3); ++n) {
             GridGraph grid(n);
             for (const auto& tree : enumerate_spanning_trees(grid)) {
               CyclePoset poset = fundamental_cycle_poset(grid, tree);
               if (count_linear_extensions(poset) != oracle::count_linear_extensions_by_permutation(poset)) {
                 return "mismatch for tree " + to_string(tree) + " at n = " + std::to_string(n);
               }
             }
           }
           return std::string();
         });

  for (int n = 2; n <= std::min(options.max_n, 3); ++n) {
    record("UST chi-square uniformity at n = " + std::to_string(n) + " (p >= 1e-3)", [&] {
      GridGraph grid(n);
      std::map<std::vector<int>, std::size_t> index;
      for (const auto& tree : enumerate_spanning_trees(grid)) {
        index.emplace(std::vector<int>(tree.edge_ids().begin(), tree.edge_ids().end()), index.size());
      }
      std::vector<std::uint64_t> observed(index.size(), 0);
      WilsonSampler wilson(grid);
      std::vector<int> edges;
      for (std::uint64_t i = 0; i < options.chi_square_samples; ++i) {
        RandomSource rng(options.seed, i);
        wilson.sample(rng, edges);
        std::sort(edges.begin(), edges.end());
        ++observed[index.at(edges)];
      }
      auto chi = chi_square_uniform(observed);
      if (chi.p_value < 1e-3) return "p-value " + std::to_string(chi.p_value);
      return std::string();
    });
  }

  return results;
}

inline bool all_passed(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; });
}

}  // namespace gridbalance
