// Command-line front end: exact and Monte Carlo balance probabilities for
// spanning trees of the 2-by-n ladder.

#include "gridbalance/gridbalance.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitResourceLimit = 2;
constexpr int kExitVerificationFailed = 3;

// "5" or "2..19".
std::pair<int, int> parse_range(const std::string& text) {
  auto to_int = [&](std::string_view part) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
    if (ec != std::errc() || ptr != part.data() + part.size()) {
      throw std::invalid_argument("bad n range '" + text + "'");
    }
    return value;
  };
  auto dots = text.find("..");
  if (dots == std::string::npos) {
    int n = to_int(text);
    return {n, n};
  }
  int lo = to_int(std::string_view(text).substr(0, dots));
  int hi = to_int(std::string_view(text).substr(dots + 2));
  if (lo > hi) throw std::invalid_argument("bad n range '" + text + "'");
  return {lo, hi};
}

}  // namespace

int main(int argc, char** argv) {
  using namespace gridbalance;

  CLI::App app{"Balanced spanning trees of the 2-by-n grid"};
  app.require_subcommand(1);

  std::string format = "text";
  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json", "text"}));
  };

  // ust-exact
  auto* ust = app.add_subcommand("ust-exact", "Exact S_n / T_n for the uniform spanning tree");
  std::string ust_n;
  int ust_max_n = 0;
  ust->add_option("--n", ust_n, "Single n or range lo..hi");
  ust->add_option("--max-n", ust_max_n, "Rows for n = 1..max-n");
  add_format(ust);

  // mst-exact
  auto* mst = app.add_subcommand("mst-exact", "Exact balance probability under random-weight MST");
  std::string mst_n;
  std::string method = "auto";
  int extension_limit = kDefaultExtensionLimit;
  unsigned mst_workers = 1;
  mst->add_option("--n", mst_n, "Single n or range lo..hi")->required();
  mst->add_option("--method", method, "Exact method")->check(CLI::IsMember({"extensions", "bruteforce", "auto"}));
  mst->add_option("--extension-limit", extension_limit, "Largest edge count for the linear-extension DP");
  mst->add_option("--workers", mst_workers, "Worker threads");
  add_format(mst);

  // sample
  auto* sample = app.add_subcommand("sample", "Monte Carlo balance estimate");
  int sample_n = 0;
  std::string dist = "mst";
  std::uint64_t samples = kDefaultSamples;
  std::uint64_t seed = kDefaultSeed;
  unsigned workers = 0;
  sample->add_option("--n", sample_n, "Grid columns")->required()->check(CLI::PositiveNumber);
  sample->add_option("--dist", dist, "Tree distribution")->check(CLI::IsMember({"ust", "mst"}));
  sample->add_option("--samples", samples, "Number of trees")->check(CLI::PositiveNumber);
  sample->add_option("--seed", seed, "Random seed");
  sample->add_option("--workers", workers, "Worker threads (0 = all cores)");
  add_format(sample);

  // table
  auto* table = app.add_subcommand("table", "UST vs MST table for n = 2..max-n");
  int table_max_n = 19;
  int exact_mst_max = kDefaultExactMstMax;
  table->add_option("--max-n", table_max_n, "Largest n")->check(CLI::Range(2, 1000));
  table->add_option("--samples", samples, "Monte Carlo samples per MST cell")->check(CLI::PositiveNumber);
  table->add_option("--seed", seed, "Random seed");
  table->add_option("--exact-mst-max", exact_mst_max, "Largest n with an exact MST cell");
  table->add_option("--workers", workers, "Worker threads (0 = all cores)");
  add_format(table);

  // limits
  auto* limits = app.add_subcommand("limits", "Limit constants and convergence gaps");
  int limits_max_n = 20;
  limits->add_option("--max-n", limits_max_n, "Print gaps for n = 1..max-n")->check(CLI::Range(1, 100000));
  add_format(limits);

  // verify
  auto* verify = app.add_subcommand("verify", "Run the cross-module invariant checks");
  int verify_max_n = 8;
  std::uint64_t verify_samples = kDefaultSamples;
  verify->add_option("--max-n", verify_max_n, "Largest n for enumeration-based checks")->check(CLI::Range(1, 10));
  verify->add_option("--samples", verify_samples, "Samples for the uniformity test")->check(CLI::PositiveNumber);
  verify->add_option("--seed", seed, "Random seed");

  // trees
  auto* trees = app.add_subcommand("trees", "List every spanning tree as comma-separated edge ids");
  int trees_n = 0;
  std::uint64_t cap = kDefaultTreeCap;
  trees->add_option("--n", trees_n, "Grid columns")->required()->check(CLI::PositiveNumber);
  trees->add_option("--cap", cap, "Maximum number of trees");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    const OutputFormat out_format = parse_format(format);

    if (*ust) {
      if (ust_n.empty() && ust_max_n == 0) throw std::invalid_argument("ust-exact needs --n or --max-n");
      auto [lo, hi] = ust_n.empty() ? std::pair{1, ust_max_n} : parse_range(ust_n);
      if (ust_max_n != 0 && !ust_n.empty()) hi = ust_max_n;
      if (lo < 1) throw std::invalid_argument("n must be at least 1");
      std::vector<ExactRow> rows;
      for (int n = lo; n <= hi; ++n) rows.push_back(ust_exact_row(n));
      write_exact_rows(rows, out_format, std::cout);
    } else if (*mst) {
      auto [lo, hi] = parse_range(mst_n);
      if (lo < 1) throw std::invalid_argument("n must be at least 1");
      MstExactOptions options;
      options.method = parse_method(method);
      options.extension_limit = extension_limit;
      options.workers = mst_workers;
      std::vector<ExactRow> rows;
      for (int n = lo; n <= hi; ++n) rows.push_back(mst_exact_row(n, options));
      write_exact_rows(rows, out_format, std::cout);
    } else if (*sample) {
      EstimateOptions options;
      options.workers = workers;
      auto summary = estimate_balance_probability(GridGraph(sample_n), parse_distribution(dist), samples, seed, options);
      switch (out_format) {
        case OutputFormat::json: std::cout << to_json(summary).dump(2) << '\n'; break;
        case OutputFormat::csv:
          std::cout << monte_carlo_csv_header() << '\n' << to_csv_row(summary) << '\n';
          break;
        case OutputFormat::text:
          std::cout << to_string(summary.distribution) << " n=" << summary.n << "  balanced " << summary.successes
                    << " of " << summary.samples << "  estimate " << summary.estimate_6dp() << "  stderr "
                    << format_double(summary.std_error) << "  95% CI [" << format_double(summary.ci95_low, 6) << ", "
                    << format_double(summary.ci95_high, 6) << "]  seed " << summary.seed << '\n';
          break;
      }
    } else if (*table) {
      TableOptions options;
      options.max_n = table_max_n;
      options.samples = samples;
      options.seed = seed;
      options.exact_mst_max = exact_mst_max;
      options.workers = workers;
      write_table(build_table(options), out_format, std::cout);
    } else if (*limits) {
      write_limits(build_limits_report(limits_max_n), out_format, std::cout);
    } else if (*verify) {
      VerifyOptions options;
      options.max_n = verify_max_n;
      options.chi_square_samples = verify_samples;
      options.seed = seed;
      auto results = run_verification(options);
      for (const auto& r : results) {
        std::cout << (r.passed ? "PASS  " : "FAIL  ") << r.name;
        if (!r.passed) std::cout << "  -- " << r.detail;
        std::cout << '\n';
      }
      if (!all_passed(results)) return kExitVerificationFailed;
    } else if (*trees) {
      dump_spanning_trees(GridGraph(trees_n), std::cout, cap);
    }
  } catch (const ResourceLimitError& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return kExitResourceLimit;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  return 0;
}
