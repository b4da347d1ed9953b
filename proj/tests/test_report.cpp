#include "gridbalance/report.hpp"

#include <gtest/gtest.h>

#include <sstream>

namespace gb = gridbalance;
using gb::BigRational;

TEST(Parsers, FormatsAndMethods) {
  EXPECT_EQ(gb::parse_format("json"), gb::OutputFormat::json);
  EXPECT_EQ(gb::parse_format("text"), gb::OutputFormat::text);
  EXPECT_THROW(gb::parse_format("xml"), std::invalid_argument);
  EXPECT_EQ(gb::parse_method("auto"), gb::MstMethod::automatic);
  EXPECT_EQ(gb::to_string(gb::parse_method("bruteforce")), "bruteforce");
  EXPECT_THROW(gb::parse_method("fast"), std::invalid_argument);
}

TEST(ExactRow, UstJsonSchema) {
  auto j = gb::to_json(gb::ust_exact_row(5));
  EXPECT_EQ(j.dump(), R"({"n":5,"T":"209","S":"111","ratio_num":"111","ratio_den":"209","ratio_6dp":"0.531100"})");
}

TEST(ExactRow, UstCsv) {
  std::ostringstream out;
  gb::write_exact_rows({gb::ust_exact_row(3), gb::ust_exact_row(4)}, gb::OutputFormat::csv, out);
  EXPECT_EQ(out.str(), "n,T,S,ratio_num,ratio_den,ratio_6dp\n3,15,9,3,5,0.600000\n4,56,44,11,14,0.785714\n");
}

TEST(ExactRow, LargeNStaysExact) {
  auto row = gb::ust_exact_row(60);
  EXPECT_EQ(row.ratio, BigRational(row.balanced_count, row.tree_count));
  EXPECT_EQ(row.ratio_6dp, "0.762892");
}

TEST(ExactRow, MstMethods) {
  auto ext = gb::mst_exact_row(4, {.method = gb::MstMethod::extensions});
  auto brute = gb::mst_exact_row(4, {.method = gb::MstMethod::bruteforce});
  EXPECT_EQ(ext.ratio, BigRational(248, 315));
  EXPECT_EQ(brute.ratio, ext.ratio);
  EXPECT_EQ(*brute.method, "bruteforce");
  EXPECT_EQ(gb::to_csv_row(gb::mst_exact_row(5)), "5,209,111,70052,135135,0.518385,extensions");
  EXPECT_EQ(gb::to_json(ext)["method"], "extensions");
}

TEST(ExactRow, AutoFallsBackWhenPosetTooLarge) {
  auto row = gb::mst_exact_row(3, {.method = gb::MstMethod::automatic, .extension_limit = 4});
  EXPECT_EQ(*row.method, "bruteforce");
  EXPECT_EQ(row.ratio, BigRational(4, 7));
}

TEST(Cells, Formatting) {
  gb::TableRow row;
  row.n = 3;
  row.ust_exact = BigRational(3, 5);
  row.ust_6dp = "0.600000";
  row.mst_exact = BigRational(4, 7);
  row.mst_6dp = "0.571429";
  EXPECT_EQ(gb::ust_cell(row), "3/5 = 0.6");
  EXPECT_EQ(gb::mst_cell(row), "4/7 ≈ 0.571429");

  row.n = 2;
  row.ust_exact = 1;
  row.mst_exact = BigRational(1);
  EXPECT_EQ(gb::ust_cell(row), "1");
  EXPECT_EQ(gb::mst_cell(row), "1");

  row.n = 9;
  row.ust_exact = gb::ust_balance_probability(9);
  row.ust_6dp = "0.525761";
  row.mst_exact.reset();
  row.mst_6dp = "0.524261";
  row.approx_marker = true;
  EXPECT_EQ(gb::ust_cell(row), "0.525761");
  EXPECT_EQ(gb::mst_cell(row), "∼0.524261");
}

TEST(Table, SmallestTable) {
  auto rows = gb::build_table({.max_n = 2});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].n, 2);
  EXPECT_EQ(rows[0].ust_exact, 1);
  EXPECT_EQ(*rows[0].mst_exact, 1);
  EXPECT_THROW(gb::build_table({.max_n = 1}), std::invalid_argument);
}

TEST(Table, ExactUpToFiveHasNoMarkers) {
  auto rows = gb::build_table({.max_n = 5});
  ASSERT_EQ(rows.size(), 4u);
  std::ostringstream out;
  gb::write_table(rows, gb::OutputFormat::text, out);
  EXPECT_EQ(out.str().find("∼"), std::string::npos);
  EXPECT_NE(out.str().find("EVEN n"), std::string::npos);
  EXPECT_NE(out.str().find("11/14 ≈ 0.785714"), std::string::npos);
  EXPECT_NE(out.str().find("70052/135135 ≈ 0.518385"), std::string::npos);
}

TEST(Table, MonteCarloRowsAreMarkedAndDeterministic) {
  gb::TableOptions options{.max_n = 7, .samples = 20'000, .seed = 3, .exact_mst_max = 5, .workers = 2};
  auto first = gb::build_table(options);
  options.workers = 1;
  auto second = gb::build_table(options);
  ASSERT_EQ(first.size(), 6u);
  for (std::size_t i = 0; i < first.size(); ++i) {
    EXPECT_EQ(first[i].mst_6dp, second[i].mst_6dp);
    EXPECT_EQ(first[i].approx_marker, first[i].n > 5);
  }
  std::ostringstream json;
  gb::write_table(first, gb::OutputFormat::json, json);
  auto parsed = nlohmann::json::parse(json.str());
  EXPECT_EQ(parsed["even"].size(), 3u);
  EXPECT_EQ(parsed["odd"].size(), 3u);
  EXPECT_EQ(parsed["even"][2]["mst_method"], "montecarlo");

  std::ostringstream csv;
  gb::write_table(first, gb::OutputFormat::csv, csv);
  std::string text = csv.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 7);
  EXPECT_NE(text.find("even,6,149,195,0.764103,montecarlo,,,"), std::string::npos);
}

TEST(Limits, Report) {
  auto report = gb::build_limits_report(14);
  EXPECT_TRUE(report.series_identities);
  ASSERT_EQ(report.gaps.size(), 14u);
  EXPECT_EQ(report.gaps[8].n, 9);
  EXPECT_EQ(report.gaps[8].ratio_6dp, "0.525761");
  std::ostringstream out;
  gb::write_limits(report, gb::OutputFormat::text, out);
  EXPECT_NE(out.str().find("0.525783423063"), std::string::npos);
  EXPECT_NE(out.str().find("0.762891711532"), std::string::npos);
  std::ostringstream json;
  gb::write_limits(report, gb::OutputFormat::json, json);
  auto parsed = nlohmann::json::parse(json.str());
  EXPECT_EQ(parsed["even"]["decimal_6dp"], "0.762892");
  EXPECT_EQ(parsed["gaps"].size(), 14u);
}

TEST(Verify, PassesOnSmallSizes) {
  auto results = gb::run_verification({.max_n = 3, .chi_square_samples = 100'000});
  for (const auto& r : results) EXPECT_TRUE(r.passed) << r.name << ": " << r.detail;
  EXPECT_TRUE(gb::all_passed(results));
  EXPECT_GE(results.size(), 10u);
}

TEST(Verify, InjectedFaultNamesTheInvariant) {
  gb::VerifyOptions options{.max_n = 3, .chi_square_samples = 10'000};
  options.balanced_count_fn = [](int n) {
    gb::BigUnsigned s = gb::balanced_count(n);
    return n == 3 ? s + 1 : s;
  };
  auto results = gb::run_verification(options);
  EXPECT_FALSE(gb::all_passed(results));
  bool enumeration_flagged = false;
  for (const auto& r : results) {
    if (r.name.find("enumeration") != std::string::npos) {
      EXPECT_FALSE(r.passed);
      EXPECT_EQ(r.detail, "S mismatch at n = 3");
      enumeration_flagged = true;
    }
  }
  EXPECT_TRUE(enumeration_flagged);
  EXPECT_THROW(gb::run_verification({.max_n = 0}), std::invalid_argument);
}
