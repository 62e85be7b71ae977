#include <gtest/gtest.h>

#include <sstream>

#include "published_tables.hpp"
#include "rftkit/error.hpp"
#include "rftkit/tables.hpp"

using namespace rftkit;

namespace {

std::map<std::string, BigRational> cells(const std::vector<std::string>& cols, const std::vector<std::string>& vals) {
  std::map<std::string, BigRational> m;
  for (std::size_t i = 0; i < cols.size(); ++i) m[cols[i]] = *parse_decimal(vals[i]);
  return m;
}

}  // namespace

TEST(SummaryRow, ExamplesAndBase) {
  const auto ex = summary_row("Examples", cells(kAccuracyColumns, {"20.00", "43.37", "30.81", "71.20", "72.60"}));
  EXPECT_EQ(format_fixed(ex.avg, 2), "47.60");
  const auto base = summary_row("base", cells(kAccuracyColumns, {"13.33", "37.35", "24.24", "55.60", "72.60"}));
  EXPECT_EQ(format_fixed(base.avg, 2), "40.62");
  const auto zero = summary_row("zero", cells(kAccuracyColumns, {"0", "0", "0", "0", "0"}));
  EXPECT_EQ(format_fixed(zero.avg, 2), "0.00");
}

TEST(SummaryRow, LengthMeanRoundsHalfAway) {
  const auto r = summary_row("Think", cells(kLengthColumns, {"2042.70", "1024.96", "476.86", "612.10"}), kLengthColumns);
  EXPECT_EQ(r.avg, *parse_decimal("1039.155"));
  EXPECT_EQ(format_fixed(r.avg, 2), "1039.16");
}

TEST(SummaryRow, MissingColumn) {
  auto m = cells(kLengthColumns, {"1", "2", "3", "4"});
  try {
    summary_row("x", m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingColumn);
    EXPECT_NE(std::string(e.what()).find("HE+"), std::string::npos);
  }
}

TEST(DeltaTable, ThinkAndExamples) {
  const auto base = summary_row("base", cells(kAccuracyColumns, {"13.33", "37.35", "24.24", "55.60", "72.60"}));
  const std::vector<TableRow> variants = {
      summary_row("Think", cells(kAccuracyColumns, {"20.00", "43.37", "28.28", "73.20", "70.10"})),
      summary_row("Examples", cells(kAccuracyColumns, {"20.00", "43.37", "30.81", "71.20", "72.60"}))};
  const auto d = delta_table(base, variants);
  EXPECT_EQ(format_fixed(d[0].avg, 2, true), "+6.37");
  EXPECT_EQ(format_fixed(d[1].avg, 2, true), "+6.97");
  EXPECT_EQ(format_fixed(d[0].values[4], 2, true), "-2.50");
  EXPECT_EQ(format_fixed(d[1].values[4], 2, true), "+0.00");
}

TEST(DeltaTable, SelfIsZero) {
  const auto t = rftkit::testing::load_published_tables();
  for (const auto& printed : t.accuracy.rows) {
    const auto row = summary_row(printed.label, cells(t.accuracy.columns, printed.cells));
    const std::vector<TableRow> self = {row};
    const auto d = delta_table(row, self);
    for (const auto& v : d[0].values) EXPECT_EQ(format_fixed(v, 2, true), "+0.00");
    EXPECT_EQ(d[0].avg, 0);
  }
}

TEST(DeltaTable, ColumnMismatch) {
  const auto a = summary_row("a", cells(kAccuracyColumns, {"1", "2", "3", "4", "5"}));
  const std::vector<TableRow> b = {summary_row("b", cells(kLengthColumns, {"1", "2", "3", "4"}), kLengthColumns)};
  EXPECT_THROW(delta_table(a, b), Error);
}

TEST(TableIo, ReadAndRender) {
  std::istringstream in(R"({"label": "A", "cells": {"AIME": "13.33", "AMC": 37.35, "GPQA": "24.24", "MATH": 55.6, "HE+": 72.6}})"
                        "\n\n"
                        R"({"label": "B|x", "cells": {"AIME": 1, "AMC": "2", "GPQA": "3", "MATH": "4", "HE+": "5", "extra": "9"}})");
  const auto inputs = read_table_inputs(in);
  ASSERT_EQ(inputs.size(), 2u);
  std::vector<TableRow> rows;
  for (const auto& r : inputs) rows.push_back(summary_row(r.label, r.cells));
  EXPECT_EQ(format_fixed(rows[0].avg, 2), "40.62");

  const auto md = render_table(rows, TableFormat::Markdown);
  EXPECT_NE(md.find("| A | 13.33 | 37.35 | 24.24 | 55.60 | 72.60 | 40.62 |"), std::string::npos);
  EXPECT_NE(md.find("B\\|x"), std::string::npos);
  const auto csv = render_table(rows, TableFormat::Csv);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "label,AIME,AMC,GPQA,MATH,HE+,Avg");
  const auto js = render_table(rows, TableFormat::Json);
  EXPECT_NE(js.find("\"avg\":\"40.62\""), std::string::npos);

  std::istringstream bad(R"({"label": "A", "cells": {"AIME": "1e3"}})");
  EXPECT_THROW(read_table_inputs(bad), Error);
}
