#pragma once

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rftkit/exact.hpp"

namespace rftkit {

// Column sets for the accuracy table and the response-length table.
inline const std::vector<std::string> kAccuracyColumns = {"AIME", "AMC", "GPQA", "MATH", "HE+"};
inline const std::vector<std::string> kLengthColumns = {"AIME", "AMC", "GPQA", "MATH"};

constexpr int kTablePlaces = 2;

struct TableRow {
  std::string label;
  std::vector<std::string> columns;
  std::vector<BigRational> values;  // full precision, same order as columns
  BigRational avg;                  // unweighted mean of values, unrounded
};

/// Picks `columns` out of `results` in order and appends the exact mean.
/// Extra keys are ignored. Throws Error(MissingColumn) naming the first
/// absent column.
TableRow summary_row(std::string label, const std::map<std::string, BigRational>& results,
                     std::span<const std::string> columns = kAccuracyColumns);

/// Cell-wise variant - base for every variant; Avg delta is taken from the
/// unrounded averages. Throws Error(MissingColumn) when columns differ.
std::vector<TableRow> delta_table(const TableRow& base, std::span<const TableRow> variants);

struct TableInput {
  std::string label;
  std::map<std::string, BigRational> cells;
};

/// JSONL rows {"label": str, "cells": {col: number|"decimal"}}. Decimal
/// strings are read exactly; JSON numbers via their shortest decimal form.
/// Throws Error(SchemaViolation) with the line number.
std::vector<TableInput> read_table_inputs(std::istream& in);

enum class TableFormat { Markdown, Csv, Json };

/// Values rounded half away from zero at 2 d.p.; `signed_cells` prefixes
/// + on non-negative values (delta tables).
std::string render_table(std::span<const TableRow> rows, TableFormat format, bool signed_cells = false);

}  // namespace rftkit
