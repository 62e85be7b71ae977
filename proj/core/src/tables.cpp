#include "rftkit/tables.hpp"

#include <cctype>
#include <istream>

#include <json.hpp>

#include "rftkit/error.hpp"

namespace rftkit {

namespace {

using nlohmann::json;

BigRational mean(const std::vector<BigRational>& values) {
  BigRational sum(0);
  for (const auto& v : values) sum += v;
  if (values.empty()) return sum;
  return sum / BigRational(static_cast<long long>(values.size()));
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string md_field(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

BigRational cell_value(const json& v, const std::string& col, std::size_t line_no) {
  if (v.is_string()) {
    if (auto d = parse_decimal(v.get<std::string>())) return *d;
  } else if (v.is_number_integer()) {
    return BigRational(v.get<long long>());
  } else if (v.is_number()) {
    return from_double_shortest(v.get<double>());
  }
  throw Error(ErrorCode::SchemaViolation, "cell '" + col + "' is not a decimal number", line_no);
}

}  // namespace

TableRow summary_row(std::string label, const std::map<std::string, BigRational>& results,
                     std::span<const std::string> columns) {
  TableRow row;
  row.label = std::move(label);
  for (const auto& col : columns) {
    auto it = results.find(col);
    if (it == results.end()) {
      throw Error(ErrorCode::MissingColumn, "row '" + row.label + "' has no value for column '" + col + "'");
    }
    row.columns.push_back(col);
    row.values.push_back(it->second);
  }
  row.avg = mean(row.values);
  return row;
}

std::vector<TableRow> delta_table(const TableRow& base, std::span<const TableRow> variants) {
  std::vector<TableRow> out;
  out.reserve(variants.size());
  for (const auto& v : variants) {
    if (v.columns != base.columns) {
      throw Error(ErrorCode::MissingColumn, "row '" + v.label + "' columns do not match base row '" + base.label + "'");
    }
    TableRow d;
    d.label = v.label;
    d.columns = v.columns;
    for (std::size_t i = 0; i < v.values.size(); ++i) d.values.push_back(v.values[i] - base.values[i]);
    d.avg = v.avg - base.avg;
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<TableInput> read_table_inputs(std::istream& in) {
  std::vector<TableInput> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json doc;
    try {
      doc = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::SchemaViolation, std::string("invalid JSON: ") + e.what(), line_no);
    }
    if (!doc.is_object() || !doc.contains("label") || !doc["label"].is_string() || !doc.contains("cells") ||
        !doc["cells"].is_object()) {
      throw Error(ErrorCode::SchemaViolation, "expected {\"label\": str, \"cells\": {...}}", line_no);
    }
    TableInput row;
    row.label = doc["label"].get<std::string>();
    for (const auto& [col, v] : doc["cells"].items()) row.cells[col] = cell_value(v, col, line_no);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string render_table(std::span<const TableRow> rows, TableFormat format, bool signed_cells) {
  auto cell = [&](const BigRational& v) { return format_fixed(v, kTablePlaces, signed_cells); };
  std::vector<std::string> header = {"label"};
  if (!rows.empty()) header.insert(header.end(), rows.front().columns.begin(), rows.front().columns.end());
  header.push_back("Avg");

  std::string out;
  switch (format) {
    case TableFormat::Markdown: {
      out += "|";
      for (std::size_t i = 0; i < header.size(); ++i) out += " " + (i == 0 ? std::string() : header[i]) + " |";
      out += "\n|";
      for (std::size_t i = 0; i < header.size(); ++i) out += i == 0 ? "---|" : "---:|";
      out += "\n";
      for (const auto& r : rows) {
        out += "| " + md_field(r.label) + " |";
        for (const auto& v : r.values) out += " " + cell(v) + " |";
        out += " " + cell(r.avg) + " |\n";
      }
      break;
    }
    case TableFormat::Csv: {
      for (std::size_t i = 0; i < header.size(); ++i) out += (i ? "," : "") + csv_field(header[i]);
      out += "\n";
      for (const auto& r : rows) {
        out += csv_field(r.label);
        for (const auto& v : r.values) out += "," + cell(v);
        out += "," + cell(r.avg) + "\n";
      }
      break;
    }
    case TableFormat::Json: {
      // cells stay strings so the 2 d.p. rendering survives round trips
      for (const auto& r : rows) {
        json j;
        j["label"] = r.label;
        json cells = json::object();
        for (std::size_t i = 0; i < r.columns.size(); ++i) cells[r.columns[i]] = cell(r.values[i]);
        j["cells"] = cells;
        j["avg"] = cell(r.avg);
        out += j.dump() + "\n";
      }
      break;
    }
  }
  return out;
}

}  // namespace rftkit
