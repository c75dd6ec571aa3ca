#include "cgf_outliers/io.hpp"

#include "cgf_outliers/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace cgf_outliers {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_number(const std::string& cell, std::size_t row, std::size_t col) {
  double v = 0.0;
  const char* begin = cell.data();
  const char* end = cell.data() + cell.size();
  if (!cell.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (cell.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw ParseError("row " + std::to_string(row) + ", column " + std::to_string(col) + ": '" + cell +
                         "' is not a finite number",
                     row, col);
  }
  return v;
}

}  // namespace

bool is_iso_date(const std::string& s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  for (std::size_t i : {0, 1, 2, 3, 5, 6, 8, 9}) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  const int month = std::stoi(s.substr(5, 2));
  const int day = std::stoi(s.substr(8, 2));
  return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw ArgumentError("format_double: conversion failed");
  return std::string(buf, ptr);
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!have_header && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);  // UTF-8 BOM
    if (trim(line).empty()) continue;
    if (!have_header) {
      table.header = split_line(line);
      have_header = true;
      continue;
    }
    auto cells = split_line(line);
    if (cells.size() != table.header.size()) {
      throw ParseError("row " + std::to_string(table.rows.size() + 1) + ": expected " +
                           std::to_string(table.header.size()) + " cells, got " + std::to_string(cells.size()),
                       table.rows.size() + 1);
    }
    table.rows.push_back(std::move(cells));
  }
  if (!have_header) throw ParseError("CSV has no header row");
  return table;
}

CsvTable read_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

DataMatrix parse_data_csv(const CsvTable& table, std::vector<std::string>* column_names) {
  const bool dated = !table.header.empty() && table.header.front() == "date";
  const std::size_t first = dated ? 1 : 0;
  if (table.header.size() <= first) throw ParseError("data CSV has no numeric columns");
  const std::size_t n = table.header.size() - first;
  Matrix values(static_cast<Eigen::Index>(table.rows.size()), static_cast<Eigen::Index>(n));
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    if (dated) labels.push_back(row[0]);
    for (std::size_t j = 0; j < n; ++j) {
      values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = parse_number(row[first + j], i + 1, first + j + 1);
    }
  }
  if (column_names) column_names->assign(table.header.begin() + static_cast<std::ptrdiff_t>(first), table.header.end());
  return DataMatrix(std::move(values), std::move(labels));
}

DataMatrix read_data_csv(const std::filesystem::path& path, std::vector<std::string>* column_names) {
  return parse_data_csv(read_csv_file(path), column_names);
}

std::string format_data_csv(const DataMatrix& data, const std::vector<std::string>& column_names) {
  std::string out;
  const bool dated = data.has_labels();
  if (dated) out += "date";
  for (std::size_t j = 0; j < data.cols(); ++j) {
    if (dated || j > 0) out += ',';
    out += j < column_names.size() ? column_names[j] : "x" + std::to_string(j + 1);
  }
  out += '\n';
  for (std::size_t i = 0; i < data.rows(); ++i) {
    if (dated) out += data.row_labels[i];
    for (std::size_t j = 0; j < data.cols(); ++j) {
      if (dated || j > 0) out += ',';
      out += format_double(data.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
    out += '\n';
  }
  return out;
}

std::vector<bool> parse_labels_csv(const CsvTable& table) {
  if (table.header.size() != 1) throw ParseError("labels CSV must have exactly one column");
  std::vector<bool> labels;
  labels.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const std::string& v = table.rows[i][0];
    if (v == "1" || v == "true" || v == "TRUE") {
      labels.push_back(true);
    } else if (v == "0" || v == "false" || v == "FALSE") {
      labels.push_back(false);
    } else {
      throw ParseError("row " + std::to_string(i + 1) + ": '" + v + "' is not a boolean", i + 1, 1);
    }
  }
  return labels;
}

std::vector<bool> read_labels_csv(const std::filesystem::path& path) { return parse_labels_csv(read_csv_file(path)); }

std::string format_labels_csv(const std::vector<bool>& labels) {
  std::string out = "outlier\n";
  for (bool b : labels) out += b ? "1\n" : "0\n";
  return out;
}

void PriceTable::validate() const {
  if (static_cast<std::size_t>(prices.rows()) != dates.size()) throw ParseError("price table: date count mismatch");
  if (static_cast<std::size_t>(prices.cols()) != tickers.size()) throw ParseError("price table: ticker count mismatch");
  for (std::size_t i = 0; i < dates.size(); ++i) {
    if (!is_iso_date(dates[i])) throw ParseError("row " + std::to_string(i + 1) + ": '" + dates[i] + "' is not YYYY-MM-DD", i + 1, 1);
    if (i > 0 && !(dates[i - 1] < dates[i])) {
      throw ParseError("row " + std::to_string(i + 1) + ": dates must be strictly increasing", i + 1, 1);
    }
  }
  for (Eigen::Index i = 0; i < prices.rows(); ++i) {
    for (Eigen::Index j = 0; j < prices.cols(); ++j) {
      if (!(prices(i, j) > 0.0)) {
        const auto row = static_cast<std::size_t>(i) + 1;
        const auto col = static_cast<std::size_t>(j) + 2;
        throw ParseError("row " + std::to_string(row) + ", column " + std::to_string(col) + ": price must be positive",
                         row, col);
      }
    }
  }
}

PriceTable parse_prices_csv(const CsvTable& table) {
  if (table.header.size() < 2 || table.header.front() != "date") {
    throw ParseError("price CSV must start with a 'date' column followed by at least one ticker");
  }
  PriceTable pt;
  pt.tickers.assign(table.header.begin() + 1, table.header.end());
  pt.prices.resize(static_cast<Eigen::Index>(table.rows.size()), static_cast<Eigen::Index>(pt.tickers.size()));
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    pt.dates.push_back(table.rows[i][0]);
    for (std::size_t j = 0; j < pt.tickers.size(); ++j) {
      const std::string& cell = table.rows[i][j + 1];
      if (cell.empty()) throw ParseError("row " + std::to_string(i + 1) + ", column " + std::to_string(j + 2) + ": missing price", i + 1, j + 2);
      pt.prices(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = parse_number(cell, i + 1, j + 2);
    }
  }
  pt.validate();
  return pt;
}

PriceTable read_prices_csv(const std::filesystem::path& path) { return parse_prices_csv(read_csv_file(path)); }

ReturnKind parse_return_kind(const std::string& name) {
  if (name == "linear") return ReturnKind::linear;
  if (name == "log") return ReturnKind::log;
  throw ArgumentError("unknown return kind '" + name + "' (expected linear or log)");
}

DataMatrix compute_returns(const PriceTable& prices, ReturnKind kind) {
  prices.validate();
  if (prices.prices.rows() < 2) throw ArgumentError("compute_returns: need at least 2 price rows");
  const Eigen::Index T = prices.prices.rows() - 1;
  Matrix r(T, prices.prices.cols());
  for (Eigen::Index t = 0; t < T; ++t) {
    for (Eigen::Index j = 0; j < r.cols(); ++j) {
      const double ratio = prices.prices(t + 1, j) / prices.prices(t, j);
      r(t, j) = kind == ReturnKind::linear ? ratio - 1.0 : std::log(ratio);
    }
  }
  return DataMatrix(std::move(r), std::vector<std::string>(prices.dates.begin() + 1, prices.dates.end()));
}

LabeledDataset label_by_crisis(const DataMatrix& returns, const std::string& crisis_date) {
  if (!returns.has_labels()) throw ArgumentError("label_by_crisis: returns carry no date labels");
  if (!is_iso_date(crisis_date)) throw ArgumentError("label_by_crisis: '" + crisis_date + "' is not YYYY-MM-DD");
  if (crisis_date < returns.row_labels.front() || crisis_date > returns.row_labels.back()) {
    throw ArgumentError("label_by_crisis: crisis date " + crisis_date + " is outside " + returns.row_labels.front() +
                        " .. " + returns.row_labels.back());
  }
  LabeledDataset out;
  out.data = returns;
  out.truth.reserve(returns.rows());
  for (const auto& d : returns.row_labels) out.truth.push_back(d >= crisis_date);
  return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw ParseError("write to '" + path.string() + "' failed");
}

}  // namespace cgf_outliers
