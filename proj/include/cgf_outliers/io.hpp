#pragma once

#include "cgf_outliers/distributions.hpp"
#include "cgf_outliers/types.hpp"

#include <filesystem>
#include <string>
#include <vector>

// CSV conventions: UTF-8, one header row, '.' decimal point, no thousands
// separators. A first column named `date` carries row labels. Numbers are
// written in shortest round-trip form, so a written matrix parses back to the
// same doubles bit for bit.

namespace cgf_outliers {

struct PriceTable {
  std::vector<std::string> dates;
  std::vector<std::string> tickers;
  Matrix prices;

  void validate() const;
};

enum class ReturnKind { linear, log };
ReturnKind parse_return_kind(const std::string& name);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable parse_csv(const std::string& text);
CsvTable read_csv_file(const std::filesystem::path& path);

// Reads a numeric matrix; a leading `date` column becomes the row labels.
DataMatrix read_data_csv(const std::filesystem::path& path, std::vector<std::string>* column_names = nullptr);
DataMatrix parse_data_csv(const CsvTable& table, std::vector<std::string>* column_names = nullptr);
std::string format_data_csv(const DataMatrix& data, const std::vector<std::string>& column_names = {});

// Single boolean column (`outlier`), values 0/1 (true/false accepted on input).
std::vector<bool> read_labels_csv(const std::filesystem::path& path);
std::vector<bool> parse_labels_csv(const CsvTable& table);
std::string format_labels_csv(const std::vector<bool>& labels);

PriceTable read_prices_csv(const std::filesystem::path& path);
PriceTable parse_prices_csv(const CsvTable& table);

// linear: P_t / P_{t-1} - 1, log: ln(P_t / P_{t-1}). T-1 rows dated by the later day.
DataMatrix compute_returns(const PriceTable& prices, ReturnKind kind);

// truth_t = (date_t >= crisis_date). Throws ArgumentError when the date lies
// outside the labelled range.
LabeledDataset label_by_crisis(const DataMatrix& returns, const std::string& crisis_date);

bool is_iso_date(const std::string& s);

// Shortest representation that round-trips to the same double.
std::string format_double(double v);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace cgf_outliers
