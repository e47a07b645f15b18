#include "fskjcr/result_table.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fskjcr/error.hpp"

namespace fskjcr {

ResultTable::ResultTable(std::string experiment, std::string panel, std::vector<std::string> columns)
    : experiment_(std::move(experiment)), panel_(std::move(panel)), columns_(std::move(columns)) {
  if (columns_.empty()) throw ParameterError("result table needs at least one column");
  for (const auto& c : columns_) {
    if (c.empty() || c.find_first_of(",\n\r#") != std::string::npos) {
      throw ParameterError("invalid column name '" + c + "'");
    }
  }
}

void ResultTable::add_row(std::vector<double> row) {
  if (row.size() != columns_.size()) {
    throw ParameterError("row width " + std::to_string(row.size()) + " differs from " +
                         std::to_string(columns_.size()) + " columns");
  }
  rows_.push_back(std::move(row));
}

void ResultTable::add_meta(std::string key, std::string value) {
  if (value.find('\n') != std::string::npos) throw ParameterError("metadata values must be single-line");
  meta_.emplace_back(std::move(key), std::move(value));
}

std::size_t ResultTable::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i)
    if (columns_[i] == name) return i;
  throw ParameterError("no column '" + name + "' in " + file_name());
}

std::vector<double> ResultTable::column(const std::string& name) const {
  const auto i = column_index(name);
  std::vector<double> out;
  out.reserve(rows_.size());
  for (const auto& r : rows_) out.push_back(r[i]);
  return out;
}

std::string ResultTable::file_name() const { return experiment_ + "_" + panel_ + ".csv"; }

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw NumericalError("number formatting failed");
  return std::string(buf, ptr);
}

void ResultTable::write_csv(std::ostream& os) const {
  for (const auto& [k, v] : meta_) os << "# " << k << ": " << v << '\n';
  for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i];
  os << '\n';
  for (const auto& r : rows_) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_number(r[i]);
    os << '\n';
  }
}

void ResultTable::write_csv(const std::filesystem::path& dir) const {
  const auto path = dir / file_name();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  write_csv(out);
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

ResultTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
  const std::string stem = path.stem().string();
  const auto us = stem.find('_');
  std::string experiment = us == std::string::npos ? stem : stem.substr(0, us);
  std::string panel = us == std::string::npos ? "" : stem.substr(us + 1);

  std::vector<std::pair<std::string, std::string>> meta;
  std::string line;
  std::vector<std::string> columns;
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) == 0) {
      const auto colon = line.find(": ");
      if (colon != std::string::npos) meta.emplace_back(line.substr(2, colon - 2), line.substr(colon + 2));
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) columns.push_back(cell);
    break;
  }
  ResultTable t(experiment, panel.empty() ? "data" : panel, columns);
  for (auto& [k, v] : meta) t.add_meta(k, v);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      if (cell == "inf") row.push_back(INFINITY);
      else if (cell == "-inf") row.push_back(-INFINITY);
      else if (cell == "nan") row.push_back(NAN);
      else row.push_back(std::stod(cell));
    }
    t.add_row(std::move(row));
  }
  return t;
}

}  // namespace fskjcr
