#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace fskjcr {

/// One CSV panel of an experiment: `#` metadata lines, a header row, numeric rows.
class ResultTable {
 public:
  ResultTable(std::string experiment, std::string panel, std::vector<std::string> columns);

  void add_row(std::vector<double> row);
  void add_meta(std::string key, std::string value);

  const std::string& experiment() const { return experiment_; }
  const std::string& panel() const { return panel_; }
  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<double>>& rows() const { return rows_; }
  const std::vector<std::pair<std::string, std::string>>& meta() const { return meta_; }

  std::size_t column_index(const std::string& name) const;
  std::vector<double> column(const std::string& name) const;

  /// `<experiment>_<panel>.csv`
  std::string file_name() const;
  void write_csv(std::ostream& os) const;
  void write_csv(const std::filesystem::path& dir) const;

 private:
  std::string experiment_;
  std::string panel_;
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> rows_;
  std::vector<std::pair<std::string, std::string>> meta_;
};

/// Shortest round-trip decimal form; "inf", "-inf", "nan" for non-finite values.
std::string format_number(double v);

/// Parses a CSV written by write_csv (metadata, header, numeric rows).
ResultTable read_csv(const std::filesystem::path& path);

}  // namespace fskjcr
