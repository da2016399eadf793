#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "haptiguide/metrics.hpp"
#include "haptiguide/stats.hpp"

namespace haptiguide::cli {

// Shortest text that parses back to the same double.
std::string format_double(double v);
std::string format_optional(const std::optional<double>& v);
double parse_double(std::string_view s);
std::optional<double> parse_optional_double(std::string_view s);

std::vector<std::string> split_csv_line(std::string_view line);

// Header-indexed CSV table. Unquoted fields only; that is all this tool writes.
class CsvTable {
 public:
  // Throws SchemaError when the input has no header or a required column is missing.
  static CsvTable read(std::istream& in, const std::vector<std::string>& required_columns);

  std::size_t rows() const { return rows_.size(); }
  const std::string& cell(std::size_t row, const std::string& column) const;
  // 1-based line number of a data row in the source text.
  std::size_t line_of(std::size_t row) const { return lines_[row]; }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
  std::vector<std::size_t> lines_;
};

extern const std::vector<std::string> kMetricsColumns;

void write_metrics_csv(std::ostream& out, const std::vector<TrialRecord>& records);
// Throws SchemaError for a missing header/column or an empty table, ParseError for bad rows.
std::vector<TrialRecord> read_metrics_csv(std::istream& in);

void write_summary_csv(std::ostream& out, const std::vector<ConditionSummary>& summaries);

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows);
std::vector<ComparisonRow> read_comparison_csv(std::istream& in);

void write_file(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

}  // namespace haptiguide::cli
