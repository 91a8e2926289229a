#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace twotier::cli {

enum class OutputFormat { csv, json, table };

// A fixed-decimal number; `decimals` governs CSV and table rendering, JSON
// gets the full double.
struct Number {
  double value = 0.0;
  int decimals = 6;
};

using Cell = std::variant<std::string, std::int64_t, Number, bool>;

// Column-ordered result set plus key/value summary lines.
class ReportTable {
 public:
  explicit ReportTable(std::vector<std::string> columns)
      : columns_(std::move(columns)) {}

  void add_row(std::vector<Cell> row);
  void add_summary(std::string key, Cell value);

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const { return rows_; }
  const std::vector<std::pair<std::string, Cell>>& summary() const {
    return summary_;
  }

  // CSV carries only the header and rows; the summary goes to `side`
  // as "# key=value" lines.
  void write(std::ostream& out, std::ostream& side, OutputFormat format,
             const std::string& command) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
  std::vector<std::pair<std::string, Cell>> summary_;
};

std::string render(const Cell& cell);

}  // namespace twotier::cli
