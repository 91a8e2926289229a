#include "report_table.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>
#include <json.hpp>

namespace twotier::cli {

namespace {

nlohmann::ordered_json to_json(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Number>) {
          return v.value;
        } else {
          return v;
        }
      },
      cell);
}

}  // namespace

std::string render(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Number>) {
          return fmt::format("{:.{}f}", v.value, v.decimals);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else {
          return fmt::format("{}", v);
        }
      },
      cell);
}

void ReportTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size()) {
    throw std::logic_error("row width does not match the header");
  }
  rows_.push_back(std::move(row));
}

void ReportTable::add_summary(std::string key, Cell value) {
  summary_.emplace_back(std::move(key), std::move(value));
}

void ReportTable::write(std::ostream& out, std::ostream& side,
                        OutputFormat format, const std::string& command) const {
  switch (format) {
    case OutputFormat::csv: {
      for (std::size_t i = 0; i < columns_.size(); ++i) {
        out << (i ? "," : "") << columns_[i];
      }
      out << '\n';
      for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
          out << (i ? "," : "") << render(row[i]);
        }
        out << '\n';
      }
      for (const auto& [key, value] : summary_) {
        side << "# " << key << '=' << render(value) << '\n';
      }
      break;
    }
    case OutputFormat::json: {
      nlohmann::ordered_json doc;
      doc["command"] = command;
      doc["rows"] = nlohmann::ordered_json::array();
      for (const auto& row : rows_) {
        nlohmann::ordered_json obj;
        for (std::size_t i = 0; i < row.size(); ++i) {
          obj[columns_[i]] = to_json(row[i]);
        }
        doc["rows"].push_back(std::move(obj));
      }
      nlohmann::ordered_json summary = nlohmann::ordered_json::object();
      for (const auto& [key, value] : summary_) summary[key] = to_json(value);
      doc["summary"] = std::move(summary);
      out << doc.dump(2) << '\n';
      break;
    }
    case OutputFormat::table: {
      std::vector<std::size_t> width(columns_.size());
      for (std::size_t i = 0; i < columns_.size(); ++i) {
        width[i] = columns_[i].size();
        for (const auto& row : rows_) {
          width[i] = std::max(width[i], render(row[i]).size());
        }
      }
      auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
          out << (i ? "  " : "") << fmt::format("{:>{}}", cells[i], width[i]);
        }
        out << '\n';
      };
      line(columns_);
      for (const auto& row : rows_) {
        std::vector<std::string> cells;
        cells.reserve(row.size());
        for (const Cell& c : row) cells.push_back(render(c));
        line(cells);
      }
      if (!summary_.empty()) out << '\n';
      for (const auto& [key, value] : summary_) {
        out << key << ": " << render(value) << '\n';
      }
      break;
    }
  }
}

}  // namespace twotier::cli
