#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace photonstat::cli {

using Cell = std::variant<double, std::int64_t, std::uint64_t, std::string>;

/// Fixed-notation rendering with 12 significant digits (at most 30
/// decimals); negative zero prints as zero.
std::string format_fixed12(double value);

/// Rectangular result table written as CSV (header always present, LF line
/// endings, fixed column order) or as a JSON array of row objects.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
  void write_csv(std::ostream& os) const;
  nlohmann::ordered_json rows_json() const;
};

}  // namespace photonstat::cli
