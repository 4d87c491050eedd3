#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace fockskin::cli {

using Json = nlohmann::ordered_json;
using Cell = std::variant<std::int64_t, double>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row);
};

/// Shortest text that round-trips: 17 significant digits, "nan"/"inf" for
/// non-finite values.
std::string format_number(double x);

std::string to_csv(const Table& table);
/// Array of row objects keyed by column name (non-finite values become null).
Json to_json_rows(const Table& table);

std::string sha256_hex(const std::string& bytes);

/// ISO-8601 UTC. SOURCE_DATE_EPOCH, when set, replaces the wall clock.
std::string utc_timestamp();

void write_file(const std::string& path, const std::string& bytes);

}  // namespace fockskin::cli
