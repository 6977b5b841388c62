#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace census::csv {

using Row = std::vector<std::string>;

/// RFC 4180 reader: quoted fields, doubled quotes, CRLF or LF line ends.
/// Blank lines are skipped.
struct Table {
  Row header;
  std::vector<Row> rows;
  std::vector<std::size_t> lines;  // source line of each row

  std::optional<std::size_t> column(std::string_view name) const;
  std::size_t require_column(std::string_view name) const;
};

Table parse(std::string_view text);
Table read(const std::string& path);

std::string escape(std::string_view field);
std::string format_row(const Row& row);

}  // namespace census::csv
