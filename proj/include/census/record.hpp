#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace census {

enum class Rank { Asst, Assoc, Full, Unknown };

std::string_view to_string(Rank r);

/// Accepts the canonical spellings (Asst, Assoc, Full, Unknown), case-insensitive.
/// Throws std::invalid_argument otherwise.
Rank parse_rank(std::string_view s);

struct FacultyRecord {
  std::string full_name;
  std::string first;
  std::string last;
  std::optional<std::string> title_raw;
  Rank rank = Rank::Unknown;
  std::optional<std::string> email;
  std::optional<std::string> homepage;
  std::string source_url;
  std::string institution;

  bool operator==(const FacultyRecord&) const = default;
};

/// Lowercased full name; the per-institution identity of a record.
std::string name_key(const FacultyRecord& r);

/// Number of optional fields that are set (title, email, homepage).
int populated_fields(const FacultyRecord& r);

}  // namespace census
