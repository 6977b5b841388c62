#include "census/record.hpp"

#include <stdexcept>

#include "census/text.hpp"

namespace census {

std::string_view to_string(Rank r) {
  switch (r) {
    case Rank::Asst: return "Asst";
    case Rank::Assoc: return "Assoc";
    case Rank::Full: return "Full";
    case Rank::Unknown: return "Unknown";
  }
  return "Unknown";
}

Rank parse_rank(std::string_view s) {
  const auto l = text::to_lower(text::trim(s));
  if (l == "asst") return Rank::Asst;
  if (l == "assoc") return Rank::Assoc;
  if (l == "full") return Rank::Full;
  if (l == "unknown" || l.empty()) return Rank::Unknown;
  throw std::invalid_argument("unknown rank '" + std::string(s) + "'");
}

std::string name_key(const FacultyRecord& r) { return text::to_lower(r.full_name); }

int populated_fields(const FacultyRecord& r) {
  return static_cast<int>(r.title_raw.has_value()) + static_cast<int>(r.email.has_value()) +
         static_cast<int>(r.homepage.has_value());
}

}  // namespace census
