#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "census/lexicon.hpp"
#include "census/record.hpp"

namespace census {

/// False when any blacklist phrase occurs in the title (case-insensitive).
bool is_ttt(std::string_view title_raw, const TitleBlacklist& bl);

/// A title qualified by " of ", " from " or " in " must name a computing
/// field; an unqualified title is assumed in-field.
bool is_in_field(std::string_view title_raw, const ComputingKeywords& kw);

/// assistant professor > associate professor > professor, else Unknown.
Rank classify_rank(std::string_view title_raw);

enum class RejectReason { BlacklistedTitle, OutOfField, NoTitle };
std::string_view to_string(RejectReason r);

struct Rejected {
  FacultyRecord record;
  RejectReason reason;
};

struct FilterResult {
  std::vector<FacultyRecord> kept;
  std::vector<Rejected> rejected;
};

FilterResult filter_census(const std::vector<FacultyRecord>& records, const Lexicons& lex);

/// One row of a patch file (institution,full_name,rank,note).
struct Patch {
  std::string institution;
  std::string full_name;
  Rank rank = Rank::Unknown;
  std::string note;
  std::size_t line = 0;
};

/// Throws FormatError with the offending line for a missing column, an empty
/// name or a rank other than Asst/Assoc/Full.
std::vector<Patch> read_patches(const std::string& path);
std::vector<Patch> parse_patches(std::string_view csv_text);

struct PatchResult {
  std::size_t applied = 0;
  std::vector<Patch> unmatched;
};

/// Sets rank (and a canonical title) on records matched by institution and
/// case-insensitive full name.
PatchResult apply_patches(std::vector<FacultyRecord>& records, const std::vector<Patch>& patches);

/// Canonical title for a rank: "Assistant Professor", ...
std::string canonical_title(Rank r);

}  // namespace census
