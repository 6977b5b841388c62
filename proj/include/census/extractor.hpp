#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "census/fetcher.hpp"
#include "census/html.hpp"
#include "census/lexicon.hpp"
#include "census/record.hpp"

namespace census {

enum class SegmentKind { Table, Div, List, Article };
std::string_view to_string(SegmentKind k);

struct SegmentationCandidate {
  SegmentKind kind = SegmentKind::Table;
  std::vector<std::string> segments;  // outer HTML of each unit
  int record_count = 0;               // segments yielding a name
};

struct NameMatch {
  std::string full;
  std::string first;
  std::string last;
  std::size_t begin = 0;  // byte span of the run in the searched text
  std::size_t end = 0;
};

/// Earliest run of 2-4 capitalized tokens containing a lexicon name, with
/// honorifics and suffixes removed; "Last, First" runs are reordered.
std::optional<NameMatch> find_name(std::string_view segment_text, const NameLexicon& lex);

/// Title clause near a name: clauses after the name are searched before those
/// preceding it, the clause holding the longest whitelist phrase wins, and the
/// name itself is cut out of the returned clause.
std::optional<std::string> find_title(std::string_view segment_text, const TitleWhitelist& whitelist,
                                      const NameMatch* name = nullptr);

/// Plain address, then deobfuscated forms, then a bare local part after an
/// "email" label completed with the page's registered domain.
std::optional<std::string> find_email(std::string_view segment_html, std::string_view page_url);

/// Href of the anchor whose text contains `name`.
std::optional<std::string> find_homepage(std::string_view segment_html, std::string_view name,
                                         std::string_view page_url);

/// Links inside div/list/nav containers with a "pagination" or "pager" class.
std::vector<std::string> detect_pagination(const Page& page);

/// Throws NotADirectory when no structural candidate yields a name.
SegmentationCandidate segment(const Page& page, const Lexicons& lex);

/// Records from one page, before filtering. Records without any title are
/// omitted. Throws NotADirectory.
std::vector<FacultyRecord> parse_page(const Page& page, const Lexicons& lex, const std::string& institution);

/// Union over a directory and its pagination pages, deduplicated by
/// lowercase full name (the record with more fields wins). Throws
/// NotADirectory when every page fails.
std::vector<FacultyRecord> parse_directory(const std::vector<Page>& pages, const Lexicons& lex,
                                           const std::string& institution);

}  // namespace census
