#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace census {

/// A lowercase phrase list with the invariants every shipped list shares:
/// entries non-empty, lowercase, unique. Order is preserved from the file.
class PhraseList {
 public:
  PhraseList() = default;
  explicit PhraseList(std::vector<std::string> phrases);  // throws std::invalid_argument

  static PhraseList load(const std::string& path);

  const std::vector<std::string>& phrases() const { return phrases_; }
  std::size_t size() const { return phrases_.size(); }

  /// True when any phrase is a case-insensitive substring of `s`.
  bool any_in(std::string_view s) const;

 private:
  std::vector<std::string> phrases_;
};

/// Keywords for link scoring.
using NavKeywords = PhraseList;
/// Phrases marking a job title; partial matches, longest wins.
using TitleWhitelist = PhraseList;
/// Phrases marking a non tenure-track appointment.
using TitleBlacklist = PhraseList;
/// Field terms for the in-field check on qualified titles.
using ComputingKeywords = PhraseList;

struct NameLexicon {
  std::unordered_set<std::string> names;
  std::string source;

  /// Lookup of a raw token: strips surrounding punctuation and lowercases.
  /// Hyphenated tokens match when the whole token or any part is present.
  bool contains(std::string_view token) const;

  static NameLexicon load(const std::vector<std::string>& paths);
};

/// First and last name pools for generating synthetic rosters.
struct NamePools {
  std::vector<std::string> first;
  std::vector<std::string> last;
};

struct Lexicons {
  NameLexicon names;
  TitleWhitelist titles;
  TitleBlacklist blacklist;
  ComputingKeywords computing;
  NavKeywords nav;

  /// Loads the standard file set from a data directory:
  /// first_names.txt, last_names.txt, title_whitelist.txt, title_blacklist.txt,
  /// computing_keywords.txt, nav_keywords.txt.
  static Lexicons load_dir(const std::string& dir);

  /// The lists shipped with the tool (CENSUS_DATA_DIR env var, else the
  /// install-time data directory).
  static const Lexicons& bundled();
};

std::string default_data_dir();
NamePools load_name_pools(const std::string& dir);

}  // namespace census
