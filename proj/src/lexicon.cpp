#include "census/lexicon.hpp"

#include <cstdlib>
#include <filesystem>
#include <stdexcept>

#include "census/text.hpp"

#ifndef CENSUS_DATA_DIR
#define CENSUS_DATA_DIR "data"
#endif

namespace census {

PhraseList::PhraseList(std::vector<std::string> phrases) : phrases_(std::move(phrases)) {
  std::unordered_set<std::string> seen;
  for (const auto& p : phrases_) {
    if (p.empty()) throw std::invalid_argument("empty phrase in list");
    if (text::to_lower(p) != p) throw std::invalid_argument("phrase not lowercase: '" + p + "'");
    if (!seen.insert(p).second) throw std::invalid_argument("duplicate phrase: '" + p + "'");
  }
}

PhraseList PhraseList::load(const std::string& path) { return PhraseList(text::read_lines(path)); }

bool PhraseList::any_in(std::string_view s) const {
  const auto lower = text::to_lower(s);
  for (const auto& p : phrases_)
    if (lower.find(p) != std::string::npos) return true;
  return false;
}

bool NameLexicon::contains(std::string_view token) const {
  const auto t = text::to_lower(text::trim(token, ".,;:()[]\"'!?*"));
  if (t.empty()) return false;
  if (names.count(t)) return true;
  if (t.find('-') != std::string::npos) {
    for (const auto& part : text::split(t, '-'))
      if (!part.empty() && names.count(part)) return true;
  }
  return false;
}

NameLexicon NameLexicon::load(const std::vector<std::string>& paths) {
  NameLexicon lex;
  for (const auto& p : paths) {
    for (auto& n : text::read_lines(p)) {
      if (n.find(' ') != std::string::npos) throw std::invalid_argument("name with whitespace: " + n);
      lex.names.insert(text::to_lower(n));
    }
    if (!lex.source.empty()) lex.source += ";";
    lex.source += std::filesystem::path(p).filename().string();
  }
  return lex;
}

std::string default_data_dir() {
  if (const char* env = std::getenv("CENSUS_DATA_DIR"); env && *env) return env;
  return CENSUS_DATA_DIR;
}

Lexicons Lexicons::load_dir(const std::string& dir) {
  const std::filesystem::path d(dir);
  Lexicons lex;
  lex.names = NameLexicon::load({(d / "first_names.txt").string(), (d / "last_names.txt").string()});
  lex.titles = PhraseList::load((d / "title_whitelist.txt").string());
  lex.blacklist = PhraseList::load((d / "title_blacklist.txt").string());
  lex.computing = PhraseList::load((d / "computing_keywords.txt").string());
  lex.nav = PhraseList::load((d / "nav_keywords.txt").string());
  return lex;
}

const Lexicons& Lexicons::bundled() {
  static const Lexicons lex = load_dir(default_data_dir());
  return lex;
}

NamePools load_name_pools(const std::string& dir) {
  const std::filesystem::path d(dir);
  return {text::read_lines((d / "first_names.txt").string()),
          text::read_lines((d / "last_names.txt").string())};
}

}  // namespace census
