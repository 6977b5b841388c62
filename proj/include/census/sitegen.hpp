#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "census/census_store.hpp"
#include "census/classifier.hpp"
#include "census/diff_stats.hpp"
#include "census/extractor.hpp"
#include "census/lexicon.hpp"
#include "census/record.hpp"
#include "census/rng.hpp"

namespace census {

enum class Obfuscation { None, AtDot, SuffixStripped };
std::string_view to_string(Obfuscation o);

struct RosterEntry {
  std::string full_name;
  std::string first;
  std::string last;
  std::string title_raw;
  Rank rank = Rank::Unknown;  // Unknown for people outside the census
  std::string email;
  std::optional<std::string> homepage;
  bool is_ttt = true;  // in the census: tenure-track and in-field
  std::optional<Gender> gender;
  std::string source_url;  // directory page listing the entry; set by render_site
};

struct SiteSpec {
  std::uint64_t seed = 1;
  SegmentKind style = SegmentKind::Table;
  int n_faculty = 12;
  int n_nonttt = 0;
  int n_out_of_field = 0;
  bool paginated = false;
  Obfuscation obfuscate_email = Obfuscation::None;
  int distractor_pages = 3;
  int link_depth_to_directory = 1;
  /// Bare names under rank headings (list style only).
  bool heading_titles = false;
  int site_index = 0;  // host cs.univNN.edu
  std::string institution;  // default "University NN"
  /// Used as given when non-empty; otherwise drawn from the seed.
  std::vector<RosterEntry> roster;
};

struct GroundTruth {
  std::string institution;
  std::string homepage;
  std::string directory_url;
  std::vector<std::string> directory_pages;
  std::vector<RosterEntry> roster;
  int shortest_path_from_home = 1;
  SegmentKind style = SegmentKind::Table;
};

struct SitePage {
  std::string url;
  std::string html;
  bool is_directory = false;
};

struct RenderedSite {
  std::vector<SitePage> pages;
  GroundTruth truth;
};

/// Unique (first initial, last) keys across everything drawn from one pool.
class NameDrawer {
 public:
  NameDrawer(const NamePools& pools, std::uint64_t seed);
  /// (first, last), capitalized.
  std::pair<std::string, std::string> draw();
  void reserve(const std::string& first, const std::string& last);

 private:
  const NamePools& pools_;
  Rng rng_;
  std::set<std::string> used_;
};

std::string site_host(int site_index);

/// Fills spec.roster (when empty) from the seed and the drawer.
std::vector<RosterEntry> draw_roster(const SiteSpec& spec, NameDrawer& names);

/// Renders every page of a site in memory. Deterministic in spec.
RenderedSite render_site(const SiteSpec& spec, const NamePools& pools);

/// Writes pages under out_dir/sites/<host>/ and returns URL -> path relative
/// to out_dir.
std::map<std::string, std::string> write_site(const RenderedSite& site, const std::string& out_dir);

std::pair<std::map<std::string, std::string>, GroundTruth> generate_site(const SiteSpec& spec,
                                                                         const std::string& out_dir,
                                                                         const NamePools& pools);

/// Directory styles weighted as table 80, div 100, list 24, article 1.
struct StyleMix {
  std::array<double, 4> weight = {80, 100, 24, 1};  // SegmentKind order
};

/// Per-style site counts summing to n: floors of the proportional shares,
/// then leftovers to styles that would get none, then by largest remainder.
std::array<int, 4> allocate_styles(int n, const StyleMix& mix);

struct CorpusOptions {
  int n_departments = 41;
  StyleMix mix;
  std::uint64_t seed = 7;
};

/// Site specs of a corpus, rosters drawn.
std::vector<SiteSpec> plan_corpus(const CorpusOptions& opts, const NamePools& pools);

struct Corpus {
  std::vector<RenderedSite> sites;
};

Corpus build_corpus(const std::vector<SiteSpec>& specs, const NamePools& pools);

/// Every HTML page the navigator can judge, labeled directory or not.
/// Pagination continuation pages are left out.
LabeledDataset corpus_features(const Corpus& c, const Lexicons& lex);

/// The census a perfect crawl would produce.
CensusSnapshot truth_snapshot(const Corpus& c, const std::string& date);

/// Writes manifest.json, homes.txt, truth.csv, navtruth.csv, features.csv
/// and the site files.
void write_corpus(const Corpus& c, const std::string& out_dir, const Lexicons& lex);

Corpus generate_corpus(const CorpusOptions& opts, const std::string& out_dir, const Lexicons& lex,
                       const NamePools& pools);

struct ChurnPair {
  Corpus old_corpus;
  Corpus new_corpus;
  TransitionTable transitions;
  GenderLabels labels;  // keyed by the old snapshot's records
};

/// Two corpora over the same departments: promotions, demotions, moves
/// between departments, departures and hires, with at least one of every
/// transition in the table. Names are unique by match key.
ChurnPair plan_churn_pair(const CorpusOptions& opts, const NamePools& pools);

/// Writes old/ and new/ corpora, old_truth.csv (census plus a gender column),
/// new_truth.csv and transitions_truth.csv.
ChurnPair generate_churn_pair(const CorpusOptions& opts, const std::string& out_dir, const Lexicons& lex,
                              const NamePools& pools);

std::string truth_csv(const Corpus& c);
std::string transitions_csv(const TransitionTable& t);
TransitionTable read_transitions_csv(const std::string& path);

}  // namespace census
