#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "census/classifier.hpp"
#include "census/fetcher.hpp"
#include "census/filter.hpp"
#include "census/lexicon.hpp"
#include "census/record.hpp"

namespace census {

struct Link {
  std::string target;
  std::string anchor_text;
  std::string context_text;
  int score = 0;
};

inline constexpr std::size_t kContextCap = 300;

/// Keyword occurrences (case-insensitive substrings) over the URL and the
/// link's surrounding text. The anchor text is counted once: as part of the
/// context when the context contains it, on its own otherwise.
int score_link(const Link& link, const NavKeywords& kw);

/// One Link per distinct normalized target of an <a href>, scored; the
/// page's own URL and non-http targets are skipped. Order of first occurrence.
std::vector<Link> extract_links(const Page& page, const NavKeywords& kw);

/// Max-priority queue by score, FIFO among equal scores, with a visited set.
class Frontier {
 public:
  /// Ignored when the target was visited or is already queued with a score
  /// at least as high.
  bool push(Link link);
  /// Next unvisited link, marked visited. nullopt when exhausted.
  std::optional<Link> pop();
  bool mark_visited(const std::string& url) { return visited_.insert(url).second; }
  bool visited(const std::string& url) const { return visited_.count(url) > 0; }
  bool empty() const { return heap_.empty(); }
  std::size_t queued() const { return heap_.size(); }

 private:
  struct Entry {
    int score;
    std::uint64_t seq;
    Link link;
  };
  struct Lower {
    bool operator()(const Entry& a, const Entry& b) const {
      return a.score != b.score ? a.score < b.score : a.seq > b.seq;
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, Lower> heap_;
  std::unordered_map<std::string, int> best_queued_;
  std::unordered_set<std::string> visited_;
  std::uint64_t seq_ = 0;
};

enum class StopReason { Found, BudgetExhausted, FrontierEmpty };
std::string_view to_string(StopReason r);

struct CrawlOptions {
  FetchPolicy policy;
  int min_records = 3;
};

struct CrawlResult {
  std::string institution;
  std::string homepage;
  std::vector<Page> directory_pages;
  std::vector<FacultyRecord> records;  // kept TTT records
  std::vector<Rejected> rejected;
  std::vector<std::string> fetch_log;
  StopReason stop_reason = StopReason::FrontierEmpty;
  /// Position in fetch_log of the accepted directory page.
  std::optional<std::size_t> directory_fetch_index;
};

/// Best-first search from the homepage; every fetched page goes through the
/// classifier, candidates are parsed and filtered, and the first page giving
/// at least min_records TTT records is accepted along with its pagination.
CrawlResult crawl_department(const std::string& homepage, const std::string& institution, PageSource& source,
                             const CrawlOptions& opts, const Lexicons& lex, const ForestModel& model);

/// Hop count from home to target over the corpus link graph (BFS).
/// Throws NoPath.
int shortest_path_length(const CorpusManifest& manifest, const std::string& home, const std::string& target);

/// Fetches after the homepage up to and including the accepted directory,
/// minus the oracle length, floored at 0. Throws ValidationError unless the
/// crawl found a directory.
int excess_steps(const CrawlResult& result, int oracle_length);

/// A department to crawl.
struct Department {
  std::string institution;
  std::string homepage;
};

/// "institution<TAB>homepage" per line; a line with only a URL uses the
/// homepage host as the institution name.
std::vector<Department> read_homepages(const std::string& path);

/// Departments crawled in parallel (jobs threads; 0 = OpenMP default).
/// Results are in input order and equal crawl_corpus_serial's.
std::vector<CrawlResult> crawl_corpus(const std::vector<Department>& depts, PageSource& source,
                                      const CrawlOptions& opts, const Lexicons& lex, const ForestModel& model,
                                      int jobs = 0);
std::vector<CrawlResult> crawl_corpus_serial(const std::vector<Department>& depts, PageSource& source,
                                             const CrawlOptions& opts, const Lexicons& lex,
                                             const ForestModel& model);

}  // namespace census
