#include <doctest.h>

#include <deque>
#include <filesystem>
#include <map>

#include "census/errors.hpp"
#include "census/navigator.hpp"
#include "census/rng.hpp"
#include "census/sitegen.hpp"
#include "census/text.hpp"

using namespace census;
namespace fs = std::filesystem;

namespace {

const Lexicons& lex() { return Lexicons::bundled(); }

Link make_link(std::string target, std::string anchor, std::string context = "", int score = 0) {
  Link l;
  l.target = std::move(target);
  l.anchor_text = std::move(anchor);
  l.context_text = std::move(context);
  l.score = score;
  return l;
}

struct SmallCorpus {
  Corpus corpus;
  ForestModel model;
  MemorySource source;
  std::vector<Department> depts;
};

SmallCorpus& small_corpus() {
  static SmallCorpus sc = [] {
    SmallCorpus s;
    const auto pools = load_name_pools(default_data_dir());
    CorpusOptions train_opts;
    train_opts.n_departments = 20;
    train_opts.seed = 99;
    const auto train = build_corpus(plan_corpus(train_opts, pools), pools);
    ForestParams fp;
    fp.n_trees = 30;
    fp.seed = 1;
    s.model = train_forest(corpus_features(train, lex()), fp);

    CorpusOptions opts;
    opts.n_departments = 8;
    opts.seed = 5;
    s.corpus = build_corpus(plan_corpus(opts, pools), pools);
    for (const auto& site : s.corpus.sites) {
      for (const auto& p : site.pages) s.source.add(p.url, p.html);
      s.depts.push_back({site.truth.institution, site.truth.homepage});
    }
    return s;
  }();
  return sc;
}

CrawlOptions quick() {
  CrawlOptions o;
  o.policy.min_delay_between_requests_per_host = std::chrono::milliseconds(0);
  return o;
}

}  // namespace

TEST_CASE("link scores count keywords in the url and the text") {
  CHECK(score_link(make_link("https://cs.x.edu/faculty", "Faculty Directory"), lex().nav) == 3);
  CHECK(score_link(make_link("https://cs.x.edu/news", "News"), lex().nav) == 0);
  // anchor inside the context is not counted twice
  CHECK(score_link(make_link("https://cs.x.edu/n", "Faculty", "Our Faculty"), lex().nav) == 1);
  CHECK(score_link(make_link("https://cs.x.edu/n", "Faculty", "Meet us"), lex().nav) == 2);
}

TEST_CASE("links are deduplicated and self links skipped") {
  Page p;
  p.url = "https://cs.x.edu/";
  p.status = PageStatus::Ok;
  p.html =
      "<a href=\"/\">Home</a><a href=\"/people\">People</a><a href=\"/people/\">Our People Directory</a>"
      "<a href=\"mailto:x@x.edu\">mail</a><a href=\"/news\">News</a>";
  const auto links = extract_links(p, lex().nav);
  REQUIRE(links.size() == 2);
  CHECK(links[0].target == "https://cs.x.edu/people");
  CHECK(links[0].score >= 3);
  CHECK(links[1].target == "https://cs.x.edu/news");
}

TEST_CASE("frontier pops by score, first in first out among ties") {
  Frontier f;
  CHECK(f.push(make_link("a", "", "", 1)));
  CHECK(f.push(make_link("b", "", "", 3)));
  CHECK(f.push(make_link("c", "", "", 1)));
  CHECK_FALSE(f.push(make_link("c", "", "", 0)));
  CHECK(f.pop()->target == "b");
  CHECK(f.pop()->target == "a");
  CHECK(f.pop()->target == "c");
  CHECK_FALSE(f.pop());
  CHECK_FALSE(f.push(make_link("a", "", "", 9)));
}

TEST_CASE("property: frontier output is sorted by score and stable") {
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    Frontier f;
    std::map<std::string, std::pair<int, int>> best;  // target -> (score, first push order at that score)
    const int n = rng.between(1, 60);
    for (int i = 0; i < n; ++i) {
      const std::string t = "u" + std::to_string(rng.between(0, 20));
      const int s = rng.between(0, 5);
      f.push(make_link(t, "", "", s));
      auto it = best.find(t);
      if (it == best.end() || s > it->second.first) best[t] = {s, i};
    }
    std::vector<Link> out;
    while (auto l = f.pop()) out.push_back(*l);
    CHECK(out.size() == best.size());
    for (std::size_t i = 1; i < out.size(); ++i) {
      const auto& a = best[out[i - 1].target];
      const auto& b = best[out[i].target];
      CHECK((a.first > b.first || (a.first == b.first && a.second < b.second)));
    }
  }
}

TEST_CASE("shortest path over a hand-built link graph") {
  const auto d = fs::temp_directory_path() / "census_test_bfs";
  fs::remove_all(d);
  fs::create_directories(d);
  const std::map<std::string, std::string> pages = {
      {"https://cs.x.edu/", "<a href=\"/a\">a</a><a href=\"/b\">b</a>"},
      {"https://cs.x.edu/a", "<a href=\"/c\">c</a>"},
      {"https://cs.x.edu/b", "<a href=\"/c\">c</a><a href=\"/d\">d</a>"},
      {"https://cs.x.edu/c", "<a href=\"/d\">d</a>"},
      {"https://cs.x.edu/d", "<p>end</p>"},
      {"https://cs.x.edu/island", "<a href=\"/\">home</a>"},
  };
  CorpusManifest m;
  m.root = d;
  int i = 0;
  for (const auto& [url, body] : pages) {
    const std::string file = "p" + std::to_string(i++) + ".html";
    text::write_file((d / file).string(), body);
    m.add(url, file);
  }
  CHECK(shortest_path_length(m, "https://cs.x.edu/", "https://cs.x.edu/") == 0);
  CHECK(shortest_path_length(m, "https://cs.x.edu/", "https://cs.x.edu/c") == 2);
  CHECK(shortest_path_length(m, "https://cs.x.edu/", "https://cs.x.edu/d") == 2);
  CHECK_THROWS_AS(shortest_path_length(m, "https://cs.x.edu/", "https://cs.x.edu/island"), NoPath);
}

TEST_CASE("excess steps") {
  CrawlResult r;
  r.fetch_log = {"h", "a", "b", "dir"};
  CHECK_THROWS_AS(excess_steps(r, 1), ValidationError);
  r.stop_reason = StopReason::Found;
  r.directory_fetch_index = 3;
  CHECK(excess_steps(r, 1) == 2);
  CHECK(excess_steps(r, 3) == 0);
  CHECK(excess_steps(r, 5) == 0);
}

TEST_CASE("homepage lists") {
  const auto p = (fs::temp_directory_path() / "census_test_homes.txt").string();
  text::write_file(p, "University 01\thttps://cs.univ01.edu/\n\nhttps://cs.other.edu/\n");
  const auto d = read_homepages(p);
  REQUIRE(d.size() == 2);
  CHECK(d[0].institution == "University 01");
  CHECK(d[1].institution == "cs.other.edu");
}

TEST_CASE("crawl finds each directory and stays within the budget") {
  auto& sc = small_corpus();
  auto opts = quick();
  for (std::size_t i = 0; i < sc.depts.size(); ++i) {
    const auto& truth = sc.corpus.sites[i].truth;
    const auto r = crawl_department(sc.depts[i].homepage, sc.depts[i].institution, sc.source, opts, lex(), sc.model);
    INFO(truth.institution);
    REQUIRE(r.stop_reason == StopReason::Found);
    REQUIRE(r.directory_fetch_index);
    CHECK(r.fetch_log[*r.directory_fetch_index] == truth.directory_url);
    CHECK(r.fetch_log.size() <= static_cast<std::size_t>(opts.policy.max_pages_per_department));
    CHECK(excess_steps(r, truth.shortest_path_from_home) >= 0);
    CHECK(r.directory_pages.size() == truth.directory_pages.size());
  }
}

TEST_CASE("crawl is deterministic and the parallel run equals the serial one") {
  auto& sc = small_corpus();
  const auto opts = quick();
  const auto serial = crawl_corpus_serial(sc.depts, sc.source, opts, lex(), sc.model);
  const auto again = crawl_corpus_serial(sc.depts, sc.source, opts, lex(), sc.model);
  const auto par = crawl_corpus(sc.depts, sc.source, opts, lex(), sc.model, 4);
  REQUIRE(serial.size() == sc.depts.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].records == again[i].records);
    CHECK(serial[i].fetch_log == again[i].fetch_log);
    CHECK(serial[i].records == par[i].records);
    CHECK(serial[i].fetch_log == par[i].fetch_log);
    CHECK(serial[i].rejected.size() == par[i].rejected.size());
  }
}

TEST_CASE("a tiny budget stops the crawl") {
  auto& sc = small_corpus();
  auto opts = quick();
  opts.policy.max_pages_per_department = 1;
  const auto r = crawl_department(sc.depts[0].homepage, sc.depts[0].institution, sc.source, opts, lex(), sc.model);
  CHECK(r.stop_reason == StopReason::BudgetExhausted);
  CHECK(r.fetch_log.size() == 1);
}
