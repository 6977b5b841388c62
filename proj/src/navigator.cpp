#include "census/navigator.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include <omp.h>

#include "census/errors.hpp"
#include "census/extractor.hpp"
#include "census/html.hpp"
#include "census/text.hpp"
#include "census/url.hpp"

namespace census {

int score_link(const Link& link, const NavKeywords& kw) {
  std::string text = link.context_text;
  if (!text::contains_ci(text, link.anchor_text)) text += " " + link.anchor_text;
  int n = 0;
  for (const auto& k : kw.phrases()) n += text::count_ci(link.target, k) + text::count_ci(text, k);
  return n;
}

namespace {

void anchors_of(const html::Node& n, std::vector<const html::Node*>& out) {
  if (n.is("a")) out.push_back(&n);
  for (const auto& c : n.children) anchors_of(*c, out);
}

std::string cap_context(std::string s) {
  if (s.size() <= kContextCap) return s;
  std::size_t cut = kContextCap;
  while (cut > 0 && (static_cast<unsigned char>(s[cut]) & 0xC0) == 0x80) --cut;  // utf-8 boundary
  s.resize(cut);
  return s;
}

}  // namespace

std::vector<Link> extract_links(const Page& page, const NavKeywords& kw) {
  std::vector<Link> out;
  if (page.status != PageStatus::Ok) return out;
  const auto doc = html::Document::parse(page.html);
  std::vector<const html::Node*> anchors;
  anchors_of(doc.root(), anchors);
  std::map<std::string, std::size_t> index;
  for (const auto* a : anchors) {
    const auto* href = a->attr("href");
    if (!href || text::trim(*href).empty()) continue;
    Link l;
    try {
      l.target = normalize_url(text::trim(*href), page.url);
    } catch (const MalformedUrl&) {
      continue;
    }
    if (l.target == page.url) continue;
    l.anchor_text = html::inline_text(*a);
    const auto* block = html::block_ancestor(*a);
    l.context_text = cap_context(block ? html::inline_text(*block) : l.anchor_text);
    l.score = score_link(l, kw);
    const auto it = index.find(l.target);
    if (it == index.end()) {
      index.emplace(l.target, out.size());
      out.push_back(std::move(l));
    } else if (l.score > out[it->second].score) {
      out[it->second] = std::move(l);
    }
  }
  return out;
}

bool Frontier::push(Link link) {
  if (visited_.count(link.target)) return false;
  const auto it = best_queued_.find(link.target);
  if (it != best_queued_.end() && it->second >= link.score) return false;
  best_queued_[link.target] = link.score;
  const int s = link.score;
  heap_.push(Entry{s, seq_++, std::move(link)});
  return true;
}

std::optional<Link> Frontier::pop() {
  while (!heap_.empty()) {
    Entry e = heap_.top();
    heap_.pop();
    if (visited_.count(e.link.target)) continue;
    visited_.insert(e.link.target);
    best_queued_.erase(e.link.target);
    return std::move(e.link);
  }
  return std::nullopt;
}

std::string_view to_string(StopReason r) {
  switch (r) {
    case StopReason::Found:
      return "Found";
    case StopReason::BudgetExhausted:
      return "BudgetExhausted";
    case StopReason::FrontierEmpty:
      return "FrontierEmpty";
  }
  return "?";
}

namespace {

struct Judgement {
  std::vector<FacultyRecord> kept;
  std::vector<Rejected> rejected;
};

std::optional<Judgement> judge(const Page& page, const Lexicons& lex, const ForestModel& model,
                               const std::string& institution) {
  if (page.status != PageStatus::Ok) return std::nullopt;
  if (!is_directory_candidate(predict_proba(model, extract_features(page, lex)))) return std::nullopt;
  try {
    auto f = filter_census(parse_page(page, lex, institution), lex);
    return Judgement{std::move(f.kept), std::move(f.rejected)};
  } catch (const NotADirectory&) {
    return std::nullopt;
  }
}

void sort_records(std::vector<FacultyRecord>& rs) {
  std::sort(rs.begin(), rs.end(), [](const FacultyRecord& a, const FacultyRecord& b) {
    return std::tie(a.institution, a.full_name, a.source_url) < std::tie(b.institution, b.full_name, b.source_url);
  });
}

}  // namespace

CrawlResult crawl_department(const std::string& homepage, const std::string& institution, PageSource& source,
                             const CrawlOptions& opts, const Lexicons& lex, const ForestModel& model) {
  opts.policy.validate();
  CrawlResult res;
  res.institution = institution;
  const auto home = normalize_url(homepage);
  res.homepage = home;
  Fetcher fetcher(source, opts.policy, home);
  Frontier frontier;
  std::unordered_map<std::string, std::pair<std::string, int>> origin;  // target -> (referrer, depth)

  auto accept = [&](Page page) {
    res.directory_fetch_index = static_cast<std::size_t>(fetcher.fetch_count() - 1);
    std::vector<Page> pages{std::move(page)};
    std::deque<std::string> pending;
    for (auto& u : detect_pagination(pages.front())) pending.push_back(std::move(u));
    while (!pending.empty()) {
      const auto u = pending.front();
      pending.pop_front();
      if (!fetcher.in_scope(u) || !frontier.mark_visited(u)) continue;
      try {
        auto p = fetcher.fetch(u, pages.front().url, pages.front().depth);
        if (p.status != PageStatus::Ok) continue;
        for (auto& more : detect_pagination(p)) pending.push_back(std::move(more));
        pages.push_back(std::move(p));
      } catch (const BudgetExhausted&) {
        break;
      }
    }
    auto parsed = parse_directory(pages, lex, institution);
    auto f = filter_census(parsed, lex);
    res.records = std::move(f.kept);
    res.rejected = std::move(f.rejected);
    res.directory_pages = std::move(pages);
    res.stop_reason = StopReason::Found;
  };

  auto visit = [&](Page page) -> bool {
    if (auto j = judge(page, lex, model, institution);
        j && static_cast<int>(j->kept.size()) >= opts.min_records) {
      accept(std::move(page));
      return true;
    }
    for (auto& l : extract_links(page, lex.nav)) {
      if (!fetcher.in_scope(l.target)) continue;
      origin.try_emplace(l.target, page.url, page.depth + 1);
      frontier.push(std::move(l));
    }
    return false;
  };

  try {
    frontier.mark_visited(home);
    bool found = visit(fetcher.fetch(home, std::nullopt, 0));
    while (!found) {
      auto link = frontier.pop();
      if (!link) break;
      const auto& [ref, depth] = origin.at(link->target);
      found = visit(fetcher.fetch(link->target, ref, depth));
    }
  } catch (const BudgetExhausted&) {
    res.stop_reason = StopReason::BudgetExhausted;
  }
  res.fetch_log = fetcher.log();
  sort_records(res.records);
  return res;
}

int shortest_path_length(const CorpusManifest& manifest, const std::string& home, const std::string& target) {
  const auto h = normalize_url(home), t = normalize_url(target);
  if (!manifest.resolve(h)) throw NoPath("home not in corpus: " + h);
  if (!manifest.resolve(t)) throw NoPath("target not in corpus: " + t);
  if (h == t) return 0;
  std::unordered_map<std::string, int> dist{{h, 0}};
  std::deque<std::string> q{h};
  while (!q.empty()) {
    const auto u = q.front();
    q.pop_front();
    const auto path = manifest.resolve(u);
    if (!path) continue;
    Page p;
    p.url = u;
    p.status = PageStatus::Ok;
    p.html = text::read_file(path->string());
    NavKeywords none;
    for (const auto& l : extract_links(p, none)) {
      if (dist.count(l.target) || !manifest.resolve(l.target)) continue;
      dist[l.target] = dist[u] + 1;
      if (l.target == t) return dist[l.target];
      q.push_back(l.target);
    }
  }
  throw NoPath("no path from " + h + " to " + t);
}

int excess_steps(const CrawlResult& result, int oracle_length) {
  if (result.stop_reason != StopReason::Found || !result.directory_fetch_index)
    throw ValidationError("excess_steps is undefined for a crawl that found no directory");
  return std::max(0, static_cast<int>(*result.directory_fetch_index) - oracle_length);
}

std::vector<Department> read_homepages(const std::string& path) {
  std::vector<Department> out;
  for (const auto& line : text::read_lines(path)) {
    const auto tab = line.find('\t');
    Department d;
    if (tab == std::string::npos) {
      d.homepage = normalize_url(line);
      d.institution = host_of(d.homepage);
    } else {
      d.institution = std::string(text::trim(line.substr(0, tab)));
      d.homepage = normalize_url(text::trim(line.substr(tab + 1)));
    }
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<CrawlResult> crawl_corpus_serial(const std::vector<Department>& depts, PageSource& source,
                                             const CrawlOptions& opts, const Lexicons& lex,
                                             const ForestModel& model) {
  std::vector<CrawlResult> out;
  out.reserve(depts.size());
  for (const auto& d : depts) out.push_back(crawl_department(d.homepage, d.institution, source, opts, lex, model));
  return out;
}

std::vector<CrawlResult> crawl_corpus(const std::vector<Department>& depts, PageSource& source,
                                      const CrawlOptions& opts, const Lexicons& lex, const ForestModel& model,
                                      int jobs) {
  std::vector<CrawlResult> out(depts.size());
  const int threads = jobs > 0 ? jobs : omp_get_max_threads();
  const auto n = static_cast<std::ptrdiff_t>(depts.size());
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[i] = crawl_department(depts[i].homepage, depts[i].institution, source, opts, lex, model);
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return out;
}

}  // namespace census
