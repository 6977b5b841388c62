#include "census/fetcher.hpp"

#include <nlohmann/json.hpp>
#include <stdexcept>
#include <thread>

#include "census/errors.hpp"
#include "census/text.hpp"
#include "census/url.hpp"

namespace census {

std::string_view to_string(PageStatus s) {
  switch (s) {
    case PageStatus::Ok: return "Ok";
    case PageStatus::NotFound: return "NotFound";
    case PageStatus::Timeout: return "Timeout";
    case PageStatus::NonHtml: return "NonHtml";
  }
  return "NotFound";
}

CorpusManifest CorpusManifest::load(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text::read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError("manifest " + path + ": " + e.what());
  }
  if (!j.is_object()) throw FormatError("manifest " + path + ": expected a JSON object");

  CorpusManifest m;
  m.root = std::filesystem::path(path).parent_path();
  if (auto it = j.find("root"); it != j.end()) {
    if (!it->is_string()) throw FormatError("manifest root must be a string");
    std::filesystem::path r = it->get<std::string>();
    m.root = r.is_absolute() ? r : m.root / r;
  }
  for (const auto& [key, value] : j.items()) {
    if (key == "root") continue;
    if (!value.is_string()) throw FormatError("manifest value for '" + key + "' must be a path");
    try {
      m.add(key, value.get<std::string>());
    } catch (const MalformedUrl& e) {
      throw FormatError("manifest key '" + key + "': " + e.what());
    }
  }
  for (const auto& [url, rel] : m.entries) {
    if (!std::filesystem::exists(m.root / rel))
      throw FormatError("manifest entry " + url + " -> missing file " + rel);
  }
  return m;
}

void CorpusManifest::save(const std::string& path) const {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [url, rel] : entries) j[url] = rel;
  text::write_file(path, j.dump(1) + "\n");
}

void CorpusManifest::add(std::string_view url, std::string relative_path) {
  auto key = normalize_url(url);
  if (!entries.emplace(key, std::move(relative_path)).second)
    throw ValidationError("duplicate manifest key after normalization: " + key);
}

std::optional<std::filesystem::path> CorpusManifest::resolve(const std::string& url) const {
  auto it = entries.find(url);
  if (it == entries.end()) return std::nullopt;
  return root / it->second;
}

void FetchPolicy::validate() const {
  if (max_pages_per_department < 1) throw std::invalid_argument("max_pages_per_department must be >= 1");
  if (timeout.count() < 0 || min_delay_between_requests_per_host.count() < 0)
    throw std::invalid_argument("delays must be non-negative");
}

CorpusSource::CorpusSource(std::shared_ptr<const CorpusManifest> manifest)
    : manifest_(std::move(manifest)) {}

static bool looks_like_html_path(const std::filesystem::path& p) {
  const auto ext = text::to_lower(p.extension().string());
  return ext.empty() || ext == ".html" || ext == ".htm" || ext == ".php" || ext == ".asp" ||
         ext == ".aspx" || ext == ".jsp" || ext == ".shtml";
}

Page CorpusSource::get(const std::string& url) {
  Page page;
  page.url = url;
  const auto file = manifest_->resolve(url);
  if (!file) return page;
  if (!looks_like_html_path(*file)) {
    page.status = PageStatus::NonHtml;
    return page;
  }
  {
    std::lock_guard lock(mu_);
    if (auto it = cache_.find(url); it != cache_.end()) {
      page.html = it->second;
      page.status = PageStatus::Ok;
      return page;
    }
  }
  std::string body;
  try {
    body = text::sanitize_utf8(text::read_file(file->string()));
  } catch (const std::runtime_error&) {
    return page;
  }
  {
    std::lock_guard lock(mu_);
    cache_.emplace(url, body);
  }
  page.html = std::move(body);
  page.status = PageStatus::Ok;
  return page;
}

MemorySource::MemorySource(std::map<std::string, std::string> pages) {
  for (auto& [u, h] : pages) add(u, std::move(h));
}

void MemorySource::add(std::string_view url, std::string html) { pages_[normalize_url(url)] = std::move(html); }

Page MemorySource::get(const std::string& url) {
  Page page;
  page.url = url;
  const auto it = pages_.find(url);
  if (it == pages_.end()) return page;
  page.html = it->second;
  page.status = PageStatus::Ok;
  return page;
}

std::unique_ptr<PageSource> make_source(std::string_view spec, const FetchPolicy& policy) {
  if (spec == "live") return std::make_unique<LiveSource>(policy);
  if (spec.substr(0, 7) == "corpus:") {
    auto manifest = std::make_shared<const CorpusManifest>(CorpusManifest::load(std::string(spec.substr(7))));
    return std::make_unique<CorpusSource>(std::move(manifest));
  }
  throw std::invalid_argument("source must be 'corpus:<manifest>' or 'live', got '" + std::string(spec) + "'");
}

void throttle_host(const std::string& host, std::chrono::milliseconds min_delay) {
  using Clock = std::chrono::steady_clock;
  static std::mutex mu;
  static std::unordered_map<std::string, Clock::time_point> next_slot;
  Clock::time_point slot;
  {
    std::lock_guard lock(mu);
    const auto now = Clock::now();
    auto& next = next_slot[host];
    slot = std::max(now, next);
    next = slot + min_delay;
  }
  std::this_thread::sleep_until(slot);
}

std::string decode_body(std::string_view body, std::string_view charset) {
  const auto cs = text::to_lower(text::trim(charset, " \t\"'"));
  if (cs == "iso-8859-1" || cs == "latin1" || cs == "latin-1" || cs == "windows-1252" ||
      cs == "cp1252" || cs == "us-ascii")
    return text::latin1_to_utf8(body);
  return text::sanitize_utf8(body);
}

Fetcher::Fetcher(PageSource& source, FetchPolicy policy, std::string homepage)
    : source_(source), policy_(policy), homepage_(std::move(homepage)) {
  policy_.validate();
  site_domain_ = registered_domain(host_of(homepage_));
}

bool Fetcher::in_scope(const std::string& url) const {
  if (!policy_.same_site_only) return true;
  return registered_domain(host_of(url)) == site_domain_;
}

Page Fetcher::fetch(const std::string& url, std::optional<std::string> referrer, int depth) {
  if (!in_scope(url)) throw OutOfScope(url + " is outside " + site_domain_);
  if (fetch_count() >= policy_.max_pages_per_department)
    throw BudgetExhausted("page budget of " + std::to_string(policy_.max_pages_per_department) +
                          " exhausted before " + url);
  log_.push_back(url);
  Page page = source_.get(url);
  page.url = url;
  page.referrer = std::move(referrer);
  page.depth = depth;
  if (page.status != PageStatus::Ok) page.html.clear();
  return page;
}

}  // namespace census
