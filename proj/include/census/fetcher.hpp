#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace census {

enum class PageStatus { Ok, NotFound, Timeout, NonHtml };

std::string_view to_string(PageStatus s);

struct Page {
  std::string url;
  std::string html;  // empty unless status == Ok
  PageStatus status = PageStatus::NotFound;
  std::optional<std::string> referrer;
  int depth = 0;
};

/// Local fixture corpus: normalized URL -> file under `root`.
///
/// On disk this is a flat JSON object whose keys are URLs and whose values
/// are paths relative to the root. An optional "root" key overrides the
/// default root (the manifest's own directory).
struct CorpusManifest {
  std::map<std::string, std::string> entries;
  std::filesystem::path root;

  static CorpusManifest load(const std::string& path);
  void save(const std::string& path) const;

  /// Normalizes `url`; throws ValidationError when the key already exists.
  void add(std::string_view url, std::string relative_path);
  std::optional<std::filesystem::path> resolve(const std::string& url) const;
};

struct FetchPolicy {
  int max_pages_per_department = 100;
  std::chrono::milliseconds timeout{10000};
  std::chrono::milliseconds min_delay_between_requests_per_host{1000};
  bool same_site_only = true;

  void validate() const;  // throws std::invalid_argument
};

/// Where pages come from. Implementations are safe to share across threads.
class PageSource {
 public:
  virtual ~PageSource() = default;
  virtual Page get(const std::string& url) = 0;
};

class CorpusSource final : public PageSource {
 public:
  explicit CorpusSource(std::shared_ptr<const CorpusManifest> manifest);

  Page get(const std::string& url) override;
  const CorpusManifest& manifest() const { return *manifest_; }

 private:
  std::shared_ptr<const CorpusManifest> manifest_;
  std::mutex mu_;
  std::unordered_map<std::string, std::string> cache_;
};

/// Pages held in memory, keyed by normalized URL.
class MemorySource final : public PageSource {
 public:
  MemorySource() = default;
  explicit MemorySource(std::map<std::string, std::string> pages);
  void add(std::string_view url, std::string html);
  Page get(const std::string& url) override;

 private:
  std::map<std::string, std::string> pages_;
};

/// HTTP(S) source. Honors http_proxy/https_proxy/no_proxy and spaces requests
/// to the same host by the policy delay, process-wide.
class LiveSource final : public PageSource {
 public:
  explicit LiveSource(FetchPolicy policy);
  Page get(const std::string& url) override;

 private:
  FetchPolicy policy_;
};

/// Parses "corpus:<manifest.json>" or "live".
std::unique_ptr<PageSource> make_source(std::string_view spec, const FetchPolicy& policy);

/// Blocks until `host` may be contacted again; shared by every LiveSource.
void throttle_host(const std::string& host, std::chrono::milliseconds min_delay);

/// One department's crawl session: enforces the page budget and site scope,
/// and records the fetch order.
class Fetcher {
 public:
  Fetcher(PageSource& source, FetchPolicy policy, std::string homepage);

  /// Throws BudgetExhausted once max_pages_per_department fetches were made,
  /// OutOfScope for URLs outside the homepage's registered domain.
  Page fetch(const std::string& url, std::optional<std::string> referrer = {}, int depth = 0);

  bool in_scope(const std::string& url) const;
  int fetch_count() const { return static_cast<int>(log_.size()); }
  const std::vector<std::string>& log() const { return log_; }
  const FetchPolicy& policy() const { return policy_; }

 private:
  PageSource& source_;
  FetchPolicy policy_;
  std::string homepage_;
  std::string site_domain_;
  std::vector<std::string> log_;
};

/// Decodes a response body to UTF-8 given the declared charset (may be empty).
std::string decode_body(std::string_view body, std::string_view charset);

}  // namespace census
