// Kept in its own translation unit: httplib is heavy and pulls in OpenSSL.
#ifdef CENSUS_WITH_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

#include <cstdlib>

#include "census/fetcher.hpp"
#include "census/text.hpp"
#include "census/url.hpp"

namespace census {
namespace {

std::string env(const char* upper, const char* lower) {
  if (const char* v = std::getenv(lower); v && *v) return v;
  if (const char* v = std::getenv(upper); v && *v) return v;
  return {};
}

bool bypasses_proxy(const std::string& host) {
  const auto no_proxy = env("NO_PROXY", "no_proxy");
  for (auto entry : text::split(no_proxy, ',')) {
    auto e = text::to_lower(text::trim(entry));
    if (e.empty()) continue;
    if (e == "*") return true;
    if (!e.empty() && e.front() == '.') e.erase(0, 1);
    if (host == e || (host.size() > e.size() && host.ends_with("." + e))) return true;
  }
  return false;
}

}  // namespace

LiveSource::LiveSource(FetchPolicy policy) : policy_(policy) { policy_.validate(); }

Page LiveSource::get(const std::string& url) {
  Page page;
  page.url = url;
  const auto u = parse_absolute(url);
  if (!u) return page;

  std::string origin = u->scheme + "://" + u->host;
  if (u->port >= 0) origin += ":" + std::to_string(u->port);
#ifndef CENSUS_WITH_OPENSSL
  if (u->scheme == "https") return page;
#endif

  throttle_host(u->host, policy_.min_delay_between_requests_per_host);

  httplib::Client client(origin);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(policy_.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(policy_.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_follow_location(true);

  if (!bypasses_proxy(u->host)) {
    const auto proxy = u->scheme == "https" ? env("HTTPS_PROXY", "https_proxy") : env("HTTP_PROXY", "http_proxy");
    if (auto p = parse_absolute(proxy)) client.set_proxy(p->host, p->port >= 0 ? p->port : 80);
  }

  std::string target = u->path;
  if (u->has_query) target += "?" + u->query;
  auto res = client.Get(target);
  if (!res) {
    const auto err = res.error();
    if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read)
      page.status = PageStatus::Timeout;
    return page;
  }
  if (res->status != 200) return page;

  const auto content_type = text::to_lower(res->get_header_value("Content-Type"));
  if (!content_type.empty() && content_type.find("html") == std::string::npos) {
    page.status = PageStatus::NonHtml;
    return page;
  }
  std::string charset;
  if (auto pos = content_type.find("charset="); pos != std::string::npos)
    charset = text::split(content_type.substr(pos + 8), ';').front();
  page.html = decode_body(res->body, charset);
  page.status = PageStatus::Ok;
  return page;
}

}  // namespace census
