#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace census {

/// An absolute http(s) URL split into components. Only the pieces the
/// crawler needs; userinfo is dropped.
struct Url {
  std::string scheme;
  std::string host;
  int port = -1;
  std::string path;
  std::string query;  // without '?'
  bool has_query = false;

  std::string str() const;
};

/// Resolves `raw` against `base`, then canonicalizes: lowercase scheme and
/// host, no fragment, no default port, duplicate slashes collapsed, dot
/// segments removed, trailing slash dropped unless the path is the root.
/// Throws MalformedUrl.
std::string normalize_url(std::string_view raw, std::string_view base);
std::string normalize_url(std::string_view raw);

/// Parses an already-absolute URL without resolution. nullopt on failure.
std::optional<Url> parse_absolute(std::string_view raw);

std::string host_of(std::string_view url);

/// Last two labels of the host, three when the second-level label is a
/// known public suffix (ac.uk, edu.au, ...). IP addresses are returned whole.
std::string registered_domain(std::string_view host);

bool same_registered_domain(std::string_view url_a, std::string_view url_b);

}  // namespace census
