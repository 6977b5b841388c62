#include "census/url.hpp"

#include <algorithm>
#include <array>

#include "census/errors.hpp"
#include "census/text.hpp"

namespace census {
namespace {

struct Reference {
  std::optional<std::string> scheme;
  std::optional<std::string> authority;
  std::string path;
  std::optional<std::string> query;
};

bool valid_scheme(std::string_view s) {
  if (s.empty() || !text::is_alpha(s[0])) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return text::is_alpha(c) || text::is_digit(c) || c == '+' || c == '-' || c == '.';
  });
}

Reference split_reference(std::string_view raw) {
  Reference r;
  if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);

  const auto delim = raw.find_first_of(":/?");
  if (delim != std::string_view::npos && raw[delim] == ':') {
    auto scheme = raw.substr(0, delim);
    if (!valid_scheme(scheme)) throw MalformedUrl("invalid scheme in '" + std::string(raw) + "'");
    r.scheme = text::to_lower(scheme);
    raw.remove_prefix(delim + 1);
  }
  if (raw.substr(0, 2) == "//") {
    raw.remove_prefix(2);
    const auto end = raw.find_first_of("/?");
    r.authority = std::string(raw.substr(0, end));
    raw = end == std::string_view::npos ? std::string_view{} : raw.substr(end);
  }
  if (auto q = raw.find('?'); q != std::string_view::npos) {
    r.query = std::string(raw.substr(q + 1));
    raw = raw.substr(0, q);
  }
  r.path = std::string(raw);
  return r;
}

std::string remove_dot_segments(std::string_view in) {
  std::vector<std::string> out;
  const bool absolute = !in.empty() && in.front() == '/';
  auto segs = text::split(in, '/');
  if (absolute) segs.erase(segs.begin());
  bool trailing = false;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const auto& s = segs[i];
    const bool last = i + 1 == segs.size();
    if (s == ".") {
      trailing = last;
    } else if (s == "..") {
      if (!out.empty()) out.pop_back();
      trailing = last;
    } else {
      out.push_back(s);
      trailing = false;
    }
  }
  std::string path = absolute ? "/" : "";
  path += text::join(out, "/");
  if (trailing && !path.empty() && path.back() != '/') path.push_back('/');
  return path;
}

std::string merge_paths(const Url& base, std::string_view rel) {
  if (!base.host.empty() && base.path.empty()) return "/" + std::string(rel);
  const auto slash = base.path.rfind('/');
  if (slash == std::string::npos) return std::string(rel);
  return base.path.substr(0, slash + 1) + std::string(rel);
}

void parse_authority(std::string_view auth, Url& u) {
  if (auto at = auth.rfind('@'); at != std::string_view::npos) auth.remove_prefix(at + 1);
  std::string_view host = auth;
  std::string_view port;
  if (!auth.empty() && auth.front() == '[') {
    const auto close = auth.find(']');
    if (close == std::string_view::npos) throw MalformedUrl("unterminated IPv6 host");
    host = auth.substr(0, close + 1);
    auto rest = auth.substr(close + 1);
    if (!rest.empty()) {
      if (rest.front() != ':') throw MalformedUrl("bad authority");
      port = rest.substr(1);
    }
  } else if (auto colon = auth.rfind(':'); colon != std::string_view::npos) {
    host = auth.substr(0, colon);
    port = auth.substr(colon + 1);
  }
  u.host = text::to_lower(host);
  while (!u.host.empty() && u.host.back() == '.') u.host.pop_back();
  if (u.host.empty()) throw MalformedUrl("empty host");
  if (u.host.front() != '[') {
    for (char c : u.host) {
      if (!(text::is_alpha(c) || text::is_digit(c) || c == '.' || c == '-' || c == '_'))
        throw MalformedUrl("invalid character in host '" + u.host + "'");
    }
  }
  if (!port.empty()) {
    if (port.size() > 5 || !std::all_of(port.begin(), port.end(), text::is_digit))
      throw MalformedUrl("invalid port");
    u.port = std::stoi(std::string(port));
  }
}

std::string canonical_path(std::string_view p) {
  std::string out;
  out.reserve(p.size() + 1);
  for (char c : p) {
    if (c == '/' && !out.empty() && out.back() == '/') continue;
    if (c == ' ') {
      out += "%20";
      continue;
    }
    out.push_back(c);
  }
  if (out.empty() || out.front() != '/') out.insert(out.begin(), '/');
  if (out.size() > 1 && out.back() == '/') out.pop_back();
  return out;
}

Url from_reference(const Reference& r) {
  Url u;
  u.scheme = *r.scheme;
  if (!r.authority) throw MalformedUrl("missing host");
  parse_authority(*r.authority, u);
  u.path = remove_dot_segments(r.path);
  if (r.query) {
    u.has_query = true;
    u.query = *r.query;
  }
  return u;
}

Url finish(Url u) {
  if (u.scheme != "http" && u.scheme != "https") throw MalformedUrl("unsupported scheme '" + u.scheme + "'");
  if ((u.scheme == "http" && u.port == 80) || (u.scheme == "https" && u.port == 443)) u.port = -1;
  u.path = canonical_path(u.path);
  for (auto& c : u.query)
    if (c == ' ') c = '+';
  return u;
}

}  // namespace

std::string Url::str() const {
  std::string out = scheme + "://" + host;
  if (port >= 0) out += ":" + std::to_string(port);
  out += path;
  if (has_query) out += "?" + query;
  return out;
}

std::optional<Url> parse_absolute(std::string_view raw) {
  try {
    auto r = split_reference(text::trim(raw));
    if (!r.scheme) return std::nullopt;
    return finish(from_reference(r));
  } catch (const MalformedUrl&) {
    return std::nullopt;
  }
}

std::string normalize_url(std::string_view raw_in, std::string_view base_in) {
  const auto raw = text::trim(raw_in);
  if (raw.empty()) throw MalformedUrl("empty URL");
  const auto r = split_reference(raw);

  Url target;
  if (r.scheme) {
    target = from_reference(r);
  } else {
    if (base_in.empty()) throw MalformedUrl("relative URL without base: '" + std::string(raw) + "'");
    const auto base_ref = split_reference(text::trim(base_in));
    if (!base_ref.scheme) throw MalformedUrl("base URL is not absolute");
    const Url base = from_reference(base_ref);
    target.scheme = base.scheme;
    if (r.authority) {
      Url tmp;
      parse_authority(*r.authority, tmp);
      target.host = tmp.host;
      target.port = tmp.port;
      target.path = remove_dot_segments(r.path);
      target.has_query = r.query.has_value();
      target.query = r.query.value_or("");
    } else {
      target.host = base.host;
      target.port = base.port;
      if (r.path.empty()) {
        target.path = base.path;
        target.has_query = r.query ? true : base.has_query;
        target.query = r.query ? *r.query : base.query;
      } else {
        target.path = r.path.front() == '/' ? remove_dot_segments(r.path)
                                            : remove_dot_segments(merge_paths(base, r.path));
        target.has_query = r.query.has_value();
        target.query = r.query.value_or("");
      }
    }
  }
  return finish(std::move(target)).str();
}

std::string normalize_url(std::string_view raw) { return normalize_url(raw, {}); }

std::string host_of(std::string_view url) {
  if (auto u = parse_absolute(url)) return u->host;
  return {};
}

std::string registered_domain(std::string_view host_in) {
  std::string host = text::to_lower(host_in);
  if (host.empty() || host.front() == '[') return host;
  if (std::all_of(host.begin(), host.end(), [](char c) { return text::is_digit(c) || c == '.'; }))
    return host;
  static constexpr std::array<std::string_view, 34> kSecondLevel = {
      "ac.uk", "co.uk", "org.uk", "gov.uk", "edu.au", "com.au", "org.au", "ac.nz", "co.nz",
      "ac.jp", "co.jp", "edu.cn", "com.cn", "ac.cn", "edu.hk", "edu.sg", "ac.kr", "ac.in",
      "edu.in", "ac.il", "edu.tw", "com.br", "edu.br", "ac.za", "edu.mx", "edu.ar", "edu.tr",
      "qc.ca", "on.ca", "bc.ca", "ab.ca", "ac.at", "edu.pl", "ac.be"};
  const auto labels = text::split(host, '.');
  if (labels.size() <= 2) return host;
  const auto n = labels.size();
  const std::string last_two = labels[n - 2] + "." + labels[n - 1];
  const bool second_level =
      std::find(kSecondLevel.begin(), kSecondLevel.end(), last_two) != kSecondLevel.end();
  if (second_level) return labels[n - 3] + "." + last_two;
  return last_two;
}

bool same_registered_domain(std::string_view a, std::string_view b) {
  const auto ha = host_of(a);
  const auto hb = host_of(b);
  return !ha.empty() && registered_domain(ha) == registered_domain(hb);
}

}  // namespace census
