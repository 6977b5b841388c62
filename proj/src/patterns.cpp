#include "census/patterns.hpp"

#include "census/text.hpp"

namespace census {
namespace {

bool local_char(char c) {
  return text::is_alpha(c) || text::is_digit(c) || c == '.' || c == '_' || c == '%' || c == '+' ||
         c == '-';
}
bool domain_char(char c) { return text::is_alpha(c) || text::is_digit(c) || c == '.' || c == '-'; }

}  // namespace

std::vector<std::string> find_emails(std::string_view t) {
  std::vector<std::string> out;
  std::size_t search = 0;
  while (true) {
    const auto at = t.find('@', search);
    if (at == std::string_view::npos) break;
    search = at + 1;
    std::size_t b = at;
    while (b > 0 && local_char(t[b - 1])) --b;
    while (b < at && (t[b] == '.' || t[b] == '-')) ++b;
    std::size_t e = at + 1;
    while (e < t.size() && domain_char(t[e])) ++e;
    while (e > at + 1 && (t[e - 1] == '.' || t[e - 1] == '-')) --e;
    if (b == at || e == at + 1) continue;
    const auto domain = t.substr(at + 1, e - at - 1);
    const auto dot = domain.rfind('.');
    if (dot == std::string_view::npos || dot == 0) continue;
    const auto tld = domain.substr(dot + 1);
    if (tld.size() < 2) continue;
    bool alpha_tld = true;
    for (char c : tld) alpha_tld = alpha_tld && text::is_alpha(c);
    if (!alpha_tld || domain.find("..") != std::string_view::npos) continue;
    out.emplace_back(t.substr(b, e - b));
    search = e;
  }
  return out;
}

std::vector<std::string> find_phones(std::string_view t) {
  std::vector<std::string> out;
  auto sep = [](char c) { return c == '-' || c == '.' || c == '(' || c == ')' || c == ' '; };
  std::size_t i = 0;
  while (i < t.size()) {
    const char c = t[i];
    const bool starts = text::is_digit(c) || c == '(' || c == '+';
    const bool boundary = i == 0 || !(text::is_alpha(t[i - 1]) || text::is_digit(t[i - 1]));
    if (!starts || !boundary) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < t.size() && (text::is_digit(t[j]) || sep(t[j]))) ++j;
    std::size_t end = j;
    while (end > i && !text::is_digit(t[end - 1])) --end;
    int digits = 0;
    for (std::size_t k = i; k < end; ++k) digits += text::is_digit(t[k]) ? 1 : 0;
    const bool glued = j < t.size() && text::is_alpha(t[j]) && end == j;
    if (digits >= 7 && digits <= 15 && !glued) out.emplace_back(t.substr(i, end - i));
    i = j;
  }
  return out;
}

int count_title_terms(std::string_view t, const TitleWhitelist& titles) {
  const auto lower = text::to_lower(t);
  int n = 0;
  std::size_t i = 0;
  while (i < lower.size()) {
    if (i > 0 && text::is_alpha(lower[i - 1])) {
      ++i;
      continue;
    }
    std::size_t best = 0;
    for (const auto& p : titles.phrases())
      if (p.size() > best && lower.compare(i, p.size(), p) == 0) best = p.size();
    if (best) {
      ++n;
      i += best;
    } else {
      ++i;
    }
  }
  return n;
}

bool is_capitalized(std::string_view token) { return !token.empty() && text::is_upper(token.front()); }

}  // namespace census
