#include "census/extractor.hpp"

#include <algorithm>
#include <cstdint>
#include <array>
#include <map>
#include <set>
#include <unordered_set>

#include "census/errors.hpp"
#include "census/filter.hpp"
#include "census/patterns.hpp"
#include "census/text.hpp"
#include "census/url.hpp"

namespace census {

std::string_view to_string(SegmentKind k) {
  switch (k) {
    case SegmentKind::Table:
      return "table";
    case SegmentKind::Div:
      return "div";
    case SegmentKind::List:
      return "list";
    case SegmentKind::Article:
      return "article";
  }
  return "?";
}

namespace {

// ---- names ----

const std::unordered_set<std::string>& honorifics() {
  static const std::unordered_set<std::string> s = {"dr", "prof", "mr", "mrs", "ms", "mx", "miss", "sir", "dame"};
  return s;
}

const std::unordered_set<std::string>& suffixes() {
  static const std::unordered_set<std::string> s = {"jr", "sr", "ii", "iii", "iv", "phd", "md", "mba", "msc", "dphil"};
  return s;
}

// Words that end a name run. Title-list words are added per lexicon set.
const std::vector<std::string>& common_words() {
  static const std::vector<std::string> w = {
      "of", "and", "the", "for", "in", "at", "to", "on", "with", "a", "an", "by", "from",
      "department", "school", "college", "university", "institute", "division", "faculty", "directory",
      "people", "computer", "science", "sciences", "engineering", "electrical", "mathematics",
      "information", "systems", "data", "email", "e-mail", "mail", "phone", "tel", "telephone", "fax",
      "office", "room", "building", "research", "interests", "interest", "areas", "area", "home",
      "homepage", "website", "web", "site", "contact", "lab", "laboratory", "center", "centre", "group",
      "news", "events", "about", "program", "programs", "graduate", "undergraduate", "courses",
      "teaching", "publications", "profile", "bio", "biography", "more", "view", "read", "page",
      "next", "previous", "prev", "first", "last", "tenure-track", "tenured", "emeritus", "emerita",
      "visiting", "adjunct", "affiliated", "courtesy", "associate", "assistant", "professor",
      "professors", "lecturer", "lecturers", "staff", "chair", "director", "dean"};
  return w;
}

// Words that end a name run unless the lexicon knows them as names.
const std::unordered_set<std::string>& stop_words() {
  static const std::unordered_set<std::string> s = [] {
    std::unordered_set<std::string> s;
    auto add = [&](std::string_view phrase) {
      for (auto& w : text::split_whitespace(phrase)) s.insert(text::to_lower(w));
    };
    for (const auto& w : common_words()) add(w);
    const auto& b = Lexicons::bundled();
    for (const auto& p : b.titles.phrases()) add(p);
    for (const auto& p : b.blacklist.phrases()) add(p);
    for (const auto& p : b.computing.phrases()) add(p);
    return s;
  }();
  return s;
}

struct Tok {
  std::size_t begin, end;  // raw span
  std::string word;        // punctuation-trimmed
  bool newline_before = false;
  bool break_after = false;
  bool comma_after = false;
};

std::vector<Tok> tokenize(std::string_view s) {
  std::vector<Tok> out;
  std::size_t i = 0;
  bool nl = false;
  while (i < s.size()) {
    if (text::is_space(s[i])) {
      nl = nl || s[i] == '\n';
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < s.size() && !text::is_space(s[j])) ++j;
    Tok t{i, j, {}, nl, false, false};
    std::string_view raw = s.substr(i, j - i);
    const char last = raw.back();
    t.comma_after = last == ',';
    t.break_after = std::string_view(",;:|!?)]").find(last) != std::string_view::npos;
    auto w = text::trim(raw, "\"'()[]{}<>,;:!?|*");
    // keep the period of an initial ("G."), drop it otherwise
    if (w.size() > 2 && w.back() == '.') w.remove_suffix(1);
    t.word = std::string(w);
    out.push_back(std::move(t));
    nl = false;
    i = j;
  }
  return out;
}

std::string plain(std::string_view w) {
  std::string r;
  for (char c : w)
    if (c != '.') r += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return r;
}

// First code point of a non-ASCII token is a letter (Latin-1 and Latin
// Extended letters, or any script above Greek outside punctuation blocks).
bool starts_with_letter_cp(std::string_view w) {
  const auto c0 = static_cast<unsigned char>(w[0]);
  std::uint32_t cp = 0;
  if ((c0 & 0xE0) == 0xC0 && w.size() >= 2) cp = ((c0 & 0x1Fu) << 6) | (static_cast<unsigned char>(w[1]) & 0x3Fu);
  else if ((c0 & 0xF0) == 0xE0 && w.size() >= 3)
    cp = ((c0 & 0x0Fu) << 12) | ((static_cast<unsigned char>(w[1]) & 0x3Fu) << 6) |
         (static_cast<unsigned char>(w[2]) & 0x3Fu);
  else if ((c0 & 0xF8) == 0xF0) return true;
  else return false;
  if (cp >= 0xC0 && cp <= 0x24F) return cp != 0xD7 && cp != 0xF7;
  if (cp < 0x370) return false;
  return !(cp >= 0x2000 && cp <= 0x2BFF) && !(cp >= 0x3000 && cp <= 0x303F);
}

bool name_capable(const std::string& w, const NameLexicon& lex) {
  if (w.empty()) return false;
  const auto c0 = static_cast<unsigned char>(w[0]);
  if (!(text::is_upper(w[0]) || (c0 >= 0xC0 && starts_with_letter_cp(w)))) return false;
  bool lower = false;
  int letters = 0;
  for (char c : w) {
    const auto u = static_cast<unsigned char>(c);
    if (text::is_alpha(c) || u >= 0x80) {
      ++letters;
      lower = lower || (c >= 'a' && c <= 'z') || u >= 0x80;
    } else if (c != '-' && c != '\'' && c != '.') {
      return false;
    }
  }
  const bool initial = w.size() == 2 && w[1] == '.';
  if (!lower && letters > 1 && !initial) return false;  // acronyms
  const auto p = plain(w);
  if (honorifics().count(p) || suffixes().count(p)) return false;
  return initial || !stop_words().count(p) || lex.names.count(p);
}

std::optional<NameMatch> make_match(const std::vector<Tok>& toks, const std::vector<std::size_t>& order,
                                    const NameLexicon& lex, std::size_t begin, std::size_t end) {
  bool known = false;
  for (auto i : order) known = known || lex.contains(toks[i].word);
  if (!known) return std::nullopt;
  NameMatch m;
  std::vector<std::string> words;
  for (auto i : order) words.push_back(toks[i].word);
  m.full = text::join(words, " ");
  m.first = words.front();
  m.last = words.back();
  m.begin = begin;
  m.end = end;
  return m;
}

}  // namespace

std::optional<NameMatch> find_name(std::string_view s, const NameLexicon& lex) {
  const auto toks = tokenize(s);
  // Split into runs of name-capable tokens.
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  std::size_t i = 0;
  while (i < toks.size()) {
    if (!name_capable(toks[i].word, lex)) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < toks.size() && !toks[j].newline_before && !toks[j - 1].break_after &&
           name_capable(toks[j].word, lex))
      ++j;
    runs.emplace_back(i, j);
    i = j;
  }
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const auto [b, e] = runs[r];
    const std::size_t len = e - b;
    if (len == 1 && toks[b].comma_after && r + 1 < runs.size()) {
      const auto [b2, e2] = runs[r + 1];
      if (b2 == e && !toks[b2].newline_before && e2 - b2 <= 3) {
        std::vector<std::size_t> order;
        for (auto k = b2; k < e2; ++k) order.push_back(k);
        order.push_back(b);
        if (auto m = make_match(toks, order, lex, toks[b].begin, toks[e2 - 1].end)) return m;
        continue;
      }
    }
    if (len < 2) continue;
    // Longer runs: earliest window of up to four tokens holding a known name.
    for (std::size_t w = b; w + 1 < e; ++w) {
      const std::size_t we = std::min(e, w + 4);
      std::vector<std::size_t> order;
      for (auto k = w; k < we; ++k) order.push_back(k);
      auto end = toks[we - 1].end;
      if (toks[we - 1].comma_after) --end;
      if (auto m = make_match(toks, order, lex, toks[w].begin, end)) return m;
      if (len <= 4) break;
    }
  }
  return std::nullopt;
}

namespace {

// ---- titles ----

struct Span {
  std::size_t b, e;
};

std::vector<Span> clauses(std::string_view s) {
  static const std::array<std::string_view, 8> seps = {"\n", "|", ";", "\xe2\x80\xa2", "\xc2\xb7",
                                                       "\xe2\x80\x93", "\xe2\x80\x94", "\t"};
  std::vector<Span> out;
  std::size_t start = 0, i = 0;
  while (i < s.size()) {
    std::size_t n = 0;
    for (auto sep : seps)
      if (s.compare(i, sep.size(), sep) == 0) {
        n = sep.size();
        break;
      }
    if (n) {
      out.push_back({start, i});
      i += n;
      start = i;
    } else {
      ++i;
    }
  }
  out.push_back({start, s.size()});
  return out;
}

// Start offset and length of the longest word-initial phrase in s, if any.
std::optional<std::pair<std::size_t, std::size_t>> longest_phrase(std::string_view s, const TitleWhitelist& wl) {
  const auto lower = text::to_lower(s);
  std::optional<std::pair<std::size_t, std::size_t>> best;
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (i > 0 && text::is_alpha(lower[i - 1])) continue;
    for (const auto& p : wl.phrases())
      if (lower.compare(i, p.size(), p) == 0 && (!best || p.size() > best->second)) best = {{i, p.size()}};
  }
  return best;
}

std::string clean_title(std::string_view c, std::size_t match_at) {
  auto t = std::string(text::trim(c, " \t\r,.:;-()[]"));
  if (t.size() <= 120) return text::collapse_whitespace(t);
  // long prose: phrase through the end of its sentence part
  auto tail = c.substr(match_at);
  const auto stop = tail.find_first_of(".,;");
  return text::collapse_whitespace(tail.substr(0, std::min<std::size_t>(stop, 120)));
}

}  // namespace

std::optional<std::string> find_title(std::string_view s, const TitleWhitelist& wl, const NameMatch* name) {
  const auto cs = clauses(s);
  std::vector<Span> after, before;
  if (!name) {
    after = cs;
  } else {
    for (const auto& c : cs) {
      if (c.e <= name->begin) {
        before.push_back(c);
      } else if (c.b >= name->end) {
        after.push_back(c);
      } else {
        if (name->end < c.e) after.push_back({name->end, c.e});
        if (c.b < name->begin) before.push_back({c.b, name->begin});
      }
    }
    std::sort(after.begin(), after.end(), [](Span a, Span b) { return a.b < b.b; });
    std::reverse(before.begin(), before.end());
  }
  for (const auto* group : {&after, &before}) {
    for (const auto& c : *group) {
      const auto clause = s.substr(c.b, c.e - c.b);
      if (const auto m = longest_phrase(clause, wl)) {
        auto t = clean_title(clause, m->first);
        if (!t.empty()) return t;
      }
    }
  }
  return std::nullopt;
}

namespace {

// ---- emails ----

bool valid_email(std::string_view e) {
  return std::count(e.begin(), e.end(), '@') == 1 && !find_emails(e).empty() && find_emails(e).front() == e;
}

std::string deobfuscate(std::string_view s) {
  static const std::array<std::pair<std::string_view, char>, 8> marks = {{{"[at]", '@'},
                                                                          {"(at)", '@'},
                                                                          {"{at}", '@'},
                                                                          {"[dot]", '.'},
                                                                          {"(dot)", '.'},
                                                                          {"{dot}", '.'},
                                                                          {" at ", '@'},
                                                                          {" dot ", '.'}}};
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    bool hit = false;
    for (const auto& [m, c] : marks) {
      if (i + m.size() <= s.size() && text::starts_with_ci(s.substr(i), m)) {
        while (!out.empty() && out.back() == ' ') out.pop_back();
        out += c;
        i += m.size();
        while (i < s.size() && s[i] == ' ') ++i;
        hit = true;
        break;
      }
    }
    if (!hit) out += s[i++];
  }
  return out;
}

std::optional<std::string> bare_local(std::string_view s, std::string_view page_url) {
  const auto lower = text::to_lower(s);
  for (std::string_view label : {"e-mail", "email", "mail"}) {
    std::size_t at = 0;
    while ((at = lower.find(label, at)) != std::string::npos) {
      const bool word_start = at == 0 || !text::is_alpha(lower[at - 1]);
      std::size_t i = at + label.size();
      at = i;
      if (!word_start) continue;
      while (i < s.size() && s[i] == ' ') ++i;
      if (i >= s.size() || s[i] != ':') continue;
      ++i;
      while (i < s.size() && s[i] == ' ') ++i;
      std::size_t j = i;
      while (j < s.size() && (text::is_alpha(s[j]) || text::is_digit(s[j]) || s[j] == '.' || s[j] == '_' || s[j] == '-'))
        ++j;
      auto local = text::trim(s.substr(i, j - i), ".-");
      if (local.empty() || (j < s.size() && (s[j] == '@' || s[j] == '['))) continue;
      const auto host = host_of(page_url);
      if (host.empty()) return std::nullopt;
      auto e = std::string(local) + "@" + registered_domain(host);
      if (valid_email(e)) return e;
    }
  }
  return std::nullopt;
}

std::optional<std::string> email_from(std::string_view visible, const std::vector<std::string>& mailtos,
                                      std::string_view page_url) {
  for (const auto& m : mailtos) {
    auto addr = m.substr(7);
    addr = addr.substr(0, addr.find('?'));
    if (valid_email(addr)) return addr;
  }
  if (auto e = find_emails(visible); !e.empty()) return e.front();
  if (auto e = find_emails(deobfuscate(visible)); !e.empty() && valid_email(e.front())) return e.front();
  return bare_local(visible, page_url);
}

std::vector<std::string> mailtos_in(const html::Node& n) {
  std::vector<std::string> out;
  std::vector<const html::Node*> stack{&n};
  std::vector<const html::Node*> anchors;
  while (!stack.empty()) {
    const auto* x = stack.back();
    stack.pop_back();
    if (x->is("a")) anchors.push_back(x);
    for (auto it = x->children.rbegin(); it != x->children.rend(); ++it) stack.push_back(it->get());
  }
  for (const auto* a : anchors)
    if (const auto* h = a->attr("href"); h && text::starts_with_ci(*h, "mailto:"))
      out.push_back(html::decode_entities(std::string(text::trim(*h))));
  return out;
}

void collect(const html::Node& n, std::string_view tag, std::vector<const html::Node*>& out) {
  if (n.is(tag)) out.push_back(&n);
  for (const auto& c : n.children) collect(*c, tag, out);
}

std::optional<std::string> homepage_in(const html::Node& n, const NameMatch& name, std::string_view page_url) {
  std::vector<const html::Node*> anchors;
  collect(n, "a", anchors);
  for (const auto* a : anchors) {
    const auto* h = a->attr("href");
    if (!h) continue;
    const auto href = text::trim(*h);
    if (href.empty() || text::starts_with_ci(href, "mailto:") || text::starts_with_ci(href, "javascript:") ||
        text::starts_with_ci(href, "tel:"))
      continue;
    const auto t = html::inline_text(*a);
    const bool wraps = text::contains_ci(t, name.full) ||
                       (text::contains_ci(t, name.first) && text::contains_ci(t, name.last));
    if (!wraps) continue;
    try {
      return normalize_url(href, page_url);
    } catch (const MalformedUrl&) {
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::string> find_email(std::string_view segment_html, std::string_view page_url) {
  const auto doc = html::Document::parse(segment_html);
  return email_from(html::visible_text(doc.root()), mailtos_in(doc.root()), page_url);
}

std::optional<std::string> find_homepage(std::string_view segment_html, std::string_view name,
                                         std::string_view page_url) {
  const auto doc = html::Document::parse(segment_html);
  NameMatch m;
  m.full = std::string(name);
  const auto words = text::split_whitespace(name);
  if (words.empty()) return std::nullopt;
  m.first = words.front();
  m.last = words.back();
  return homepage_in(doc.root(), m, page_url);
}

std::vector<std::string> detect_pagination(const Page& page) {
  std::vector<std::string> out;
  if (page.status != PageStatus::Ok) return out;
  const auto doc = html::Document::parse(page.html);
  std::set<std::string> seen{page.url};
  for (const auto* el : doc.all_elements()) {
    if (!(el->is("div") || el->is("ul") || el->is("ol") || el->is("nav"))) continue;
    const auto* cls = el->attr("class");
    if (!cls || !(text::contains_ci(*cls, "pagination") || text::contains_ci(*cls, "pager"))) continue;
    std::vector<const html::Node*> anchors;
    collect(*el, "a", anchors);
    for (const auto* a : anchors) {
      const auto* h = a->attr("href");
      if (!h) continue;
      try {
        auto u = normalize_url(*h, page.url);
        if (seen.insert(u).second) out.push_back(std::move(u));
      } catch (const MalformedUrl&) {
      }
    }
  }
  return out;
}

namespace {

// ---- segmentation ----

struct Unit {
  const html::Node* node;
  std::string text;
  std::optional<NameMatch> name;
};

struct Candidate {
  SegmentKind kind;
  std::vector<Unit> units;
  int records = 0;
};

Unit make_unit(const html::Node* n, const NameLexicon& lex) {
  Unit u{n, html::visible_text(*n), std::nullopt};
  u.name = find_name(u.text, lex);
  return u;
}

// Outer units wrapping a named inner unit are layout, not entries.
void drop_wrappers(std::vector<Unit>& units) {
  std::vector<bool> drop(units.size(), false);
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (!units[i].name) continue;
    for (std::size_t j = 0; j < units.size(); ++j)
      if (i != j && units[j].node->contains(*units[i].node)) drop[j] = true;
  }
  std::vector<Unit> kept;
  for (std::size_t i = 0; i < units.size(); ++i)
    if (!drop[i]) kept.push_back(std::move(units[i]));
  units = std::move(kept);
}

int count_named(const std::vector<Unit>& units) {
  return static_cast<int>(std::count_if(units.begin(), units.end(), [](const Unit& u) { return u.name.has_value(); }));
}

Candidate tag_candidate(const html::Document& doc, SegmentKind kind, std::string_view tag, const NameLexicon& lex) {
  Candidate c{kind, {}, 0};
  for (const auto* n : doc.elements(tag)) c.units.push_back(make_unit(n, lex));
  drop_wrappers(c.units);
  c.records = count_named(c.units);
  return c;
}

Candidate div_candidate(const html::Document& doc, const NameLexicon& lex) {
  Candidate best{SegmentKind::Div, {}, 0};
  std::vector<const html::Node*> parents{&doc.root()};
  for (const auto* e : doc.all_elements()) parents.push_back(e);
  for (const auto* p : parents) {
    std::map<std::string, std::vector<const html::Node*>> groups;
    std::vector<std::string> order;
    for (const auto& ch : p->children) {
      if (!ch->is("div")) continue;
      const auto* cls = ch->attr("class");
      if (!cls) continue;
      auto key = text::collapse_whitespace(*cls);
      if (key.empty()) continue;
      auto& g = groups[key];
      if (g.empty()) order.push_back(key);
      g.push_back(ch.get());
    }
    for (const auto& key : order) {
      const auto& g = groups[key];
      Candidate c{SegmentKind::Div, {}, 0};
      for (const auto* n : g) c.units.push_back(make_unit(n, lex));
      c.records = count_named(c.units);
      if (c.records > best.records || (c.records == best.records && c.records > 0 && c.units.size() > best.units.size()))
        best = std::move(c);
    }
  }
  return best;
}

Candidate choose(const html::Document& doc, const NameLexicon& lex) {
  // Listed in tie-break order.
  std::array<Candidate, 4> cs = {tag_candidate(doc, SegmentKind::Table, "tr", lex), div_candidate(doc, lex),
                                 tag_candidate(doc, SegmentKind::List, "li", lex),
                                 tag_candidate(doc, SegmentKind::Article, "article", lex)};
  std::size_t best = 0;
  for (std::size_t i = 1; i < cs.size(); ++i)
    if (cs[i].records > cs[best].records) best = i;
  if (cs[best].records == 0) throw NotADirectory("no candidate segmentation yields a name");
  return std::move(cs[best]);
}

std::string singularize(std::string_view heading) {
  auto words = text::split_whitespace(heading);
  for (auto& w : words) {
    const auto n = w.size();
    if (n > 3 && (w[n - 1] == 's' || w[n - 1] == 'S') && std::string_view("rwtnRWTN").find(w[n - 2]) != std::string_view::npos)
      w.pop_back();
  }
  return text::join(words, " ");
}

struct HeadingMark {
  std::size_t at;
  std::string text;
};

std::vector<HeadingMark> heading_marks(const html::Document& doc, const Candidate& c, const TitleWhitelist& wl) {
  std::vector<HeadingMark> marks;
  for (const auto* e : doc.all_elements()) {
    if (!html::is_heading(e->tag)) continue;
    const bool inside = std::any_of(c.units.begin(), c.units.end(), [&](const Unit& u) { return u.node->contains(*e); });
    if (!inside) marks.push_back({e->begin, html::inline_text(*e)});
  }
  for (const auto& u : c.units) {
    if (u.name) continue;
    auto t = text::collapse_whitespace(u.text);
    if (!t.empty() && t.size() <= 80 && longest_phrase(t, wl)) marks.push_back({u.node->begin, std::move(t)});
  }
  std::sort(marks.begin(), marks.end(), [](const HeadingMark& a, const HeadingMark& b) { return a.at < b.at; });
  return marks;
}

std::optional<std::string> inherited_title(const std::vector<HeadingMark>& marks, std::size_t at,
                                           const TitleWhitelist& wl) {
  const HeadingMark* nearest = nullptr;
  for (const auto& m : marks) {
    if (m.at >= at) break;
    nearest = &m;
  }
  if (!nearest || !longest_phrase(nearest->text, wl)) return std::nullopt;
  return singularize(nearest->text);
}

std::vector<FacultyRecord> dedup(std::vector<FacultyRecord> records) {
  std::vector<FacultyRecord> out;
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  for (auto& r : records) {
    const auto key = std::make_pair(r.institution, name_key(r));
    const auto it = index.find(key);
    if (it == index.end()) {
      index.emplace(key, out.size());
      out.push_back(std::move(r));
    } else if (populated_fields(r) > populated_fields(out[it->second])) {
      out[it->second] = std::move(r);
    }
  }
  return out;
}

}  // namespace

SegmentationCandidate segment(const Page& page, const Lexicons& lex) {
  if (page.status != PageStatus::Ok) throw NotADirectory("page not fetched");
  const auto doc = html::Document::parse(page.html);
  const auto c = choose(doc, lex.names);
  SegmentationCandidate out;
  out.kind = c.kind;
  out.record_count = c.records;
  for (const auto& u : c.units) out.segments.push_back(html::outer_html(*u.node));
  return out;
}

std::vector<FacultyRecord> parse_page(const Page& page, const Lexicons& lex, const std::string& institution) {
  if (page.status != PageStatus::Ok) throw NotADirectory("page not fetched");
  const auto doc = html::Document::parse(page.html);
  const auto c = choose(doc, lex.names);
  const auto marks = heading_marks(doc, c, lex.titles);
  std::vector<FacultyRecord> out;
  for (const auto& u : c.units) {
    if (!u.name) continue;
    auto title = find_title(u.text, lex.titles, &*u.name);
    if (!title) title = inherited_title(marks, u.node->begin, lex.titles);
    if (!title) continue;
    FacultyRecord r;
    r.full_name = u.name->full;
    r.first = u.name->first;
    r.last = u.name->last;
    r.title_raw = *title;
    r.rank = classify_rank(*title);
    r.email = email_from(u.text, mailtos_in(*u.node), page.url);
    r.homepage = homepage_in(*u.node, *u.name, page.url);
    r.source_url = page.url;
    r.institution = institution;
    out.push_back(std::move(r));
  }
  return dedup(std::move(out));
}

std::vector<FacultyRecord> parse_directory(const std::vector<Page>& pages, const Lexicons& lex,
                                           const std::string& institution) {
  if (pages.empty()) throw std::invalid_argument("parse_directory: no pages");
  std::vector<FacultyRecord> all;
  bool any = false;
  for (const auto& p : pages) {
    try {
      auto rs = parse_page(p, lex, institution);
      any = true;
      all.insert(all.end(), std::make_move_iterator(rs.begin()), std::make_move_iterator(rs.end()));
    } catch (const NotADirectory&) {
    }
  }
  if (!any) throw NotADirectory("no page parsed as a directory");
  return dedup(std::move(all));
}

}  // namespace census
