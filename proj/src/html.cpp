#include "census/html.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <unordered_map>

#include "census/text.hpp"

namespace census::html {
namespace {

constexpr std::array<std::string_view, 14> kVoid = {"area", "base", "br",    "col",  "embed",
                                                    "hr",   "img",  "input", "link", "meta",
                                                    "param", "source", "track", "wbr"};

constexpr std::array<std::string_view, 38> kBlock = {
    "address", "article", "aside",  "blockquote", "body",    "caption", "dd",   "details",
    "dialog",  "div",     "dl",     "dt",         "fieldset", "figcaption", "figure", "footer",
    "form",    "h1",      "h2",     "h3",         "h4",      "h5",      "h6",   "header",
    "hr",      "li",      "main",   "nav",        "ol",      "p",       "pre",  "section",
    "table",   "tbody",   "td",     "th",         "tr",      "ul"};

// Start tags that implicitly close an open <p>.
constexpr std::array<std::string_view, 27> kClosesP = {
    "address", "article", "aside", "blockquote", "details", "div", "dl", "fieldset", "figure",
    "footer",  "form",    "h1",    "h2",         "h3",      "h4",  "h5", "h6",       "header",
    "hr",      "main",    "nav",   "ol",         "p",       "pre", "section", "table", "ul"};

template <std::size_t N>
bool in(const std::array<std::string_view, N>& set, std::string_view s) {
  return std::find(set.begin(), set.end(), s) != set.end();
}

bool is_void(std::string_view t) { return in(kVoid, t); }
bool is_raw_text(std::string_view t) { return t == "script" || t == "style"; }
bool is_rcdata(std::string_view t) { return t == "textarea" || t == "title"; }

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

const std::unordered_map<std::string_view, std::uint32_t>& named_entities() {
  static const std::unordered_map<std::string_view, std::uint32_t> table = {
      {"amp", '&'},      {"lt", '<'},       {"gt", '>'},       {"quot", '"'},
      {"apos", '\''},    {"nbsp", ' '},     {"copy", 0xA9},    {"reg", 0xAE},
      {"ndash", 0x2013}, {"mdash", 0x2014}, {"lsquo", 0x2018}, {"rsquo", 0x2019},
      {"ldquo", 0x201C}, {"rdquo", 0x201D}, {"hellip", 0x2026}, {"middot", 0xB7},
      {"bull", 0x2022},  {"eacute", 0xE9},  {"aacute", 0xE1},  {"iacute", 0xED},
      {"oacute", 0xF3},  {"uacute", 0xFA},  {"ntilde", 0xF1},  {"uuml", 0xFC},
      {"ouml", 0xF6},    {"auml", 0xE4},    {"ccedil", 0xE7},  {"egrave", 0xE8},
      {"agrave", 0xE0},  {"Eacute", 0xC9},  {"szlig", 0xDF},   {"commat", '@'},
      {"period", '.'},   {"lpar", '('},     {"rpar", ')'},     {"vert", '|'},
      {"verbar", '|'},   {"sol", '/'},      {"colon", ':'},    {"semi", ';'},
      {"num", '#'}};
  return table;
}

class TreeBuilder {
 public:
  explicit TreeBuilder(std::string_view src) : src_(src) {
    root_ = std::make_unique<Node>();
    root_->kind = NodeKind::Document;
    stack_.push_back(root_.get());
  }

  std::unique_ptr<Node> build() {
    while (pos_ < src_.size()) {
      const auto lt = src_.find('<', pos_);
      if (lt == std::string_view::npos) {
        add_text(src_.substr(pos_));
        break;
      }
      if (lt > pos_) add_text(src_.substr(pos_, lt - pos_));
      pos_ = lt;
      if (!markup()) {
        add_text("<");
        ++pos_;
      }
    }
    return std::move(root_);
  }

 private:
  Node* top() { return stack_.back(); }

  void add_text(std::string_view raw, bool decode = true) {
    if (raw.empty()) return;
    auto& kids = top()->children;
    if (!kids.empty() && kids.back()->kind == NodeKind::Text) {
      kids.back()->text += decode ? decode_entities(raw) : std::string(raw);
      return;
    }
    auto n = std::make_unique<Node>();
    n->kind = NodeKind::Text;
    n->text = decode ? decode_entities(raw) : std::string(raw);
    n->parent = top();
    kids.push_back(std::move(n));
  }

  // Returns false when '<' does not start markup.
  bool markup() {
    auto rest = src_.substr(pos_);
    if (rest.substr(0, 4) == "<!--") {
      const auto end = src_.find("-->", pos_ + 4);
      pos_ = end == std::string_view::npos ? src_.size() : end + 3;
      return true;
    }
    if (rest.size() >= 2 && (rest[1] == '!' || rest[1] == '?')) {
      const auto end = src_.find('>', pos_);
      pos_ = end == std::string_view::npos ? src_.size() : end + 1;
      return true;
    }
    if (rest.size() >= 2 && rest[1] == '/') {
      if (rest.size() < 3 || !text::is_alpha(rest[2])) {
        const auto end = src_.find('>', pos_);
        pos_ = end == std::string_view::npos ? src_.size() : end + 1;
        return true;
      }
      pos_ += 2;
      const auto name = read_name();
      const auto end = src_.find('>', pos_);
      pos_ = end == std::string_view::npos ? src_.size() : end + 1;
      end_tag(name);
      return true;
    }
    if (rest.size() < 2 || !text::is_alpha(rest[1])) return false;
    ++pos_;
    start_tag();
    return true;
  }

  std::string read_name() {
    std::string name;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (text::is_space(c) || c == '/' || c == '>') break;
      name.push_back(c);
      ++pos_;
    }
    return text::to_lower(name);
  }

  void skip_space() {
    while (pos_ < src_.size() && text::is_space(src_[pos_])) ++pos_;
  }

  void start_tag() {
    auto node = std::make_unique<Node>();
    node->tag = read_name();
    bool self_closing = false;
    while (pos_ < src_.size()) {
      skip_space();
      if (pos_ >= src_.size()) break;
      const char c = src_[pos_];
      if (c == '>') {
        ++pos_;
        break;
      }
      if (c == '/') {
        ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '>') {
          self_closing = true;
          ++pos_;
          break;
        }
        continue;
      }
      std::string name;
      while (pos_ < src_.size()) {
        const char d = src_[pos_];
        if (text::is_space(d) || d == '=' || d == '>' || (d == '/' && !name.empty())) break;
        name.push_back(d);
        ++pos_;
      }
      skip_space();
      std::string value;
      if (pos_ < src_.size() && src_[pos_] == '=') {
        ++pos_;
        skip_space();
        if (pos_ < src_.size() && (src_[pos_] == '"' || src_[pos_] == '\'')) {
          const char q = src_[pos_++];
          const auto close = src_.find(q, pos_);
          const auto stop = close == std::string_view::npos ? src_.size() : close;
          value = decode_entities(src_.substr(pos_, stop - pos_));
          pos_ = close == std::string_view::npos ? src_.size() : close + 1;
        } else {
          const auto start = pos_;
          while (pos_ < src_.size() && !text::is_space(src_[pos_]) && src_[pos_] != '>') ++pos_;
          value = decode_entities(src_.substr(start, pos_ - start));
        }
      }
      if (!name.empty()) node->attrs.emplace_back(text::to_lower(name), std::move(value));
    }

    const std::string tag = node->tag;
    implied_closes(tag);
    node->parent = top();
    Node* raw = node.get();
    top()->children.push_back(std::move(node));

    if (is_void(tag) || self_closing) return;
    if (is_raw_text(tag) || is_rcdata(tag)) {
      const auto close = find_close(tag);
      stack_.push_back(raw);
      add_text(src_.substr(pos_, close - pos_), is_rcdata(tag));
      stack_.pop_back();
      pos_ = close;
      if (pos_ < src_.size()) {
        const auto gt = src_.find('>', pos_);
        pos_ = gt == std::string_view::npos ? src_.size() : gt + 1;
      }
      return;
    }
    stack_.push_back(raw);
  }

  std::size_t find_close(const std::string& tag) const {
    for (auto i = src_.find("</", pos_); i != std::string_view::npos; i = src_.find("</", i + 2)) {
      if (text::starts_with_ci(src_.substr(i + 2), tag)) return i;
    }
    return src_.size();
  }

  // Pops up to and including the nearest open element named one of `names`,
  // unless a boundary element is reached first.
  void close_within(std::initializer_list<std::string_view> names,
                    std::initializer_list<std::string_view> boundaries) {
    for (std::size_t i = stack_.size(); i-- > 1;) {
      const auto& t = stack_[i]->tag;
      if (std::find(names.begin(), names.end(), t) != names.end()) {
        stack_.resize(i);
        return;
      }
      if (std::find(boundaries.begin(), boundaries.end(), t) != boundaries.end()) return;
    }
  }

  void implied_closes(const std::string& tag) {
    if (in(kClosesP, tag) && top()->tag == "p") stack_.pop_back();
    if (tag == "li") {
      close_within({"li"}, {"ul", "ol", "menu", "table"});
    } else if (tag == "dt" || tag == "dd") {
      close_within({"dt", "dd"}, {"dl", "table"});
    } else if (tag == "tr") {
      close_within({"tr"}, {"table", "thead", "tbody", "tfoot"});
    } else if (tag == "td" || tag == "th") {
      close_within({"td", "th"}, {"tr", "table"});
    } else if (tag == "thead" || tag == "tbody" || tag == "tfoot") {
      close_within({"thead", "tbody", "tfoot"}, {"table"});
    } else if (tag == "option") {
      close_within({"option"}, {"select"});
    }
  }

  void end_tag(const std::string& tag) {
    for (std::size_t i = stack_.size(); i-- > 1;) {
      if (stack_[i]->tag == tag) {
        stack_.resize(i);
        return;
      }
      // an end tag never closes past the enclosing table/list of a cell/item
      if ((tag == "td" || tag == "th" || tag == "tr") && stack_[i]->tag == "table") return;
      if (tag == "li" && (stack_[i]->tag == "ul" || stack_[i]->tag == "ol")) return;
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::unique_ptr<Node> root_;
  std::vector<Node*> stack_;
};

std::size_t number(Node& n, std::size_t next) {
  n.begin = next++;
  for (auto& c : n.children) next = number(*c, next);
  n.end = next - 1;
  return next;
}

bool skipped_for_text(const Node& n) {
  return n.kind == NodeKind::Element &&
         (n.tag == "script" || n.tag == "style" || n.tag == "noscript" || n.tag == "template" ||
          n.tag == "head" || n.tag == "title");
}

void gather_text(const Node& n, std::string& out) {
  if (n.kind == NodeKind::Text) {
    out += n.text;
    return;
  }
  if (skipped_for_text(n)) return;
  const bool breaks = n.kind == NodeKind::Element && (is_block(n.tag) || n.tag == "br");
  if (breaks) out.push_back('\n');
  for (const auto& c : n.children) gather_text(*c, out);
  if (breaks) out.push_back('\n');
}

void escape_into(std::string& out, std::string_view s, bool attr) {
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"':
        if (attr) {
          out += "&quot;";
          break;
        }
        [[fallthrough]];
      default: out.push_back(c);
    }
  }
}

void serialize(const Node& n, std::string& out) {
  if (n.kind == NodeKind::Text) {
    if (n.parent && is_raw_text(n.parent->tag))
      out += n.text;
    else
      escape_into(out, n.text, false);
    return;
  }
  if (n.kind == NodeKind::Element) {
    out += "<" + n.tag;
    for (const auto& [k, v] : n.attrs) {
      out += " " + k + "=\"";
      escape_into(out, v, true);
      out += "\"";
    }
    out += ">";
    if (is_void(n.tag)) return;
  }
  for (const auto& c : n.children) serialize(*c, out);
  if (n.kind == NodeKind::Element) out += "</" + n.tag + ">";
}

}  // namespace

const std::string* Node::attr(std::string_view name) const {
  for (const auto& [k, v] : attrs)
    if (k == name) return &v;
  return nullptr;
}

Document Document::parse(std::string_view html) {
  Document d;
  d.root_ = TreeBuilder(html).build();
  number(*d.root_, 0);
  return d;
}

std::vector<const Node*> Document::elements(std::string_view tag) const {
  std::vector<const Node*> out;
  std::function<void(const Node&)> walk = [&](const Node& n) {
    if (n.is(tag)) out.push_back(&n);
    for (const auto& c : n.children) walk(*c);
  };
  walk(*root_);
  return out;
}

std::vector<const Node*> Document::all_elements() const {
  std::vector<const Node*> out;
  std::function<void(const Node&)> walk = [&](const Node& n) {
    if (n.kind == NodeKind::Element) out.push_back(&n);
    for (const auto& c : n.children) walk(*c);
  };
  walk(*root_);
  return out;
}

std::string decode_entities(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '&') {
      out.push_back(s[i++]);
      continue;
    }
    const auto semi = s.find(';', i + 1);
    if (semi != std::string_view::npos && semi - i <= 10) {
      const auto body = s.substr(i + 1, semi - i - 1);
      if (!body.empty() && body[0] == '#') {
        std::uint32_t cp = 0;
        bool ok = body.size() > 1;
        const bool hex = ok && (body[1] == 'x' || body[1] == 'X');
        for (std::size_t k = hex ? 2 : 1; ok && k < body.size(); ++k) {
          const char c = body[k];
          int d = -1;
          if (text::is_digit(c)) d = c - '0';
          else if (hex && c >= 'a' && c <= 'f') d = c - 'a' + 10;
          else if (hex && c >= 'A' && c <= 'F') d = c - 'A' + 10;
          if (d < 0 || cp > 0x10FFFF) ok = false;
          else cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(d);
        }
        if (ok && body.size() > (hex ? 2u : 1u)) {
          if (cp == 0xA0) cp = ' ';
          append_utf8(out, cp);
          i = semi + 1;
          continue;
        }
      } else if (auto it = named_entities().find(body); it != named_entities().end()) {
        append_utf8(out, it->second);
        i = semi + 1;
        continue;
      }
    }
    // legacy forms without the semicolon
    bool matched = false;
    for (std::string_view legacy : {"amp", "lt", "gt", "quot", "nbsp"}) {
      if (s.substr(i + 1, legacy.size()) == legacy) {
        append_utf8(out, named_entities().at(legacy));
        i += 1 + legacy.size();
        matched = true;
        break;
      }
    }
    if (!matched) out.push_back(s[i++]);
  }
  return out;
}

bool is_block(std::string_view tag) { return in(kBlock, tag); }

bool is_heading(std::string_view tag) {
  return tag.size() == 2 && tag[0] == 'h' && tag[1] >= '1' && tag[1] <= '6';
}

std::string visible_text(const Node& node) {
  std::string raw;
  gather_text(node, raw);
  // U+00A0 is whitespace for our purposes
  std::string cleaned;
  cleaned.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == '\xC2' && i + 1 < raw.size() && raw[i + 1] == '\xA0') {
      cleaned.push_back(' ');
      ++i;
    } else {
      cleaned.push_back(raw[i]);
    }
  }
  std::string out;
  for (const auto& line : text::split(cleaned, '\n')) {
    auto c = text::collapse_whitespace(line);
    if (c.empty()) continue;
    if (!out.empty()) out.push_back('\n');
    out += c;
  }
  return out;
}

std::string inline_text(const Node& node) {
  auto t = visible_text(node);
  std::replace(t.begin(), t.end(), '\n', ' ');
  return t;
}

std::string outer_html(const Node& node) {
  std::string out;
  serialize(node, out);
  return out;
}

const Node* block_ancestor(const Node& node) {
  for (const Node* n = &node; n; n = n->parent)
    if (n->kind == NodeKind::Element && is_block(n->tag)) return n;
  return nullptr;
}

}  // namespace census::html
