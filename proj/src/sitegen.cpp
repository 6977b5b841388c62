#include "census/sitegen.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "census/csv.hpp"
#include "census/errors.hpp"
#include "census/fetcher.hpp"
#include "census/filter.hpp"
#include "census/text.hpp"
#include "census/url.hpp"

namespace census {

std::string_view to_string(Obfuscation o) {
  switch (o) {
    case Obfuscation::None: return "none";
    case Obfuscation::AtDot: return "at-dot";
    case Obfuscation::SuffixStripped: return "suffix-stripped";
  }
  return "?";
}

namespace {

std::string cap(std::string_view s) {
  std::string r(s);
  if (!r.empty()) r[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(r[0])));
  return r;
}

std::string esc(std::string_view s) {
  std::string o;
  for (char c : s) {
    switch (c) {
      case '&': o += "&amp;"; break;
      case '<': o += "&lt;"; break;
      case '>': o += "&gt;"; break;
      case '"': o += "&quot;"; break;
      default: o += c;
    }
  }
  return o;
}

template <typename T>
const T& pick(Rng& rng, std::initializer_list<T> items) {
  return *(items.begin() + rng.below(items.size()));
}

const char* pick_s(Rng& rng, std::initializer_list<const char*> items) { return pick(rng, items); }

const std::vector<std::string>& titles_for(Rank r) {
  static const std::vector<std::string> asst = {"Assistant Professor", "Assistant Professor",
                                                "Assistant Professor of Computer Science",
                                                "Assistant Professor of Computing"};
  static const std::vector<std::string> assoc = {"Associate Professor", "Associate Professor",
                                                 "Associate Professor of Computer Science",
                                                 "Associate Professor and Graduate Director"};
  static const std::vector<std::string> full = {"Professor",
                                                "Professor",
                                                "Professor of Computer Science",
                                                "Professor and Chair",
                                                "Distinguished Professor",
                                                "Full Professor",
                                                "Professor and Associate Chair",
                                                "University Professor"};
  switch (r) {
    case Rank::Asst: return asst;
    case Rank::Assoc: return assoc;
    default: return full;
  }
}

const std::vector<std::string>& nonttt_titles() {
  static const std::vector<std::string> t = {
      "Adjunct Associate Professor", "Professor Emeritus",          "Lecturer",
      "Senior Lecturer",             "Teaching Professor",          "Research Scientist",
      "Postdoctoral Fellow",         "Visiting Assistant Professor", "Research Professor",
      "Clinical Associate Professor", "Professor of the Practice",  "Adjunct Professor",
      "Instructor",                  "Research Associate Professor", "Associate Professor Emerita"};
  return t;
}

const std::vector<std::string>& out_of_field_titles() {
  static const std::vector<std::string> t = {"Professor of Electrical Engineering",
                                             "Associate Professor of Electrical Engineering",
                                             "Assistant Professor of Mathematics", "Professor of Physics",
                                             "Associate Professor of Statistics"};
  return t;
}

const std::vector<std::string>& staff_titles() {
  static const std::vector<std::string> t = {"Administrative Assistant",   "Department Manager",
                                             "Graduate Program Coordinator", "Systems Administrator",
                                             "Financial Specialist",       "IT Technician",
                                             "Communications Officer",     "Academic Advisor"};
  return t;
}

const std::vector<std::string>& topics() {
  static const std::vector<std::string> t = {
      "machine learning",   "databases",           "computer vision",     "operating systems",
      "programming languages", "networks",         "security",            "theory of computation",
      "human-computer interaction", "robotics",    "distributed systems", "computational biology",
      "compilers",          "graphics",            "algorithms",          "natural language processing"};
  return t;
}

Rank draw_rank(Rng& rng) {
  const double u = rng.uniform();
  return u < 0.23 ? Rank::Asst : u < 0.50 ? Rank::Assoc : Rank::Full;
}

std::string email_local(const std::string& first, const std::string& last) {
  std::string l = text::to_lower(first.substr(0, 1)) + text::to_lower(last);
  l.erase(std::remove_if(l.begin(), l.end(), [](char c) { return !text::is_alpha(c) && !text::is_digit(c); }),
          l.end());
  return l;
}

}  // namespace

std::string site_host(int site_index) { return fmt::format("cs.univ{:02d}.edu", site_index); }

NameDrawer::NameDrawer(const NamePools& pools, std::uint64_t seed) : pools_(pools), rng_(seed) {
  if (pools.first.empty() || pools.last.empty()) throw std::invalid_argument("empty name pools");
}

std::pair<std::string, std::string> NameDrawer::draw() {
  for (int attempt = 0; attempt < 100000; ++attempt) {
    auto first = cap(rng_.pick(pools_.first));
    auto last = cap(rng_.pick(pools_.last));
    if (text::to_lower(first) == text::to_lower(last)) continue;
    if (used_.insert(text::to_lower(first.substr(0, 1)) + "|" + text::to_lower(last)).second) return {first, last};
  }
  throw std::runtime_error("name pools exhausted");
}

void NameDrawer::reserve(const std::string& first, const std::string& last) {
  used_.insert(text::to_lower(first.substr(0, 1)) + "|" + text::to_lower(last));
}

std::vector<RosterEntry> draw_roster(const SiteSpec& spec, NameDrawer& names) {
  if (!spec.roster.empty()) return spec.roster;
  Rng rng(mix_seed(spec.seed, 11));
  const auto host = site_host(spec.site_index);
  const auto domain = registered_domain(host);
  std::vector<RosterEntry> out;
  auto person = [&](std::string title, Rank rank, bool ttt) {
    RosterEntry e;
    auto [first, last] = names.draw();
    e.first = first;
    e.last = last;
    e.full_name = first + " " + last;
    if (rng.chance(0.1)) e.full_name = first + " " + static_cast<char>('A' + rng.below(26)) + ". " + last;
    e.title_raw = std::move(title);
    e.rank = ttt ? rank : Rank::Unknown;
    e.is_ttt = ttt;
    const auto local = email_local(first, last);
    e.email = local + "@" + domain;
    const double h = rng.uniform();
    if (h < 0.35) e.homepage = fmt::format("https://{}/~{}", host, local);
    else if (h < 0.6) e.homepage = fmt::format("https://{}/people/{}", host, local);
    else if (h < 0.7) e.homepage = fmt::format("https://{}.github.io", local);
    out.push_back(std::move(e));
  };
  std::vector<Rank> ranks;
  for (int i = 0; i < spec.n_faculty; ++i) ranks.push_back(draw_rank(rng));
  // every rank present once there is room, so rosters exercise all three
  if (spec.n_faculty >= 3) {
    for (Rank r : {Rank::Asst, Rank::Assoc, Rank::Full})
      if (std::find(ranks.begin(), ranks.end(), r) == ranks.end()) ranks[rng.below(ranks.size())] = r;
  }
  for (Rank r : ranks) {
    if (spec.heading_titles) {
      person(canonical_title(r), r, true);
    } else {
      person(rng.pick(titles_for(r)), r, true);
    }
  }
  for (int i = 0; i < spec.n_nonttt; ++i) {
    if (spec.heading_titles) person(pick_s(rng, {"Lecturer", "Adjunct Faculty", "Professor Emeriti"}), Rank::Unknown, false);
    else person(rng.pick(nonttt_titles()), Rank::Unknown, false);
  }
  if (!spec.heading_titles)
    for (int i = 0; i < spec.n_out_of_field; ++i) person(rng.pick(out_of_field_titles()), Rank::Unknown, false);
  return out;
}

namespace {

// ---- rendering ----

struct NavItem {
  std::string href;
  std::string label;
};

struct Site {
  const SiteSpec& spec;
  Rng rng;
  std::string host;
  std::string base;
  std::string univ;
  std::string dept;
  std::string cls;  // class prefix
  bool nav_as_list = true;
  std::vector<NavItem> nav;
  std::vector<SitePage> pages;

  Site(const SiteSpec& s) : spec(s), rng(mix_seed(s.seed, 23)) {}

  std::string url(std::string_view path) const { return normalize_url(path, base + "/"); }

  std::string c(std::string_view suffix) const { return cls + "-" + std::string(suffix); }

  std::string nav_html() const {
    std::string o;
    if (nav_as_list) {
      o += fmt::format("<nav><ul class=\"{}\">\n", c("menu"));
      for (const auto& n : nav) o += fmt::format("  <li><a href=\"{}\">{}</a></li>\n", n.href, esc(n.label));
      o += "</ul></nav>\n";
    } else {
      o += fmt::format("<div class=\"{}\">", c("nav"));
      for (std::size_t i = 0; i < nav.size(); ++i)
        o += fmt::format("{}<a href=\"{}\">{}</a>", i ? " | " : "", nav[i].href, esc(nav[i].label));
      o += "</div>\n";
    }
    return o;
  }

  std::string page(std::string_view title, std::string_view body) {
    std::string o = "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n";
    o += fmt::format("<title>{} | {}</title>\n", esc(title), esc(dept));
    o += fmt::format("<style>.{}{{color:#333}} .{} td{{padding:2px}}</style>\n", c("main"), c("dir"));
    o += "</head>\n<body>\n";
    o += fmt::format("<div class=\"{}\"><a href=\"/\">{}</a> &middot; {}</div>\n", c("header"), esc(dept), esc(univ));
    o += nav_html();
    o += fmt::format("<div class=\"{}\">\n<h1>{}</h1>\n", c("main"), esc(title));
    o += body;
    o += "</div>\n";
    o += fmt::format("<div class=\"{}\"><p>{}, {} &middot; {} College Avenue &middot; Phone ({}) 010-{:04d}</p>\n",
                     c("footer"), esc(dept), esc(univ), 100 + spec.site_index, 500 + spec.site_index % 400,
                     spec.site_index * 7 % 10000);
    o += fmt::format("<p>&copy; 2017 {}</p></div>\n", esc(univ));
    o += "<script>var banner = \"<div class='faculty'>Faculty</div>\"; if (1 < 2) {}</script>\n";
    o += "</body>\n</html>\n";
    return o;
  }

  void add(std::string_view path, std::string_view title, std::string_view body, bool is_dir = false) {
    pages.push_back({url(path), page(title, body), is_dir});
  }

  std::string phone() {
    const int a = 200 + static_cast<int>(rng.below(700)), b = static_cast<int>(rng.below(10000));
    switch (rng.below(3)) {
      case 0: return fmt::format("({}) 010-{:04d}", a, b);
      case 1: return fmt::format("{}.010.{:04d}", a, b);
      default: return fmt::format("+1 {} 010 {:04d}", a, b);
    }
  }

  std::string email_html(const RosterEntry& e) {
    const auto at = e.email.find('@');
    const auto local = e.email.substr(0, at);
    const auto domain = e.email.substr(at + 1);
    switch (spec.obfuscate_email) {
      case Obfuscation::None:
        if (rng.chance(0.7)) return fmt::format("<a href=\"mailto:{0}\">{0}</a>", e.email);
        return e.email;
      case Obfuscation::AtDot: {
        auto parts = text::split(domain, '.');
        const int v = static_cast<int>(rng.below(3));
        const char* at_s = v == 0 ? " [at] " : v == 1 ? " (at) " : " at ";
        const char* dot_s = v == 0 ? " [dot] " : v == 1 ? " (dot) " : " dot ";
        return local + at_s + text::join(parts, dot_s);
      }
      case Obfuscation::SuffixStripped:
        return "Email: " + local;
    }
    return "";
  }

  std::string name_html(const RosterEntry& e, bool inverted, bool honorific) {
    std::string shown;
    if (inverted) {
      auto rest = e.full_name.substr(0, e.full_name.size() - e.last.size() - 1);
      shown = e.last + ", " + rest;
    } else {
      shown = (honorific ? "Dr. " : "") + e.full_name;
    }
    if (!e.homepage) return esc(shown);
    auto href = *e.homepage;
    const auto own = "https://" + host;
    if (href.rfind(own, 0) == 0) href = href.substr(own.size());
    return fmt::format("<a href=\"{}\">{}</a>", href, esc(shown));
  }

  std::string interests() {
    const auto& t = topics();
    const auto a = rng.below(t.size()), b = (a + 1 + rng.below(t.size() - 1)) % t.size();
    return "Research interests: " + t[a] + ", " + t[b];
  }
};

struct StyleKnobs {
  bool inverted = false;
  bool honorific = false;
  bool title_first = false;
  int list_sep = 0;
};

std::string render_entries(Site& s, SegmentKind style, const std::vector<RosterEntry>& people,
                           const StyleKnobs& k) {
  std::string o;
  switch (style) {
    case SegmentKind::Table: {
      o += fmt::format("<table class=\"{}\">\n", s.c("dir"));
      o += k.title_first ? "<tr><th>Title</th><th>Name</th><th>Email</th><th>Phone</th><th>Office</th></tr>\n"
                         : "<tr><th>Name</th><th>Title</th><th>Email</th><th>Phone</th><th>Office</th></tr>\n";
      for (const auto& e : people) {
        const auto name = s.name_html(e, k.inverted, false);
        const auto title = esc(e.title_raw);
        o += fmt::format("<tr><td>{}</td><td>{}</td><td>{}</td><td>{}</td><td>Office: ENG {}</td></tr>\n",
                         k.title_first ? title : name, k.title_first ? name : title, s.email_html(e), s.phone(),
                         100 + s.rng.below(400));
      }
      o += "</table>\n";
      break;
    }
    case SegmentKind::Div: {
      o += fmt::format("<div class=\"{}\">\n", s.c("grid"));
      for (const auto& e : people) {
        o += fmt::format("<div class=\"{}\">\n", s.c("card"));
        o += fmt::format("  <img src=\"/img/{}.jpg\" alt=\"{}\">\n", email_local(e.first, e.last), esc(e.full_name));
        o += fmt::format("  <h3>{}</h3>\n", s.name_html(e, false, k.honorific));
        o += fmt::format("  <div class=\"{}\">{}</div>\n", s.c("title"), esc(e.title_raw));
        o += fmt::format("  <div class=\"{}\">{}<br>{}</div>\n", s.c("contact"), s.email_html(e), s.phone());
        if (s.rng.chance(0.5)) o += fmt::format("  <div class=\"{}\">{}</div>\n", s.c("bio"), s.interests());
        o += "</div>\n";
      }
      o += "</div>\n";
      break;
    }
    case SegmentKind::List: {
      o += fmt::format("<ul class=\"{}\">\n", s.c("people"));
      for (const auto& e : people) {
        const char* sep = k.list_sep == 0 ? ", " : k.list_sep == 1 ? " &mdash; " : "<br>";
        o += fmt::format("<li><strong>{}</strong>{}{}<br>{} &middot; {}</li>\n", s.name_html(e, false, false), sep,
                         esc(e.title_raw), s.email_html(e), s.phone());
      }
      o += "</ul>\n";
      break;
    }
    case SegmentKind::Article: {
      for (const auto& e : people) {
        o += fmt::format("<article class=\"{}\">\n", s.c("profile"));
        o += fmt::format("  <header><h2>{}</h2><p class=\"{}\">{}</p></header>\n",
                         s.name_html(e, false, k.honorific), s.c("role"), esc(e.title_raw));
        o += fmt::format("  <p>{} | {}</p>\n", s.email_html(e), s.phone());
        o += fmt::format("  <p>{}</p>\n", s.interests());
        o += "</article>\n";
      }
      break;
    }
  }
  return o;
}

// Bare names grouped under rank headings.
std::string render_heading_list(Site& s, const std::vector<RosterEntry>& people) {
  static const std::vector<std::pair<std::string, std::string>> groups = {
      {"Professor", "Professors"},         {"Associate Professor", "Associate Professors"},
      {"Assistant Professor", "Assistant Professors"}, {"Lecturer", "Lecturers"},
      {"Adjunct Faculty", "Adjunct Faculty"}, {"Professor Emeriti", "Professors Emeriti"}};
  std::string o;
  for (const auto& [title, heading] : groups) {
    std::vector<const RosterEntry*> in;
    for (const auto& e : people)
      if (e.title_raw == title) in.push_back(&e);
    if (in.empty()) continue;
    o += fmt::format("<h2>{}</h2>\n<ul class=\"{}\">\n", heading, s.c("people"));
    for (const auto* e : in) o += fmt::format("<li>{} &middot; {}</li>\n", s.name_html(*e, false, false), s.email_html(*e));
    o += "</ul>\n";
  }
  return o;
}

std::vector<RosterEntry> extra_people(NameDrawer& names, Rng& rng, int n, const std::vector<std::string>& titles,
                                      const std::string& domain) {
  std::vector<RosterEntry> out;
  for (int i = 0; i < n; ++i) {
    RosterEntry e;
    auto [first, last] = names.draw();
    e.first = first;
    e.last = last;
    e.full_name = first + " " + last;
    e.title_raw = rng.pick(titles);
    e.email = email_local(first, last) + "@" + domain;
    e.is_ttt = false;
    e.rank = Rank::Unknown;
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace

RenderedSite render_site(const SiteSpec& spec, const NamePools& pools) {
  if (spec.n_faculty < 1 && spec.roster.empty()) throw std::invalid_argument("site needs at least one faculty member");
  if (spec.link_depth_to_directory < 1 || spec.link_depth_to_directory > 3)
    throw std::invalid_argument("link depth must be 1-3");
  Site s(spec);
  s.host = site_host(spec.site_index);
  s.base = "https://" + s.host;
  s.univ = spec.institution.empty() ? fmt::format("University {:02d}", spec.site_index) : spec.institution;
  s.dept = pick_s(s.rng, {"Department of Computer Science", "School of Computing", "Computer Science Department"});
  {
    static const char* syl[] = {"ka", "zu", "mo", "ri", "te", "xa", "lo", "vi", "pe", "du"};
    s.cls = std::string(syl[s.rng.below(10)]) + syl[s.rng.below(10)];
  }
  s.nav_as_list = s.rng.chance(0.85);
  // People who never appear in the truth: staff, students, emeriti, speakers.
  NameDrawer extra(pools, mix_seed(spec.seed, 31));
  auto roster = spec.roster;
  if (roster.empty()) {
    NameDrawer own(pools, mix_seed(spec.seed, 37));
    roster = draw_roster(spec, own);
  }
  for (const auto& e : roster) extra.reserve(e.first, e.last);
  const auto domain = registered_domain(s.host);

  // Paths along the route to the directory.
  const int depth = spec.link_depth_to_directory;
  std::string hub_path, dir_path, hub_label, dir_label;
  if (depth == 1) {
    dir_path = pick_s(s.rng, {"/faculty", "/people/faculty", "/directory/faculty", "/faculty-directory", "/index.php?id=233"});
    if (spec.paginated && dir_path.find('?') != std::string::npos) dir_path = "/faculty";
    dir_label = pick_s(s.rng, {"Faculty", "Faculty Directory", "Our Faculty", "Faculty Members"});
  } else {
    hub_path = depth == 2 ? pick_s(s.rng, {"/people", "/directory", "/our-people"}) : "/about/people";
    hub_label = pick_s(s.rng, {"People", "Directory", "Our People", "Faculty &amp; Staff"});
    dir_path = hub_path + pick_s(s.rng, {"/faculty", "/faculty-list", "/tenure-track"});
    dir_label = pick_s(s.rng, {"Faculty", "Faculty Directory", "Tenure-Track Faculty", "Faculty Members"});
  }

  std::vector<NavItem> nav = {{"/about", pick_s(s.rng, {"About", "About Us"})},
                              {"/research", pick_s(s.rng, {"Research", "Research Areas"})},
                              {"/news", "News"},
                              {"/contact", pick_s(s.rng, {"Contact", "Contact Us"})}};
  if (depth == 1) nav.push_back({dir_path, dir_label});
  if (depth == 2) nav.push_back({hub_path, hub_label});
  s.rng.shuffle(nav);
  nav.insert(nav.begin(), {"/", "Home"});
  s.nav = nav;

  // Distractor pages, attached where a real site would link them.
  std::vector<std::string> kinds = {"jobs", "staff", "emeriti", "students", "events", "article", "courses", "pdf", "dead"};
  s.rng.shuffle(kinds);
  kinds.resize(std::min<std::size_t>(kinds.size(), static_cast<std::size_t>(std::max(0, spec.distractor_pages))));
  auto has = [&](const char* k) { return std::find(kinds.begin(), kinds.end(), k) != kinds.end(); };
  std::vector<NavItem> home_links, hub_links;
  const std::string people_base = depth == 1 ? "" : hub_path;
  if (has("jobs")) home_links.push_back({"/jobs/faculty-positions", "Faculty Positions"});
  if (has("events")) home_links.push_back({"/events", "Events and Seminars"});
  if (has("article")) home_links.push_back({"/news/2017/best-paper-award", "Best paper award"});
  if (has("courses")) home_links.push_back({"/courses", "Courses"});
  if (has("pdf")) home_links.push_back({"/files/handbook.pdf", "Graduate Handbook (PDF)"});
  if (has("dead")) home_links.push_back({"/alumni", "Alumni"});
  for (const char* k : {"staff", "emeriti", "students"}) {
    if (!has(k)) continue;
    NavItem item;
    if (std::string(k) == "staff") item = {people_base + "/staff", "Staff Directory"};
    if (std::string(k) == "emeriti") item = {people_base + "/emeriti", "Emeriti"};
    if (std::string(k) == "students") item = {people_base + "/students", "Graduate Students"};
    (depth == 1 ? home_links : hub_links).push_back(item);
  }
  s.rng.shuffle(home_links);
  s.rng.shuffle(hub_links);

  auto link_list = [&](const std::vector<NavItem>& items) {
    std::string o = "<ul>\n";
    for (const auto& i : items) o += fmt::format("<li><a href=\"{}\">{}</a></li>\n", i.href, i.label);
    return o + "</ul>\n";
  };

  // Home
  {
    std::string body = fmt::format("<p>Welcome to the {} at {}. We offer undergraduate and graduate programs.</p>\n",
                                   s.dept, s.univ);
    if (!home_links.empty()) body += "<h2>Highlights</h2>\n" + link_list(home_links);
    body += fmt::format("<p><a href=\"https://www.{}/\">{}</a> &middot; <a href=\"https://twitter.com/cs{:02d}\">Follow us</a></p>\n",
                        domain, s.univ, spec.site_index);
    s.add("/", s.dept, body);
  }
  // About (the route for depth 3)
  {
    std::string body = fmt::format("<p>The {} was founded in {}. Our graduates work across industry and academia.</p>\n",
                                   s.dept, 1960 + spec.site_index % 40);
    if (depth == 3) body += link_list({{hub_path, hub_label}, {"/about/history", "History"}});
    s.add("/about", "About", body);
    if (depth == 3) s.add("/about/history", "History", "<p>A short history of the department.</p>\n");
  }
  // Research
  {
    std::string body = "<ul>\n";
    for (int i = 0; i < 4; ++i)
      body += fmt::format("<li>{} group</li>\n", cap(topics()[(spec.site_index + i * 3) % topics().size()]));
    body += "</ul>\n";
    if (!roster.empty()) body += fmt::format("<p>Our newest lab is led by {}.</p>\n", esc(roster.front().full_name));
    s.add("/research", "Research", body);
  }
  // News
  {
    std::string body;
    for (std::size_t i = 0; i < std::min<std::size_t>(3, roster.size()); ++i)
      body += fmt::format("<div class=\"{}\"><h3>Award news</h3><p>Congratulations to {} on a recent award.</p></div>\n",
                          s.c("news-item"), esc(roster[i].full_name));
    if (has("article")) body += "<p><a href=\"/news/2017/best-paper-award\">Read more</a></p>\n";
    s.add("/news", "News", body);
  }
  // Contact: staff contacts are a classifier hard negative
  {
    Rng r(mix_seed(spec.seed, 41));
    auto contacts = extra_people(extra, r, 3, staff_titles(), domain);
    std::string body = fmt::format("<p>Main office: ENG 100. Phone {}. Email: csinfo@{}</p>\n", s.phone(), domain);
    body += "<table>\n";
    for (const auto& e : contacts)
      body += fmt::format("<tr><td>{}</td><td>{}</td><td>{}</td></tr>\n", esc(e.full_name), esc(e.title_raw), e.email);
    body += "</table>\n";
    s.add("/contact", "Contact", body);
  }
  // Hub
  if (depth >= 2) {
    std::vector<NavItem> items = hub_links;
    // faculty usually lead the list
    const auto at = s.rng.chance(0.7) ? 0 : s.rng.below(items.size() + 1);
    items.insert(items.begin() + static_cast<std::ptrdiff_t>(at), {dir_path, dir_label});
    s.add(hub_path, "People", "<p>Find members of our community.</p>\n" + link_list(items));
  }

  // Directory
  StyleKnobs knobs;
  knobs.inverted = spec.style == SegmentKind::Table && s.rng.chance(0.25);
  knobs.title_first = spec.style == SegmentKind::Table && !knobs.inverted && s.rng.chance(0.2);
  knobs.honorific = s.rng.chance(0.15);
  knobs.list_sep = static_cast<int>(s.rng.below(3));
  auto people = roster;
  if (s.rng.chance(0.6))
    std::sort(people.begin(), people.end(), [](const RosterEntry& a, const RosterEntry& b) {
      return std::tie(a.last, a.first) < std::tie(b.last, b.first);
    });
  else
    s.rng.shuffle(people);

  GroundTruth truth;
  truth.institution = s.univ;
  truth.homepage = s.url("/");
  truth.directory_url = s.url(dir_path);
  truth.shortest_path_from_home = depth;
  truth.style = spec.style;
  const bool headings = spec.heading_titles && spec.style == SegmentKind::List;
  // fixed page size, as a CMS would; small rosters still get two pages
  std::size_t per_page = people.size();
  if (spec.paginated && !headings && people.size() > 1)
    per_page = std::min<std::size_t>(20 + s.rng.below(6), (people.size() + 1) / 2 < 20 ? (people.size() + 1) / 2
                                                                                         : people.size() - 1);
  const int n_pages = static_cast<int>((people.size() + per_page - 1) / std::max<std::size_t>(per_page, 1));
  std::vector<std::string> page_paths;
  for (int p = 0; p < n_pages; ++p) page_paths.push_back(p == 0 ? dir_path : fmt::format("{}?page={}", dir_path, p + 1));
  const std::string heading = pick_s(s.rng, {"Faculty", "Faculty Directory", "Our Faculty", "People: Faculty"});
  for (int p = 0; p < n_pages; ++p) {
    std::vector<RosterEntry> slice(people.begin() + static_cast<std::ptrdiff_t>(std::min(people.size(), p * per_page)),
                                   people.begin() + static_cast<std::ptrdiff_t>(std::min(people.size(), (p + 1) * per_page)));
    std::string body = "<p>Our faculty teach and conduct research across computing.</p>\n";
    body += headings ? render_heading_list(s, slice) : render_entries(s, spec.style, slice, knobs);
    if (n_pages > 1) {
      const bool as_list = s.rng.chance(0.5);
      body += as_list ? "<ul class=\"pagination\">" : fmt::format("<div class=\"{}-pager\">", s.cls);
      for (int q = 0; q < n_pages; ++q) {
        const auto href = q == 0 ? dir_path : fmt::format("?page={}", q + 1);
        body += as_list ? fmt::format("<li><a href=\"{}\">{}</a></li>", href, q + 1)
                        : fmt::format(" <a href=\"{}\">{}</a>", href, q + 1);
      }
      body += as_list ? "</ul>\n" : "</div>\n";
    }
    const auto u = s.url(page_paths[p]);
    truth.directory_pages.push_back(u);
    for (auto& e : slice) {
      auto it = std::find_if(roster.begin(), roster.end(), [&](const RosterEntry& r) { return r.full_name == e.full_name; });
      it->source_url = u;
    }
    s.add(page_paths[p], heading, body, true);
  }
  truth.roster = roster;
  for (auto& e : truth.roster)
    if (e.homepage) e.homepage = normalize_url(*e.homepage);

  // Distractor pages
  Rng dr(mix_seed(spec.seed, 43));
  if (has("jobs"))
    s.add("/jobs/faculty-positions", "Faculty Positions",
          fmt::format("<p>The {} invites applications for tenure-track positions at the rank of Assistant "
                      "Professor. Applications received by December 1 receive full consideration.</p>\n",
                      s.dept));
  if (has("events")) {
    auto speakers = extra_people(extra, dr, 3, {"Speaker"}, "example.org");
    std::string body = "<ul>\n";
    for (const auto& e : speakers) body += fmt::format("<li>Seminar talk by {} on {}</li>\n", esc(e.full_name), topics()[dr.below(topics().size())]);
    s.add("/events", "Events", body + "</ul>\n");
  }
  if (has("article") && !roster.empty())
    s.add("/news/2017/best-paper-award", "Best paper award",
          fmt::format("<p>A paper co-authored by {} received a best paper award this year.</p>\n",
                      esc(roster.back().full_name)));
  if (has("courses")) {
    std::string body = "<table>\n";
    for (int i = 0; i < 4 && i < static_cast<int>(roster.size()); ++i)
      body += fmt::format("<tr><td>CS {}</td><td>{}</td><td>Instructor: {}</td></tr>\n", 101 + i * 100,
                          cap(topics()[(i + spec.site_index) % topics().size()]), esc(roster[i].full_name));
    s.add("/courses", "Courses", body + "</table>\n");
  }
  auto people_page = [&](const char* kind, const std::vector<std::string>& titles, const char* title) {
    auto ps = extra_people(extra, dr, 4 + static_cast<int>(dr.below(5)), titles, domain);
    auto saved = spec.obfuscate_email;
    (void)saved;
    std::string body = headings ? render_entries(s, SegmentKind::List, ps, knobs) : render_entries(s, spec.style, ps, knobs);
    s.add(people_base + "/" + kind, title, body);
  };
  if (has("staff")) people_page("staff", staff_titles(), "Staff Directory");
  if (has("emeriti")) people_page("emeriti", {"Professor Emeritus", "Professor Emerita", "Associate Professor Emeritus"}, "Emeriti");
  if (has("students")) people_page("students", {"PhD Student", "Graduate Student", "MS Student"}, "Graduate Students");
  if (has("pdf")) s.pages.push_back({s.url("/files/handbook.pdf"), "%PDF-1.4\n% handbook\n", false});

  RenderedSite out;
  out.pages = std::move(s.pages);
  out.truth = std::move(truth);
  return out;
}

namespace {

std::string rel_path_for(const std::string& url) {
  const auto u = parse_absolute(url);
  if (!u) throw MalformedUrl(url);
  std::string path = u->path;
  if (path.empty() || path == "/") path = "/index";
  if (u->has_query) {
    std::string q = u->query;
    for (auto& ch : q)
      if (!text::is_alpha(ch) && !text::is_digit(ch)) ch = '_';
    path += "__" + q;
  }
  const auto ext = std::filesystem::path(path).extension().string();
  if (ext.empty() || (ext != ".pdf" && ext != ".html")) path += ".html";
  return "sites/" + u->host + path;
}

}  // namespace

std::map<std::string, std::string> write_site(const RenderedSite& site, const std::string& out_dir) {
  std::map<std::string, std::string> manifest;
  for (const auto& p : site.pages) {
    const auto rel = rel_path_for(p.url);
    const auto full = std::filesystem::path(out_dir) / rel;
    std::filesystem::create_directories(full.parent_path());
    text::write_file(full.string(), p.html);
    manifest[p.url] = rel;
  }
  return manifest;
}

std::pair<std::map<std::string, std::string>, GroundTruth> generate_site(const SiteSpec& spec,
                                                                         const std::string& out_dir,
                                                                         const NamePools& pools) {
  auto site = render_site(spec, pools);
  auto m = write_site(site, out_dir);
  return {std::move(m), std::move(site.truth)};
}

std::array<int, 4> allocate_styles(int n, const StyleMix& mix) {
  if (n < 0) throw std::invalid_argument("negative corpus size");
  const double total = std::accumulate(mix.weight.begin(), mix.weight.end(), 0.0);
  if (total <= 0) throw std::invalid_argument("style mix has no weight");
  std::array<int, 4> out{};
  std::array<double, 4> rem{};
  int given = 0;
  for (int i = 0; i < 4; ++i) {
    const double share = n * mix.weight[i] / total;
    out[i] = static_cast<int>(std::floor(share));
    rem[i] = share - out[i];
    given += out[i];
  }
  int left = n - given;
  // styles with weight but no site yet come first, larger remainder first
  std::array<int, 4> order = {0, 1, 2, 3};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const bool za = out[a] == 0 && mix.weight[a] > 0, zb = out[b] == 0 && mix.weight[b] > 0;
    if (za != zb) return za;
    return rem[a] > rem[b];
  });
  for (int i = 0; left > 0; i = (i + 1) % 4) {
    if (mix.weight[order[i]] <= 0) continue;
    ++out[order[i]];
    --left;
  }
  return out;
}

std::vector<SiteSpec> plan_corpus(const CorpusOptions& opts, const NamePools& pools) {
  if (opts.n_departments < 1) throw std::invalid_argument("need at least one department");
  Rng rng(mix_seed(opts.seed, 1));
  const auto counts = allocate_styles(opts.n_departments, opts.mix);
  std::vector<SegmentKind> styles;
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < counts[k]; ++i) styles.push_back(static_cast<SegmentKind>(k));
  rng.shuffle(styles);
  NameDrawer names(pools, mix_seed(opts.seed, 2));
  std::vector<SiteSpec> specs;
  for (int i = 0; i < opts.n_departments; ++i) {
    SiteSpec s;
    s.seed = mix_seed(opts.seed, 100 + static_cast<std::uint64_t>(i));
    s.site_index = i + 1;
    s.style = styles[i];
    s.n_faculty = rng.between(12, 40);
    s.n_nonttt = rng.between(2, 8);
    s.heading_titles = s.style == SegmentKind::List && rng.chance(0.5);
    s.n_out_of_field = !s.heading_titles && rng.chance(0.15) ? rng.between(2, 4) : 0;
    s.paginated = !s.heading_titles && s.n_faculty >= 20 && rng.chance(0.25);
    const double o = rng.uniform();
    s.obfuscate_email = o < 0.7 ? Obfuscation::None : o < 0.9 ? Obfuscation::AtDot : Obfuscation::SuffixStripped;
    s.distractor_pages = rng.between(3, 7);
    const double d = rng.uniform();
    s.link_depth_to_directory = d < 0.4 ? 1 : d < 0.8 ? 2 : 3;
    s.roster = draw_roster(s, names);
    specs.push_back(std::move(s));
  }
  return specs;
}

Corpus build_corpus(const std::vector<SiteSpec>& specs, const NamePools& pools) {
  Corpus c;
  c.sites.resize(specs.size());
  const auto n = static_cast<std::ptrdiff_t>(specs.size());
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      c.sites[i] = render_site(specs[i], pools);
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return c;
}

LabeledDataset corpus_features(const Corpus& c, const Lexicons& lex) {
  std::vector<const SitePage*> pages;
  for (const auto& s : c.sites) {
    const auto& d = s.truth.directory_pages;
    for (const auto& p : s.pages) {
      if (p.html.rfind("%PDF", 0) == 0) continue;
      // continuation pages are reached through pagination links, never judged
      if (p.is_directory && !d.empty() && p.url != d.front()) continue;
      pages.push_back(&p);
    }
  }
  LabeledDataset d;
  d.rows.resize(pages.size());
  const auto n = static_cast<std::ptrdiff_t>(pages.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    Page pg;
    pg.url = pages[i]->url;
    pg.html = pages[i]->html;
    pg.status = PageStatus::Ok;
    d.rows[i] = LabeledRow{extract_features(pg, lex), pages[i]->is_directory, pages[i]->url};
  }
  return d;
}

CensusSnapshot truth_snapshot(const Corpus& c, const std::string& date) {
  CensusSnapshot snap;
  snap.snapshot_date = date;
  snap.tool_version = CENSUS_VERSION;
  for (const auto& s : c.sites) {
    snap.institutions.push_back(s.truth.institution);
    for (const auto& e : s.truth.roster) {
      if (!e.is_ttt) continue;
      FacultyRecord r;
      r.full_name = e.full_name;
      r.first = e.first;
      r.last = e.last;
      r.title_raw = e.title_raw;
      r.rank = e.rank;
      r.email = e.email;
      r.homepage = e.homepage;
      r.source_url = e.source_url;
      r.institution = s.truth.institution;
      snap.records.push_back(std::move(r));
    }
  }
  std::sort(snap.institutions.begin(), snap.institutions.end());
  sort_canonical(snap.records);
  return snap;
}

std::string truth_csv(const Corpus& c) {
  auto cols = census_columns();
  cols.push_back("is_ttt");
  std::vector<std::pair<std::string, csv::Row>> rows;
  for (const auto& s : c.sites)
    for (const auto& e : s.truth.roster)
      rows.push_back({s.truth.institution + "\n" + e.full_name,
                      {s.truth.institution, e.full_name, e.first, e.last, e.title_raw, std::string(to_string(e.rank)),
                       e.email, e.homepage.value_or(""), e.source_url, e.is_ttt ? "1" : "0"}});
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::string out = csv::format_row(cols);
  for (const auto& [k, r] : rows) out += csv::format_row(r);
  return out;
}

void write_corpus(const Corpus& c, const std::string& out_dir, const Lexicons& lex) {
  std::filesystem::create_directories(out_dir);
  CorpusManifest manifest;
  std::vector<std::map<std::string, std::string>> parts(c.sites.size());
  const auto n = static_cast<std::ptrdiff_t>(c.sites.size());
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      parts[i] = write_site(c.sites[i], out_dir);
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  for (const auto& p : parts)
    for (const auto& [u, rel] : p) manifest.add(u, rel);
  manifest.save((std::filesystem::path(out_dir) / "manifest.json").string());

  std::string homes, nav = csv::format_row({"institution", "homepage", "directory_url", "shortest_path"});
  for (const auto& s : c.sites) {
    homes += s.truth.institution + "\t" + s.truth.homepage + "\n";
    nav += csv::format_row({s.truth.institution, s.truth.homepage, s.truth.directory_url,
                            std::to_string(s.truth.shortest_path_from_home)});
  }
  const std::filesystem::path dir(out_dir);
  text::write_file((dir / "homes.txt").string(), homes);
  text::write_file((dir / "navtruth.csv").string(), nav);
  text::write_file((dir / "truth.csv").string(), truth_csv(c));
  text::write_file((dir / "features.csv").string(), corpus_features(c, lex).to_csv());
}

Corpus generate_corpus(const CorpusOptions& opts, const std::string& out_dir, const Lexicons& lex,
                       const NamePools& pools) {
  auto c = build_corpus(plan_corpus(opts, pools), pools);
  write_corpus(c, out_dir, lex);
  return c;
}

// ---- churn ----

namespace {

constexpr std::array<Rank, 3> kRanks3 = {Rank::Asst, Rank::Assoc, Rank::Full};

struct Who {
  std::size_t site;
  std::size_t idx;
};

From as_from(Rank r) { return static_cast<From>(static_cast<int>(r) + 1); }
To as_to(Rank r) { return static_cast<To>(static_cast<int>(r)); }

RosterEntry move_entry(RosterEntry e, const SiteSpec& to_site) {
  const auto host = site_host(to_site.site_index);
  e.email = email_local(e.first, e.last) + "@" + registered_domain(host);
  if (e.homepage && e.homepage->find("github.io") == std::string::npos)
    e.homepage = fmt::format("https://{}/~{}", host, email_local(e.first, e.last));
  e.source_url.clear();
  return e;
}

}  // namespace

ChurnPair plan_churn_pair(const CorpusOptions& opts, const NamePools& pools) {
  auto old_specs = plan_corpus(opts, pools);
  Rng rng(mix_seed(opts.seed, 3));
  NameDrawer hires(pools, mix_seed(opts.seed, 4));
  for (const auto& s : old_specs)
    for (const auto& e : s.roster) hires.reserve(e.first, e.last);

  ChurnPair out;
  // gender labels on the old census
  for (auto& s : old_specs)
    for (auto& e : s.roster)
      if (e.is_ttt) e.gender = rng.chance(0.2) ? Gender::Women : Gender::Men;

  // Decide each in-sample person's fate: target rank, Gone, or a move.
  struct Fate {
    Who who;
    std::optional<Rank> to;  // nullopt = Gone
    std::optional<std::size_t> new_site;
  };
  std::vector<Fate> fates;
  for (std::size_t si = 0; si < old_specs.size(); ++si)
    for (std::size_t i = 0; i < old_specs[si].roster.size(); ++i) {
      const auto& e = old_specs[si].roster[i];
      if (!e.is_ttt) continue;
      Fate f{{si, i}, e.rank, std::nullopt};
      const double u = rng.uniform();
      if (u < 0.12) {
        f.to = std::nullopt;
      } else if (u < 0.27) {
        if (e.rank != Rank::Full) f.to = e.rank == Rank::Asst ? Rank::Assoc : Rank::Full;
      } else if (u < 0.30) {
        f.to = rng.pick(std::vector<Rank>(kRanks3.begin(), kRanks3.end()));
      }
      if (f.to && old_specs.size() > 1 && rng.chance(0.04)) {
        auto t = rng.below(old_specs.size() - 1);
        f.new_site = t >= si ? t + 1 : t;
      }
      fates.push_back(f);
    }
  // Force at least one of every rank->rank and rank->Gone transition.
  auto count = [&](Rank a, std::optional<Rank> b) {
    return std::count_if(fates.begin(), fates.end(), [&](const Fate& f) {
      return old_specs[f.who.site].roster[f.who.idx].rank == a && f.to == b;
    });
  };
  for (Rank a : kRanks3) {
    std::vector<std::optional<Rank>> targets = {Rank::Asst, Rank::Assoc, Rank::Full, std::nullopt};
    for (const auto& b : targets) {
      if (count(a, b) > 0) continue;
      // take someone of rank a whose fate is the most common one for a
      for (auto& f : fates) {
        if (old_specs[f.who.site].roster[f.who.idx].rank != a || f.to != a || count(a, a) < 2) continue;
        f.to = b;
        break;
      }
    }
  }

  std::vector<std::vector<RosterEntry>> new_rosters(old_specs.size());
  for (std::size_t si = 0; si < old_specs.size(); ++si)
    for (const auto& e : old_specs[si].roster)
      if (!e.is_ttt) new_rosters[si].push_back(e);
  for (const auto& f : fates) {
    const auto& e = old_specs[f.who.site].roster[f.who.idx];
    out.labels[{old_specs[f.who.site].institution.empty() ? fmt::format("University {:02d}", old_specs[f.who.site].site_index)
                                                          : old_specs[f.who.site].institution,
                text::to_lower(e.full_name)}] = *e.gender;
    if (!f.to) {
      out.transitions.at(as_from(e.rank), To::Gone) += 1;
      continue;
    }
    out.transitions.at(as_from(e.rank), as_to(*f.to)) += 1;
    auto moved = f.new_site ? move_entry(e, old_specs[*f.new_site]) : e;
    moved.gender.reset();
    moved.source_url.clear();
    if (moved.rank != *f.to) {
      moved.rank = *f.to;
      moved.title_raw = old_specs[f.who.site].heading_titles && !f.new_site ? canonical_title(*f.to)
                                                                           : rng.pick(titles_for(*f.to));
    }
    const auto dest = f.new_site.value_or(f.who.site);
    if (old_specs[dest].heading_titles) moved.title_raw = canonical_title(*f.to);
    new_rosters[dest].push_back(std::move(moved));
  }
  // New hires, at least one per rank.
  std::vector<Rank> hire_ranks = {Rank::Asst, Rank::Assoc, Rank::Full};
  for (std::size_t si = 0; si < old_specs.size(); ++si) {
    const int n = rng.between(0, 3);
    for (int i = 0; i < n; ++i) hire_ranks.push_back(rng.chance(0.6) ? Rank::Asst : rng.chance(0.5) ? Rank::Assoc : Rank::Full);
  }
  for (std::size_t h = 0; h < hire_ranks.size(); ++h) {
    const auto si = h < 3 ? rng.below(old_specs.size()) : (h - 3) % old_specs.size();
    RosterEntry e;
    auto [first, last] = hires.draw();
    e.first = first;
    e.last = last;
    e.full_name = first + " " + last;
    e.rank = hire_ranks[h];
    e.title_raw = old_specs[si].heading_titles ? canonical_title(e.rank) : rng.pick(titles_for(e.rank));
    e.email = email_local(first, last) + "@" + registered_domain(site_host(old_specs[si].site_index));
    e.is_ttt = true;
    new_rosters[si].push_back(std::move(e));
    out.transitions.at(From::New, as_to(hire_ranks[h])) += 1;
  }

  auto new_specs = old_specs;
  for (std::size_t si = 0; si < new_specs.size(); ++si) {
    new_specs[si].seed = mix_seed(old_specs[si].seed, 2017);
    new_specs[si].roster = std::move(new_rosters[si]);
    new_specs[si].n_faculty = static_cast<int>(new_specs[si].roster.size());
  }
  out.old_corpus = build_corpus(old_specs, pools);
  out.new_corpus = build_corpus(new_specs, pools);
  return out;
}

std::string transitions_csv(const TransitionTable& t) {
  std::string out = csv::format_row({"from", "to", "count"});
  for (auto f : {From::New, From::Asst, From::Assoc, From::Full})
    for (auto to : {To::Asst, To::Assoc, To::Full, To::Gone}) {
      if (f == From::New && to == To::Gone) continue;
      out += csv::format_row({std::string(to_string(f)), std::string(to_string(to)), fmt::format("{}", t.at(f, to))});
    }
  return out;
}

TransitionTable read_transitions_csv(const std::string& path) {
  const auto t = csv::read(path);
  const auto cf = t.require_column("from"), ct = t.require_column("to"), cc = t.require_column("count");
  TransitionTable out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    try {
      out.at(parse_from(t.rows[i].at(cf)), parse_to(t.rows[i].at(ct))) = std::stod(t.rows[i].at(cc));
    } catch (const std::exception& e) {
      throw FormatError(std::string("transitions row: ") + e.what(), t.lines[i]);
    }
  }
  return out;
}

ChurnPair generate_churn_pair(const CorpusOptions& opts, const std::string& out_dir, const Lexicons& lex,
                              const NamePools& pools) {
  auto pair = plan_churn_pair(opts, pools);
  const std::filesystem::path dir(out_dir);
  write_corpus(pair.old_corpus, (dir / "old").string(), lex);
  write_corpus(pair.new_corpus, (dir / "new").string(), lex);
  auto old_snap = truth_snapshot(pair.old_corpus, "2011-06-01");
  auto new_snap = truth_snapshot(pair.new_corpus, "2017-06-01");
  write_snapshot(old_snap, (dir / "old_truth.csv").string());
  write_snapshot(new_snap, (dir / "new_truth.csv").string());
  // the old census carries an extra gender column
  const auto t = csv::parse(to_csv(old_snap));
  auto header = t.header;
  header.push_back("gender");
  std::string g = csv::format_row(header);
  const auto ci = t.require_column("institution"), cn = t.require_column("full_name");
  for (auto row : t.rows) {
    const auto it = pair.labels.find({row[ci], text::to_lower(row[cn])});
    row.push_back(it == pair.labels.end() ? "" : std::string(to_string(it->second)));
    g += csv::format_row(row);
  }
  text::write_file((dir / "old_truth.csv").string(), g);
  text::write_file((dir / "transitions_truth.csv").string(), transitions_csv(pair.transitions));
  return pair;
}

}  // namespace census
