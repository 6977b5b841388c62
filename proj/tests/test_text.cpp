#include <doctest.h>

#include <string>
#include <vector>

#include "census/csv.hpp"
#include "census/errors.hpp"
#include "census/rng.hpp"
#include "census/text.hpp"
#include "census/url.hpp"

using namespace census;

TEST_CASE("case-insensitive counting is left to right without overlap") {
  CHECK(text::count_ci("Faculty FACULTY faculty", "faculty") == 3);
  CHECK(text::count_ci("aaaa", "aa") == 2);
  CHECK(text::count_ci("abc", "") == 0);
  CHECK(text::contains_ci("Our People", "people"));
  CHECK_FALSE(text::contains_ci("News", "people"));
}

TEST_CASE("whitespace helpers") {
  CHECK(text::collapse_whitespace("  a \n\t b  ") == "a b");
  CHECK(text::split("a,b,,c", ',') == std::vector<std::string>{"a", "b", "", "c"});
  CHECK(text::split_whitespace(" x  y ") == std::vector<std::string>{"x", "y"});
  CHECK(text::join({"a", "b"}, "-") == "a-b");
  CHECK(text::trim("..x..", ".") == "x");
}

TEST_CASE("utf-8 sanitizing and latin-1 decoding") {
  CHECK(text::sanitize_utf8("caf\xc3\xa9") == "caf\xc3\xa9");
  CHECK(text::sanitize_utf8("a\xff" "b") == "a\xef\xbf\xbd" "b");
  CHECK(text::latin1_to_utf8("Jos\xe9") == "Jos\xc3\xa9");
}

TEST_CASE("csv round trip with quoting") {
  const csv::Row row = {"plain", "with,comma", "with \"quote\"", "multi\nline", ""};
  const auto text = csv::format_row({"a", "b", "c", "d", "e"}) + csv::format_row(row);
  const auto t = csv::parse(text);
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0] == row);
  CHECK(t.require_column("c") == 2);
  CHECK_FALSE(t.column("zz").has_value());
  CHECK_THROWS(t.require_column("zz"));
}

TEST_CASE("csv records source lines and skips blank lines") {
  const auto t = csv::parse("h1,h2\r\n\r\nx,y\r\n\"p\nq\",z\r\nlast,row\n");
  REQUIRE(t.rows.size() == 3);
  CHECK(t.lines[0] == 3);
  CHECK(t.lines[1] == 4);
  CHECK(t.lines[2] == 6);
}

TEST_CASE("url normalization") {
  CHECK(normalize_url("HTTPS://CS.Example.EDU:443/a/./b/../c#frag") == "https://cs.example.edu/a/c");
  CHECK(normalize_url("people?x=1", "https://cs.x.edu/about/") == "https://cs.x.edu/about/people?x=1");
  CHECK(normalize_url("/faculty", "https://cs.x.edu/about/index") == "https://cs.x.edu/faculty");
  CHECK(normalize_url("//www.x.edu/", "https://cs.x.edu/") == "https://www.x.edu/");
  CHECK(normalize_url("?page=2", "https://cs.x.edu/faculty") == "https://cs.x.edu/faculty?page=2");
  CHECK(normalize_url("http://a.edu:80//x//y") == "http://a.edu/x/y");
  CHECK_THROWS_AS(normalize_url("not a url"), MalformedUrl);
}

TEST_CASE("registered domains") {
  CHECK(registered_domain("cs.univ01.edu") == "univ01.edu");
  CHECK(registered_domain("www.cs.ox.ac.uk") == "ox.ac.uk");
  CHECK(registered_domain("10.0.0.1") == "10.0.0.1");
  CHECK(same_registered_domain("https://cs.a.edu/x", "http://www.a.edu/"));
  CHECK_FALSE(same_registered_domain("https://cs.a.edu/x", "https://a.github.io/"));
}

TEST_CASE("property: normalization is idempotent") {
  Rng rng(17);
  const std::vector<std::string> parts = {"a", "B", ".", "..", "", "x y", "%7E", "faculty", "index.html"};
  const std::vector<std::string> hosts = {"CS.Univ.edu", "cs.univ.edu:443", "www.x.ac.uk", "h.edu:8080"};
  for (int i = 0; i < 500; ++i) {
    std::string raw = rng.chance(0.5) ? "https://" : "HTTP://";
    raw += rng.pick(hosts);
    const int n = rng.between(0, 5);
    for (int k = 0; k < n; ++k) raw += "/" + rng.pick(parts);
    if (rng.chance(0.3)) raw += "?page=" + std::to_string(rng.between(1, 9));
    if (rng.chance(0.3)) raw += "#top";
    std::string once;
    try {
      once = normalize_url(raw);
    } catch (const MalformedUrl&) {
      continue;
    }
    CHECK(normalize_url(once) == once);
    CHECK(normalize_url(once, "https://other.edu/dir/") == once);
  }
}
