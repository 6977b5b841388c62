#include <doctest.h>

#include <filesystem>

#include "census/errors.hpp"
#include "census/fetcher.hpp"
#include "census/text.hpp"

using namespace census;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("census_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("manifest round trip and resolution") {
  const auto d = fresh_dir("manifest");
  text::write_file((d / "home.html").string(), "<html><body>home</body></html>");
  text::write_file((d / "doc.pdf").string(), "%PDF-1.4");
  CorpusManifest m;
  m.add("HTTPS://CS.X.EDU/", "home.html");
  m.add("https://cs.x.edu/doc.pdf", "doc.pdf");
  CHECK_THROWS_AS(m.add("https://cs.x.edu", "dup.html"), ValidationError);
  m.save((d / "manifest.json").string());

  const auto loaded = CorpusManifest::load((d / "manifest.json").string());
  CHECK(loaded.entries == m.entries);
  CHECK(loaded.resolve("https://cs.x.edu/") == d / "home.html");
  CHECK_FALSE(loaded.resolve("https://cs.x.edu/missing").has_value());
}

TEST_CASE("manifest rejects missing files and bad json") {
  const auto d = fresh_dir("manifest_bad");
  text::write_file((d / "m1.json").string(), "{\"https://a.edu/\": \"nothere.html\"}");
  CHECK_THROWS_AS(CorpusManifest::load((d / "m1.json").string()), FormatError);
  text::write_file((d / "m2.json").string(), "[1,2");
  CHECK_THROWS_AS(CorpusManifest::load((d / "m2.json").string()), FormatError);
}

TEST_CASE("corpus source statuses") {
  const auto d = fresh_dir("source");
  text::write_file((d / "a.html").string(), "<p>caf\xc3\xa9</p>");
  text::write_file((d / "b.pdf").string(), "%PDF");
  auto m = std::make_shared<CorpusManifest>();
  m->root = d;
  m->add("https://a.edu/a", "a.html");
  m->add("https://a.edu/b.pdf", "b.pdf");
  m->add("https://a.edu/gone", "gone.html");
  CorpusSource src(m);
  const auto ok = src.get("https://a.edu/a");
  CHECK(ok.status == PageStatus::Ok);
  CHECK(ok.html == "<p>caf\xc3\xa9</p>");
  CHECK(src.get("https://a.edu/a").html == ok.html);
  CHECK(src.get("https://a.edu/b.pdf").status == PageStatus::NonHtml);
  CHECK(src.get("https://a.edu/gone").status == PageStatus::NotFound);
  CHECK(src.get("https://a.edu/none").status == PageStatus::NotFound);
}

TEST_CASE("fetcher enforces budget and scope and logs order") {
  MemorySource src;
  src.add("https://cs.a.edu/", "<p>home</p>");
  src.add("https://cs.a.edu/x", "<p>x</p>");
  FetchPolicy p;
  p.max_pages_per_department = 2;
  Fetcher f(src, p, "https://cs.a.edu/");
  CHECK(f.in_scope("https://www.a.edu/about"));
  CHECK_FALSE(f.in_scope("https://twitter.com/a"));
  CHECK_THROWS_AS(f.fetch("https://twitter.com/a"), OutOfScope);
  const auto home = f.fetch("https://cs.a.edu/");
  CHECK(home.status == PageStatus::Ok);
  const auto miss = f.fetch("https://cs.a.edu/missing", "https://cs.a.edu/", 1);
  CHECK(miss.status == PageStatus::NotFound);
  CHECK(miss.referrer == "https://cs.a.edu/");
  CHECK(miss.depth == 1);
  CHECK_THROWS_AS(f.fetch("https://cs.a.edu/x"), BudgetExhausted);
  CHECK(f.log() == std::vector<std::string>{"https://cs.a.edu/", "https://cs.a.edu/missing"});
}

TEST_CASE("policy validation") {
  FetchPolicy p;
  CHECK_NOTHROW(p.validate());
  p.max_pages_per_department = 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.max_pages_per_department = 1;
  p.min_delay_between_requests_per_host = std::chrono::milliseconds(-1);
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("source specs") {
  FetchPolicy p;
  CHECK(make_source("live", p) != nullptr);
  CHECK_THROWS(make_source("ftp:whatever", p));
  CHECK_THROWS(make_source("corpus:/nonexistent/manifest.json", p));
}

TEST_CASE("body decoding by charset") {
  CHECK(decode_body("Jos\xe9", "ISO-8859-1") == "Jos\xc3\xa9");
  CHECK(decode_body("Jos\xc3\xa9", "utf-8") == "Jos\xc3\xa9");
  CHECK(decode_body("bad\xff", "") == "bad\xef\xbf\xbd");
}
