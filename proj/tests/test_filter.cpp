#include <doctest.h>

#include <set>

#include "census/errors.hpp"
#include "census/filter.hpp"
#include "census/rng.hpp"

using namespace census;

namespace {

FacultyRecord rec(const std::string& name, std::optional<std::string> title, const std::string& inst = "U") {
  FacultyRecord r;
  r.full_name = name;
  r.first = name.substr(0, name.find(' '));
  r.last = name.substr(name.rfind(' ') + 1);
  r.title_raw = std::move(title);
  r.rank = r.title_raw ? classify_rank(*r.title_raw) : Rank::Unknown;
  r.institution = inst;
  return r;
}

}  // namespace

TEST_CASE("tenure-track detection") {
  const auto& bl = Lexicons::bundled().blacklist;
  CHECK(is_ttt("Assistant Professor", bl));
  CHECK(is_ttt("Professor and Chair", bl));
  CHECK_FALSE(is_ttt("Adjunct Associate Professor", bl));
  CHECK_FALSE(is_ttt("Professor Emeritus", bl));
  CHECK_FALSE(is_ttt("Senior Lecturer", bl));
  CHECK_FALSE(is_ttt("Teaching Professor", bl));
  CHECK_FALSE(is_ttt("Research Associate Professor", bl));
  CHECK_FALSE(is_ttt("Visiting Assistant Professor", bl));
}

TEST_CASE("in-field check applies only to qualified titles") {
  const auto& kw = Lexicons::bundled().computing;
  CHECK(is_in_field("Professor", kw));
  CHECK(is_in_field("Professor of Computer Science", kw));
  CHECK(is_in_field("Associate Professor in Computing and Informatics", kw));
  CHECK_FALSE(is_in_field("Professor of Electrical Engineering", kw));
  CHECK_FALSE(is_in_field("Assistant Professor from Mathematics", kw));
}

TEST_CASE("rank mapping") {
  CHECK(classify_rank("Assistant Professor") == Rank::Asst);
  CHECK(classify_rank("associate professor of computing") == Rank::Assoc);
  CHECK(classify_rank("Professor and Chair") == Rank::Full);
  CHECK(classify_rank("Distinguished Professor") == Rank::Full);
  CHECK(classify_rank("Lecturer") == Rank::Unknown);
  CHECK(classify_rank("") == Rank::Unknown);
}

TEST_CASE("filtering keeps tenure-track in-field records and says why others go") {
  const std::vector<FacultyRecord> in = {rec("Ann Lee", "Professor"), rec("Bo Kim", "Lecturer"),
                                         rec("Cy Dunn", "Professor of Physics"), rec("Di Ro", std::nullopt)};
  const auto r = filter_census(in, Lexicons::bundled());
  REQUIRE(r.kept.size() == 1);
  CHECK(r.kept[0].full_name == "Ann Lee");
  REQUIRE(r.rejected.size() == 3);
  CHECK(r.rejected[0].reason == RejectReason::BlacklistedTitle);
  CHECK(r.rejected[1].reason == RejectReason::OutOfField);
  CHECK(r.rejected[2].reason == RejectReason::NoTitle);
}

TEST_CASE("property: filtering partitions its input and is idempotent") {
  const std::vector<std::string> titles = {"Professor",         "Assistant Professor", "Lecturer",
                                           "Adjunct Professor", "Professor of Physics", "Associate Professor",
                                           "Research Scientist", "Professor of Computer Science"};
  Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<FacultyRecord> in;
    const int n = rng.between(0, 40);
    for (int i = 0; i < n; ++i) {
      auto t = rng.chance(0.1) ? std::optional<std::string>{} : std::optional<std::string>{rng.pick(titles)};
      in.push_back(rec("P" + std::to_string(i) + " Q", t));
    }
    const auto r = filter_census(in, Lexicons::bundled());
    CHECK(r.kept.size() + r.rejected.size() == in.size());
    std::multiset<std::string> all, parts;
    for (const auto& x : in) all.insert(x.full_name);
    for (const auto& x : r.kept) parts.insert(x.full_name);
    for (const auto& x : r.rejected) parts.insert(x.record.full_name);
    CHECK(all == parts);
    const auto again = filter_census(r.kept, Lexicons::bundled());
    CHECK(again.kept == r.kept);
    CHECK(again.rejected.empty());
  }
}

TEST_CASE("patch files") {
  const auto patches = parse_patches(
      "institution,full_name,rank,note\n"
      "U,Ann Lee,Assoc,checked the CV\n"
      "U,Nobody Here,Full,\n");
  REQUIRE(patches.size() == 2);
  CHECK(patches[0].rank == Rank::Assoc);
  CHECK(patches[0].line == 2);
  std::vector<FacultyRecord> recs = {rec("Ann Lee", std::nullopt), rec("Ann Lee", std::nullopt, "V")};
  const auto res = apply_patches(recs, patches);
  CHECK(res.applied == 1);
  REQUIRE(res.unmatched.size() == 1);
  CHECK(res.unmatched[0].full_name == "Nobody Here");
  CHECK(recs[0].rank == Rank::Assoc);
  CHECK(recs[0].title_raw == "Associate Professor");
  CHECK(recs[1].rank == Rank::Unknown);
}

TEST_CASE("patch file errors name the line") {
  try {
    parse_patches("institution,full_name,rank,note\nU,A B,Full,\nU,C D,Emeritus,\n");
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.line == 3);
  }
  CHECK_THROWS_AS(parse_patches("institution,rank\nU,Full\n"), FormatError);
  CHECK_THROWS_AS(parse_patches("institution,full_name,rank,note\nU,,Full,\n"), FormatError);
  CHECK(canonical_title(Rank::Full) == "Professor");
}
