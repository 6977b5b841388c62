#include <doctest.h>

#include <algorithm>
#include <set>
#include <stdexcept>

#include "census/lexicon.hpp"
#include "census/patterns.hpp"

using namespace census;

TEST_CASE("emails are found in text order") {
  CHECK(find_emails("write jdoe@cs.x.edu or a.b-c@mail.y.ac.uk.") ==
        std::vector<std::string>{"jdoe@cs.x.edu", "a.b-c@mail.y.ac.uk"});
  CHECK(find_emails("user@host").empty());
  CHECK(find_emails("a@b.c").empty());
  CHECK(find_emails("x@y..edu").empty());
  CHECK(find_emails("no at sign here").empty());
}

TEST_CASE("phone numbers need 7 to 15 digits") {
  CHECK(find_phones("Phone (555) 010-1234 today").size() == 1);
  CHECK(find_phones("555.010.1234 and +1 555 010 1234").size() == 2);
  CHECK(find_phones("Room 314").empty());
  CHECK(find_phones("1234567890123456").empty());
  CHECK(find_phones("ABC1234567").empty());
}

TEST_CASE("title terms count longest word-initial matches") {
  const TitleWhitelist wl({"professor", "assistant professor", "associate professor", "lecturer"});
  CHECK(count_title_terms("Assistant Professor", wl) == 1);
  CHECK(count_title_terms("Professor; Associate Professor; Lecturer", wl) == 3);
  CHECK(count_title_terms("professorship", wl) == 1);
  CHECK(count_title_terms("nonprofessor", wl) == 0);
}

TEST_CASE("capitalization") {
  CHECK(is_capitalized("Jane"));
  CHECK_FALSE(is_capitalized("jane"));
  CHECK_FALSE(is_capitalized(""));
}

TEST_CASE("phrase lists enforce lowercase unique entries") {
  CHECK_THROWS_AS(PhraseList({"Faculty"}), std::invalid_argument);
  CHECK_THROWS_AS(PhraseList({"a", "a"}), std::invalid_argument);
  CHECK_THROWS_AS(PhraseList({""}), std::invalid_argument);
  const PhraseList p({"tenure track", "staff"});
  CHECK(p.any_in("Tenure Track Faculty"));
  CHECK_FALSE(p.any_in("Professor"));
}

TEST_CASE("bundled lexicons") {
  const auto& lex = Lexicons::bundled();
  CHECK(lex.nav.size() == 25);
  for (const char* k : {"faculty", "directory", "people"}) {
    const auto& p = lex.nav.phrases();
    CHECK(std::find(p.begin(), p.end(), k) != p.end());
  }
  CHECK(lex.names.contains("Smith,"));
  CHECK(lex.names.contains("Mary-Smith"));
  CHECK_FALSE(lex.names.contains("Professor"));
  for (const auto& n : lex.names.names) {
    CHECK(n.find(' ') == std::string::npos);
    for (char c : n) CHECK_FALSE((c >= 'A' && c <= 'Z'));
  }
  const auto pools = load_name_pools(default_data_dir());
  CHECK(pools.first.size() > 100);
  CHECK(pools.last.size() > 100);
  for (const auto& f : pools.first) CHECK(lex.names.contains(f));
  for (const auto& l : pools.last) CHECK(lex.names.contains(l));
}
