#include <doctest.h>

#include <cmath>
#include <nlohmann/json.hpp>
#include <numbers>

#include "census/diff_stats.hpp"
#include "census/errors.hpp"
#include "census/lexicon.hpp"
#include "census/rng.hpp"

using namespace census;

namespace {

const std::string& data_dir() {
  static const std::string d = default_data_dir();
  return d;
}

FacultyRecord person(const std::string& inst, const std::string& first, const std::string& last, Rank r) {
  FacultyRecord x;
  x.institution = inst;
  x.first = first;
  x.last = last;
  x.full_name = first + " " + last;
  x.rank = r;
  return x;
}

CensusSnapshot snap(std::vector<FacultyRecord> recs, const std::string& date = "2011-01-01") {
  CensusSnapshot c;
  c.snapshot_date = date;
  for (const auto& r : recs)
    if (std::find(c.institutions.begin(), c.institutions.end(), r.institution) == c.institutions.end())
      c.institutions.push_back(r.institution);
  c.records = std::move(recs);
  return c;
}

constexpr std::array<From, 4> kFrom = {From::New, From::Asst, From::Assoc, From::Full};
constexpr std::array<To, 4> kTo = {To::Asst, To::Assoc, To::Full, To::Gone};

// P(X > x) for chi-square with one degree of freedom by Simpson's rule on
// the density after substituting x = u^2, which removes the pole at zero.
double chi2_1_survival_simpson(double x) {
  const double b = std::sqrt(x);
  const int n = 20000;
  const double h = b / n;
  auto f = [](double u) { return 2.0 / std::sqrt(2.0 * std::numbers::pi) * std::exp(-u * u / 2.0); };
  double s = f(0) + f(b);
  for (int i = 1; i < n; ++i) s += f(i * h) * (i % 2 ? 4.0 : 2.0);
  return 1.0 - s * h / 3.0;
}

// Binomial pmf by the multiplicative formula.
double pmf(long k, long n, double p) {
  double c = 1.0;
  for (long i = 1; i <= k; ++i) c *= static_cast<double>(n - k + i) / static_cast<double>(i);
  return c * std::pow(p, static_cast<double>(k)) * std::pow(1 - p, static_cast<double>(n - k));
}

}  // namespace

TEST_CASE("match keys") {
  const auto k = match_key(person("a", "\xc3\x89mile", "Zola", Rank::Full));
  CHECK(k.first_initial == "\xc3\xa9");
  CHECK(k.last == "zola");
  CHECK_THROWS_AS(match_key(person("a", "", "Zola", Rank::Full)), ValidationError);
}

TEST_CASE("diff classifies people and counts transitions") {
  const auto old_s = snap({person("a", "Ann", "Lee", Rank::Asst), person("a", "Bo", "Kim", Rank::Full),
                           person("b", "Cy", "Dunn", Rank::Assoc), person("b", "Di", "Ro", Rank::Unknown)});
  const auto new_s = snap({person("a", "Ann", "Lee", Rank::Assoc), person("b", "Bo", "Kim", Rank::Full),
                           person("b", "Ed", "Fox", Rank::Asst), person("b", "Di", "Ro", Rank::Full)},
                          "2017-01-01");
  const auto d = diff(old_s, new_s);
  CHECK(d.retained.size() == 3);
  CHECK(d.new_hires.size() == 1);
  CHECK(d.departed.size() == 1);
  CHECK(d.unknown_rank == 1);
  CHECK(d.transitions.at(From::Asst, To::Assoc) == 1);
  CHECK(d.transitions.at(From::Full, To::Full) == 1);
  CHECK(d.transitions.at(From::New, To::Asst) == 1);
  CHECK(d.transitions.at(From::Assoc, To::Gone) == 1);
  CHECK(d.transitions.total() == 4);
}

TEST_CASE("shared keys are split by first name, then institution, else ambiguous") {
  auto lee_a = person("a", "Lee", "Wu", Rank::Asst);
  lee_a.full_name = "Lee A. Wu";
  auto lee_b = person("a", "Lee", "Wu", Rank::Full);
  lee_b.full_name = "Lee B. Wu";
  const auto old_s = snap({person("a", "John", "Smith", Rank::Asst), person("a", "Jane", "Smith", Rank::Full),
                           person("a", "Kim", "Park", Rank::Asst), person("b", "Kim", "Park", Rank::Full), lee_a,
                           lee_b});
  const auto new_s = snap({person("a", "John", "Smith", Rank::Assoc), person("a", "Jane", "Smith", Rank::Full),
                           person("a", "Kim", "Park", Rank::Assoc), person("b", "Kim", "Park", Rank::Full),
                           person("a", "Lee", "Wu", Rank::Full), person("c", "L.", "Wu", Rank::Full)});
  const auto d = diff(old_s, new_s);
  CHECK(d.transitions.at(From::Asst, To::Assoc) == 2);
  CHECK(d.transitions.at(From::Full, To::Full) == 2);
  CHECK(d.transitions.at(From::New, To::Full) == 1);
  REQUIRE(d.ambiguous.size() == 1);
  CHECK(d.ambiguous[0].key.last == "wu");
  CHECK(d.ambiguous[0].old_records.size() == 2);
  CHECK(d.ambiguous[0].new_records.size() == 1);
  CHECK(d.transitions.total() == 5);
}

TEST_CASE("property: swapping snapshots transposes the table") {
  Rng rng(21);
  const std::vector<Rank> ranks = {Rank::Asst, Rank::Assoc, Rank::Full};
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<FacultyRecord> a, b;
    for (int i = 0; i < 40; ++i) {
      const std::string last = "L" + std::to_string(i);
      const std::string inst = rng.chance(0.5) ? "u" : "v";
      const double u = rng.uniform();
      if (u < 0.7) a.push_back(person(inst, "F", last, rng.pick(ranks)));
      if (u > 0.2) b.push_back(person(rng.chance(0.1) ? "w" : inst, "F", last, rng.pick(ranks)));
    }
    const auto fwd = diff(snap(a), snap(b)).transitions;
    const auto back = diff(snap(b), snap(a)).transitions;
    CHECK(back == fwd.transposed());
    CHECK(back.transposed() == fwd);
  }
}

TEST_CASE("error matrix loading") {
  const auto m = ErrorRateMatrix::load(data_dir() + "/table1_error_rates.csv");
  CHECK(m.rows.size() == 15);
  CHECK(m.row_n.at({From::Full, To::Gone}) == 65);
  CHECK_NOTHROW(m.validate());
  CHECK_THROWS_AS(ErrorRateMatrix::parse("observed_from,observed_to,n,true_from,true_to,rate_percent\n"
                                         "Full,Gone,65,Full,Full,60.0\nFull,Gone,65,Full,Gone,30.0\n"),
                  ValidationError);
  CHECK_THROWS_AS(ErrorRateMatrix::parse("observed_from,observed_to,n,true_from,true_to,rate_percent\n"
                                         "Full,Gone,65,Full,Full,abc\n"),
                  FormatError);
}

TEST_CASE("identity correction is exact") {
  TransitionTable t;
  Rng rng(4);
  for (auto f : kFrom)
    for (auto to : kTo)
      if (!(f == From::New && to == To::Gone)) t.at(f, to) = rng.uniform() * 500.0;
  CHECK(correct_counts(t, ErrorRateMatrix::identity()) == t);
}

TEST_CASE("table rows redistribute observed counts") {
  const auto m = ErrorRateMatrix::load(data_dir() + "/table1_error_rates.csv");
  TransitionTable t;
  t.at(From::Full, To::Gone) = 65;
  const auto c = correct_counts(t, m);
  CHECK(std::abs(c.at(From::Full, To::Full) - 44.98) < 1e-9);
  CHECK(std::abs(c.at(From::Full, To::Gone) - 20.02) < 1e-9);
  CHECK(std::abs(c.total() - 65.0) < 1e-9);

  TransitionTable n;
  n.at(From::New, To::Assoc) = 17;
  const auto cn = correct_counts(n, m);
  CHECK(std::abs(cn.at(From::New, To::Asst) - 17 * 0.059) < 1e-9);
  CHECK(std::abs(cn.at(From::New, To::Assoc) - 17 * 0.529) < 1e-9);
  CHECK(std::abs(cn.at(From::New, To::Gone) - 17 * 0.176) < 1e-9);
  CHECK(std::abs(cn.at(From::Assoc, To::Assoc) - 17 * 0.235) < 1e-9);
}

TEST_CASE("a raw cell without an error row is an error") {
  const auto m = ErrorRateMatrix::parse(
      "observed_from,observed_to,n,true_from,true_to,rate_percent\nFull,Full,1,Full,Full,100\n");
  TransitionTable t;
  t.at(From::Asst, To::Gone) = 2;
  CHECK_THROWS_AS(correct_counts(t, m), ValidationError);
}

TEST_CASE("property: correction is linear and keeps row mass") {
  const auto m = ErrorRateMatrix::load(data_dir() + "/table1_error_rates.csv");
  Rng rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    TransitionTable a, b;
    double expected_mass = 0;
    for (auto f : kFrom)
      for (auto to : kTo) {
        if (f == From::New && to == To::Gone) continue;
        a.at(f, to) = rng.between(0, 200);
        b.at(f, to) = rng.between(0, 200);
        expected_mass += (a.at(f, to) + b.at(f, to)) * m.row_sum({f, to}) / 100.0;
      }
    const auto sum = correct_counts(a + b, m);
    const auto parts = correct_counts(a, m) + correct_counts(b, m);
    for (auto f : kFrom)
      for (auto to : kTo) CHECK(std::abs(sum.at(f, to) - parts.at(f, to)) < 1e-9);
    CHECK(std::abs(sum.total() - expected_mass) < 1e-6);
  }
}

TEST_CASE("group aggregates") {
  const auto g = aggregate_counts(1076, 4390, 478);
  CHECK(std::abs(g.overlap_rate - 0.902) <= 0.0005);
  CHECK(std::abs(g.new_rate - 0.197) <= 0.0005);
  CHECK(std::abs(g.departed_rate - 0.098) <= 0.0005);
  CHECK(g.net_growth == doctest::Approx((1076.0 - 478.0) / 4868.0));
  CHECK_THROWS_AS(aggregate_counts(3, 0, 0), UndefinedRate);

  TransitionTable t;
  t.at(From::New, To::Asst) = 2;
  t.at(From::New, To::Gone) = 5;
  t.at(From::Asst, To::Assoc) = 3;
  t.at(From::Full, To::Gone) = 1;
  const auto a = aggregate_groups(t);
  CHECK(a.new_hires == 2);
  CHECK(a.retained == 3);
  CHECK(a.departed == 1);
  CHECK(retention_rate(t, From::Asst) == 1.0);
  CHECK(retention_rate(t, From::Full) == 0.0);
}

TEST_CASE("weighted attrition from the gender table") {
  std::vector<std::string> warnings;
  const auto g = GenderTable::load(data_dir() + "/table2_gender.csv", &warnings);
  CHECK(std::abs(attrition(g, Gender::Women) - 0.137) <= 0.001);
  const double oracle = (254 * 0.074 + 174 * 0.287 + 263 * 0.098) / (254.0 + 174.0 + 263.0);
  CHECK(attrition(g, Gender::Women) == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(warnings.size() == 1);
  CHECK(warnings[0].find("men") != std::string::npos);
  CHECK(g.row(Gender::Men, Rank::Full)->p[2] == doctest::Approx(0.898));
  CHECK_THROWS_AS(attrition(GenderTable{}, Gender::Women), UndefinedRate);
}

TEST_CASE("property: attrition ignores a common scale of the counts") {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    GenderTable a, b;
    const double k = rng.between(2, 50);
    for (auto r : {Rank::Asst, Rank::Assoc, Rank::Full}) {
      GenderRow row;
      row.n = rng.between(1, 300);
      const double gone = rng.uniform();
      row.p = {0, 0, 1 - gone, gone};
      a.set(Gender::Women, r, row);
      row.n *= k;
      b.set(Gender::Women, r, row);
    }
    CHECK(attrition(a, Gender::Women) == doctest::Approx(attrition(b, Gender::Women)).epsilon(1e-12));
  }
}

TEST_CASE("exact binomial test") {
  CHECK(binomial_test(5, 10, 0.5) == 1.0);
  CHECK(std::abs(binomial_test(0, 10, 0.5) - 2.0 * std::pow(2.0, -10)) < 1e-12);
  CHECK_THROWS_AS(binomial_test(11, 10, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(binomial_test(1, 10, 1.5), std::invalid_argument);
}

TEST_CASE("property: binomial test against enumeration, symmetric in k for p = 1/2") {
  for (long n = 1; n <= 30; ++n) {
    for (long k = 0; k <= n; ++k) {
      CHECK(binomial_test(k, n, 0.5) == doctest::Approx(binomial_test(n - k, n, 0.5)).epsilon(1e-12));
      for (double p : {0.2, 0.5, 0.73}) {
        const double pk = pmf(k, n, p);
        double oracle = 0;
        for (long i = 0; i <= n; ++i)
          if (pmf(i, n, p) <= pk * (1 + 1e-7)) oracle += pmf(i, n, p);
        CHECK(binomial_test(k, n, p) == doctest::Approx(std::min(1.0, oracle)).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("chi-square test") {
  const auto r = chi_square_test({{{10, 0}, {0, 10}}});
  CHECK(r.statistic == 20.0);
  CHECK(std::abs(chi2_survival(3.841, 1) - 0.05) < 0.001);
  CHECK(std::abs(chi2_survival(3.841, 1) - chi2_1_survival_simpson(3.841)) < 1e-9);
  CHECK(chi_square_test({{{5, 5}, {5, 5}}}).statistic == 0.0);
  CHECK_THROWS_AS(chi_square_test({{{0, 0}, {1, 1}}}), std::invalid_argument);
  CHECK_THROWS_AS(chi_square_test({{{-1, 2}, {1, 1}}}), std::invalid_argument);
}

TEST_CASE("property: chi-square survival matches closed forms") {
  for (double x = 0.1; x < 30; x += 0.7) {
    CHECK(chi2_survival(x, 1) == doctest::Approx(std::erfc(std::sqrt(x / 2))).epsilon(1e-10));
    CHECK(chi2_survival(x, 2) == doctest::Approx(std::exp(-x / 2)).epsilon(1e-10));
    CHECK(std::abs(chi2_survival(x, 1) - chi2_1_survival_simpson(x)) < 1e-8);
  }
  CHECK(gamma_q(1.0, 0.0) == 1.0);
}

TEST_CASE("report document") {
  const auto old_s = snap({person("a", "Ann", "Lee", Rank::Asst), person("a", "Bo", "Kim", Rank::Full)});
  const auto new_s = snap({person("a", "Ann", "Lee", Rank::Assoc), person("a", "Cy", "Dunn", Rank::Asst)},
                          "2017-01-01");
  const auto j = nlohmann::json::parse(retention_report(old_s, new_s, ErrorRateMatrix::identity()));
  CHECK(j["groups"]["retained"] == 1);
  CHECK(j["groups"]["new_hires"] == 1);
  CHECK(j["groups"]["departed"] == 1);
  CHECK(j["gender"].is_null());
  const auto text = render_report(j.dump());
  CHECK(text.find("2011-01-01 -> 2017-01-01") != std::string::npos);
}
