#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "census/census_store.hpp"
#include "census/record.hpp"

namespace census {

enum class From { New, Asst, Assoc, Full };
enum class To { Asst, Assoc, Full, Gone };

std::string_view to_string(From f);
std::string_view to_string(To t);
From parse_from(std::string_view s);  // throws std::invalid_argument
To parse_to(std::string_view s);

struct Transition {
  From from;
  To to;
  auto operator<=>(const Transition&) const = default;
};
std::string to_string(Transition t);

struct MatchKey {
  std::string first_initial;  // one lowercase character (one code point)
  std::string last;
  auto operator<=>(const MatchKey&) const = default;
};

/// Throws ValidationError when first or last is empty.
MatchKey match_key(const FacultyRecord& r);

/// Counts over {New, Asst, Assoc, Full} x {Asst, Assoc, Full, Gone}.
struct TransitionTable {
  std::array<std::array<double, 4>, 4> counts{};

  double& at(From f, To t) { return counts[static_cast<int>(f)][static_cast<int>(t)]; }
  double at(From f, To t) const { return counts[static_cast<int>(f)][static_cast<int>(t)]; }
  double& at(Transition t) { return at(t.from, t.to); }
  double at(Transition t) const { return at(t.from, t.to); }
  double total() const;
  double row_total(From f) const;

  /// The table of the reversed comparison: a->b becomes b->a,
  /// New->r becomes r->Gone and r->Gone becomes New->r.
  TransitionTable transposed() const;

  TransitionTable operator+(const TransitionTable& o) const;
  bool operator==(const TransitionTable&) const = default;
};

struct AmbiguousMatch {
  MatchKey key;
  std::vector<FacultyRecord> old_records;
  std::vector<FacultyRecord> new_records;
};

struct DiffResult {
  std::vector<std::pair<FacultyRecord, FacultyRecord>> retained;  // (old, new)
  std::vector<FacultyRecord> new_hires;
  std::vector<FacultyRecord> departed;
  std::vector<AmbiguousMatch> ambiguous;
  std::size_t unknown_rank = 0;  // people left out of the table for an Unknown rank
  TransitionTable transitions;
};

/// Matches people across all institutions by (first initial, last name).
/// Keys shared by several people in a snapshot are split by full first
/// name, then by institution; what is still shared is reported as ambiguous
/// and left out of the groups and the table.
DiffResult diff(const CensusSnapshot& old_snap, const CensusSnapshot& new_snap);

/// Row-stochastic (in percent) map from observed to true transitions.
struct ErrorRateMatrix {
  std::map<Transition, std::map<Transition, double>> rows;
  std::map<Transition, int> row_n;

  /// Loads observed_from,observed_to,n,true_from,true_to,rate_percent.
  /// Throws FormatError on bad rows, ValidationError when a row does not sum
  /// to 100 +- 0.5 or has a negative rate.
  static ErrorRateMatrix load(const std::string& path);
  static ErrorRateMatrix parse(std::string_view csv_text);
  /// Each of the 15 observable transitions maps to itself at 100%.
  static ErrorRateMatrix identity();

  double row_sum(Transition observed) const;
  void validate() const;
};

/// corrected(true) = sum over observed t of raw(t) * err[t][true] / 100.
/// Throws ValidationError naming the transition when a nonzero raw cell has
/// no row.
TransitionTable correct_counts(const TransitionTable& raw, const ErrorRateMatrix& err);

struct GroupAggregates {
  double new_hires = 0.0;
  double retained = 0.0;
  double departed = 0.0;
  double overlap_rate = 0.0;   // retained / (retained + departed)
  double new_rate = 0.0;       // new / (new + retained)
  double departed_rate = 0.0;  // departed / (retained + departed)
  double net_growth = 0.0;     // (new - departed) / (retained + departed)
};

/// New->Gone cells (mass a correction can move there) count in no group.
/// Throws UndefinedRate on a zero denominator.
GroupAggregates aggregate_groups(const TransitionTable& t);
GroupAggregates aggregate_counts(double new_hires, double retained, double departed);

/// Share of a rank's people still present (any rank) in the later snapshot.
double retention_rate(const TransitionTable& t, From rank);

struct GenderRow {
  double n = 0.0;
  std::array<double, 4> p{};  // to Asst, Assoc, Full, Gone
};

/// Transition probabilities from Asst/Assoc/Full per gender.
struct GenderTable {
  std::map<Gender, std::array<std::optional<GenderRow>, 3>> rows;

  const std::optional<GenderRow>& row(Gender g, Rank from) const;
  void set(Gender g, Rank from, GenderRow r);

  /// Loads gender,from,n,to_asst,to_assoc,to_full,to_gone. Rows whose
  /// probabilities do not sum to 1 +- 0.005 are kept verbatim; a message for
  /// each lands in `warnings`.
  static GenderTable load(const std::string& path, std::vector<std::string>* warnings = nullptr);
  static GenderTable parse(std::string_view csv_text, std::vector<std::string>* warnings = nullptr);
};

/// sum_rank n * P(rank -> Gone) / sum_rank n. Throws UndefinedRate when the
/// gender has no people.
double attrition(const GenderTable& g, Gender gender);

/// Exact two-sided binomial test: total probability of outcomes no more
/// likely than k under Binomial(n, p0). Throws std::invalid_argument.
double binomial_test(long k, long n, double p0);

struct ChiSquareResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Pearson chi-square on a 2x2 table, no continuity correction.
/// Throws std::invalid_argument on a zero margin or a negative cell.
ChiSquareResult chi_square_test(const std::array<std::array<double, 2>, 2>& table);

/// Regularized upper incomplete gamma Q(a, x).
double gamma_q(double a, double x);
/// P(X > x) for X ~ chi-square with `dof` degrees of freedom.
double chi2_survival(double x, int dof);

struct ReportOptions {
  const GenderLabels* gender_labels = nullptr;
};

/// Full comparison as a JSON document (see README for the fields).
std::string retention_report(const CensusSnapshot& old_snap, const CensusSnapshot& new_snap,
                             const ErrorRateMatrix& err, const ReportOptions& opts = {});

/// Plain-text rendering of a retention_report document.
std::string render_report(const std::string& report_json);

}  // namespace census
