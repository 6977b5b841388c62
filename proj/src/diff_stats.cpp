#include "census/diff_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "census/csv.hpp"
#include "census/errors.hpp"
#include "census/text.hpp"

namespace census {

using ojson = nlohmann::ordered_json;

namespace {
constexpr std::array<From, 4> kFroms = {From::New, From::Asst, From::Assoc, From::Full};
constexpr std::array<To, 4> kTos = {To::Asst, To::Assoc, To::Full, To::Gone};
constexpr std::array<Rank, 3> kRanks = {Rank::Asst, Rank::Assoc, Rank::Full};

From from_rank(Rank r) { return static_cast<From>(static_cast<int>(r) + 1); }
To to_rank(Rank r) { return static_cast<To>(static_cast<int>(r)); }
}  // namespace

std::string_view to_string(From f) {
  switch (f) {
    case From::New: return "New";
    case From::Asst: return "Asst";
    case From::Assoc: return "Assoc";
    case From::Full: return "Full";
  }
  return "?";
}

std::string_view to_string(To t) {
  switch (t) {
    case To::Asst: return "Asst";
    case To::Assoc: return "Assoc";
    case To::Full: return "Full";
    case To::Gone: return "Gone";
  }
  return "?";
}

From parse_from(std::string_view s) {
  const auto l = text::to_lower(text::trim(s));
  for (auto f : kFroms)
    if (text::to_lower(to_string(f)) == l) return f;
  throw std::invalid_argument("not a source state: '" + std::string(s) + "'");
}

To parse_to(std::string_view s) {
  const auto l = text::to_lower(text::trim(s));
  for (auto t : kTos)
    if (text::to_lower(to_string(t)) == l) return t;
  throw std::invalid_argument("not a target state: '" + std::string(s) + "'");
}

std::string to_string(Transition t) { return fmt::format("{}->{}", to_string(t.from), to_string(t.to)); }

namespace {

// Lowercases a single code point from Latin-1 Supplement or Latin Extended-A;
// anything else goes through the ASCII mapping.
std::string lower_initial(std::string_view first) {
  const auto b0 = static_cast<unsigned char>(first[0]);
  std::size_t n = 1;
  if (b0 >= 0xF0) n = 4;
  else if (b0 >= 0xE0) n = 3;
  else if (b0 >= 0xC0) n = 2;
  n = std::min(n, first.size());
  if (n != 2) return text::to_lower(first.substr(0, n));
  char32_t cp = ((b0 & 0x1Fu) << 6) | (static_cast<unsigned char>(first[1]) & 0x3Fu);
  if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) cp += 0x20;
  else if (cp >= 0x100 && cp <= 0x137 && cp % 2 == 0) cp += 1;
  else if (cp >= 0x14A && cp <= 0x177 && cp % 2 == 0) cp += 1;
  std::string out;
  out += static_cast<char>(0xC0 | (cp >> 6));
  out += static_cast<char>(0x80 | (cp & 0x3F));
  return out;
}

}  // namespace

MatchKey match_key(const FacultyRecord& r) {
  const auto first = text::trim(r.first);
  const auto last = text::trim(r.last);
  if (first.empty() || last.empty())
    throw ValidationError("match key needs first and last name: '" + r.full_name + "'");
  return MatchKey{lower_initial(first), text::to_lower(last)};
}

// ---- tables ----

double TransitionTable::total() const {
  double s = 0;
  for (const auto& row : counts)
    for (double v : row) s += v;
  return s;
}

double TransitionTable::row_total(From f) const {
  double s = 0;
  for (double v : counts[static_cast<int>(f)]) s += v;
  return s;
}

TransitionTable TransitionTable::transposed() const {
  TransitionTable t;
  for (auto a : kRanks) {
    for (auto b : kRanks) t.at(from_rank(b), to_rank(a)) = at(from_rank(a), to_rank(b));
    t.at(From::New, to_rank(a)) = at(from_rank(a), To::Gone);
    t.at(from_rank(a), To::Gone) = at(From::New, to_rank(a));
  }
  t.at(From::New, To::Gone) = at(From::New, To::Gone);
  return t;
}

TransitionTable TransitionTable::operator+(const TransitionTable& o) const {
  TransitionTable t;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) t.counts[i][j] = counts[i][j] + o.counts[i][j];
  return t;
}

// ---- diff ----

namespace {

struct Entry {
  const FacultyRecord* rec;
  std::string first_lower;
};

void pair_group(const std::vector<Entry>& olds, const std::vector<Entry>& news, int level, const MatchKey& key,
                DiffResult& out) {
  if (olds.size() <= 1 && news.size() <= 1) {
    if (!olds.empty() && !news.empty()) out.retained.emplace_back(*olds[0].rec, *news[0].rec);
    else if (!olds.empty()) out.departed.push_back(*olds[0].rec);
    else if (!news.empty()) out.new_hires.push_back(*news[0].rec);
    return;
  }
  if (level == 2) {
    AmbiguousMatch a{key, {}, {}};
    for (const auto& e : olds) a.old_records.push_back(*e.rec);
    for (const auto& e : news) a.new_records.push_back(*e.rec);
    out.ambiguous.push_back(std::move(a));
    return;
  }
  auto sub = [&](const Entry& e) { return level == 0 ? e.first_lower : e.first_lower + "\n" + e.rec->institution; };
  std::map<std::string, std::pair<std::vector<Entry>, std::vector<Entry>>> parts;
  for (const auto& e : olds) parts[sub(e)].first.push_back(e);
  for (const auto& e : news) parts[sub(e)].second.push_back(e);
  for (const auto& [k, p] : parts) pair_group(p.first, p.second, level + 1, key, out);
}

}  // namespace

DiffResult diff(const CensusSnapshot& old_snap, const CensusSnapshot& new_snap) {
  std::map<MatchKey, std::pair<std::vector<Entry>, std::vector<Entry>>> groups;
  for (const auto& r : old_snap.records) groups[match_key(r)].first.push_back({&r, text::to_lower(text::trim(r.first))});
  for (const auto& r : new_snap.records) groups[match_key(r)].second.push_back({&r, text::to_lower(text::trim(r.first))});
  DiffResult out;
  for (const auto& [key, g] : groups) pair_group(g.first, g.second, 0, key, out);

  for (const auto& [o, n] : out.retained) {
    if (o.rank == Rank::Unknown || n.rank == Rank::Unknown) ++out.unknown_rank;
    else out.transitions.at(from_rank(o.rank), to_rank(n.rank)) += 1;
  }
  for (const auto& r : out.new_hires) {
    if (r.rank == Rank::Unknown) ++out.unknown_rank;
    else out.transitions.at(From::New, to_rank(r.rank)) += 1;
  }
  for (const auto& r : out.departed) {
    if (r.rank == Rank::Unknown) ++out.unknown_rank;
    else out.transitions.at(from_rank(r.rank), To::Gone) += 1;
  }
  return out;
}

// ---- error rates ----

ErrorRateMatrix ErrorRateMatrix::parse(std::string_view csv_text) {
  const auto t = csv::parse(csv_text);
  ErrorRateMatrix m;
  std::size_t c[6];
  const char* names[6] = {"observed_from", "observed_to", "n", "true_from", "true_to", "rate_percent"};
  try {
    for (int i = 0; i < 6; ++i) c[i] = t.require_column(names[i]);
  } catch (const std::exception& e) {
    throw FormatError(std::string("error-rate file: ") + e.what(), 1);
  }
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& row = t.rows[i];
    try {
      if (row.size() < t.header.size()) throw std::invalid_argument("too few fields");
      const Transition obs{parse_from(row[c[0]]), parse_to(row[c[1]])};
      const Transition tru{parse_from(row[c[3]]), parse_to(row[c[4]])};
      const int n = std::stoi(row[c[2]]);
      const double rate = std::stod(row[c[5]]);
      if (obs.from == From::New && obs.to == To::Gone) throw std::invalid_argument("New->Gone cannot be observed");
      if (m.row_n.count(obs) && m.row_n[obs] != n) throw std::invalid_argument("inconsistent n for " + to_string(obs));
      if (m.rows[obs].count(tru)) throw std::invalid_argument("duplicate entry " + to_string(obs) + " / " + to_string(tru));
      m.row_n[obs] = n;
      m.rows[obs][tru] = rate;
    } catch (const std::exception& e) {
      throw FormatError(std::string("error-rate row: ") + e.what(), t.lines[i]);
    }
  }
  m.validate();
  return m;
}

ErrorRateMatrix ErrorRateMatrix::load(const std::string& path) { return parse(text::read_file(path)); }

ErrorRateMatrix ErrorRateMatrix::identity() {
  ErrorRateMatrix m;
  for (auto f : kFroms)
    for (auto t : kTos) {
      if (f == From::New && t == To::Gone) continue;
      m.rows[{f, t}][{f, t}] = 100.0;
      m.row_n[{f, t}] = 0;
    }
  return m;
}

double ErrorRateMatrix::row_sum(Transition observed) const {
  const auto it = rows.find(observed);
  if (it == rows.end()) return 0.0;
  double s = 0;
  for (const auto& [t, v] : it->second) s += v;
  return s;
}

void ErrorRateMatrix::validate() const {
  for (const auto& [obs, row] : rows) {
    for (const auto& [t, v] : row)
      if (v < 0) throw ValidationError("negative error rate in row " + to_string(obs));
    const double s = row_sum(obs);
    if (std::abs(s - 100.0) > 0.5)
      throw ValidationError(fmt::format("error-rate row {} sums to {:.3f}, not 100", to_string(obs), s));
  }
}

TransitionTable correct_counts(const TransitionTable& raw, const ErrorRateMatrix& err) {
  TransitionTable out;
  for (auto f : kFroms)
    for (auto t : kTos) {
      const double v = raw.at(f, t);
      if (v == 0) continue;
      const auto it = err.rows.find({f, t});
      if (it == err.rows.end()) throw ValidationError("no error-rate row for observed " + to_string(Transition{f, t}));
      for (const auto& [tru, rate] : it->second) out.at(tru) += v * (rate / 100.0);
    }
  return out;
}

GroupAggregates aggregate_counts(double new_hires, double retained, double departed) {
  GroupAggregates g;
  g.new_hires = new_hires;
  g.retained = retained;
  g.departed = departed;
  if (retained + departed <= 0) throw UndefinedRate("no people in the earlier snapshot");
  if (new_hires + retained <= 0) throw UndefinedRate("no people in the later snapshot");
  g.overlap_rate = retained / (retained + departed);
  g.departed_rate = departed / (retained + departed);
  g.new_rate = new_hires / (new_hires + retained);
  g.net_growth = (new_hires - departed) / (retained + departed);
  return g;
}

GroupAggregates aggregate_groups(const TransitionTable& t) {
  double nw = 0, ret = 0, dep = 0;
  for (auto a : kRanks) {
    nw += t.at(From::New, to_rank(a));
    dep += t.at(from_rank(a), To::Gone);
    for (auto b : kRanks) ret += t.at(from_rank(a), to_rank(b));
  }
  return aggregate_counts(nw, ret, dep);
}

double retention_rate(const TransitionTable& t, From rank) {
  if (rank == From::New) throw std::invalid_argument("retention of New is undefined");
  const double total = t.row_total(rank);
  if (total <= 0) throw UndefinedRate(fmt::format("no {} people", to_string(rank)));
  return (total - t.at(rank, To::Gone)) / total;
}

// ---- gender ----

const std::optional<GenderRow>& GenderTable::row(Gender g, Rank from) const {
  static const std::optional<GenderRow> none;
  const auto it = rows.find(g);
  if (it == rows.end() || from == Rank::Unknown) return none;
  return it->second[static_cast<std::size_t>(from)];
}

void GenderTable::set(Gender g, Rank from, GenderRow r) {
  if (from == Rank::Unknown) throw std::invalid_argument("gender row needs a rank");
  rows[g][static_cast<std::size_t>(from)] = r;
}

GenderTable GenderTable::parse(std::string_view csv_text, std::vector<std::string>* warnings) {
  const auto t = csv::parse(csv_text);
  GenderTable g;
  const char* names[7] = {"gender", "from", "n", "to_asst", "to_assoc", "to_full", "to_gone"};
  std::size_t c[7];
  try {
    for (int i = 0; i < 7; ++i) c[i] = t.require_column(names[i]);
  } catch (const std::exception& e) {
    throw FormatError(std::string("gender table: ") + e.what(), 1);
  }
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& row = t.rows[i];
    try {
      if (row.size() < t.header.size()) throw std::invalid_argument("too few fields");
      const auto gender = parse_gender(row[c[0]]);
      if (!gender) throw std::invalid_argument("unknown gender '" + row[c[0]] + "'");
      const auto rank = parse_rank(row[c[1]]);
      if (rank == Rank::Unknown) throw std::invalid_argument("row needs a rank");
      GenderRow r;
      r.n = std::stod(row[c[2]]);
      double sum = 0;
      for (int k = 0; k < 4; ++k) {
        r.p[k] = std::stod(row[c[3 + k]]);
        if (r.p[k] < 0 || r.p[k] > 1) throw std::invalid_argument("probability outside [0,1]");
        sum += r.p[k];
      }
      if (r.n < 0) throw std::invalid_argument("negative n");
      if (std::abs(sum - 1.0) > 0.005 && warnings)
        warnings->push_back(fmt::format("gender table line {}: {} {} row sums to {:.3f}, kept as given", t.lines[i],
                                        to_string(*gender), to_string(rank), sum));
      g.set(*gender, rank, r);
    } catch (const std::exception& e) {
      throw FormatError(std::string("gender table row: ") + e.what(), t.lines[i]);
    }
  }
  return g;
}

GenderTable GenderTable::load(const std::string& path, std::vector<std::string>* warnings) {
  return parse(text::read_file(path), warnings);
}

double attrition(const GenderTable& g, Gender gender) {
  double num = 0, den = 0;
  for (auto r : kRanks)
    if (const auto& row = g.row(gender, r)) {
      num += row->n * row->p[3];
      den += row->n;
    }
  if (den <= 0) throw UndefinedRate(fmt::format("no {} in the gender table", to_string(gender)));
  return num / den;
}

// ---- tests ----

namespace {

double log_pmf(long i, long n, double log_p, double log_q) {
  const double lc = std::lgamma(double(n) + 1) - (std::lgamma(double(i) + 1) + std::lgamma(double(n - i) + 1));
  return lc + double(i) * log_p + double(n - i) * log_q;
}

}  // namespace

double binomial_test(long k, long n, double p0) {
  if (n < 0 || k < 0 || k > n) throw std::invalid_argument("binomial_test: need 0 <= k <= n");
  if (!(p0 > 0.0 && p0 < 1.0)) throw std::invalid_argument("binomial_test: need 0 < p0 < 1");
  // Evaluate with p0 <= 1/2 so (k, n, p0) and (n-k, n, 1-p0) share one computation.
  if (p0 > 0.5) {
    k = n - k;
    p0 = 1.0 - p0;
  }
  const double log_p = std::log(p0), log_q = std::log1p(-p0);
  std::vector<double> lp(static_cast<std::size_t>(n) + 1);
  for (long i = 0; i <= n; ++i) lp[i] = log_pmf(i, n, log_p, log_q);
  const double cut = lp[k] + 1e-7;  // relative tolerance for equal-probability outcomes
  const double top = *std::max_element(lp.begin(), lp.end());
  std::vector<double> in, out;
  for (long i = 0; i <= n; ++i) (lp[i] <= cut ? in : out).push_back(std::exp(lp[i] - top));
  auto sum = [](std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    double s = 0;
    for (double x : v) s += x;
    return s;
  };
  const double s_in = sum(in), s_out = sum(out);
  const double total = s_in + s_out;
  if (s_out == 0) return 1.0;
  if (s_in <= s_out) return std::min(1.0, s_in / total);
  return std::max(0.0, 1.0 - s_out / total);
}

double gamma_q(double a, double x) {
  if (!(a > 0) || x < 0 || std::isnan(x)) throw std::invalid_argument("gamma_q: need a > 0, x >= 0");
  if (x == 0) return 1.0;
  const double lead = -x + a * std::log(x) - std::lgamma(a);
  constexpr double eps = 1e-15;
  if (x < a + 1) {
    double term = 1.0 / a, s = term;
    for (int n = 1; n < 10000; ++n) {
      term *= x / (a + n);
      s += term;
      if (std::abs(term) < std::abs(s) * eps) break;
    }
    return std::max(0.0, 1.0 - s * std::exp(lead));
  }
  // continued fraction, modified Lentz
  constexpr double tiny = 1e-300;
  double b = x + 1 - a, c = 1 / tiny, d = 1 / b, h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1) < eps) break;
  }
  return std::exp(lead) * h;
}

double chi2_survival(double x, int dof) {
  if (dof < 1) throw std::invalid_argument("chi2_survival: dof must be >= 1");
  if (x <= 0) return 1.0;
  return gamma_q(dof / 2.0, x / 2.0);
}

ChiSquareResult chi_square_test(const std::array<std::array<double, 2>, 2>& t) {
  double rows[2] = {0, 0}, cols[2] = {0, 0}, total = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      if (t[i][j] < 0) throw std::invalid_argument("chi_square_test: negative count");
      rows[i] += t[i][j];
      cols[j] += t[i][j];
      total += t[i][j];
    }
  if (rows[0] == 0 || rows[1] == 0 || cols[0] == 0 || cols[1] == 0)
    throw std::invalid_argument("chi_square_test: degenerate margins");
  ChiSquareResult r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double e = rows[i] * cols[j] / total;
      r.statistic += (t[i][j] - e) * (t[i][j] - e) / e;
    }
  r.p_value = chi2_survival(r.statistic, 1);
  return r;
}

// ---- report ----

namespace {

ojson table_json(const TransitionTable& t) {
  ojson j;
  for (auto f : kFroms) {
    ojson row;
    for (auto to : kTos) row[std::string(to_string(to))] = t.at(f, to);
    j[std::string(to_string(f))] = std::move(row);
  }
  return j;
}

ojson person(const FacultyRecord& r) { return r.full_name + " (" + r.institution + ")"; }

struct GenderCounts {
  std::map<Gender, std::array<std::array<double, 4>, 3>> counts;
  std::size_t unlabeled = 0;
};

GenderCounts gender_counts(const DiffResult& d, const GenderLabels& labels) {
  GenderCounts gc;
  gc.counts[Gender::Women] = {};
  gc.counts[Gender::Men] = {};
  auto add = [&](const FacultyRecord& o, std::optional<Rank> to) {
    if (o.rank == Rank::Unknown || (to && *to == Rank::Unknown)) return;
    const auto it = labels.find({o.institution, name_key(o)});
    if (it == labels.end()) {
      ++gc.unlabeled;
      return;
    }
    const int col = to ? static_cast<int>(*to) : 3;
    gc.counts[it->second][static_cast<std::size_t>(o.rank)][col] += 1;
  };
  for (const auto& [o, n] : d.retained) add(o, n.rank);
  for (const auto& o : d.departed) add(o, std::nullopt);
  return gc;
}

}  // namespace

std::string retention_report(const CensusSnapshot& old_snap, const CensusSnapshot& new_snap,
                             const ErrorRateMatrix& err, const ReportOptions& opts) {
  const auto d = diff(old_snap, new_snap);
  const auto corrected = correct_counts(d.transitions, err);
  ojson j;
  std::vector<std::string> warnings;
  j["old"] = {{"snapshot_date", old_snap.snapshot_date}, {"people", old_snap.records.size()}};
  j["new"] = {{"snapshot_date", new_snap.snapshot_date}, {"people", new_snap.records.size()}};

  ojson amb = ojson::array();
  for (const auto& a : d.ambiguous) {
    ojson o;
    o["key"] = a.key.first_initial + " " + a.key.last;
    o["old"] = ojson::array();
    o["new"] = ojson::array();
    for (const auto& r : a.old_records) o["old"].push_back(person(r));
    for (const auto& r : a.new_records) o["new"].push_back(person(r));
    amb.push_back(std::move(o));
  }
  j["groups"] = {{"new_hires", d.new_hires.size()},
                 {"retained", d.retained.size()},
                 {"departed", d.departed.size()},
                 {"unknown_rank", d.unknown_rank},
                 {"ambiguous", std::move(amb)}};
  j["raw_transitions"] = table_json(d.transitions);
  j["corrected_transitions"] = table_json(corrected);

  ojson agg;
  try {
    const auto g = aggregate_groups(corrected);
    agg = {{"new_hires", g.new_hires},       {"retained", g.retained},   {"departed", g.departed},
           {"overlap_rate", g.overlap_rate}, {"new_rate", g.new_rate},   {"departed_rate", g.departed_rate},
           {"net_growth", g.net_growth}};
  } catch (const UndefinedRate& e) {
    warnings.push_back(std::string("aggregates undefined: ") + e.what());
    agg = nullptr;
  }
  j["aggregates"] = std::move(agg);
  if (corrected.at(From::New, To::Gone) > 0)
    warnings.push_back(fmt::format("correction moved {:.6g} people to New->Gone; they count in no group",
                                   corrected.at(From::New, To::Gone)));

  ojson ret;
  for (auto r : kRanks) {
    try {
      ret[std::string(to_string(r))] = retention_rate(corrected, from_rank(r));
    } catch (const UndefinedRate&) {
      ret[std::string(to_string(r))] = nullptr;
    }
  }
  j["retention_by_rank"] = std::move(ret);

  if (opts.gender_labels) {
    const auto gc = gender_counts(d, *opts.gender_labels);
    GenderTable table;
    ojson gt;
    std::map<Gender, double> gone, stayed;
    for (const auto& [g, rows] : gc.counts) {
      ojson gj;
      for (auto r : kRanks) {
        const auto& c = rows[static_cast<std::size_t>(r)];
        const double n = c[0] + c[1] + c[2] + c[3];
        gone[g] += c[3];
        stayed[g] += n - c[3];
        if (n == 0) {
          gj[std::string(to_string(r))] = nullptr;
          continue;
        }
        GenderRow row;
        row.n = n;
        for (int k = 0; k < 4; ++k) row.p[k] = c[k] / n;
        table.set(g, r, row);
        gj[std::string(to_string(r))] = {{"n", n}, {"Asst", row.p[0]}, {"Assoc", row.p[1]},
                                         {"Full", row.p[2]}, {"Gone", row.p[3]}};
      }
      gt[std::string(to_string(g))] = std::move(gj);
    }
    ojson attr;
    for (auto g : {Gender::Women, Gender::Men}) {
      try {
        attr[std::string(to_string(g))] = attrition(table, g);
      } catch (const UndefinedRate&) {
        attr[std::string(to_string(g))] = nullptr;
      }
    }
    // Women's departures against the men's attrition rate.
    ojson binom;
    const long k = std::lround(gone[Gender::Women]);
    const long n = std::lround(gone[Gender::Women] + stayed[Gender::Women]);
    const double men_n = gone[Gender::Men] + stayed[Gender::Men];
    if (n > 0 && men_n > 0) {
      const double p0 = gone[Gender::Men] / men_n;
      binom = {{"k", k}, {"n", n}, {"p0", p0}};
      if (p0 > 0 && p0 < 1) {
        binom["p_value"] = binomial_test(k, n, p0);
        binom["degenerate"] = false;
      } else {
        // Point mass: the observation either is the only possible outcome or impossible.
        const bool possible = (p0 == 0 && k == 0) || (p0 == 1 && k == n);
        binom["p_value"] = possible ? 1.0 : 0.0;
        binom["degenerate"] = true;
      }
    } else {
      binom = nullptr;
      warnings.push_back("binomial test skipped: a gender has no labeled people");
    }
    ojson chi;
    const std::array<std::array<double, 2>, 2> ct = {{{gone[Gender::Women], stayed[Gender::Women]},
                                                      {gone[Gender::Men], stayed[Gender::Men]}}};
    chi["table"] = {{ct[0][0], ct[0][1]}, {ct[1][0], ct[1][1]}};
    try {
      const auto r = chi_square_test(ct);
      chi["statistic"] = r.statistic;
      chi["p_value"] = r.p_value;
      chi["degenerate"] = false;
    } catch (const std::invalid_argument&) {
      chi["statistic"] = 0.0;
      chi["p_value"] = 1.0;
      chi["degenerate"] = true;
    }
    j["gender"] = {{"table", std::move(gt)},
                   {"attrition", std::move(attr)},
                   {"unlabeled", gc.unlabeled},
                   {"tests", {{"binomial", std::move(binom)}, {"chi_square", std::move(chi)}}}};
  } else {
    j["gender"] = nullptr;
  }
  j["warnings"] = warnings;
  return j.dump(2) + "\n";
}

std::string render_report(const std::string& report_json) {
  const auto j = ojson::parse(report_json);
  std::string out;
  auto line = [&](const std::string& s) { out += s + "\n"; };
  auto num = [](const ojson& v, int prec = 3) {
    return v.is_null() ? std::string("n/a") : fmt::format("{:.{}f}", v.get<double>(), prec);
  };
  line(fmt::format("census comparison {} -> {}", j["old"]["snapshot_date"].get<std::string>(),
                   j["new"]["snapshot_date"].get<std::string>()));
  line(fmt::format("people: {} then {}", j["old"]["people"].get<std::size_t>(), j["new"]["people"].get<std::size_t>()));
  const auto& g = j["groups"];
  line(fmt::format("matched groups: new {}  retained {}  departed {}  unknown rank {}  ambiguous keys {}",
                   g["new_hires"].get<std::size_t>(), g["retained"].get<std::size_t>(),
                   g["departed"].get<std::size_t>(), g["unknown_rank"].get<std::size_t>(), g["ambiguous"].size()));
  for (const char* name : {"raw_transitions", "corrected_transitions"}) {
    line("");
    line(std::string(name) + ":");
    line(fmt::format("  {:<6}{:>10}{:>10}{:>10}{:>10}", "from", "Asst", "Assoc", "Full", "Gone"));
    for (auto f : kFroms) {
      const auto& row = j[name][std::string(to_string(f))];
      line(fmt::format("  {:<6}{:>10.2f}{:>10.2f}{:>10.2f}{:>10.2f}", to_string(f), row["Asst"].get<double>(),
                       row["Assoc"].get<double>(), row["Full"].get<double>(), row["Gone"].get<double>()));
    }
  }
  line("");
  if (const auto& a = j["aggregates"]; !a.is_null()) {
    line(fmt::format("corrected: new {:.2f}  retained {:.2f}  departed {:.2f}", a["new_hires"].get<double>(),
                     a["retained"].get<double>(), a["departed"].get<double>()));
    line(fmt::format("overlap {}  new share {}  departed share {}  net growth {}", num(a["overlap_rate"], 4),
                     num(a["new_rate"], 4), num(a["departed_rate"], 4), num(a["net_growth"], 4)));
  }
  const auto& r = j["retention_by_rank"];
  line(fmt::format("retention by rank: Asst {}  Assoc {}  Full {}", num(r["Asst"]), num(r["Assoc"]), num(r["Full"])));
  if (const auto& gj = j["gender"]; !gj.is_null()) {
    line("");
    line(fmt::format("attrition: women {}  men {}  (unlabeled {})", num(gj["attrition"]["women"]),
                     num(gj["attrition"]["men"]), gj["unlabeled"].get<std::size_t>()));
    const auto& b = gj["tests"]["binomial"];
    if (!b.is_null())
      line(fmt::format("binomial test: k={} n={} p0={:.4f} p={:.4g}", b["k"].get<long>(), b["n"].get<long>(),
                       b["p0"].get<double>(), b["p_value"].get<double>()));
    const auto& c = gj["tests"]["chi_square"];
    line(fmt::format("chi-square test: statistic {:.4f} p={:.4g}", c["statistic"].get<double>(),
                     c["p_value"].get<double>()));
  }
  for (const auto& w : j["warnings"]) line("warning: " + w.get<std::string>());
  return out;
}

}  // namespace census
