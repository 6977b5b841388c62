#include "census/census_store.hpp"

#include <algorithm>
#include <filesystem>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "census/csv.hpp"
#include "census/errors.hpp"
#include "census/text.hpp"

namespace census {

using ojson = nlohmann::ordered_json;

std::string_view to_string(SourceMode m) { return m == SourceMode::Live ? "live" : "corpus"; }

SourceMode parse_source_mode(std::string_view s) {
  const auto l = text::to_lower(text::trim(s));
  if (l == "corpus") return SourceMode::Corpus;
  if (l == "live") return SourceMode::Live;
  throw ValidationError("unknown source mode '" + std::string(s) + "'");
}

const std::vector<std::string>& census_columns() {
  static const std::vector<std::string> cols = {"institution", "full_name", "first",    "last",      "title_raw",
                                                "rank",        "email",     "homepage", "source_url"};
  return cols;
}

bool is_iso_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  for (std::size_t i : {0, 1, 2, 3, 5, 6, 8, 9})
    if (!text::is_digit(s[i])) return false;
  const int month = (s[5] - '0') * 10 + (s[6] - '0');
  const int day = (s[8] - '0') * 10 + (s[9] - '0');
  return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

void validate(const CensusSnapshot& c) {
  if (!c.snapshot_date.empty() && !is_iso_date(c.snapshot_date))
    throw ValidationError("snapshot date is not YYYY-MM-DD: '" + c.snapshot_date + "'");
  const std::set<std::string> insts(c.institutions.begin(), c.institutions.end());
  std::set<PersonKey> seen;
  for (const auto& r : c.records) {
    if (text::trim(r.full_name).empty()) throw ValidationError("record without a name");
    if (!insts.count(r.institution))
      throw ValidationError("record institution '" + r.institution + "' not listed in the snapshot");
    if (!seen.insert({r.institution, name_key(r)}).second)
      throw ValidationError("duplicate person '" + r.full_name + "' at " + r.institution);
    if (r.email) {
      const auto& e = *r.email;
      if (std::count(e.begin(), e.end(), '@') != 1) throw ValidationError("malformed email '" + e + "'");
    }
  }
}

void sort_canonical(std::vector<FacultyRecord>& records) {
  std::stable_sort(records.begin(), records.end(), [](const FacultyRecord& a, const FacultyRecord& b) {
    return std::tie(a.institution, a.full_name) < std::tie(b.institution, b.full_name);
  });
}

SnapshotFormat format_for_path(const std::string& path) {
  return text::to_lower(std::filesystem::path(path).extension().string()) == ".json" ? SnapshotFormat::Json
                                                                                      : SnapshotFormat::Csv;
}

namespace {

ojson meta_of(const CensusSnapshot& c) {
  ojson j;
  j["snapshot_date"] = c.snapshot_date;
  j["institutions"] = c.institutions;
  j["tool_version"] = c.tool_version;
  j["source_mode"] = to_string(c.source_mode);
  return j;
}

void apply_meta(CensusSnapshot& c, const ojson& j) {
  c.snapshot_date = j.value("snapshot_date", "");
  c.institutions = j.value("institutions", std::vector<std::string>{});
  c.tool_version = j.value("tool_version", "");
  c.source_mode = parse_source_mode(j.value("source_mode", "corpus"));
}

ojson opt(const std::optional<std::string>& v) { return v ? ojson(*v) : ojson(nullptr); }

std::optional<std::string> opt_field(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return s;
}

}  // namespace

std::string to_csv(const CensusSnapshot& c) {
  std::string out = csv::format_row(census_columns());
  for (const auto& r : c.records)
    out += csv::format_row({r.institution, r.full_name, r.first, r.last, r.title_raw.value_or(""),
                            std::string(to_string(r.rank)), r.email.value_or(""), r.homepage.value_or(""),
                            r.source_url});
  return out;
}

std::string to_json(const CensusSnapshot& c) {
  ojson j = meta_of(c);
  ojson rs = ojson::array();
  for (const auto& r : c.records) {
    ojson o;
    o["institution"] = r.institution;
    o["full_name"] = r.full_name;
    o["first"] = r.first;
    o["last"] = r.last;
    o["title_raw"] = opt(r.title_raw);
    o["rank"] = to_string(r.rank);
    o["email"] = opt(r.email);
    o["homepage"] = opt(r.homepage);
    o["source_url"] = r.source_url;
    rs.push_back(std::move(o));
  }
  j["records"] = std::move(rs);
  return j.dump(2) + "\n";
}

CensusSnapshot snapshot_from_csv(std::string_view csv_text, std::optional<std::string_view> meta_json) {
  const auto t = csv::parse(csv_text);
  CensusSnapshot c;
  if (!t.header.empty()) {
    std::vector<std::size_t> col;
    for (const auto& name : census_columns()) {
      const auto i = t.column(name);
      if (!i) throw FormatError("census csv lacks column '" + name + "'", 1);
      col.push_back(*i);
    }
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      const auto& row = t.rows[i];
      if (row.size() < t.header.size()) throw FormatError("census row has too few fields", t.lines[i]);
      FacultyRecord r;
      r.institution = row[col[0]];
      r.full_name = row[col[1]];
      r.first = row[col[2]];
      r.last = row[col[3]];
      r.title_raw = opt_field(row[col[4]]);
      try {
        r.rank = parse_rank(row[col[5]]);
      } catch (const std::invalid_argument& e) {
        throw FormatError(e.what(), t.lines[i]);
      }
      r.email = opt_field(row[col[6]]);
      r.homepage = opt_field(row[col[7]]);
      r.source_url = row[col[8]];
      c.records.push_back(std::move(r));
    }
  }
  if (meta_json) {
    try {
      apply_meta(c, ojson::parse(*meta_json));
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("bad snapshot metadata: ") + e.what());
    }
  } else {
    std::set<std::string> insts;
    for (const auto& r : c.records) insts.insert(r.institution);
    c.institutions.assign(insts.begin(), insts.end());
  }
  return c;
}

CensusSnapshot snapshot_from_json(std::string_view json_text) {
  try {
    const auto j = ojson::parse(json_text);
    CensusSnapshot c;
    apply_meta(c, j);
    for (const auto& o : j.at("records")) {
      FacultyRecord r;
      r.institution = o.at("institution").get<std::string>();
      r.full_name = o.at("full_name").get<std::string>();
      r.first = o.value("first", "");
      r.last = o.value("last", "");
      auto get_opt = [&](const char* k) -> std::optional<std::string> {
        if (!o.contains(k) || o[k].is_null()) return std::nullopt;
        return o[k].get<std::string>();
      };
      r.title_raw = get_opt("title_raw");
      r.rank = parse_rank(o.value("rank", "Unknown"));
      r.email = get_opt("email");
      r.homepage = get_opt("homepage");
      r.source_url = o.value("source_url", "");
      c.records.push_back(std::move(r));
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad snapshot json: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ValidationError(std::string("bad snapshot json: ") + e.what());
  }
}

void write_snapshot(const CensusSnapshot& c, const std::string& path, SnapshotFormat fmt) {
  validate(c);
  if (fmt == SnapshotFormat::Json) {
    text::write_file(path, to_json(c));
  } else {
    text::write_file(path, to_csv(c));
    text::write_file(path + ".meta.json", meta_of(c).dump(2) + "\n");
  }
}

void write_snapshot(const CensusSnapshot& c, const std::string& path) { write_snapshot(c, path, format_for_path(path)); }

CensusSnapshot read_snapshot(const std::string& path, SnapshotFormat fmt) {
  const auto body = text::read_file(path);
  if (fmt == SnapshotFormat::Json) return snapshot_from_json(body);
  const auto meta = path + ".meta.json";
  if (std::filesystem::exists(meta)) {
    const auto m = text::read_file(meta);
    return snapshot_from_csv(body, std::string_view(m));
  }
  return snapshot_from_csv(body);
}

CensusSnapshot read_snapshot(const std::string& path) { return read_snapshot(path, format_for_path(path)); }

CompositionSummary composition_summary(const std::vector<FacultyRecord>& records) {
  CompositionSummary s;
  s.total = records.size();
  for (const auto& r : records) ++s.counts[static_cast<std::size_t>(r.rank)];
  s.ranked = s.total - s.count(Rank::Unknown);
  if (s.ranked > 0)
    for (std::size_t i = 0; i < 3; ++i) s.fractions[i] = static_cast<double>(s.counts[i]) / static_cast<double>(s.ranked);
  return s;
}

std::string_view to_string(Gender g) { return g == Gender::Women ? "women" : "men"; }

std::optional<Gender> parse_gender(std::string_view s) {
  const auto l = text::to_lower(text::trim(s));
  if (l == "women" || l == "woman" || l == "female" || l == "f" || l == "w") return Gender::Women;
  if (l == "men" || l == "man" || l == "male" || l == "m") return Gender::Men;
  return std::nullopt;
}

GenderLabels gender_labels_from_csv(std::string_view csv_text) {
  const auto t = csv::parse(csv_text);
  GenderLabels out;
  if (t.header.empty()) return out;
  std::size_t ci, cn, cg;
  try {
    ci = t.require_column("institution");
    cn = t.require_column("full_name");
    cg = t.require_column("gender");
  } catch (const std::exception& e) {
    throw FormatError(std::string("gender labels: ") + e.what(), 1);
  }
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& row = t.rows[i];
    if (row.size() < t.header.size()) throw FormatError("gender row has too few fields", t.lines[i]);
    if (const auto g = parse_gender(row[cg])) out[{row[ci], text::to_lower(row[cn])}] = *g;
  }
  return out;
}

GenderLabels read_gender_labels(const std::string& path) { return gender_labels_from_csv(text::read_file(path)); }

}  // namespace census
