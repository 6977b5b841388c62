#include "census/filter.hpp"

#include <map>
#include <stdexcept>

#include "census/csv.hpp"
#include "census/errors.hpp"
#include "census/text.hpp"

namespace census {

bool is_ttt(std::string_view title_raw, const TitleBlacklist& bl) { return !bl.any_in(title_raw); }

bool is_in_field(std::string_view title_raw, const ComputingKeywords& kw) {
  const auto t = " " + text::collapse_whitespace(text::to_lower(title_raw)) + " ";
  const bool qualified = t.find(" of ") != std::string::npos || t.find(" from ") != std::string::npos ||
                         t.find(" in ") != std::string::npos;
  return !qualified || kw.any_in(t);
}

Rank classify_rank(std::string_view title_raw) {
  if (text::contains_ci(title_raw, "assistant professor")) return Rank::Asst;
  if (text::contains_ci(title_raw, "associate professor")) return Rank::Assoc;
  if (text::contains_ci(title_raw, "professor")) return Rank::Full;
  return Rank::Unknown;
}

std::string_view to_string(RejectReason r) {
  switch (r) {
    case RejectReason::BlacklistedTitle:
      return "blacklisted-title";
    case RejectReason::OutOfField:
      return "out-of-field";
    case RejectReason::NoTitle:
      return "no-title";
  }
  return "?";
}

FilterResult filter_census(const std::vector<FacultyRecord>& records, const Lexicons& lex) {
  FilterResult out;
  for (const auto& r : records) {
    if (!r.title_raw || text::trim(*r.title_raw).empty()) {
      out.rejected.push_back({r, RejectReason::NoTitle});
    } else if (!is_ttt(*r.title_raw, lex.blacklist)) {
      out.rejected.push_back({r, RejectReason::BlacklistedTitle});
    } else if (!is_in_field(*r.title_raw, lex.computing)) {
      out.rejected.push_back({r, RejectReason::OutOfField});
    } else {
      auto k = r;
      k.rank = classify_rank(*r.title_raw);
      out.kept.push_back(std::move(k));
    }
  }
  return out;
}

std::string canonical_title(Rank r) {
  switch (r) {
    case Rank::Asst:
      return "Assistant Professor";
    case Rank::Assoc:
      return "Associate Professor";
    case Rank::Full:
      return "Professor";
    case Rank::Unknown:
      break;
  }
  return "";
}

std::vector<Patch> parse_patches(std::string_view csv_text) {
  const auto t = csv::parse(csv_text);
  std::vector<Patch> out;
  if (t.header.empty()) return out;
  std::size_t ci, cn, cr;
  try {
    ci = t.require_column("institution");
    cn = t.require_column("full_name");
    cr = t.require_column("rank");
  } catch (const std::exception& e) {
    throw FormatError(std::string("patch file: ") + e.what(), 1);
  }
  const auto cnote = t.column("note");
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& row = t.rows[i];
    const std::size_t line = t.lines[i];
    if (row.size() < t.header.size()) throw FormatError("patch row has too few fields", line);
    Patch p;
    p.line = line;
    p.institution = std::string(text::trim(row[ci]));
    p.full_name = text::collapse_whitespace(row[cn]);
    if (p.institution.empty() || p.full_name.empty()) throw FormatError("patch row missing institution or name", line);
    try {
      p.rank = parse_rank(text::trim(row[cr]));
    } catch (const std::invalid_argument&) {
      throw FormatError("patch row has unknown rank '" + row[cr] + "'", line);
    }
    if (p.rank == Rank::Unknown) throw FormatError("patch rank must be Asst, Assoc or Full", line);
    if (cnote) p.note = row[*cnote];
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Patch> read_patches(const std::string& path) { return parse_patches(text::read_file(path)); }

PatchResult apply_patches(std::vector<FacultyRecord>& records, const std::vector<Patch>& patches) {
  std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> index;
  for (std::size_t i = 0; i < records.size(); ++i)
    index[{records[i].institution, name_key(records[i])}].push_back(i);
  PatchResult res;
  for (const auto& p : patches) {
    const auto it = index.find({p.institution, text::to_lower(p.full_name)});
    if (it == index.end()) {
      res.unmatched.push_back(p);
      continue;
    }
    for (auto i : it->second) {
      records[i].rank = p.rank;
      records[i].title_raw = canonical_title(p.rank);
    }
    ++res.applied;
  }
  return res;
}

}  // namespace census
