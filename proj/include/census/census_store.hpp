#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "census/record.hpp"

namespace census {

enum class SourceMode { Corpus, Live };
std::string_view to_string(SourceMode m);
SourceMode parse_source_mode(std::string_view s);

struct CensusSnapshot {
  std::string snapshot_date;  // YYYY-MM-DD, empty when unknown
  std::vector<std::string> institutions;
  std::vector<FacultyRecord> records;
  std::string tool_version;
  SourceMode source_mode = SourceMode::Corpus;

  bool operator==(const CensusSnapshot&) const = default;
};

/// Column order of the CSV data contract.
const std::vector<std::string>& census_columns();

/// Throws ValidationError: bad date, unlisted institution, empty name,
/// duplicate (institution, lowercase name), malformed email.
void validate(const CensusSnapshot& c);

bool is_iso_date(std::string_view s);

/// Records ordered by institution, then full name.
void sort_canonical(std::vector<FacultyRecord>& records);

enum class SnapshotFormat { Csv, Json };
/// .json -> Json, anything else Csv.
SnapshotFormat format_for_path(const std::string& path);

std::string to_csv(const CensusSnapshot& c);
std::string to_json(const CensusSnapshot& c);
/// Extra columns are ignored. Metadata comes from `meta_json` when given,
/// otherwise institutions are taken from the records.
CensusSnapshot snapshot_from_csv(std::string_view csv_text, std::optional<std::string_view> meta_json = {});
CensusSnapshot snapshot_from_json(std::string_view json_text);

/// CSV snapshots keep their metadata in "<path>.meta.json" beside the data.
void write_snapshot(const CensusSnapshot& c, const std::string& path, SnapshotFormat fmt);
void write_snapshot(const CensusSnapshot& c, const std::string& path);
CensusSnapshot read_snapshot(const std::string& path, SnapshotFormat fmt);
CensusSnapshot read_snapshot(const std::string& path);

struct CompositionSummary {
  std::size_t total = 0;
  std::size_t ranked = 0;
  std::array<std::size_t, 4> counts{};  // indexed by Rank
  std::array<double, 3> fractions{};    // Asst, Assoc, Full over ranked records

  std::size_t count(Rank r) const { return counts[static_cast<std::size_t>(r)]; }
  double fraction(Rank r) const { return r == Rank::Unknown ? 0.0 : fractions[static_cast<std::size_t>(r)]; }
};

CompositionSummary composition_summary(const std::vector<FacultyRecord>& records);
inline CompositionSummary composition_summary(const CensusSnapshot& c) { return composition_summary(c.records); }

enum class Gender { Women, Men };
std::string_view to_string(Gender g);
/// women/woman/female/f and men/man/male/m, case-insensitive.
std::optional<Gender> parse_gender(std::string_view s);

using PersonKey = std::pair<std::string, std::string>;  // institution, lowercase full name
using GenderLabels = std::map<PersonKey, Gender>;

/// Reads the "gender" column of a census CSV. Rows with an empty or
/// unrecognized label are left unlabeled.
GenderLabels read_gender_labels(const std::string& path);
GenderLabels gender_labels_from_csv(std::string_view csv_text);

}  // namespace census
