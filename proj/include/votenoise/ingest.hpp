#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "votenoise/profile.hpp"

namespace votenoise {

// Profile text format:
//
//   # candidates: <name0>,<name1>,…
//   # m: <int>
//   <multiplicity>: <idx>,<idx>,…
//
// Body lines list candidate indices most-preferred first and may be
// truncated. Blank lines are ignored. Errors are ParseError with the line.
PreferenceProfile parse_profile(std::istream& in);
PreferenceProfile read_profile_file(const std::filesystem::path& path);

// Runs of identical consecutive ballots are written once with their
// multiplicity, so parse_profile(write_profile(p)) == p. Throws
// std::invalid_argument for candidate names that cannot be represented
// (empty, containing ',' or a line break, or with surrounding whitespace).
void write_profile(std::ostream& out, const PreferenceProfile& p);
void write_profile_file(const std::filesystem::path& path, const PreferenceProfile& p);

// (ballot, multiplicity) for each run of identical consecutive ballots.
std::vector<std::pair<Ballot, std::size_t>> group_ballots(const PreferenceProfile& p);

struct RaceResultRow {
  std::string race;
  std::size_t position = 0;  // 1-based finishing position
  std::string competitor;
  std::size_t source_line = 0;  // CSV line, 0 if built in memory
};

/// One season: each race becomes a ballot over the competitors who finished.
struct RaceResultsTable {
  std::vector<RaceResultRow> rows;
};

// CSV with header containing race, position and driver (any column order).
RaceResultsTable read_race_results(std::istream& in);

// Candidates are the distinct competitors in first-appearance order; one
// ballot per race (first-appearance order) sorted by position. Throws
// ParseError on duplicate (race, position) or (race, competitor) pairs or on
// positions that are not 1…k.
PreferenceProfile races_to_profile(const RaceResultsTable& table);

struct DistrictRow {
  std::string district;
  std::string party;
  std::optional<std::uint64_t> votes;  // vote-count form
  std::optional<std::size_t> rank;     // pre-ranked form
  std::size_t source_line = 0;
};

/// First-past-the-post returns, either as vote counts or as explicit ranks.
struct DistrictReturnsTable {
  std::vector<DistrictRow> rows;
};

// CSV with header `district,party,votes` or `district,rank,party` (any
// column order).
DistrictReturnsTable read_district_returns(std::istream& in);

// Candidates are parties in first-appearance order, one ballot per district
// ordered by votes (descending) or rank. A party's Plurality score in the
// result is its seat count. Throws ParseError on duplicate parties within a
// district, tied vote counts, or non-contiguous ranks.
PreferenceProfile districts_to_profile(const DistrictReturnsTable& table);

// Ingest-time filter for elections whose ballots are too short to say much.
bool meets_min_average_length(const PreferenceProfile& p, double min_average_length) noexcept;

}  // namespace votenoise
