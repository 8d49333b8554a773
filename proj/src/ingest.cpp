#include "votenoise/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string_view>
#include <unordered_map>

#include "votenoise/errors.hpp"

namespace votenoise {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

template <typename Int>
std::optional<Int> parse_int(std::string_view s) {
  s = trim(s);
  Int value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

// Header key and value from "# key: value".
std::optional<std::pair<std::string_view, std::string_view>> header_field(std::string_view line) {
  line = trim(line.substr(1));
  const auto colon = line.find(':');
  if (colon == std::string_view::npos) return std::nullopt;
  return std::make_pair(trim(line.substr(0, colon)), trim(line.substr(colon + 1)));
}

void check_writable_name(const std::string& name) {
  if (name.empty() || name.find_first_of(",\r\n") != std::string::npos ||
      trim(name) != std::string_view(name)) {
    throw std::invalid_argument("candidate name '" + name + "' cannot be written");
  }
}

// CSV records with a header row; column lookup by header name.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (!trim(line).empty()) break;
      line.clear();
    }
    if (trim(line).empty()) throw ParseError(line_no_, "missing CSV header row");
    std::string_view first = line;
    if (first.size() >= 3 && first.substr(0, 3) == "\xEF\xBB\xBF") first.remove_prefix(3);
    header_ = fields(std::string(first));
    for (auto& h : header_) {
      std::transform(h.begin(), h.end(), h.begin(), [](unsigned char ch) { return std::tolower(ch); });
    }
  }

  bool has_column(std::string_view name) const {
    return std::find(header_.begin(), header_.end(), name) != header_.end();
  }

  std::size_t column(std::string_view name) const {
    const auto it = std::find(header_.begin(), header_.end(), name);
    if (it == header_.end()) {
      throw ParseError(1, "CSV header lacks column '" + std::string(name) + "'");
    }
    return static_cast<std::size_t>(it - header_.begin());
  }

  // Next non-blank record; false at end of input.
  bool next(std::vector<std::string>& record) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      if (trim(line).empty()) continue;
      record = fields(line);
      if (record.size() != header_.size()) {
        throw ParseError(line_no_, "expected " + std::to_string(header_.size()) + " fields, got " +
                                       std::to_string(record.size()));
      }
      return true;
    }
    return false;
  }

  std::size_t line() const noexcept { return line_no_; }

 private:
  // One RFC 4180 record on a single line: quoted fields may contain commas
  // and doubled quotes. Unquoted fields are trimmed.
  std::vector<std::string> fields(const std::string& line) const {
    const std::string_view s = trim(line);
    std::vector<std::string> out;
    std::size_t i = 0;
    while (true) {
      std::string field;
      while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
      if (i < s.size() && s[i] == '"') {
        ++i;
        while (true) {
          if (i >= s.size()) throw ParseError(line_no_, "malformed CSV: unterminated quote");
          if (s[i] == '"') {
            if (i + 1 < s.size() && s[i + 1] == '"') {
              field += '"';
              i += 2;
              continue;
            }
            ++i;
            break;
          }
          field += s[i++];
        }
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        if (i < s.size() && s[i] != ',') throw ParseError(line_no_, "malformed CSV: text after closing quote");
      } else {
        const std::size_t end = std::min(s.find(',', i), s.size());
        field = std::string(trim(s.substr(i, end - i)));
        if (field.find('"') != std::string::npos) throw ParseError(line_no_, "malformed CSV: stray quote");
        i = end;
      }
      out.push_back(std::move(field));
      if (i >= s.size()) break;
      ++i;  // the comma
    }
    return out;
  }


  std::istream& in_;
  std::vector<std::string> header_;
  std::size_t line_no_ = 0;
};

// Index of `name` in `names`, appending it on first sight.
CandidateId intern(std::vector<std::string>& names,
                   std::unordered_map<std::string, CandidateId>& index, const std::string& name) {
  auto [it, inserted] = index.emplace(name, static_cast<CandidateId>(names.size()));
  if (inserted) names.push_back(name);
  return it->second;
}

}  // namespace

PreferenceProfile parse_profile(std::istream& in) {
  std::optional<std::vector<std::string>> names;
  std::optional<std::size_t> m;
  std::vector<std::pair<std::size_t, std::vector<CandidateId>>> body;  // line, ranking
  std::vector<std::size_t> multiplicity;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (!body.empty()) throw ParseError(line_no, "header line after ballots");
      const auto field = header_field(line);
      if (!field) throw ParseError(line_no, "malformed header line");
      const auto [key, value] = *field;
      if (key == "candidates") {
        if (names) throw ParseError(line_no, "duplicate candidates header");
        names.emplace();
        for (auto part : split(value, ',')) {
          if (part.empty()) throw ParseError(line_no, "empty candidate name");
          names->emplace_back(part);
        }
      } else if (key == "m") {
        if (m) throw ParseError(line_no, "duplicate m header");
        m = parse_int<std::size_t>(value);
        if (!m || *m == 0) throw ParseError(line_no, "m must be a positive integer");
      } else {
        throw ParseError(line_no, "unknown header '" + std::string(key) + "'");
      }
      continue;
    }
    if (!names || !m) throw ParseError(line_no, "ballot before candidates and m headers");
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError(line_no, "expected '<multiplicity>: <ranking>'");
    const auto count = parse_int<std::size_t>(line.substr(0, colon));
    if (!count || *count == 0) throw ParseError(line_no, "multiplicity must be a positive integer");
    std::vector<CandidateId> ranking;
    std::vector<bool> seen(*m, false);
    for (auto part : split(line.substr(colon + 1), ',')) {
      const auto idx = parse_int<CandidateId>(part);
      if (!idx) throw ParseError(line_no, "invalid candidate index '" + std::string(part) + "'");
      if (*idx >= *m) throw ParseError(line_no, "candidate index " + std::to_string(*idx) + " out of range");
      if (seen[*idx]) throw ParseError(line_no, "candidate " + std::to_string(*idx) + " ranked twice");
      seen[*idx] = true;
      ranking.push_back(*idx);
    }
    body.emplace_back(line_no, std::move(ranking));
    multiplicity.push_back(*count);
  }
  if (!names || !m) throw ParseError(0, "missing candidates or m header");
  if (names->size() != *m) {
    throw ParseError(0, "header lists " + std::to_string(names->size()) + " candidates but m = " +
                            std::to_string(*m));
  }
  if (body.empty()) throw ParseError(0, "profile has no ballots");
  std::vector<Ballot> ballots;
  for (std::size_t i = 0; i < body.size(); ++i) {
    const Ballot b(body[i].second);
    ballots.insert(ballots.end(), multiplicity[i], b);
  }
  try {
    return PreferenceProfile(std::move(*names), std::move(ballots));
  } catch (const std::invalid_argument& e) {
    throw ParseError(0, e.what());
  }
}

PreferenceProfile read_profile_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return parse_profile(in);
}

std::vector<std::pair<Ballot, std::size_t>> group_ballots(const PreferenceProfile& p) {
  std::vector<std::pair<Ballot, std::size_t>> runs;
  for (const auto& b : p.ballots()) {
    if (!runs.empty() && runs.back().first == b) {
      ++runs.back().second;
    } else {
      runs.emplace_back(b, 1);
    }
  }
  return runs;
}

void write_profile(std::ostream& out, const PreferenceProfile& p) {
  out << "# candidates: ";
  for (std::size_t c = 0; c < p.num_candidates(); ++c) {
    check_writable_name(p.candidate_names()[c]);
    out << (c ? "," : "") << p.candidate_names()[c];
  }
  out << "\n# m: " << p.num_candidates() << '\n';
  for (const auto& [b, count] : group_ballots(p)) {
    out << count << ": ";
    for (std::size_t i = 0; i < b.length(); ++i) out << (i ? "," : "") << b[i];
    out << '\n';
  }
}

void write_profile_file(const std::filesystem::path& path, const PreferenceProfile& p) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_profile(out, p);
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

RaceResultsTable read_race_results(std::istream& in) {
  CsvReader csv(in);
  const std::size_t race_col = csv.column("race");
  const std::size_t pos_col = csv.column("position");
  const std::size_t driver_col = csv.column("driver");
  RaceResultsTable table;
  std::vector<std::string> rec;
  while (csv.next(rec)) {
    const auto pos = parse_int<std::size_t>(rec[pos_col]);
    if (!pos || *pos == 0) throw ParseError(csv.line(), "position must be a positive integer");
    if (rec[race_col].empty() || rec[driver_col].empty()) {
      throw ParseError(csv.line(), "empty race or driver field");
    }
    table.rows.push_back({rec[race_col], *pos, rec[driver_col], csv.line()});
  }
  return table;
}

PreferenceProfile races_to_profile(const RaceResultsTable& table) {
  if (table.rows.empty()) throw ParseError(0, "race table is empty");
  std::vector<std::string> names;
  std::unordered_map<std::string, CandidateId> index;
  std::vector<std::string> races;
  std::unordered_map<std::string, std::size_t> race_index;
  std::vector<std::map<std::size_t, std::pair<CandidateId, std::size_t>>> finishes;  // position → (driver, line)
  std::vector<std::set<CandidateId>> entrants;
  for (const auto& row : table.rows) {
    const CandidateId driver = intern(names, index, row.competitor);
    auto [it, inserted] = race_index.emplace(row.race, races.size());
    if (inserted) {
      races.push_back(row.race);
      finishes.emplace_back();
      entrants.emplace_back();
    }
    const std::size_t r = it->second;
    if (!finishes[r].emplace(row.position, std::pair{driver, row.source_line}).second) {
      throw ParseError(row.source_line, "race '" + row.race + "' has two finishers at position " +
                                  std::to_string(row.position));
    }
    if (!entrants[r].insert(driver).second) {
      throw ParseError(row.source_line, "driver '" + row.competitor + "' appears twice in race '" + row.race + "'");
    }
  }
  std::vector<Ballot> ballots;
  for (std::size_t r = 0; r < races.size(); ++r) {
    std::vector<CandidateId> ranking;
    std::size_t expected = 1;
    for (const auto& [pos, entry] : finishes[r]) {
      const auto [driver, line] = entry;
      if (pos != expected++) {
        throw ParseError(line, "race '" + races[r] + "' positions are not contiguous from 1");
      }
      ranking.push_back(driver);
    }
    ballots.emplace_back(std::move(ranking));
  }
  return PreferenceProfile(std::move(names), std::move(ballots));
}

DistrictReturnsTable read_district_returns(std::istream& in) {
  CsvReader csv(in);
  const std::size_t district_col = csv.column("district");
  const std::size_t party_col = csv.column("party");
  const bool ranked = csv.has_column("rank");
  if (ranked == csv.has_column("votes")) {
    throw ParseError(1, "district CSV needs exactly one of the columns 'votes' or 'rank'");
  }
  const std::size_t value_col = csv.column(ranked ? "rank" : "votes");
  DistrictReturnsTable table;
  std::vector<std::string> rec;
  while (csv.next(rec)) {
    DistrictRow row{rec[district_col], rec[party_col], std::nullopt, std::nullopt, csv.line()};
    if (row.district.empty() || row.party.empty()) {
      throw ParseError(csv.line(), "empty district or party field");
    }
    if (ranked) {
      row.rank = parse_int<std::size_t>(rec[value_col]);
      if (!row.rank || *row.rank == 0) throw ParseError(csv.line(), "rank must be a positive integer");
    } else {
      row.votes = parse_int<std::uint64_t>(rec[value_col]);
      if (!row.votes) throw ParseError(csv.line(), "votes must be a non-negative integer");
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

PreferenceProfile districts_to_profile(const DistrictReturnsTable& table) {
  if (table.rows.empty()) throw ParseError(0, "district table is empty");
  std::vector<std::string> names;
  std::unordered_map<std::string, CandidateId> index;
  std::vector<std::string> districts;
  std::unordered_map<std::string, std::size_t> district_index;
  struct Entry {
    std::uint64_t key;  // votes or rank
    CandidateId party;
    std::size_t line;
  };
  std::vector<std::vector<Entry>> entries;
  const bool ranked = table.rows.front().rank.has_value();
  for (const auto& row : table.rows) {
    if (row.rank.has_value() != ranked || row.votes.has_value() == ranked) {
      throw ParseError(row.source_line, "district rows mix ranks and vote counts");
    }
    const CandidateId party = intern(names, index, row.party);
    auto [it, inserted] = district_index.emplace(row.district, districts.size());
    if (inserted) {
      districts.push_back(row.district);
      entries.emplace_back();
    }
    auto& list = entries[it->second];
    for (const auto& other : list) {
      if (other.party == party) {
        throw ParseError(row.source_line, "party '" + row.party + "' appears twice in district '" + row.district + "'");
      }
    }
    list.push_back({ranked ? *row.rank : *row.votes, party, row.source_line});
  }
  std::vector<Ballot> ballots;
  for (std::size_t d = 0; d < districts.size(); ++d) {
    auto list = entries[d];
    if (ranked) {
      std::stable_sort(list.begin(), list.end(),
                       [](const Entry& a, const Entry& b) { return a.key < b.key; });
      for (std::size_t i = 0; i < list.size(); ++i) {
        if (list[i].key != i + 1) {
          throw ParseError(list[i].line, "district '" + districts[d] + "' ranks are not contiguous from 1");
        }
      }
    } else {
      std::stable_sort(list.begin(), list.end(),
                       [](const Entry& a, const Entry& b) { return a.key > b.key; });
      for (std::size_t i = 1; i < list.size(); ++i) {
        if (list[i].key == list[i - 1].key) {
          throw ParseError(std::max(list[i].line, list[i - 1].line), "district '" + districts[d] + "' has tied vote counts; supply a rank column");
        }
      }
    }
    std::vector<CandidateId> ranking;
    for (const auto& e : list) ranking.push_back(e.party);
    ballots.emplace_back(std::move(ranking));
  }
  return PreferenceProfile(std::move(names), std::move(ballots));
}

bool meets_min_average_length(const PreferenceProfile& p, double min_average_length) noexcept {
  return p.average_ballot_length() >= min_average_length;
}

}  // namespace votenoise
