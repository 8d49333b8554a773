#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace votenoise {

// Dense candidate index in [0, m).
using CandidateId = std::uint32_t;

// Number of discordant candidate pairs between two rankings.
using SwapDistance = std::uint64_t;

inline constexpr std::size_t kUnranked = std::numeric_limits<std::size_t>::max();

/// A strict order over a subset of the candidates, most preferred first.
/// A ballot shorter than the candidate count is top-truncated: every ranked
/// candidate is preferred to every unranked one.
class Ballot {
 public:
  Ballot() = default;

  // Throws std::invalid_argument on an empty ranking or duplicate entries.
  explicit Ballot(std::vector<CandidateId> ranking);
  Ballot(std::initializer_list<CandidateId> ranking)
      : Ballot(std::vector<CandidateId>(ranking)) {}

  std::span<const CandidateId> ranking() const noexcept { return ranking_; }
  std::size_t length() const noexcept { return ranking_.size(); }
  CandidateId operator[](std::size_t pos) const noexcept { return ranking_[pos]; }
  CandidateId top() const noexcept { return ranking_.front(); }

  bool is_complete(std::size_t m) const noexcept { return ranking_.size() == m; }

  // position[c] = 0-based rank of c, kUnranked if c is not on the ballot.
  std::vector<std::size_t> positions(std::size_t m) const;

  bool ranks_same_candidates(const Ballot& other) const;

  friend bool operator==(const Ballot&, const Ballot&) = default;
  friend auto operator<=>(const Ballot&, const Ballot&) = default;

 private:
  std::vector<CandidateId> ranking_;
};

Ballot reversed(const Ballot& b);

// Ballot ranking 0 ≻ 1 ≻ … ≻ m−1.
Ballot lexicographic_ballot(std::size_t m);

/// An election: candidate registry plus ballots kept by position.
class PreferenceProfile {
 public:
  // Throws std::invalid_argument unless n ≥ 1, m ≥ 1, names are unique and
  // every ballot only ranks ids < m.
  PreferenceProfile(std::vector<std::string> candidate_names, std::vector<Ballot> ballots);

  // Candidates named c0, c1, … .
  static PreferenceProfile with_default_names(std::size_t m, std::vector<Ballot> ballots);

  std::size_t num_candidates() const noexcept { return names_.size(); }
  std::size_t num_voters() const noexcept { return ballots_.size(); }

  const std::vector<std::string>& candidate_names() const noexcept { return names_; }
  const std::string& name(CandidateId c) const { return names_.at(c); }

  std::span<const Ballot> ballots() const noexcept { return ballots_; }
  const Ballot& ballot(std::size_t i) const { return ballots_.at(i); }

  bool is_complete() const noexcept;
  double average_ballot_length() const noexcept;

  // Same candidates, ballots replaced. Shape checks are the constructor's.
  PreferenceProfile with_ballots(std::vector<Ballot> ballots) const;

  friend bool operator==(const PreferenceProfile&, const PreferenceProfile&) = default;

 private:
  std::vector<std::string> names_;
  std::vector<Ballot> ballots_;
};

// Inversion count of a sequence of distinct keys, O(k log k) merge sort.
SwapDistance count_inversions(std::span<const std::size_t> keys);

// Kendall distance between two complete ballots over m candidates.
// Throws DistanceUndefined if either ballot is truncated or they rank
// different candidates.
SwapDistance swap_distance(const Ballot& a, const Ballot& b, std::size_t m);

// Kendall distance between two total orders of the same candidate subset.
// This is the distance a Mallows model over a truncated ballot's own
// candidates uses. Throws DistanceUndefined on mismatched sets.
SwapDistance subset_swap_distance(const Ballot& a, const Ballot& b);

// Sum of paired per-ballot distances. Both profiles must be complete.
SwapDistance election_distance(const PreferenceProfile& p, const PreferenceProfile& q);

// Every profile reachable by one adjacent swap inside one ballot, in order of
// (ballot index, swap position). Count is Σ_v (len(v) − 1).
std::vector<PreferenceProfile> single_swap_neighbors(const PreferenceProfile& p);

std::size_t single_swap_neighbor_count(const PreferenceProfile& p) noexcept;

}  // namespace votenoise
