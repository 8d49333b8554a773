#include "votenoise/profile.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_set>
#include <utility>

#include "votenoise/errors.hpp"

namespace votenoise {

Ballot::Ballot(std::vector<CandidateId> ranking) : ranking_(std::move(ranking)) {
  if (ranking_.empty()) {
    throw std::invalid_argument("ballot must rank at least one candidate");
  }
  std::vector<CandidateId> sorted = ranking_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("ballot ranks a candidate twice");
  }
}

std::vector<std::size_t> Ballot::positions(std::size_t m) const {
  std::vector<std::size_t> pos(m, kUnranked);
  for (std::size_t i = 0; i < ranking_.size(); ++i) {
    pos.at(ranking_[i]) = i;
  }
  return pos;
}

bool Ballot::ranks_same_candidates(const Ballot& other) const {
  if (length() != other.length()) return false;
  std::vector<CandidateId> a = ranking_;
  std::vector<CandidateId> b = other.ranking_;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

Ballot reversed(const Ballot& b) {
  auto r = b.ranking();
  return Ballot(std::vector<CandidateId>(r.rbegin(), r.rend()));
}

Ballot lexicographic_ballot(std::size_t m) {
  std::vector<CandidateId> r(m);
  std::iota(r.begin(), r.end(), CandidateId{0});
  return Ballot(std::move(r));
}

PreferenceProfile::PreferenceProfile(std::vector<std::string> candidate_names,
                                     std::vector<Ballot> ballots)
    : names_(std::move(candidate_names)), ballots_(std::move(ballots)) {
  if (names_.empty()) throw std::invalid_argument("profile needs at least one candidate");
  if (ballots_.empty()) throw std::invalid_argument("profile needs at least one ballot");
  std::unordered_set<std::string> seen;
  for (const auto& n : names_) {
    if (!seen.insert(n).second) {
      throw std::invalid_argument("duplicate candidate name '" + n + "'");
    }
  }
  const std::size_t m = names_.size();
  for (const auto& b : ballots_) {
    if (b.length() == 0) throw std::invalid_argument("empty ballot in profile");
    if (b.length() > m) throw std::invalid_argument("ballot longer than candidate count");
    for (CandidateId c : b.ranking()) {
      if (c >= m) throw std::invalid_argument("ballot ranks unknown candidate " + std::to_string(c));
    }
  }
}

PreferenceProfile PreferenceProfile::with_default_names(std::size_t m, std::vector<Ballot> ballots) {
  std::vector<std::string> names;
  names.reserve(m);
  for (std::size_t i = 0; i < m; ++i) names.push_back("c" + std::to_string(i));
  return PreferenceProfile(std::move(names), std::move(ballots));
}

bool PreferenceProfile::is_complete() const noexcept {
  const std::size_t m = num_candidates();
  return std::all_of(ballots_.begin(), ballots_.end(),
                     [m](const Ballot& b) { return b.is_complete(m); });
}

double PreferenceProfile::average_ballot_length() const noexcept {
  std::size_t total = 0;
  for (const auto& b : ballots_) total += b.length();
  return static_cast<double>(total) / static_cast<double>(ballots_.size());
}

PreferenceProfile PreferenceProfile::with_ballots(std::vector<Ballot> ballots) const {
  return PreferenceProfile(names_, std::move(ballots));
}

namespace {

SwapDistance merge_count(std::vector<std::size_t>& v, std::vector<std::size_t>& buf,
                         std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  SwapDistance inv = merge_count(v, buf, lo, mid) + merge_count(v, buf, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      inv += mid - i;
      buf[k++] = v[j++];
    } else {
      buf[k++] = v[i++];
    }
  }
  while (i < mid) buf[k++] = v[i++];
  while (j < hi) buf[k++] = v[j++];
  std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo),
            buf.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return inv;
}

// Positions of b's candidates within a, in b's order. Requires equal sets.
std::vector<std::size_t> relative_positions(const Ballot& a, const Ballot& b) {
  if (!a.ranks_same_candidates(b)) {
    throw DistanceUndefined("swap distance needs ballots over the same candidates");
  }
  CandidateId max_id = 0;
  for (CandidateId c : a.ranking()) max_id = std::max(max_id, c);
  const auto pos = a.positions(static_cast<std::size_t>(max_id) + 1);
  std::vector<std::size_t> keys;
  keys.reserve(b.length());
  for (CandidateId c : b.ranking()) keys.push_back(pos[c]);
  return keys;
}

}  // namespace

SwapDistance count_inversions(std::span<const std::size_t> keys) {
  std::vector<std::size_t> v(keys.begin(), keys.end());
  std::vector<std::size_t> buf(v.size());
  return merge_count(v, buf, 0, v.size());
}

SwapDistance subset_swap_distance(const Ballot& a, const Ballot& b) {
  return count_inversions(relative_positions(a, b));
}

SwapDistance swap_distance(const Ballot& a, const Ballot& b, std::size_t m) {
  if (!a.is_complete(m) || !b.is_complete(m)) {
    throw DistanceUndefined("swap distance is only defined for complete ballots");
  }
  return subset_swap_distance(a, b);
}

SwapDistance election_distance(const PreferenceProfile& p, const PreferenceProfile& q) {
  if (p.num_candidates() != q.num_candidates() || p.num_voters() != q.num_voters()) {
    throw DistanceUndefined("election distance needs profiles of equal shape");
  }
  const std::size_t m = p.num_candidates();
  SwapDistance total = 0;
  for (std::size_t i = 0; i < p.num_voters(); ++i) {
    total += swap_distance(p.ballot(i), q.ballot(i), m);
  }
  return total;
}

std::size_t single_swap_neighbor_count(const PreferenceProfile& p) noexcept {
  std::size_t count = 0;
  for (const auto& b : p.ballots()) count += b.length() - 1;
  return count;
}

std::vector<PreferenceProfile> single_swap_neighbors(const PreferenceProfile& p) {
  std::vector<PreferenceProfile> out;
  out.reserve(single_swap_neighbor_count(p));
  const auto base = p.ballots();
  for (std::size_t i = 0; i < base.size(); ++i) {
    for (std::size_t pos = 0; pos + 1 < base[i].length(); ++pos) {
      std::vector<Ballot> ballots(base.begin(), base.end());
      std::vector<CandidateId> r(base[i].ranking().begin(), base[i].ranking().end());
      std::swap(r[pos], r[pos + 1]);
      ballots[i] = Ballot(std::move(r));
      out.push_back(p.with_ballots(std::move(ballots)));
    }
  }
  return out;
}

}  // namespace votenoise
