#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "votenoise/profile.hpp"

namespace votenoise {

enum class RuleKind { positional, copeland, bucklin, stv };

std::string_view to_string(RuleKind kind) noexcept;

/// Which rule to apply. Plurality and Borda are positional rules with the
/// usual vectors; Formula-1 presets add best-k aggregation where the season
/// used it.
struct RuleSpec {
  RuleKind kind = RuleKind::positional;
  std::string name;
  std::vector<double> scoring_vector;  // positional only, length m, non-increasing
  std::optional<std::size_t> best_k;   // positional only
  std::vector<CandidateId> stv_tiebreak;  // stv only; empty = supplied per run

  // STV without a fixed tie-break order draws a fresh random order per run.
  bool is_deterministic() const noexcept {
    return kind != RuleKind::stv || !stv_tiebreak.empty();
  }

  static RuleSpec plurality(std::size_t m);
  static RuleSpec borda(std::size_t m);
  static RuleSpec positional(std::string name, std::vector<double> scoring_vector,
                             std::optional<std::size_t> best_k = {});
  static RuleSpec copeland();
  static RuleSpec bucklin();
  static RuleSpec stv(std::vector<CandidateId> tiebreak = {});

  friend bool operator==(const RuleSpec&, const RuleSpec&) = default;
};

// Named presets: plurality, borda, copeland, bucklin, stv, f1-2018, f1-2009,
// f1-2002, f1-1990 (best 11). Formula-1 vectors are zero-padded or cut to m.
// Throws std::invalid_argument on an unknown name.
RuleSpec rule_from_name(std::string_view name, std::size_t m);

std::vector<std::string> rule_preset_names();

/// Winners plus the per-candidate record that produced them.
///   positional: summed (or best-k) score
///   copeland:   pairwise wins minus losses
///   bucklin:    score = appearances within the first i* positions, i* the
///               smallest majority depth; levels[c] = c's own majority
///               depth (0 if never reached)
///   stv:        score = elimination round (m for the survivor)
struct WinnerSet {
  std::vector<CandidateId> winners;  // ascending
  std::vector<double> scores;
  std::vector<std::size_t> levels;  // bucklin majority depths; empty otherwise

  bool contains(CandidateId c) const noexcept;
  bool is_unique() const noexcept { return winners.size() == 1; }
};

WinnerSet positional_winners(const PreferenceProfile& p, const RuleSpec& spec);
WinnerSet copeland_winners(const PreferenceProfile& p);
WinnerSet bucklin_winners(const PreferenceProfile& p);

// tiebreak must be a strict order over all m candidates, most preferred
// first; ties for elimination remove the one ranked last in it.
// Throws std::invalid_argument unless tiebreak is a permutation of 0…m−1.
void check_tiebreak(std::span<const CandidateId> tiebreak, std::size_t m);

CandidateId stv_winner(const PreferenceProfile& p, std::span<const CandidateId> tiebreak);
WinnerSet stv_winners(const PreferenceProfile& p, std::span<const CandidateId> tiebreak);

// Dispatches on spec.kind. For STV the explicit tiebreak argument wins over
// spec.stv_tiebreak; one of them must be a full order.
WinnerSet evaluate(const PreferenceProfile& p, const RuleSpec& spec,
                   std::span<const CandidateId> tiebreak = {});

// Pairwise majority matrix: wins[c*m + d] = #voters preferring c to d.
// Truncated ballots prefer ranked to unranked and abstain between two
// unranked candidates.
std::vector<std::size_t> pairwise_counts(const PreferenceProfile& p);

// Borda scores (m−1, …, 0) with truncated ballots awarding only their
// ranked positions.
std::vector<double> borda_scores(const PreferenceProfile& p);

}  // namespace votenoise
