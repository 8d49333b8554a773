#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "votenoise/mallows.hpp"
#include "votenoise/profile.hpp"
#include "votenoise/random.hpp"
#include "votenoise/rules.hpp"

namespace votenoise {

/// Noise levels (norm-φ values) and the number of perturbed elections drawn
/// at each of them.
struct NoiseGrid {
  std::vector<double> levels;
  std::size_t samples_per_level = 500;

  // {0, 0.1, …, 1}.
  static NoiseGrid coarse(std::size_t samples_per_level = 500);
  // {0.0025·i : i = 0…200}.
  static NoiseGrid fine(std::size_t samples_per_level = 10000);

  // Throws std::invalid_argument unless levels are non-empty, strictly
  // increasing, inside [0, 1], and samples_per_level ≥ 1.
  void validate() const;

  friend bool operator==(const NoiseGrid&, const NoiseGrid&) = default;
};

struct EstimateOptions {
  std::size_t workers = 1;
  LengthNormalization normalization = LengthNormalization::ballot_length;
};

/// Replaces every ballot by a Mallows sample centered at itself over its own
/// ranked candidates. Samplers are built once per distinct ballot length.
class ProfilePerturber {
 public:
  ProfilePerturber(const PreferenceProfile& profile, double norm_phi,
                   LengthNormalization normalization = LengthNormalization::ballot_length);

  const PreferenceProfile& profile() const noexcept { return *profile_; }
  double norm_phi() const noexcept { return norm_phi_; }
  // Calibrated φ used for ballots of the given length.
  double phi_for_length(std::size_t length) const;

  PreferenceProfile operator()(Rng& rng) const;

 private:
  const PreferenceProfile* profile_;
  double norm_phi_;
  std::vector<std::optional<MallowsSampler>> by_length_;
};

PreferenceProfile perturb_profile(const PreferenceProfile& p, double norm_phi, Rng& rng,
                                  LengthNormalization normalization =
                                      LengthNormalization::ballot_length);

/// Per-candidate winning-probability estimates over a noise grid.
struct RobustnessCurve {
  RuleSpec rule;
  NoiseGrid grid;
  std::uint64_t seed = 0;
  std::size_t num_candidates = 0;
  // wins[level * m + c] = #sampled elections at that level won (or co-won) by c.
  std::vector<std::uint64_t> wins;
  // Level-0 winning probabilities. Exact for deterministic rules; for STV
  // they come from random tie-break orders.
  std::vector<double> baseline;
  // Every candidate attaining the maximal baseline, ascending.
  std::vector<CandidateId> initial_winners;
  CandidateId initial_winner = 0;

  double probability(std::size_t level_index, CandidateId c) const;
  std::vector<double> probabilities(CandidateId c) const;
  bool tied() const noexcept { return initial_winners.size() > 1; }
};

// Monte Carlo estimate. The draws for sample s at level ℓ use a stream keyed
// by (seed, ℓ, s) only, so the output is identical for any worker count.
// Deterministic rules are evaluated exactly at level 0.
RobustnessCurve estimate_curve(const PreferenceProfile& p, const RuleSpec& rule,
                               const NoiseGrid& grid, std::uint64_t seed,
                               const EstimateOptions& options = {});

// Same as calling estimate_curve for each rule with the same seed, but the
// perturbed elections are drawn once and shared.
std::vector<RobustnessCurve> estimate_curves(const PreferenceProfile& p,
                                             std::span<const RuleSpec> rules,
                                             const NoiseGrid& grid, std::uint64_t seed,
                                             const EstimateOptions& options = {});

inline constexpr double kDefaultEnumerationBudget = 1e7;

// Exact winning probabilities by enumerating every combination of
// replacement ballots weighted by the Mallows pmf. STV additionally averages
// over all m! tie-break orders. Throws BudgetExceeded when the number of
// evaluated elections would exceed `budget`.
std::vector<double> exact_probability(const PreferenceProfile& p, const RuleSpec& rule,
                                      double norm_phi,
                                      LengthNormalization normalization =
                                          LengthNormalization::ballot_length,
                                      double budget = kDefaultEnumerationBudget);

struct WinnerThreshold {
  double x = 50.0;               // percent
  std::optional<double> value;   // grid level; nullopt = never dropped below x%

  double value_or_one() const noexcept { return value.value_or(1.0); }
};

// Smallest grid level at which the candidate's winning probability is below
// x/100. For STV at x = 50, an election where no candidate's level-0
// probability exceeds 50% gets threshold 0.
WinnerThreshold winner_threshold(const RobustnessCurve& curve, double x, CandidateId candidate);
WinnerThreshold winner_threshold(const RobustnessCurve& curve, double x);

// Expected number of adjacent swaps applied to the whole election at a
// noise level: Σ_v E[κ] of each ballot's perturbation.
double expected_election_swaps(const PreferenceProfile& p, double norm_phi,
                               LengthNormalization normalization =
                                   LengthNormalization::ballot_length);

}  // namespace votenoise
