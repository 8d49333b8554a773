#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "votenoise/profile.hpp"
#include "votenoise/random.hpp"
#include "votenoise/robustness.hpp"
#include "votenoise/rules.hpp"

namespace votenoise {

/// Synthetic Mallows elections with vote reversal.
struct SynthSpec {
  std::size_t m = 10;
  std::size_t n = 100;
  double gen_norm_phi = 0.0;
  double reversal_prob = 0.0;
  std::optional<Ballot> central;  // defaults to 0 ≻ 1 ≻ … ≻ m−1

  void validate() const;
  Ballot central_ballot() const;
};

// n independent Mallows draws around the central order with calibrated φ,
// each reversed independently with probability reversal_prob.
PreferenceProfile generate_election(const SynthSpec& spec, Rng& rng);

struct SweepConfig {
  std::vector<RuleSpec> rules;
  std::vector<double> gen_levels;  // defaults to {i/15 : i = 0…15}
  std::vector<double> reversal_probs{0.0};
  std::size_t elections_per_level = 500;
  NoiseGrid grid = NoiseGrid::coarse(500);
  SynthSpec election;  // m, n, central; gen_norm_phi and reversal_prob are swept
  std::uint64_t seed = 0;
  std::size_t workers = 1;

  static std::vector<double> default_gen_levels();
};

/// Mean 50%-winner threshold of one rule over the elections generated at one
/// (reversal probability, generation level) cell. Sentinel thresholds
/// ("never below 50%") enter the mean as 1.0 and are counted in n_sentinel;
/// elections whose level-0 winner is tied use the lowest-index co-winner and
/// are counted in n_tied.
struct SweepRow {
  std::string rule;
  double reversal_prob = 0.0;
  double gen_level = 0.0;
  double mean_threshold = 0.0;
  double std_error = 0.0;
  std::size_t n_elections = 0;
  std::size_t n_sentinel = 0;
  std::size_t n_tied = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // ordered by reversal, gen level, rule
  // thresholds[row] = per-election thresholds (sentinel as 1.0), in election order.
  std::vector<std::vector<double>> thresholds;

  const SweepRow& row(std::string_view rule, double reversal_prob, double gen_level) const;
};

SweepResult rule_comparison_sweep(const SweepConfig& config);

// Pearson correlation coefficient. Throws std::invalid_argument on length
// mismatch or fewer than two points, UndefinedCorrelation on zero variance.
double pearson(std::span<const double> xs, std::span<const double> ys);

// Winner's score minus the best score among the other candidates (0 on a tie).
double score_difference(std::span<const double> scores);

}  // namespace votenoise
