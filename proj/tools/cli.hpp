#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "votenoise/mallows.hpp"
#include "votenoise/profile.hpp"
#include "votenoise/robustness.hpp"
#include "votenoise/rules.hpp"

namespace votenoise::cli {

inline constexpr std::string_view kToolName = "votenoise";
inline constexpr std::string_view kToolVersion = "0.1.0";

enum class Command { analyze, threshold, sweep, generate, convert, neighbors };

std::string_view to_string(Command c) noexcept;

struct RunConfig {
  Command command = Command::analyze;
  std::filesystem::path input;
  std::filesystem::path output;      // result document / CSV / profile
  std::filesystem::path csv_output;  // analyze: flat curve CSV (default: output with .csv)

  // Rule selection (analyze, threshold, neighbors).
  std::string rule = "plurality";
  std::vector<CandidateId> stv_tiebreak;  // fixes STV ties instead of random orders

  // Estimation.
  std::string grid = "coarse";  // coarse | fine
  std::optional<std::size_t> samples;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  std::vector<double> x_percents{50.0};
  LengthNormalization normalization = LengthNormalization::ballot_length;

  // sweep
  std::vector<std::string> rules{"plurality", "borda", "copeland", "bucklin", "stv"};
  bool full_scale = false;
  std::optional<std::size_t> elections;
  std::vector<double> gen_levels;  // empty: {i/15}
  std::vector<double> reversal_probs{0.0, 0.3, 0.5};

  // generate
  std::size_t m = 10;
  std::size_t n = 100;
  double gen_norm_phi = 0.0;
  double reversal_prob = 0.0;

  // convert
  std::string input_format = "districts";  // districts | races
  std::optional<double> min_average_length;
};

// Executes one command. Progress and summaries go to `out`, diagnostics to
// `err`. Returns the process exit status: 0 iff every requested output was
// written.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Building blocks, exposed for tests.
NoiseGrid grid_from_config(const RunConfig& config);
RuleSpec rule_from_config(const RunConfig& config, std::string_view name, std::size_t m);

struct NeighborReport {
  std::size_t neighbors = 0;
  std::vector<CandidateId> initial_winners;
  std::size_t winner_lost = 0;        // initial winner no longer among the winners
  std::size_t not_unique_winner = 0;  // initial winner not the sole winner
};

NeighborReport analyze_neighbors(const PreferenceProfile& p, const RuleSpec& rule);

}  // namespace votenoise::cli
