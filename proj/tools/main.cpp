#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "cli.hpp"

namespace {

using votenoise::cli::Command;
using votenoise::cli::RunConfig;

void add_estimation_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--grid", cfg.grid, "Noise grid preset")
      ->check(CLI::IsMember({"coarse", "fine"}))
      ->capture_default_str();
  cmd->add_option("--samples", cfg.samples, "Samples per noise level (default: preset)");
  cmd->add_option("--workers", cfg.workers, "Worker threads")->capture_default_str();
  cmd->add_flag_function(
      "--normalize-by-m",
      [&cfg](std::int64_t) {
        cfg.normalization = votenoise::LengthNormalization::candidate_count;
      },
      "Calibrate truncated ballots against m instead of their own length");
}

void add_rule_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("-r,--rule", cfg.rule, "Rule preset")
      ->check(CLI::IsMember(votenoise::rule_preset_names()))
      ->capture_default_str();
  cmd->add_option("--stv-tiebreak", cfg.stv_tiebreak,
                  "Fixed STV tie-break order (candidate indices, most preferred first)")
      ->delimiter(',');
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robustness of election winners under Mallows noise"};
  app.set_version_flag("--version", std::string(votenoise::cli::kToolVersion));
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  app.add_option("--seed", cfg.seed, "Master random seed")->capture_default_str();

  auto* analyze = app.add_subcommand("analyze", "Winning-probability curves for one election");
  analyze->add_option("-i,--input", cfg.input, "Profile file")->required()->check(CLI::ExistingFile);
  analyze->add_option("-o,--output", cfg.output, "Result document (JSON)")->required();
  analyze->add_option("--csv", cfg.csv_output, "Curve CSV (default: output with .csv)");
  analyze->add_option("-x,--x-percent", cfg.x_percents, "Threshold percentages")->delimiter(',');
  add_rule_options(analyze, cfg);
  add_estimation_options(analyze, cfg);

  auto* threshold = app.add_subcommand("threshold", "x%-winner thresholds for one election");
  threshold->add_option("-i,--input", cfg.input, "Profile file")->required()->check(CLI::ExistingFile);
  threshold->add_option("-o,--output", cfg.output, "CSV output (default: stdout)");
  threshold->add_option("-x,--x-percent", cfg.x_percents, "Threshold percentages")->delimiter(',');
  add_rule_options(threshold, cfg);
  add_estimation_options(threshold, cfg);

  auto* sweep = app.add_subcommand("sweep", "Mean 50%-thresholds over synthetic elections");
  sweep->add_option("-o,--output", cfg.output, "Sweep CSV (metadata goes next to it as .json)")
      ->required();
  sweep->add_option("--rules", cfg.rules, "Rules to compare")
      ->delimiter(',')
      ->check(CLI::IsMember(votenoise::rule_preset_names()));
  sweep->add_option("--stv-tiebreak", cfg.stv_tiebreak, "Fixed STV tie-break order")->delimiter(',');
  sweep->add_option("-m,--candidates", cfg.m, "Candidates per election")->capture_default_str();
  sweep->add_option("-n,--voters", cfg.n, "Voters per election")->capture_default_str();
  sweep->add_option("--gen-levels", cfg.gen_levels, "Generation norm-phi levels (default i/15)")
      ->delimiter(',');
  sweep->add_option("--reversal", cfg.reversal_probs, "Reversal probabilities")
      ->delimiter(',')
      ->capture_default_str();
  sweep->add_option("--elections", cfg.elections, "Elections per cell (default: scale preset)");
  sweep->add_flag("--full-scale", cfg.full_scale, "500 elections x 500 samples per cell");
  add_estimation_options(sweep, cfg);

  auto* generate = app.add_subcommand("generate", "Write one synthetic Mallows election");
  generate->add_option("-o,--output", cfg.output, "Profile file")->required();
  generate->add_option("-m,--candidates", cfg.m, "Candidates")->capture_default_str();
  generate->add_option("-n,--voters", cfg.n, "Voters")->capture_default_str();
  generate->add_option("--norm-phi", cfg.gen_norm_phi, "Generation norm-phi")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  generate->add_option("--reversal", cfg.reversal_prob, "Per-vote reversal probability")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();

  auto* convert = app.add_subcommand("convert", "Turn a results CSV into a profile file");
  convert->add_option("-i,--input", cfg.input, "CSV file")->required()->check(CLI::ExistingFile);
  convert->add_option("-o,--output", cfg.output, "Profile file")->required();
  convert->add_option("-f,--format", cfg.input_format, "CSV dialect")
      ->check(CLI::IsMember({"districts", "races"}))
      ->capture_default_str();
  convert->add_option("--min-avg-length", cfg.min_average_length,
                      "Reject elections whose average ballot length is lower");

  auto* neighbors = app.add_subcommand("neighbors", "Count winner-changing single-swap neighbors");
  neighbors->add_option("-i,--input", cfg.input, "Profile file")->required()->check(CLI::ExistingFile);
  neighbors->add_option("-o,--output", cfg.output, "JSON output (default: stdout)");
  add_rule_options(neighbors, cfg);

  CLI11_PARSE(app, argc, argv);

  if (analyze->parsed()) cfg.command = Command::analyze;
  if (threshold->parsed()) cfg.command = Command::threshold;
  if (sweep->parsed()) cfg.command = Command::sweep;
  if (generate->parsed()) cfg.command = Command::generate;
  if (convert->parsed()) cfg.command = Command::convert;
  if (neighbors->parsed()) cfg.command = Command::neighbors;

  return votenoise::cli::run(cfg, std::cout, std::cerr);
}
