#include "cli.hpp"

#include <fmt/chrono.h>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "votenoise/errors.hpp"
#include "votenoise/experiments.hpp"
#include "votenoise/ingest.hpp"

namespace votenoise::cli {

namespace {

using nlohmann::ordered_json;

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(now));
}

std::string_view to_string(LengthNormalization n) {
  return n == LengthNormalization::ballot_length ? "ballot_length" : "candidate_count";
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.empty()) throw std::invalid_argument("an output path is required");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish_output(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto out = open_output(path);
  out << text;
  finish_output(out, path);
}

// Shortest representation that round-trips; keeps CSVs byte-stable.
std::string num(double v) { return fmt::format("{}", v); }

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string quoted = "\"";
  for (char ch : s) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + '"';
}

ordered_json tool_json() {
  return {{"name", kToolName}, {"version", kToolVersion}};
}

ordered_json grid_json(const NoiseGrid& grid, std::string_view preset) {
  return {{"preset", preset}, {"levels", grid.levels}, {"samples_per_level", grid.samples_per_level}};
}

ordered_json rule_json(const RuleSpec& rule) {
  ordered_json j = {{"name", rule.name}, {"kind", to_string(rule.kind)}};
  if (rule.kind == RuleKind::positional) {
    j["scoring_vector"] = rule.scoring_vector;
    j["best_k"] = rule.best_k ? ordered_json(*rule.best_k) : ordered_json(nullptr);
  }
  if (rule.kind == RuleKind::stv) {
    j["tiebreak"] = rule.stv_tiebreak.empty() ? ordered_json("random")
                                              : ordered_json(rule.stv_tiebreak);
  }
  return j;
}

std::filesystem::path with_extension(std::filesystem::path p, std::string_view ext) {
  return p.replace_extension(ext);
}

PreferenceProfile load_profile(const RunConfig& config) {
  if (config.input.empty()) throw std::invalid_argument("an input profile is required");
  return read_profile_file(config.input);
}

void check_x_percents(const std::vector<double>& xs) {
  if (xs.empty()) throw std::invalid_argument("at least one x percentage is required");
  for (double x : xs) {
    if (!(x > 0.0 && x < 100.0)) throw std::invalid_argument("x percentages must lie in (0, 100)");
  }
}

std::vector<double> with_fifty(std::vector<double> xs) {
  if (std::find(xs.begin(), xs.end(), 50.0) == xs.end()) xs.insert(xs.begin(), 50.0);
  return xs;
}

ordered_json threshold_json(const WinnerThreshold& t) {
  return t.value ? ordered_json(*t.value) : ordered_json("none");
}

int cmd_analyze(const RunConfig& config, std::ostream& out) {
  const PreferenceProfile p = load_profile(config);
  const std::size_t m = p.num_candidates();
  const RuleSpec rule = rule_from_config(config, config.rule, m);
  const NoiseGrid grid = grid_from_config(config);
  const std::vector<double> xs = with_fifty(config.x_percents);
  check_x_percents(xs);

  const RobustnessCurve curve =
      estimate_curve(p, rule, grid, config.seed, {config.workers, config.normalization});
  const std::vector<double> borda = borda_scores(p);
  std::optional<std::vector<double>> rule_scores;
  if (rule.is_deterministic()) rule_scores = evaluate(p, rule).scores;

  ordered_json doc;
  doc["tool"] = tool_json();
  doc["generated_at"] = utc_timestamp();
  doc["command"] = "analyze";
  doc["input"] = config.input.string();
  doc["seed"] = config.seed;
  doc["grid"] = grid_json(grid, config.grid);
  doc["normalization"] = to_string(config.normalization);
  doc["rule"] = rule_json(rule);
  doc["election"] = {{"num_candidates", m},
                     {"num_voters", p.num_voters()},
                     {"average_ballot_length", p.average_ballot_length()},
                     {"complete", p.is_complete()}};
  doc["samples"] = {{"per_level", grid.samples_per_level},
                    {"levels", grid.levels.size()},
                    {"total", grid.samples_per_level * grid.levels.size()}};

  ordered_json winners = ordered_json::array();
  for (CandidateId c : curve.initial_winners) winners.push_back({{"id", c}, {"name", p.name(c)}});
  doc["initial_winners"] = winners;
  doc["tied"] = curve.tied();
  if (rule_scores) doc["score_difference"] = score_difference(*rule_scores);

  ordered_json thresholds = ordered_json::array();
  for (CandidateId c : curve.initial_winners) {
    ordered_json per_x = ordered_json::object();
    for (double x : xs) per_x[num(x)] = threshold_json(winner_threshold(curve, x, c));
    thresholds.push_back({{"candidate", c}, {"name", p.name(c)}, {"x", per_x}});
  }
  doc["thresholds"] = thresholds;

  ordered_json swaps = ordered_json::array();
  for (double level : grid.levels) {
    swaps.push_back({{"level", level},
                     {"expected_swaps", expected_election_swaps(p, level, config.normalization)}});
  }
  doc["expected_swaps"] = swaps;

  ordered_json candidates = ordered_json::array();
  for (CandidateId c = 0; c < m; ++c) {
    candidates.push_back({{"id", c},
                          {"name", p.name(c)},
                          {"rule_score", rule_scores ? ordered_json((*rule_scores)[c])
                                                     : ordered_json(nullptr)},
                          {"borda_score", borda[c]},
                          {"baseline", curve.baseline[c]},
                          {"probability", curve.probabilities(c)}});
  }
  doc["candidates"] = candidates;

  const std::filesystem::path csv_path =
      config.csv_output.empty() ? with_extension(config.output, ".csv") : config.csv_output;
  if (csv_path == config.output) throw std::invalid_argument("document and CSV paths coincide");
  std::string csv = "level,candidate,probability\n";
  for (std::size_t li = 0; li < grid.levels.size(); ++li) {
    for (CandidateId c = 0; c < m; ++c) {
      csv += fmt::format("{},{},{}\n", num(grid.levels[li]), csv_field(p.name(c)),
                         num(curve.probability(li, c)));
    }
  }

  write_text(config.output, doc.dump(2) + "\n");
  write_text(csv_path, csv);

  const WinnerThreshold t = winner_threshold(curve, 50.0);
  fmt::print(out, "winner {}{}; 50%-threshold {}\n", p.name(curve.initial_winner),
             curve.tied() ? " (tied)" : "",
             t.value ? num(*t.value) : std::string("none"));
  return 0;
}

int cmd_threshold(const RunConfig& config, std::ostream& out) {
  const PreferenceProfile p = load_profile(config);
  const RuleSpec rule = rule_from_config(config, config.rule, p.num_candidates());
  const NoiseGrid grid = grid_from_config(config);
  check_x_percents(config.x_percents);
  const RobustnessCurve curve =
      estimate_curve(p, rule, grid, config.seed, {config.workers, config.normalization});

  std::string csv = "candidate,name,x,threshold,tied\n";
  for (CandidateId c : curve.initial_winners) {
    for (double x : config.x_percents) {
      const WinnerThreshold t = winner_threshold(curve, x, c);
      csv += fmt::format("{},{},{},{},{}\n", c, csv_field(p.name(c)), num(x),
                         t.value ? num(*t.value) : std::string("none"), curve.tied() ? 1 : 0);
    }
  }
  if (config.output.empty()) {
    out << csv;
  } else {
    write_text(config.output, csv);
  }
  return 0;
}

int cmd_sweep(const RunConfig& config, std::ostream& out) {
  SweepConfig sweep;
  sweep.election.m = config.m;
  sweep.election.n = config.n;
  for (const auto& name : config.rules) sweep.rules.push_back(rule_from_config(config, name, config.m));
  sweep.gen_levels = config.gen_levels.empty() ? SweepConfig::default_gen_levels() : config.gen_levels;
  sweep.reversal_probs = config.reversal_probs;
  sweep.elections_per_level = config.elections.value_or(config.full_scale ? 500 : 50);
  RunConfig grid_config = config;
  if (!grid_config.samples) grid_config.samples = config.full_scale ? 500 : 200;
  sweep.grid = grid_from_config(grid_config);
  sweep.seed = config.seed;
  sweep.workers = config.workers;
  for (double g : sweep.gen_levels) {
    if (!(g >= 0.0 && g <= 1.0)) throw std::invalid_argument("generation levels must lie in [0, 1]");
  }
  if (sweep.elections_per_level == 0) throw std::invalid_argument("sweep needs ≥ 1 election");

  const SweepResult result = rule_comparison_sweep(sweep);

  std::string csv =
      "rule,reversal_prob,gen_level,mean_threshold,stderr,n_elections,n_sentinel,n_tied\n";
  for (const auto& r : result.rows) {
    csv += fmt::format("{},{},{},{},{},{},{},{}\n", csv_field(r.rule), num(r.reversal_prob),
                       num(r.gen_level), num(r.mean_threshold), num(r.std_error), r.n_elections,
                       r.n_sentinel, r.n_tied);
  }

  ordered_json meta;
  meta["tool"] = tool_json();
  meta["generated_at"] = utc_timestamp();
  meta["command"] = "sweep";
  meta["seed"] = config.seed;
  meta["scale"] = config.full_scale ? "full" : "desk";
  meta["grid"] = grid_json(sweep.grid, config.grid);
  ordered_json rules = ordered_json::array();
  for (const auto& r : sweep.rules) rules.push_back(rule_json(r));
  meta["rules"] = rules;
  meta["election"] = {{"num_candidates", sweep.election.m}, {"num_voters", sweep.election.n}};
  meta["gen_levels"] = sweep.gen_levels;
  meta["reversal_probs"] = sweep.reversal_probs;
  meta["elections_per_level"] = sweep.elections_per_level;
  meta["sentinel_value"] = 1.0;
  meta["csv"] = config.output.filename().string();

  const std::filesystem::path meta_path = with_extension(config.output, ".json");
  if (meta_path == config.output) throw std::invalid_argument("sweep output must not end in .json");
  write_text(config.output, csv);
  write_text(meta_path, meta.dump(2) + "\n");
  fmt::print(out, "{} rows written to {}\n", result.rows.size(), config.output.string());
  return 0;
}

int cmd_generate(const RunConfig& config, std::ostream& out) {
  SynthSpec spec;
  spec.m = config.m;
  spec.n = config.n;
  spec.gen_norm_phi = config.gen_norm_phi;
  spec.reversal_prob = config.reversal_prob;
  Rng rng = make_rng(config.seed, {});
  const PreferenceProfile p = generate_election(spec, rng);
  std::ostringstream text;
  write_profile(text, p);
  write_text(config.output, text.str());
  fmt::print(out, "generated m={} n={} gen_norm_phi={} reversal={} seed={}\n", spec.m, spec.n,
             num(spec.gen_norm_phi), num(spec.reversal_prob), config.seed);
  return 0;
}

int cmd_convert(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.input.empty()) throw std::invalid_argument("an input CSV is required");
  std::ifstream in(config.input, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + config.input.string() + "'");
  PreferenceProfile p = [&] {
    if (config.input_format == "districts") return districts_to_profile(read_district_returns(in));
    if (config.input_format == "races") return races_to_profile(read_race_results(in));
    throw std::invalid_argument("unknown input format '" + config.input_format + "'");
  }();
  if (config.min_average_length && !meets_min_average_length(p, *config.min_average_length)) {
    fmt::print(err, "average ballot length {} is below the minimum {}; nothing written\n",
               num(p.average_ballot_length()), num(*config.min_average_length));
    return 3;
  }
  std::ostringstream text;
  write_profile(text, p);
  write_text(config.output, text.str());
  fmt::print(out, "{} ballots over {} candidates written to {}\n", p.num_voters(),
             p.num_candidates(), config.output.string());
  return 0;
}

int cmd_neighbors(const RunConfig& config, std::ostream& out) {
  const PreferenceProfile p = load_profile(config);
  const RuleSpec rule = rule_from_config(config, config.rule, p.num_candidates());
  const NeighborReport report = analyze_neighbors(p, rule);

  ordered_json doc;
  doc["tool"] = tool_json();
  doc["generated_at"] = utc_timestamp();
  doc["command"] = "neighbors";
  doc["input"] = config.input.string();
  doc["seed"] = config.seed;
  doc["rule"] = rule_json(rule);
  ordered_json winners = ordered_json::array();
  for (CandidateId c : report.initial_winners) winners.push_back({{"id", c}, {"name", p.name(c)}});
  doc["initial_winners"] = winners;
  doc["neighbors"] = report.neighbors;
  doc["winner_lost"] = report.winner_lost;
  doc["not_unique_winner"] = report.not_unique_winner;

  if (config.output.empty()) {
    out << doc.dump(2) << "\n";
  } else {
    write_text(config.output, doc.dump(2) + "\n");
    fmt::print(out, "{} of {} neighbors unseat the winner ({} leave it not the unique winner)\n",
               report.winner_lost, report.neighbors, report.not_unique_winner);
  }
  return 0;
}

}  // namespace

std::string_view to_string(Command c) noexcept {
  switch (c) {
    case Command::analyze: return "analyze";
    case Command::threshold: return "threshold";
    case Command::sweep: return "sweep";
    case Command::generate: return "generate";
    case Command::convert: return "convert";
    case Command::neighbors: return "neighbors";
  }
  return "?";
}

NoiseGrid grid_from_config(const RunConfig& config) {
  NoiseGrid grid;
  if (config.grid == "coarse") {
    grid = NoiseGrid::coarse();
  } else if (config.grid == "fine") {
    grid = NoiseGrid::fine();
  } else {
    throw std::invalid_argument("unknown grid preset '" + config.grid + "'");
  }
  if (config.samples) grid.samples_per_level = *config.samples;
  grid.validate();
  return grid;
}

RuleSpec rule_from_config(const RunConfig& config, std::string_view name, std::size_t m) {
  RuleSpec rule = rule_from_name(name, m);
  if (rule.kind == RuleKind::stv && !config.stv_tiebreak.empty()) {
    check_tiebreak(config.stv_tiebreak, m);
    rule.stv_tiebreak = config.stv_tiebreak;
  }
  return rule;
}

NeighborReport analyze_neighbors(const PreferenceProfile& p, const RuleSpec& rule) {
  if (!rule.is_deterministic()) {
    throw std::invalid_argument("neighbor counts need a fixed STV tie-break order");
  }
  NeighborReport report;
  const WinnerSet initial = evaluate(p, rule);
  report.initial_winners = initial.winners;
  const CandidateId winner = initial.winners.front();
  for (const auto& q : single_swap_neighbors(p)) {
    const WinnerSet w = evaluate(q, rule);
    ++report.neighbors;
    if (!w.contains(winner)) ++report.winner_lost;
    if (!(w.is_unique() && w.winners.front() == winner)) ++report.not_unique_winner;
  }
  return report;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    switch (config.command) {
      case Command::analyze: return cmd_analyze(config, out);
      case Command::threshold: return cmd_threshold(config, out);
      case Command::sweep: return cmd_sweep(config, out);
      case Command::generate: return cmd_generate(config, out);
      case Command::convert: return cmd_convert(config, out, err);
      case Command::neighbors: return cmd_neighbors(config, out);
    }
  } catch (const ParseError& e) {
    fmt::print(err, "{}: parse error: {}\n", to_string(config.command), e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(err, "{}: {}\n", to_string(config.command), e.what());
    return 1;
  }
  return 1;
}

}  // namespace votenoise::cli
