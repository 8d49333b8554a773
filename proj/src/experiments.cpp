#include "votenoise/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "votenoise/errors.hpp"
#include "votenoise/mallows.hpp"
#include "votenoise/parallel.hpp"

namespace votenoise {

namespace {

// Stream tags keep election generation and estimation draws apart.
constexpr std::uint64_t kGenerateTag = 0x67656e;
constexpr std::uint64_t kEstimateTag = 0x657374;

}  // namespace

void SynthSpec::validate() const {
  if (m == 0 || n == 0) throw std::invalid_argument("synthetic election needs m, n ≥ 1");
  if (!(gen_norm_phi >= 0.0 && gen_norm_phi <= 1.0)) {
    throw std::invalid_argument("generation norm-phi must lie in [0, 1]");
  }
  if (!(reversal_prob >= 0.0 && reversal_prob <= 1.0)) {
    throw std::invalid_argument("reversal probability must lie in [0, 1]");
  }
  if (central && !central->is_complete(m)) {
    throw std::invalid_argument("central ballot must rank all m candidates");
  }
}

Ballot SynthSpec::central_ballot() const { return central ? *central : lexicographic_ballot(m); }

PreferenceProfile generate_election(const SynthSpec& spec, Rng& rng) {
  spec.validate();
  const Ballot center = spec.central_ballot();
  for (CandidateId c : center.ranking()) {
    if (c >= spec.m) throw std::invalid_argument("central ballot ranks unknown candidate");
  }
  const MallowsSampler sampler(global_calibration_cache().phi(spec.gen_norm_phi, spec.m), spec.m);
  std::bernoulli_distribution reverse(spec.reversal_prob);
  std::vector<Ballot> ballots;
  ballots.reserve(spec.n);
  std::vector<CandidateId> buffer;
  for (std::size_t i = 0; i < spec.n; ++i) {
    sampler.sample_into(center.ranking(), rng, buffer);
    if (reverse(rng)) std::reverse(buffer.begin(), buffer.end());
    ballots.emplace_back(buffer);
  }
  return PreferenceProfile::with_default_names(spec.m, std::move(ballots));
}

std::vector<double> SweepConfig::default_gen_levels() {
  std::vector<double> levels;
  for (int i = 0; i <= 15; ++i) levels.push_back(i / 15.0);
  return levels;
}

const SweepRow& SweepResult::row(std::string_view rule, double reversal_prob,
                                 double gen_level) const {
  for (const auto& r : rows) {
    if (r.rule == rule && r.reversal_prob == reversal_prob && r.gen_level == gen_level) return r;
  }
  throw std::out_of_range("no sweep row for rule '" + std::string(rule) + "'");
}

SweepResult rule_comparison_sweep(const SweepConfig& config) {
  if (config.rules.empty()) throw std::invalid_argument("sweep needs at least one rule");
  config.grid.validate();
  const std::size_t num_rules = config.rules.size();
  const std::size_t per_cell = config.elections_per_level;
  const std::size_t num_gen = config.gen_levels.size();
  const std::size_t num_rev = config.reversal_probs.size();
  const std::size_t total = num_rev * num_gen * per_cell;

  // Per election: threshold (sentinel as 1.0), sentinel flag, tie flag per rule.
  struct Outcome {
    std::vector<double> threshold;
    std::vector<bool> sentinel;
    std::vector<bool> tied;
  };
  std::vector<Outcome> outcomes(total);

  parallel_for(total, config.workers, [&](std::size_t item) {
    const std::size_t e = item % per_cell;
    const std::size_t gi = (item / per_cell) % num_gen;
    const std::size_t ri = item / (per_cell * num_gen);
    SynthSpec spec = config.election;
    spec.gen_norm_phi = config.gen_levels[gi];
    spec.reversal_prob = config.reversal_probs[ri];
    Rng rng = make_rng(config.seed, {kGenerateTag, ri, gi, e});
    const PreferenceProfile election = generate_election(spec, rng);
    const auto curves = estimate_curves(election, config.rules, config.grid,
                                        derive_seed(config.seed, {kEstimateTag, ri, gi, e}));
    Outcome& out = outcomes[item];
    for (const auto& curve : curves) {
      const WinnerThreshold t = winner_threshold(curve, 50.0);
      out.threshold.push_back(t.value_or_one());
      out.sentinel.push_back(!t.value.has_value());
      out.tied.push_back(curve.tied());
    }
  });

  SweepResult result;
  for (std::size_t ri = 0; ri < num_rev; ++ri) {
    for (std::size_t gi = 0; gi < num_gen; ++gi) {
      for (std::size_t r = 0; r < num_rules; ++r) {
        SweepRow row;
        row.rule = config.rules[r].name;
        row.reversal_prob = config.reversal_probs[ri];
        row.gen_level = config.gen_levels[gi];
        row.n_elections = per_cell;
        std::vector<double> values;
        values.reserve(per_cell);
        for (std::size_t e = 0; e < per_cell; ++e) {
          const Outcome& o = outcomes[(ri * num_gen + gi) * per_cell + e];
          values.push_back(o.threshold[r]);
          row.n_sentinel += o.sentinel[r] ? 1 : 0;
          row.n_tied += o.tied[r] ? 1 : 0;
        }
        if (!values.empty()) {
          double sum = 0.0;
          for (double v : values) sum += v;
          row.mean_threshold = sum / static_cast<double>(values.size());
        }
        if (values.size() > 1) {
          double ss = 0.0;
          for (double v : values) ss += (v - row.mean_threshold) * (v - row.mean_threshold);
          const double var = ss / static_cast<double>(values.size() - 1);
          row.std_error = std::sqrt(var / static_cast<double>(values.size()));
        }
        result.rows.push_back(row);
        result.thresholds.push_back(std::move(values));
      }
    }
  }
  return result;
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("pearson needs equal-length inputs");
  if (xs.size() < 2) throw std::invalid_argument("pearson needs at least two points");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw UndefinedCorrelation("correlation undefined for constant input");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double score_difference(std::span<const double> scores) {
  if (scores.size() < 2) return 0.0;
  std::vector<double> sorted(scores.begin(), scores.end());
  std::partial_sort(sorted.begin(), sorted.begin() + 2, sorted.end(), std::greater<>());
  return sorted[0] - sorted[1];
}

}  // namespace votenoise
