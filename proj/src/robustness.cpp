#include "votenoise/robustness.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "votenoise/errors.hpp"
#include "votenoise/parallel.hpp"

namespace votenoise {

namespace {

constexpr std::size_t kSamplesPerBlock = 256;

std::uint64_t level_key(double level) { return std::bit_cast<std::uint64_t>(level); }

std::size_t calibration_length(std::size_t ballot_length, std::size_t m,
                               LengthNormalization normalization) {
  return normalization == LengthNormalization::ballot_length ? ballot_length : m;
}

double factorial(std::size_t k) {
  double f = 1.0;
  for (std::size_t i = 2; i <= k; ++i) f *= static_cast<double>(i);
  return f;
}

std::vector<CandidateId> identity_order(std::size_t m) {
  std::vector<CandidateId> order(m);
  std::iota(order.begin(), order.end(), CandidateId{0});
  return order;
}

// One noise level to sample; `rules_to_sample` excludes deterministic rules
// at level 0, which are evaluated exactly instead.
struct LevelPlan {
  double level;
  std::vector<std::size_t> rules_to_sample;
  bool needs_tiebreak = false;
};

}  // namespace

NoiseGrid NoiseGrid::coarse(std::size_t samples_per_level) {
  NoiseGrid g;
  for (int i = 0; i <= 10; ++i) g.levels.push_back(i / 10.0);
  g.samples_per_level = samples_per_level;
  return g;
}

NoiseGrid NoiseGrid::fine(std::size_t samples_per_level) {
  NoiseGrid g;
  for (int i = 0; i <= 200; ++i) g.levels.push_back(i / 400.0);
  g.samples_per_level = samples_per_level;
  return g;
}

void NoiseGrid::validate() const {
  if (levels.empty()) throw std::invalid_argument("noise grid has no levels");
  if (samples_per_level == 0) throw std::invalid_argument("noise grid needs samples per level");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (!(levels[i] >= 0.0 && levels[i] <= 1.0)) {
      throw std::invalid_argument("noise level outside [0, 1]");
    }
    if (i > 0 && !(levels[i] > levels[i - 1])) {
      throw std::invalid_argument("noise levels must be strictly increasing");
    }
  }
}

ProfilePerturber::ProfilePerturber(const PreferenceProfile& profile, double norm_phi,
                                   LengthNormalization normalization)
    : profile_(&profile), norm_phi_(norm_phi) {
  if (!(norm_phi >= 0.0 && norm_phi <= 1.0)) {
    throw std::invalid_argument("norm-phi must lie in [0, 1]");
  }
  const std::size_t m = profile.num_candidates();
  by_length_.resize(m + 1);
  for (const auto& b : profile.ballots()) {
    auto& slot = by_length_[b.length()];
    if (slot) continue;
    const double phi = global_calibration_cache().phi(
        norm_phi, calibration_length(b.length(), m, normalization));
    slot.emplace(phi, b.length());
  }
}

double ProfilePerturber::phi_for_length(std::size_t length) const {
  if (length >= by_length_.size() || !by_length_[length]) {
    throw std::out_of_range("no ballot of length " + std::to_string(length) + " in profile");
  }
  return by_length_[length]->phi();
}

PreferenceProfile ProfilePerturber::operator()(Rng& rng) const {
  std::vector<Ballot> out;
  out.reserve(profile_->num_voters());
  std::vector<CandidateId> buffer;
  for (const auto& b : profile_->ballots()) {
    by_length_[b.length()]->sample_into(b.ranking(), rng, buffer);
    out.emplace_back(buffer);
  }
  return profile_->with_ballots(std::move(out));
}

PreferenceProfile perturb_profile(const PreferenceProfile& p, double norm_phi, Rng& rng,
                                  LengthNormalization normalization) {
  return ProfilePerturber(p, norm_phi, normalization)(rng);
}

double RobustnessCurve::probability(std::size_t level_index, CandidateId c) const {
  return static_cast<double>(wins.at(level_index * num_candidates + c)) /
         static_cast<double>(grid.samples_per_level);
}

std::vector<double> RobustnessCurve::probabilities(CandidateId c) const {
  std::vector<double> out(grid.levels.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = probability(i, c);
  return out;
}

std::vector<RobustnessCurve> estimate_curves(const PreferenceProfile& p,
                                             std::span<const RuleSpec> rules,
                                             const NoiseGrid& grid, std::uint64_t seed,
                                             const EstimateOptions& options) {
  grid.validate();
  const std::size_t m = p.num_candidates();
  const std::size_t samples = grid.samples_per_level;
  const std::size_t num_rules = rules.size();

  // Levels to sample: the grid, plus a level-0 pass for the baseline when
  // the grid does not start at 0.
  const bool extra_baseline = grid.levels.front() != 0.0;
  std::vector<LevelPlan> plans;
  if (extra_baseline) plans.push_back({0.0, {}, false});
  for (double level : grid.levels) plans.push_back({level, {}, false});
  for (auto& plan : plans) {
    for (std::size_t r = 0; r < num_rules; ++r) {
      if (plan.level == 0.0 && rules[r].is_deterministic()) continue;
      plan.rules_to_sample.push_back(r);
      if (!rules[r].is_deterministic()) plan.needs_tiebreak = true;
    }
  }

  std::vector<ProfilePerturber> perturbers;
  perturbers.reserve(plans.size());
  for (const auto& plan : plans) perturbers.emplace_back(p, plan.level, options.normalization);

  // counts[(plan * rules + r) * m + c]
  std::vector<std::uint64_t> counts(plans.size() * num_rules * m, 0);

  // Exact level-0 outcome for deterministic rules.
  for (std::size_t r = 0; r < num_rules; ++r) {
    if (!rules[r].is_deterministic()) continue;
    const WinnerSet ws = evaluate(p, rules[r]);
    for (std::size_t pi = 0; pi < plans.size(); ++pi) {
      if (plans[pi].level != 0.0) continue;
      for (CandidateId c : ws.winners) counts[(pi * num_rules + r) * m + c] = samples;
    }
  }

  struct Block {
    std::size_t plan;
    std::size_t begin;
    std::size_t end;
  };
  std::vector<Block> blocks;
  for (std::size_t pi = 0; pi < plans.size(); ++pi) {
    if (plans[pi].rules_to_sample.empty()) continue;
    for (std::size_t s = 0; s < samples; s += kSamplesPerBlock) {
      blocks.push_back({pi, s, std::min(samples, s + kSamplesPerBlock)});
    }
  }

  std::vector<std::vector<std::uint64_t>> block_counts(blocks.size());
  parallel_for(blocks.size(), options.workers, [&](std::size_t bi) {
    const Block& block = blocks[bi];
    const LevelPlan& plan = plans[block.plan];
    auto& local = block_counts[bi];
    local.assign(num_rules * m, 0);
    std::vector<CandidateId> tiebreak;
    for (std::size_t s = block.begin; s < block.end; ++s) {
      Rng rng = make_rng(seed, {level_key(plan.level), s});
      const PreferenceProfile sampled =
          plan.level == 0.0 ? p : perturbers[block.plan](rng);
      if (plan.needs_tiebreak) {
        tiebreak = identity_order(m);
        std::shuffle(tiebreak.begin(), tiebreak.end(), rng);
      }
      for (std::size_t r : plan.rules_to_sample) {
        const WinnerSet ws =
            rules[r].is_deterministic() ? evaluate(sampled, rules[r]) : evaluate(sampled, rules[r], tiebreak);
        for (CandidateId c : ws.winners) ++local[r * m + c];
      }
    }
  });
  // Integer sums, so the reduction order does not matter.
  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    const std::size_t base = blocks[bi].plan * num_rules * m;
    for (std::size_t i = 0; i < num_rules * m; ++i) counts[base + i] += block_counts[bi][i];
  }

  std::vector<RobustnessCurve> curves;
  curves.reserve(num_rules);
  const std::size_t first_grid_plan = extra_baseline ? 1 : 0;
  for (std::size_t r = 0; r < num_rules; ++r) {
    RobustnessCurve curve;
    curve.rule = rules[r];
    curve.grid = grid;
    curve.seed = seed;
    curve.num_candidates = m;
    curve.wins.resize(grid.levels.size() * m);
    for (std::size_t li = 0; li < grid.levels.size(); ++li) {
      const std::size_t base = ((first_grid_plan + li) * num_rules + r) * m;
      std::copy_n(counts.begin() + static_cast<std::ptrdiff_t>(base), m,
                  curve.wins.begin() + static_cast<std::ptrdiff_t>(li * m));
    }
    curve.baseline.resize(m);
    for (std::size_t c = 0; c < m; ++c) {
      curve.baseline[c] = static_cast<double>(counts[r * m + c]) / static_cast<double>(samples);
    }
    const double best = *std::max_element(curve.baseline.begin(), curve.baseline.end());
    for (std::size_t c = 0; c < m; ++c) {
      if (curve.baseline[c] == best) curve.initial_winners.push_back(static_cast<CandidateId>(c));
    }
    curve.initial_winner = curve.initial_winners.front();
    curves.push_back(std::move(curve));
  }
  return curves;
}

RobustnessCurve estimate_curve(const PreferenceProfile& p, const RuleSpec& rule,
                               const NoiseGrid& grid, std::uint64_t seed,
                               const EstimateOptions& options) {
  return std::move(estimate_curves(p, std::span<const RuleSpec>(&rule, 1), grid, seed, options)
                       .front());
}

std::vector<double> exact_probability(const PreferenceProfile& p, const RuleSpec& rule,
                                      double norm_phi, LengthNormalization normalization,
                                      double budget) {
  const std::size_t m = p.num_candidates();
  const bool random_tiebreak = !rule.is_deterministic();
  double elections = random_tiebreak ? factorial(m) : 1.0;
  for (const auto& b : p.ballots()) elections *= factorial(b.length());
  if (elections > budget) {
    throw BudgetExceeded("exact enumeration needs " + std::to_string(elections) +
                         " rule evaluations, budget is " + std::to_string(budget));
  }

  // Every replacement ballot with non-zero probability, per position.
  std::vector<std::vector<std::pair<Ballot, double>>> options(p.num_voters());
  for (std::size_t i = 0; i < p.num_voters(); ++i) {
    const Ballot& center = p.ballot(i);
    const auto params = MallowsParams::from_norm_phi(
        center, norm_phi, calibration_length(center.length(), m, normalization));
    std::vector<CandidateId> perm(center.ranking().begin(), center.ranking().end());
    std::sort(perm.begin(), perm.end());
    do {
      Ballot v(perm);
      const double w = pmf(params, v);
      if (w > 0.0) options[i].emplace_back(std::move(v), w);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }

  std::vector<std::vector<CandidateId>> tiebreaks;
  if (random_tiebreak) {
    auto order = identity_order(m);
    do {
      tiebreaks.push_back(order);
    } while (std::next_permutation(order.begin(), order.end()));
  }

  std::vector<double> prob(m, 0.0);
  std::vector<std::size_t> index(p.num_voters(), 0);
  std::vector<Ballot> ballots(p.num_voters());
  while (true) {
    double weight = 1.0;
    for (std::size_t i = 0; i < index.size(); ++i) {
      ballots[i] = options[i][index[i]].first;
      weight *= options[i][index[i]].second;
    }
    const PreferenceProfile q = p.with_ballots(ballots);
    if (random_tiebreak) {
      const double share = weight / static_cast<double>(tiebreaks.size());
      for (const auto& order : tiebreaks) prob[stv_winner(q, order)] += share;
    } else {
      for (CandidateId c : evaluate(q, rule).winners) prob[c] += weight;
    }
    // Odometer over replacement choices.
    std::size_t pos = 0;
    while (pos < index.size() && ++index[pos] == options[pos].size()) index[pos++] = 0;
    if (pos == index.size()) break;
  }
  // Rounding in the weighted sums can land a hair outside [0, 1].
  for (double& v : prob) v = std::clamp(v, 0.0, 1.0);
  return prob;
}

WinnerThreshold winner_threshold(const RobustnessCurve& curve, double x, CandidateId candidate) {
  if (!(x > 0.0 && x < 100.0)) throw std::invalid_argument("threshold percentage must be in (0, 100)");
  WinnerThreshold t;
  t.x = x;
  if (curve.rule.kind == RuleKind::stv && x == 50.0) {
    const double best = *std::max_element(curve.baseline.begin(), curve.baseline.end());
    if (best <= 0.5) {
      t.value = 0.0;
      return t;
    }
  }
  const double bar = x / 100.0;
  for (std::size_t li = 0; li < curve.grid.levels.size(); ++li) {
    if (curve.probability(li, candidate) < bar) {
      t.value = curve.grid.levels[li];
      return t;
    }
  }
  return t;
}

WinnerThreshold winner_threshold(const RobustnessCurve& curve, double x) {
  return winner_threshold(curve, x, curve.initial_winner);
}

double expected_election_swaps(const PreferenceProfile& p, double norm_phi,
                               LengthNormalization normalization) {
  const std::size_t m = p.num_candidates();
  double total = 0.0;
  for (const auto& b : p.ballots()) {
    const double len = static_cast<double>(b.length());
    if (normalization == LengthNormalization::ballot_length) {
      total += norm_phi * len * (len - 1.0) / 4.0;
    } else {
      const double phi = global_calibration_cache().phi(norm_phi, m);
      total += expected_swap_distance(phi, b.length());
    }
  }
  return total;
}

}  // namespace votenoise
