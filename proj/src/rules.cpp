#include "votenoise/rules.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

namespace votenoise {

namespace {

std::vector<CandidateId> argmax(const std::vector<double>& scores) {
  const double best = *std::max_element(scores.begin(), scores.end());
  std::vector<CandidateId> out;
  for (std::size_t c = 0; c < scores.size(); ++c) {
    if (scores[c] == best) out.push_back(static_cast<CandidateId>(c));
  }
  return out;
}

}  // namespace

void check_tiebreak(std::span<const CandidateId> tiebreak, std::size_t m) {
  if (tiebreak.size() != m) {
    throw std::invalid_argument("STV tie-break must order all candidates");
  }
  std::vector<bool> seen(m, false);
  for (CandidateId c : tiebreak) {
    if (c >= m || seen[c]) throw std::invalid_argument("STV tie-break is not a permutation");
    seen[c] = true;
  }
}

namespace {

std::vector<double> padded(std::vector<double> head, std::size_t m) {
  head.resize(m, 0.0);
  return head;
}

}  // namespace

std::string_view to_string(RuleKind kind) noexcept {
  switch (kind) {
    case RuleKind::positional: return "positional";
    case RuleKind::copeland: return "copeland";
    case RuleKind::bucklin: return "bucklin";
    case RuleKind::stv: return "stv";
  }
  return "unknown";
}

RuleSpec RuleSpec::plurality(std::size_t m) {
  std::vector<double> v(m, 0.0);
  if (m > 0) v[0] = 1.0;
  return positional("plurality", std::move(v));
}

RuleSpec RuleSpec::borda(std::size_t m) {
  std::vector<double> v(m);
  for (std::size_t i = 0; i < m; ++i) v[i] = static_cast<double>(m - 1 - i);
  return positional("borda", std::move(v));
}

RuleSpec RuleSpec::positional(std::string name, std::vector<double> scoring_vector,
                              std::optional<std::size_t> best_k) {
  if (scoring_vector.empty()) throw std::invalid_argument("scoring vector is empty");
  if (!std::is_sorted(scoring_vector.begin(), scoring_vector.end(), std::greater<>())) {
    throw std::invalid_argument("scoring vector must be non-increasing");
  }
  if (best_k && *best_k == 0) throw std::invalid_argument("best-k must be positive");
  RuleSpec r;
  r.kind = RuleKind::positional;
  r.name = std::move(name);
  r.scoring_vector = std::move(scoring_vector);
  r.best_k = best_k;
  return r;
}

RuleSpec RuleSpec::copeland() {
  RuleSpec r;
  r.kind = RuleKind::copeland;
  r.name = "copeland";
  return r;
}

RuleSpec RuleSpec::bucklin() {
  RuleSpec r;
  r.kind = RuleKind::bucklin;
  r.name = "bucklin";
  return r;
}

RuleSpec RuleSpec::stv(std::vector<CandidateId> tiebreak) {
  RuleSpec r;
  r.kind = RuleKind::stv;
  r.name = "stv";
  r.stv_tiebreak = std::move(tiebreak);
  return r;
}

RuleSpec rule_from_name(std::string_view name, std::size_t m) {
  if (name == "plurality") return RuleSpec::plurality(m);
  if (name == "borda") return RuleSpec::borda(m);
  if (name == "copeland") return RuleSpec::copeland();
  if (name == "bucklin") return RuleSpec::bucklin();
  if (name == "stv") return RuleSpec::stv();
  if (name == "f1-2018") {
    return RuleSpec::positional("f1-2018", padded({25, 18, 15, 12, 10, 8, 6, 4, 2, 1}, m));
  }
  if (name == "f1-2009") {
    return RuleSpec::positional("f1-2009", padded({10, 8, 6, 5, 4, 3, 2, 1}, m));
  }
  if (name == "f1-2002") {
    return RuleSpec::positional("f1-2002", padded({10, 6, 4, 3, 2, 1}, m));
  }
  if (name == "f1-1990") {
    return RuleSpec::positional("f1-1990", padded({9, 6, 4, 3, 2, 1}, m), 11);
  }
  throw std::invalid_argument("unknown rule '" + std::string(name) + "'");
}

std::vector<std::string> rule_preset_names() {
  return {"plurality", "borda",   "copeland", "bucklin", "stv",
          "f1-2018",   "f1-2009", "f1-2002",  "f1-1990"};
}

bool WinnerSet::contains(CandidateId c) const noexcept {
  return std::binary_search(winners.begin(), winners.end(), c);
}

WinnerSet positional_winners(const PreferenceProfile& p, const RuleSpec& spec) {
  const std::size_t m = p.num_candidates();
  if (spec.kind != RuleKind::positional) {
    throw std::invalid_argument("positional_winners needs a positional rule");
  }
  if (spec.scoring_vector.size() != m) {
    throw std::invalid_argument("scoring vector length " +
                                std::to_string(spec.scoring_vector.size()) +
                                " does not match " + std::to_string(m) + " candidates");
  }
  WinnerSet out;
  out.scores.assign(m, 0.0);
  if (!spec.best_k) {
    for (const auto& b : p.ballots()) {
      for (std::size_t i = 0; i < b.length(); ++i) out.scores[b[i]] += spec.scoring_vector[i];
    }
  } else {
    if (*spec.best_k > p.num_voters()) {
      throw std::invalid_argument("best-k exceeds the number of ballots");
    }
    std::vector<std::vector<double>> awards(m);
    for (const auto& b : p.ballots()) {
      for (std::size_t i = 0; i < b.length(); ++i) awards[b[i]].push_back(spec.scoring_vector[i]);
    }
    for (std::size_t c = 0; c < m; ++c) {
      auto& a = awards[c];
      const std::size_t keep = std::min(*spec.best_k, a.size());
      std::partial_sort(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(keep), a.end(),
                        std::greater<>());
      double s = 0.0;
      for (std::size_t i = 0; i < keep; ++i) s += a[i];
      out.scores[c] = s;
    }
  }
  out.winners = argmax(out.scores);
  return out;
}

std::vector<std::size_t> pairwise_counts(const PreferenceProfile& p) {
  const std::size_t m = p.num_candidates();
  std::vector<std::size_t> wins(m * m, 0);
  std::vector<bool> ranked(m);
  for (const auto& b : p.ballots()) {
    std::fill(ranked.begin(), ranked.end(), false);
    for (std::size_t i = 0; i < b.length(); ++i) {
      const CandidateId c = b[i];
      for (std::size_t j = i + 1; j < b.length(); ++j) ++wins[c * m + b[j]];
      ranked[c] = true;
    }
    if (b.length() < m) {
      for (CandidateId c : b.ranking()) {
        for (std::size_t d = 0; d < m; ++d) {
          if (!ranked[d]) ++wins[c * m + d];
        }
      }
    }
  }
  return wins;
}

WinnerSet copeland_winners(const PreferenceProfile& p) {
  const std::size_t m = p.num_candidates();
  const std::size_t n = p.num_voters();
  const auto wins = pairwise_counts(p);
  WinnerSet out;
  out.scores.assign(m, 0.0);
  for (std::size_t c = 0; c < m; ++c) {
    for (std::size_t d = 0; d < m; ++d) {
      if (c == d) continue;
      if (2 * wins[c * m + d] > n) out.scores[c] += 1.0;
      if (2 * wins[d * m + c] > n) out.scores[c] -= 1.0;
    }
  }
  out.winners = argmax(out.scores);
  return out;
}

WinnerSet bucklin_winners(const PreferenceProfile& p) {
  const std::size_t m = p.num_candidates();
  const std::size_t n = p.num_voters();
  // at_depth[d*m + c] = #ballots ranking c at position d (0-based).
  std::vector<std::size_t> at_depth(m * m, 0);
  for (const auto& b : p.ballots()) {
    for (std::size_t i = 0; i < b.length(); ++i) ++at_depth[i * m + b[i]];
  }
  WinnerSet out;
  out.levels.assign(m, 0);
  std::vector<std::size_t> cumulative(m, 0);
  for (std::size_t d = 0; d < m; ++d) {
    for (std::size_t c = 0; c < m; ++c) {
      cumulative[c] += at_depth[d * m + c];
      if (out.levels[c] == 0 && 2 * cumulative[c] > n) out.levels[c] = d + 1;
    }
  }
  std::size_t best_level = 0;
  for (std::size_t level : out.levels) {
    if (level != 0 && (best_level == 0 || level < best_level)) best_level = level;
  }
  // Without any majority (truncated profiles only) the count over all m
  // positions decides.
  const std::size_t depth = best_level == 0 ? m : best_level;
  out.scores.assign(m, 0.0);
  for (std::size_t d = 0; d < depth; ++d) {
    for (std::size_t c = 0; c < m; ++c) out.scores[c] += static_cast<double>(at_depth[d * m + c]);
  }
  if (best_level == 0) {
    out.winners = argmax(out.scores);
    return out;
  }
  std::vector<double> contest(m, -1.0);
  for (std::size_t c = 0; c < m; ++c) {
    if (out.levels[c] == best_level) contest[c] = out.scores[c];
  }
  out.winners = argmax(contest);
  return out;
}

WinnerSet stv_winners(const PreferenceProfile& p, std::span<const CandidateId> tiebreak) {
  const std::size_t m = p.num_candidates();
  check_tiebreak(tiebreak, m);
  std::vector<std::size_t> tiebreak_rank(m);
  for (std::size_t i = 0; i < m; ++i) tiebreak_rank[tiebreak[i]] = i;

  std::vector<bool> alive(m, true);
  std::vector<std::size_t> tally(m);
  WinnerSet out;
  out.scores.assign(m, static_cast<double>(m));
  for (std::size_t round = 1; round < m; ++round) {
    std::fill(tally.begin(), tally.end(), 0);
    for (const auto& b : p.ballots()) {
      for (CandidateId c : b.ranking()) {
        if (alive[c]) {
          ++tally[c];
          break;
        }
      }
    }
    std::size_t loser = m;
    for (std::size_t c = 0; c < m; ++c) {
      if (!alive[c]) continue;
      if (loser == m || tally[c] < tally[loser] ||
          (tally[c] == tally[loser] && tiebreak_rank[c] > tiebreak_rank[loser])) {
        loser = c;
      }
    }
    alive[loser] = false;
    out.scores[loser] = static_cast<double>(round);
  }
  for (std::size_t c = 0; c < m; ++c) {
    if (alive[c]) out.winners.push_back(static_cast<CandidateId>(c));
  }
  return out;
}

CandidateId stv_winner(const PreferenceProfile& p, std::span<const CandidateId> tiebreak) {
  return stv_winners(p, tiebreak).winners.front();
}

WinnerSet evaluate(const PreferenceProfile& p, const RuleSpec& spec,
                   std::span<const CandidateId> tiebreak) {
  switch (spec.kind) {
    case RuleKind::positional: return positional_winners(p, spec);
    case RuleKind::copeland: return copeland_winners(p);
    case RuleKind::bucklin: return bucklin_winners(p);
    case RuleKind::stv:
      return stv_winners(p, tiebreak.empty() ? std::span<const CandidateId>(spec.stv_tiebreak)
                                             : tiebreak);
  }
  throw std::logic_error("unhandled rule kind");
}

std::vector<double> borda_scores(const PreferenceProfile& p) {
  return positional_winners(p, RuleSpec::borda(p.num_candidates())).scores;
}

}  // namespace votenoise
