#pragma once

// Brute-force reference implementations. Nothing here calls the library
// routine it is meant to check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "votenoise/mallows.hpp"
#include "votenoise/profile.hpp"
#include "votenoise/rules.hpp"

namespace oracle {

using votenoise::Ballot;
using votenoise::CandidateId;
using votenoise::PreferenceProfile;
using votenoise::RuleKind;
using votenoise::RuleSpec;

using Order = std::vector<CandidateId>;

inline Order order_of(const Ballot& b) { return Order(b.ranking().begin(), b.ranking().end()); }

// Pairs (x, y) ordered differently by a and b. Both must rank the same set.
inline std::size_t pair_disagreements(const Order& a, const Order& b) {
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      // a ranks a[i] above a[j]; does b?
      const auto pi = std::find(b.begin(), b.end(), a[i]);
      const auto pj = std::find(b.begin(), b.end(), a[j]);
      if (pi > pj) ++d;
    }
  }
  return d;
}

// Fewest adjacent transpositions turning a into b, by breadth-first search.
inline std::size_t bfs_swaps(const Order& a, const Order& b) {
  std::map<Order, std::size_t> dist{{a, 0}};
  std::queue<Order> todo;
  todo.push(a);
  while (!todo.empty()) {
    Order cur = todo.front();
    todo.pop();
    const std::size_t d = dist[cur];
    if (cur == b) return d;
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      Order next = cur;
      std::swap(next[i], next[i + 1]);
      if (dist.emplace(next, d + 1).second) todo.push(next);
    }
  }
  return static_cast<std::size_t>(-1);
}

inline std::vector<Order> permutations_of(Order items) {
  std::sort(items.begin(), items.end());
  std::vector<Order> out;
  do out.push_back(items);
  while (std::next_permutation(items.begin(), items.end()));
  return out;
}

// Mallows distribution over the center's candidates, normalised by the
// explicit sum of weights rather than a closed form.
inline std::map<Order, double> mallows_table(const Order& center, double phi) {
  std::map<Order, double> table;
  double total = 0.0;
  for (const auto& v : permutations_of(center)) {
    const double w = std::pow(phi, static_cast<double>(pair_disagreements(center, v)));
    table[v] = w;
    total += w;
  }
  for (auto& [v, w] : table) w /= total;
  return table;
}

inline double mean_disagreements(const Order& center, double phi) {
  double e = 0.0;
  for (const auto& [v, p] : mallows_table(center, phi)) {
    e += p * static_cast<double>(pair_disagreements(center, v));
  }
  return e;
}

// ---- voting rules, written from their textbook definitions ----

inline std::size_t rank_of(const Order& v, CandidateId c) {
  return static_cast<std::size_t>(std::find(v.begin(), v.end(), c) - v.begin());
}

inline bool prefers(const Order& v, CandidateId c, CandidateId d) {
  // Ranked beats unranked; two unranked candidates are incomparable.
  return rank_of(v, c) < rank_of(v, d);
}

inline std::vector<Order> orders(const PreferenceProfile& p) {
  std::vector<Order> out;
  for (const auto& b : p.ballots()) out.push_back(order_of(b));
  return out;
}

inline std::set<CandidateId> best(const std::vector<double>& s) {
  const double top = *std::max_element(s.begin(), s.end());
  std::set<CandidateId> w;
  for (std::size_t c = 0; c < s.size(); ++c) {
    if (s[c] == top) w.insert(static_cast<CandidateId>(c));
  }
  return w;
}

inline std::vector<double> positional_scores(const PreferenceProfile& p, const RuleSpec& rule) {
  const std::size_t m = p.num_candidates();
  std::vector<std::vector<double>> awards(m);
  for (const auto& v : orders(p)) {
    for (std::size_t i = 0; i < v.size(); ++i) awards[v[i]].push_back(rule.scoring_vector[i]);
  }
  std::vector<double> score(m, 0.0);
  for (std::size_t c = 0; c < m; ++c) {
    auto& a = awards[c];
    std::sort(a.begin(), a.end(), std::greater<>());
    const std::size_t keep = rule.best_k ? std::min(*rule.best_k, a.size()) : a.size();
    for (std::size_t i = 0; i < keep; ++i) score[c] += a[i];
  }
  return score;
}

inline std::vector<double> copeland_scores(const PreferenceProfile& p) {
  const std::size_t m = p.num_candidates();
  const auto vs = orders(p);
  const double half = static_cast<double>(vs.size()) / 2.0;
  std::vector<double> score(m, 0.0);
  for (CandidateId c = 0; c < m; ++c) {
    for (CandidateId d = 0; d < m; ++d) {
      if (c == d) continue;
      double cd = 0, dc = 0;
      for (const auto& v : vs) {
        if (prefers(v, c, d)) ++cd;
        if (prefers(v, d, c)) ++dc;
      }
      if (cd > half) score[c] += 1;
      if (dc > half) score[c] -= 1;
    }
  }
  return score;
}

inline std::set<CandidateId> bucklin(const PreferenceProfile& p) {
  const std::size_t m = p.num_candidates();
  const auto vs = orders(p);
  const double half = static_cast<double>(vs.size()) / 2.0;
  for (std::size_t depth = 1; depth <= m; ++depth) {
    std::vector<double> within(m, 0.0);
    for (const auto& v : vs) {
      for (std::size_t i = 0; i < std::min(depth, v.size()); ++i) within[v[i]] += 1;
    }
    if (*std::max_element(within.begin(), within.end()) > half) return best(within);
    if (depth == m) return best(within);
  }
  return {};
}

inline CandidateId stv(const PreferenceProfile& p, const Order& tiebreak) {
  const std::size_t m = p.num_candidates();
  std::set<CandidateId> alive;
  for (CandidateId c = 0; c < m; ++c) alive.insert(c);
  const auto vs = orders(p);
  while (alive.size() > 1) {
    std::map<CandidateId, int> tally;
    for (CandidateId c : alive) tally[c] = 0;
    for (const auto& v : vs) {
      for (CandidateId c : v) {
        if (alive.count(c)) {
          ++tally[c];
          break;
        }
      }
    }
    int low = tally.begin()->second;
    for (auto [c, t] : tally) low = std::min(low, t);
    // Among the lowest, drop the one latest in the tie-break order.
    CandidateId victim = 0;
    std::size_t latest = 0;
    bool found = false;
    for (auto [c, t] : tally) {
      if (t != low) continue;
      const std::size_t r = rank_of(tiebreak, c);
      if (!found || r > latest) {
        victim = c;
        latest = r;
        found = true;
      }
    }
    alive.erase(victim);
  }
  return *alive.begin();
}

// Winners of a deterministic rule, or of STV under the given tie-break.
inline std::set<CandidateId> winners(const PreferenceProfile& p, const RuleSpec& rule,
                                     const Order& tiebreak = {}) {
  switch (rule.kind) {
    case RuleKind::positional: return best(positional_scores(p, rule));
    case RuleKind::copeland: return best(copeland_scores(p));
    case RuleKind::bucklin: return bucklin(p);
    case RuleKind::stv: {
      const Order& t = tiebreak.empty() ? rule.stv_tiebreak : tiebreak;
      return {stv(p, t)};
    }
  }
  return {};
}

// Exact P(c wins) after Mallows perturbation of every ballot, by enumerating
// the product of per-ballot tables. STV without a fixed order averages over
// all m! tie-break orders.
inline std::vector<double> winning_probabilities(const PreferenceProfile& p, const RuleSpec& rule,
                                                 double norm_phi) {
  const std::size_t m = p.num_candidates();
  std::vector<std::vector<std::pair<Order, double>>> tables;
  for (const auto& b : p.ballots()) {
    const double phi = votenoise::calibrate_norm_phi(norm_phi, b.length());
    std::vector<std::pair<Order, double>> t;
    for (const auto& [v, w] : mallows_table(order_of(b), phi)) t.emplace_back(v, w);
    tables.push_back(std::move(t));
  }
  std::vector<Order> tiebreaks;
  Order ident(m);
  std::iota(ident.begin(), ident.end(), 0);
  if (rule.kind == RuleKind::stv && rule.stv_tiebreak.empty()) {
    tiebreaks = permutations_of(ident);
  } else {
    tiebreaks.push_back({});
  }

  std::vector<double> prob(m, 0.0);
  std::vector<std::size_t> idx(tables.size(), 0);
  while (true) {
    double w = 1.0;
    std::vector<Ballot> ballots;
    for (std::size_t i = 0; i < tables.size(); ++i) {
      w *= tables[i][idx[i]].second;
      ballots.emplace_back(tables[i][idx[i]].first);
    }
    if (w > 0.0) {
      const PreferenceProfile q = p.with_ballots(ballots);
      for (const auto& t : tiebreaks) {
        for (CandidateId c : winners(q, rule, t)) {
          prob[c] += w / static_cast<double>(tiebreaks.size());
        }
      }
    }
    std::size_t i = 0;
    while (i < idx.size() && ++idx[i] == tables[i].size()) idx[i++] = 0;
    if (i == idx.size()) break;
  }
  return prob;
}

// ---- random fixtures ----

inline PreferenceProfile random_profile(std::size_t m, std::size_t n, std::mt19937_64& rng,
                                        bool allow_truncation) {
  std::vector<Ballot> ballots;
  Order all(m);
  std::iota(all.begin(), all.end(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    Order v = all;
    std::shuffle(v.begin(), v.end(), rng);
    if (allow_truncation) {
      std::uniform_int_distribution<std::size_t> len(1, m);
      v.resize(len(rng));
    }
    ballots.emplace_back(v);
  }
  return PreferenceProfile::with_default_names(m, std::move(ballots));
}

// Upper-tail p-value of Pearson's χ² statistic for observed counts against
// expected probabilities (cells with zero probability must have zero counts).
inline double chi_square_p_value(const std::vector<double>& observed,
                                 const std::vector<double>& expected_prob, double total) {
  double stat = 0.0;
  std::size_t cells = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = expected_prob[i] * total;
    if (e <= 0.0) {
      if (observed[i] > 0.0) return 0.0;
      continue;
    }
    stat += (observed[i] - e) * (observed[i] - e) / e;
    ++cells;
  }
  if (cells < 2) return 1.0;
  const boost::math::chi_squared dist(static_cast<double>(cells - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

}  // namespace oracle
