#include "votenoise/mallows.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace votenoise {

namespace {

void check_phi(double phi) {
  if (!(phi >= 0.0 && phi <= 1.0)) {
    throw std::invalid_argument("dispersion must lie in [0, 1], got " + std::to_string(phi));
  }
}

// Triangular layout: step i (1-based) owns i slots starting at i(i−1)/2.
constexpr std::size_t step_offset(std::size_t i) noexcept { return i * (i - 1) / 2; }

}  // namespace

double normalizing_constant(double phi, std::size_t k) {
  check_phi(phi);
  double z = 1.0;
  double partial = 0.0;  // 1 + φ + … + φ^{i−1}
  double power = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    partial += power;
    power *= phi;
    z *= partial;
  }
  return z;
}

double expected_swap_distance(double phi, std::size_t k) {
  check_phi(phi);
  double total = 0.0;
  double mass = 0.0;      // Σ_{j<i} φ^j
  double weighted = 0.0;  // Σ_{j<i} j φ^j
  double power = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    const double j = static_cast<double>(i - 1);
    mass += power;
    weighted += j * power;
    power *= phi;
    total += weighted / mass;
  }
  return total;
}

double calibrate_norm_phi(double norm_phi, std::size_t k) {
  if (!(norm_phi >= 0.0 && norm_phi <= 1.0)) {
    throw std::invalid_argument("norm-phi must lie in [0, 1], got " + std::to_string(norm_phi));
  }
  if (k <= 1 || norm_phi == 0.0) return 0.0;
  if (norm_phi == 1.0) return 1.0;
  const double kd = static_cast<double>(k);
  const double target = norm_phi * kd * (kd - 1.0) / 4.0;
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > kCalibrationTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (expected_swap_distance(mid, k) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double CalibrationCache::phi(double norm_phi, std::size_t k) {
  const auto key = std::make_pair(norm_phi, k);
  {
    std::lock_guard lock(mutex_);
    if (auto it = table_.find(key); it != table_.end()) return it->second;
  }
  const double value = calibrate_norm_phi(norm_phi, k);
  std::lock_guard lock(mutex_);
  table_.emplace(key, value);
  return value;
}

std::size_t CalibrationCache::size() const {
  std::lock_guard lock(mutex_);
  return table_.size();
}

CalibrationCache& global_calibration_cache() {
  static CalibrationCache cache;
  return cache;
}

MallowsParams MallowsParams::from_phi(Ballot center, double phi) {
  check_phi(phi);
  if (center.length() == 0) throw std::invalid_argument("Mallows center must be non-empty");
  return MallowsParams(std::move(center), phi, std::nullopt);
}

MallowsParams MallowsParams::from_norm_phi(Ballot center, double norm_phi,
                                           std::optional<std::size_t> calibration_length) {
  if (center.length() == 0) throw std::invalid_argument("Mallows center must be non-empty");
  const std::size_t k = calibration_length.value_or(center.length());
  const double phi = global_calibration_cache().phi(norm_phi, k);
  return MallowsParams(std::move(center), phi, norm_phi);
}

double pmf(const MallowsParams& params, const Ballot& v) {
  const SwapDistance d = subset_swap_distance(params.center(), v);
  return std::pow(params.phi(), static_cast<double>(d)) /
         normalizing_constant(params.phi(), params.k());
}

MallowsSampler::MallowsSampler(double phi, std::size_t k) : phi_(phi), k_(k) {
  check_phi(phi);
  cumulative_.resize(step_offset(k + 1));
  for (std::size_t i = 1; i <= k; ++i) {
    double norm = 0.0;
    double power = 1.0;
    for (std::size_t j = 0; j < i; ++j) {
      norm += power;
      power *= phi;
    }
    double acc = 0.0;
    power = 1.0;
    const std::size_t base = step_offset(i);
    for (std::size_t j = 0; j < i; ++j) {
      acc += power;
      power *= phi;
      cumulative_[base + j] = acc / norm;
    }
    cumulative_[base + i - 1] = 1.0;
  }
}

void MallowsSampler::sample_into(std::span<const CandidateId> center, Rng& rng,
                                 std::vector<CandidateId>& out) const {
  if (center.size() != k_) {
    throw std::invalid_argument("center length does not match sampler");
  }
  out.clear();
  out.reserve(k_);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 1; i <= k_; ++i) {
    std::size_t j = 0;
    if (i > 1 && phi_ > 0.0) {
      const double u = unit(rng);
      const double* cum = cumulative_.data() + step_offset(i);
      while (j + 1 < i && cum[j] <= u) ++j;
    }
    // i−1 candidates already placed; offset j puts the new one above the
    // bottom j of them.
    const auto at = static_cast<std::ptrdiff_t>(i - 1 - j);
    out.insert(out.begin() + at, center[i - 1]);
  }
}

Ballot MallowsSampler::sample(const Ballot& center, Rng& rng) const {
  std::vector<CandidateId> out;
  sample_into(center.ranking(), rng, out);
  return Ballot(std::move(out));
}

Ballot sample(const MallowsParams& params, Rng& rng) {
  return MallowsSampler(params.phi(), params.k()).sample(params.center(), rng);
}

}  // namespace votenoise
