#pragma once

#include <cstddef>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "votenoise/profile.hpp"
#include "votenoise/random.hpp"

namespace votenoise {

// Z(φ, k) = Π_{i=1..k} (1 + φ + … + φ^{i−1}).
double normalizing_constant(double phi, std::size_t k);

// E[κ(v, center)] under Mallows(φ) over k candidates, summed over the
// insertion steps of the repeated-insertion model (no 1/(1−φ) terms, so it is
// exact at φ = 1).
double expected_swap_distance(double phi, std::size_t k);

// The φ whose expected swap distance is norm_phi · k(k−1)/4. Bisection to
// 1e−10 in φ; 0 and 1 map exactly. k ≤ 1 yields 0. Throws
// std::invalid_argument if norm_phi ∉ [0, 1].
double calibrate_norm_phi(double norm_phi, std::size_t k);

inline constexpr double kCalibrationTolerance = 1e-10;

// Thread-safe memo of calibrate_norm_phi keyed by (norm_phi, k).
class CalibrationCache {
 public:
  double phi(double norm_phi, std::size_t k);
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::pair<double, std::size_t>, double> table_;
};

CalibrationCache& global_calibration_cache();

// Which length a normalized dispersion is calibrated against when the center
// is a truncated ballot.
enum class LengthNormalization {
  ballot_length,    // k = the ballot's own length
  candidate_count,  // k = m, the election's candidate count
};

/// Mallows model centered at a ballot. The model ranks exactly the center's
/// candidates; for a truncated center the unranked candidates stay unranked.
class MallowsParams {
 public:
  static MallowsParams from_phi(Ballot center, double phi);

  // calibration_length defaults to the center's length.
  static MallowsParams from_norm_phi(Ballot center, double norm_phi,
                                     std::optional<std::size_t> calibration_length = {});

  const Ballot& center() const noexcept { return center_; }
  double phi() const noexcept { return phi_; }
  std::optional<double> norm_phi() const noexcept { return norm_phi_; }
  std::size_t k() const noexcept { return center_.length(); }

 private:
  MallowsParams(Ballot center, double phi, std::optional<double> norm_phi)
      : center_(std::move(center)), phi_(phi), norm_phi_(norm_phi) {}

  Ballot center_;
  double phi_ = 0.0;
  std::optional<double> norm_phi_;
};

// φ^κ(v, center) / Z. v must rank exactly the center's candidates
// (DistanceUndefined otherwise). Uses 0^0 = 1.
double pmf(const MallowsParams& params, const Ballot& v);

/// Repeated-insertion sampler for a fixed (φ, k). Step i inserts the i-th
/// center candidate j slots above the bottom of the partial ranking with
/// probability φ^j / (1 + … + φ^{i−1}); offset j adds exactly j inversions.
class MallowsSampler {
 public:
  MallowsSampler(double phi, std::size_t k);

  double phi() const noexcept { return phi_; }
  std::size_t k() const noexcept { return k_; }

  // center.size() must equal k(). out is resized to k.
  void sample_into(std::span<const CandidateId> center, Rng& rng,
                   std::vector<CandidateId>& out) const;

  Ballot sample(const Ballot& center, Rng& rng) const;

 private:
  double phi_;
  std::size_t k_;
  // cumulative_[offset(i) + j] = P(offset ≤ j) at insertion step i (1-based).
  std::vector<double> cumulative_;
};

Ballot sample(const MallowsParams& params, Rng& rng);

}  // namespace votenoise
