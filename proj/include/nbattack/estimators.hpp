#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace nbattack {

/// Per-state quantities fed to the estimators.
struct Observation {
  double y = 0.0;
  double eta = 0.0;
  double theta = 0.0;
  double m2 = 0.0;  // E[(dY)^2 | state]
};

/// Welford/Chan running means and co-moments for the four observation
/// components. `merge` is exact up to rounding.
class Moments {
 public:
  static constexpr std::size_t kDim = 4;

  void push(const Observation& obs);
  void merge(const Moments& other);

  std::uint64_t count() const noexcept { return count_; }
  double mean(std::size_t i) const noexcept { return mean_[i]; }
  /// Sample (n-1) covariance; 0 when fewer than two observations.
  double covariance(std::size_t i, std::size_t j) const noexcept;
  double variance(std::size_t i) const noexcept { return covariance(i, i); }

 private:
  std::uint64_t count_ = 0;
  std::array<double, kDim> mean_{};
  std::array<double, kDim * kDim> comoment_{};
};

enum Component : std::size_t { kY = 0, kEta = 1, kTheta = 2, kM2 = 3 };

struct EstimateReport {
  std::uint64_t count = 0;
  double mean_y = 0.0;
  double var_y_hat = 0.0;
  double cov_eta_theta_hat = 0.0;
  double var_cond_m2_hat = 0.0;
  double se_mean_y = 0.0;
  double se_var_y = 0.0;
  double se_cov_eta_theta = 0.0;
  double se_var_cond_m2 = 0.0;
  double lag1_autocorr_y = 0.0;
  std::size_t batches = 0;
  /// "batch-means", or "iid" when too few batches were available.
  std::string se_method;
};

/// Streaming accumulator with batch structure for batch-means standard errors.
///
/// Observations are grouped into consecutive batches of `batch_size`; merging
/// concatenates batch lists, and `finalize` regroups them into at most
/// `kTargetBatches` contiguous groups.
class MomentAccumulator {
 public:
  static constexpr std::size_t kTargetBatches = 32;
  static constexpr std::size_t kMinBatches = 20;

  explicit MomentAccumulator(std::uint64_t batch_size = 1);

  void push(const Observation& obs);
  void merge(const MomentAccumulator& other);

  std::uint64_t count() const noexcept { return total_.count(); }
  const Moments& totals() const noexcept { return total_; }

  /// Errors: insufficient-samples when fewer than two observations.
  EstimateReport finalize() const;

 private:
  std::uint64_t batch_size_;
  Moments total_;
  std::vector<Moments> batches_;
  Moments current_;
  // Lag-1 products of Y within a single stream.
  bool has_prev_ = false;
  double prev_y_ = 0.0;
  double lag_sum_xy_ = 0.0;
  double lag_sum_x_ = 0.0;
  double lag_sum_y_ = 0.0;
  std::uint64_t lag_pairs_ = 0;
};

/// Convenience: accumulate a whole vector.
MomentAccumulator accumulate(const std::vector<Observation>& stream, std::uint64_t batch_size);

}  // namespace nbattack
