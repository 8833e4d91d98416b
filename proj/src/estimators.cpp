#include "nbattack/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "nbattack/error.hpp"

namespace nbattack {

namespace {

std::array<double, Moments::kDim> as_array(const Observation& o) { return {o.y, o.eta, o.theta, o.m2}; }

struct GroupStats {
  double mean_y, var_y, cov_eta_theta, var_m2;
};

GroupStats stats_of(const Moments& m) {
  return {m.mean(kY), m.variance(kY), m.covariance(kEta, kTheta), m.variance(kM2)};
}

double spread(const std::vector<double>& values) {
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / (n - 1.0) / n);
}

}  // namespace

void Moments::push(const Observation& obs) {
  const auto x = as_array(obs);
  ++count_;
  const double n = static_cast<double>(count_);
  std::array<double, kDim> before{};
  for (std::size_t i = 0; i < kDim; ++i) {
    before[i] = x[i] - mean_[i];
    mean_[i] += before[i] / n;
  }
  for (std::size_t i = 0; i < kDim; ++i) {
    const double after_i = x[i] - mean_[i];
    for (std::size_t j = 0; j < kDim; ++j) comoment_[i * kDim + j] += after_i * before[j];
  }
}

void Moments::merge(const Moments& other) {
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(count_);
  const double nb = static_cast<double>(other.count_);
  const double n = na + nb;
  std::array<double, kDim> delta{};
  for (std::size_t i = 0; i < kDim; ++i) delta[i] = other.mean_[i] - mean_[i];
  for (std::size_t i = 0; i < kDim; ++i) {
    for (std::size_t j = 0; j < kDim; ++j) {
      comoment_[i * kDim + j] += other.comoment_[i * kDim + j] + delta[i] * delta[j] * na * nb / n;
    }
  }
  for (std::size_t i = 0; i < kDim; ++i) mean_[i] += delta[i] * nb / n;
  count_ += other.count_;
}

double Moments::covariance(std::size_t i, std::size_t j) const noexcept {
  if (count_ < 2) return 0.0;
  return comoment_[i * kDim + j] / static_cast<double>(count_ - 1);
}

MomentAccumulator::MomentAccumulator(std::uint64_t batch_size) : batch_size_(std::max<std::uint64_t>(batch_size, 1)) {}

void MomentAccumulator::push(const Observation& obs) {
  total_.push(obs);
  current_.push(obs);
  if (current_.count() == batch_size_) {
    batches_.push_back(current_);
    current_ = Moments{};
  }
  if (has_prev_) {
    lag_sum_xy_ += obs.y * prev_y_;
    lag_sum_x_ += obs.y;
    lag_sum_y_ += prev_y_;
    ++lag_pairs_;
  }
  has_prev_ = true;
  prev_y_ = obs.y;
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
  total_.merge(other.total_);
  if (current_.count() > 0) {
    batches_.push_back(current_);
    current_ = Moments{};
  }
  batches_.insert(batches_.end(), other.batches_.begin(), other.batches_.end());
  current_ = other.current_;
  lag_sum_xy_ += other.lag_sum_xy_;
  lag_sum_x_ += other.lag_sum_x_;
  lag_sum_y_ += other.lag_sum_y_;
  lag_pairs_ += other.lag_pairs_;
  has_prev_ = other.has_prev_;
  prev_y_ = other.prev_y_;
}

EstimateReport MomentAccumulator::finalize() const {
  const std::uint64_t n = total_.count();
  if (n < 2) throw Error(ErrorCode::insufficient_samples, "need at least two observations");

  EstimateReport rep;
  rep.count = n;
  const GroupStats all = stats_of(total_);
  rep.mean_y = all.mean_y;
  rep.var_y_hat = all.var_y;
  rep.cov_eta_theta_hat = all.cov_eta_theta;
  rep.var_cond_m2_hat = all.var_m2;

  if (lag_pairs_ > 0 && all.var_y > 0.0) {
    const double mu = all.mean_y;
    const double c1 = (lag_sum_xy_ - mu * lag_sum_x_ - mu * lag_sum_y_) / static_cast<double>(lag_pairs_) + mu * mu;
    const double c0 = all.var_y * static_cast<double>(n - 1) / static_cast<double>(n);
    rep.lag1_autocorr_y = c1 / c0;
  }

  std::vector<Moments> pieces = batches_;
  if (current_.count() > 0) pieces.push_back(current_);
  // Batches of a single observation carry no within-batch variance.
  const bool usable = pieces.size() >= kMinBatches &&
                      std::all_of(pieces.begin(), pieces.end(), [](const Moments& m) { return m.count() >= 2; });

  if (usable) {
    const std::size_t groups = std::min(pieces.size(), kTargetBatches);
    std::vector<double> means, vars, covs, m2s;
    for (std::size_t g = 0; g < groups; ++g) {
      Moments merged;
      const std::size_t lo = g * pieces.size() / groups;
      const std::size_t hi = (g + 1) * pieces.size() / groups;
      for (std::size_t b = lo; b < hi; ++b) merged.merge(pieces[b]);
      const GroupStats s = stats_of(merged);
      means.push_back(s.mean_y);
      vars.push_back(s.var_y);
      covs.push_back(s.cov_eta_theta);
      m2s.push_back(s.var_m2);
    }
    rep.se_mean_y = spread(means);
    rep.se_var_y = spread(vars);
    rep.se_cov_eta_theta = spread(covs);
    rep.se_var_cond_m2 = spread(m2s);
    rep.batches = groups;
    rep.se_method = "batch-means";
  } else {
    const double dn = static_cast<double>(n);
    const double var_eta = total_.variance(kEta);
    const double var_theta = total_.variance(kTheta);
    rep.se_mean_y = std::sqrt(all.var_y / dn);
    rep.se_var_y = all.var_y * std::sqrt(2.0 / (dn - 1.0));
    rep.se_cov_eta_theta = std::sqrt((var_eta * var_theta + all.cov_eta_theta * all.cov_eta_theta) / (dn - 1.0));
    rep.se_var_cond_m2 = all.var_m2 * std::sqrt(2.0 / (dn - 1.0));
    rep.batches = pieces.size();
    rep.se_method = "iid";
  }
  return rep;
}

MomentAccumulator accumulate(const std::vector<Observation>& stream, std::uint64_t batch_size) {
  MomentAccumulator acc(batch_size);
  for (const auto& obs : stream) acc.push(obs);
  return acc;
}

}  // namespace nbattack
