#include "nbattack/normdist.hpp"

#include <algorithm>
#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <numbers>

#include "nbattack/error.hpp"

namespace nbattack {

double std_normal_pdf(double x) noexcept {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double std_normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double std_normal_quantile(double u) {
  if (!(u > 0.0 && u < 1.0)) throw Error(ErrorCode::domain_error, "quantile argument must lie in (0,1)");
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u);
}

Sample::Sample(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw Error(ErrorCode::empty_sample, "sample is empty");
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::domain_error, "sample contains a non-finite value");
  }
  std::sort(values_.begin(), values_.end());
}

namespace {

/// Antiderivative of Phi vanishing at -infinity.
double integrated_cdf(double x) { return x * std_normal_cdf(x) + std_normal_pdf(x); }

/// Integral over [a, b] of |c - Phi(x)| for constant 0 < c < 1.
double segment_distance(double a, double b, double c) {
  const double cross = std_normal_quantile(c);
  auto below = [c](double lo, double hi) {  // Phi <= c on [lo, hi]
    return c * (hi - lo) - (integrated_cdf(hi) - integrated_cdf(lo));
  };
  auto above = [c](double lo, double hi) {  // Phi >= c on [lo, hi]
    return (integrated_cdf(hi) - integrated_cdf(lo)) - c * (hi - lo);
  };
  if (cross <= a) return above(a, b);
  if (cross >= b) return below(a, b);
  return below(a, cross) + above(cross, b);
}

}  // namespace

double wasserstein1_to_normal(const Sample& s) {
  const auto x = s.values();
  const double n = static_cast<double>(x.size());
  // Left tail: F_n = 0, right tail: F_n = 1.
  double total = integrated_cdf(x.front()) + integrated_cdf(-x.back());
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (x[i] > x[i - 1]) total += segment_distance(x[i - 1], x[i], static_cast<double>(i) / n);
  }
  return total;
}

double kolmogorov_to_normal(const Sample& s) {
  const auto x = s.values();
  const double n = static_cast<double>(x.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double phi = std_normal_cdf(x[i]);
    worst = std::max({worst, std::abs(static_cast<double>(i + 1) / n - phi), std::abs(static_cast<double>(i) / n - phi)});
  }
  return worst;
}

}  // namespace nbattack
