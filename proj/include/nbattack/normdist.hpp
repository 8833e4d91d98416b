#pragma once

#include <span>
#include <vector>

namespace nbattack {

double std_normal_pdf(double x) noexcept;
double std_normal_cdf(double x) noexcept;
/// Errors: domain-error unless 0 < u < 1.
double std_normal_quantile(double u);

/// Sorted, finite, nonempty sample.
class Sample {
 public:
  /// Sorts; errors: empty-sample, domain-error for non-finite values.
  explicit Sample(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::vector<double> values_;
};

/// Integral of |F_n - Phi| evaluated segment by segment in closed form.
double wasserstein1_to_normal(const Sample& s);

/// sup |F_n - Phi|.
double kolmogorov_to_normal(const Sample& s);

}  // namespace nbattack
