#include "nbattack/stein.hpp"

#include <cmath>

#include "nbattack/error.hpp"

namespace nbattack {

namespace {

void require_dims(int r, long long n) {
  if (r < 1 || n <= r) {
    throw Error(ErrorCode::invalid_dims, "need N > r >= 1 (got r=" + std::to_string(r) + ", N=" + std::to_string(n) + ")");
  }
}

void require_nonnegative(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw Error(ErrorCode::nonpositive_input, std::string(name) + " must be finite and >= 0");
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorCode::nonpositive_input, std::string(name) + " must be finite and > 0");
}

}  // namespace

Rational stein_lambda(int r, long long n) {
  require_dims(r, n);
  return Rational(r + 1, n);
}

Sigma2Bracket sigma2_bounds(int r, long long n) {
  require_dims(r, n);
  return {Rational((r + 1) * n, 2), Rational((r + 1) * n)};
}

BoundTerms rollin_bound(double lambda, double a, double var_term) {
  require_positive(lambda, "lambda");
  require_nonnegative(a, "A");
  require_nonnegative(var_term, "variance term");
  return {12.0 / lambda * std::sqrt(var_term), 32.0 * a * a * a / lambda, 6.0 * a * a / std::sqrt(lambda)};
}

BoundTerms assembled_bound(int r, double n, double sigma2, double var_term_y) {
  if (r < 1) throw Error(ErrorCode::invalid_dims, "r must be >= 1");
  require_positive(n, "N");
  require_positive(sigma2, "sigma_Y^2");
  require_nonnegative(var_term_y, "variance term");
  const double r1 = r + 1.0;
  const double sigma = std::sqrt(sigma2);
  return {12.0 * n / (r1 * sigma2) * std::sqrt(var_term_y), 256.0 * r1 * r1 * n / (sigma2 * sigma),
          24.0 * std::pow(r1, 1.5) * std::sqrt(n) / sigma2};
}

double theorem_bound(int r, int r_star, double n, TheoremVariant variant) {
  if (r < 1) throw Error(ErrorCode::invalid_dims, "r must be >= 1");
  if (!(n >= 1.0)) throw Error(ErrorCode::invalid_dims, "N must be >= 1");
  const long long r_sq = static_cast<long long>(r) * r;
  if (r_star < r || r_star > r_sq) {
    throw Error(ErrorCode::rstar_out_of_range,
                "r* = " + std::to_string(r_star) + " outside [" + std::to_string(r) + ", " + std::to_string(r_sq) + "]");
  }
  const double c = variant == TheoremVariant::r_star ? static_cast<double>(r_star) : static_cast<double>(r_sq);
  const double root_r1 = std::sqrt(r + 1.0);
  const double root_n = std::sqrt(n);
  return 48.0 * c / (root_r1 * root_n) + (std::pow(2.0, 9.5) + 48.0) * root_r1 / root_n;
}

std::string to_string(InputSource source) {
  switch (source) {
    case InputSource::exact: return "exact";
    case InputSource::estimated: return "estimated";
    case InputSource::analytic_bound: return "analytic-bound";
  }
  return "unknown";
}

double analytic_var_term(int r, int r_star, long long n) {
  return 4.0 * r_star * static_cast<double>(r_star) * (r + 1.0) / static_cast<double>(n);
}

SteinReport make_stein_report(int r, int r_star, long long n, std::optional<SourcedValue> sigma2,
                              std::optional<SourcedValue> var_term) {
  SteinReport rep;
  rep.r = r;
  rep.r_star = r_star;
  rep.n = n;
  rep.lambda = stein_lambda(r, n);
  rep.sigma2_bracket = sigma2_bounds(r, n);
  rep.sigma2 = sigma2.value_or(SourcedValue{rep.sigma2_bracket.lower.to_double(), InputSource::analytic_bound, 0.0});
  rep.var_term = var_term.value_or(SourcedValue{analytic_var_term(r, r_star, n), InputSource::analytic_bound, 0.0});
  require_positive(rep.sigma2.value, "sigma_Y^2");

  const double s2 = rep.sigma2.value;
  const double lambda = rep.lambda.to_double();
  rep.a = 2.0 * (r + 1.0) / std::sqrt(s2);
  rep.rollin = rollin_bound(lambda, rep.a, rep.var_term.value / (s2 * s2));
  rep.assembled = assembled_bound(r, static_cast<double>(n), s2, rep.var_term.value);
  rep.rollin_delta = rep.rollin.total();
  rep.theorem_delta_rstar = theorem_bound(r, r_star, static_cast<double>(n), TheoremVariant::r_star);
  rep.theorem_delta_rsq = theorem_bound(r, r_star, static_cast<double>(n), TheoremVariant::r_squared);

  if (rep.sigma2.source == InputSource::estimated || rep.var_term.source == InputSource::estimated) {
    // d(delta)/d(sigma2) and d(delta)/d(v) from the Y-scale form.
    const double dn = static_cast<double>(n);
    const double r1 = r + 1.0;
    const double v = rep.var_term.value;
    const double d_sigma2 = -12.0 * dn / (r1 * s2 * s2) * std::sqrt(v) - 1.5 * 256.0 * r1 * r1 * dn / std::pow(s2, 2.5) -
                            24.0 * std::pow(r1, 1.5) * std::sqrt(dn) / (s2 * s2);
    double variance = std::pow(d_sigma2 * rep.sigma2.standard_error, 2);
    if (v > 0.0) {
      const double d_v = 12.0 * dn / (r1 * s2) * 0.5 / std::sqrt(v);
      variance += std::pow(d_v * rep.var_term.standard_error, 2);
    }
    rep.rollin_delta_se = std::sqrt(variance);
  }
  return rep;
}

}  // namespace nbattack
