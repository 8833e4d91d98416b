#pragma once

#include <optional>
#include <string>

#include "nbattack/rational.hpp"

namespace nbattack {

/// lambda = (r+1)/N. Errors: invalid-dims unless N > r >= 1.
Rational stein_lambda(int r, long long n);

struct Sigma2Bracket {
  Rational lower;  // (r+1)N/2
  Rational upper;  // (r+1)N
};
Sigma2Bracket sigma2_bounds(int r, long long n);

/// Three-term bound with its breakdown.
struct BoundTerms {
  double variance_term = 0.0;  // involves sqrt(Var E[(dW)^2 | .])
  double cubic_term = 0.0;     // involves A^3
  double square_term = 0.0;    // involves A^2
  double total() const noexcept { return variance_term + cubic_term + square_term; }
};

/// (12/lambda) sqrt(var_term) + 32 A^3/lambda + 6 A^2/sqrt(lambda), with
/// var_term on the W scale. Errors: nonpositive-input (lambda <= 0, or a
/// negative A / var_term).
BoundTerms rollin_bound(double lambda, double a, double var_term);

/// Same bound written on the Y scale:
/// 12N/((r+1) sigma2) sqrt(v) + 256 (r+1)^2 N / sigma^3 + 24 (r+1)^{3/2} sqrt(N) / sigma2,
/// with v = Var E[(Y'-Y)^2 | .]. Errors: nonpositive-input.
BoundTerms assembled_bound(int r, double n, double sigma2, double var_term_y);

enum class TheoremVariant { r_star, r_squared };

/// 48 c / (sqrt(r+1) sqrt(N)) + (2^{19/2} + 48) sqrt(r+1)/sqrt(N), where c is
/// r* or r^2 depending on the variant. Errors: rstar-out-of-range unless
/// r <= r* <= r^2; invalid-dims unless r >= 1 and N >= 1.
double theorem_bound(int r, int r_star, double n, TheoremVariant variant);

enum class InputSource { exact, estimated, analytic_bound };
std::string to_string(InputSource source);

struct SourcedValue {
  double value = 0.0;
  InputSource source = InputSource::analytic_bound;
  /// Standard error; only meaningful for estimated inputs.
  double standard_error = 0.0;
};

struct SteinReport {
  int r = 0;
  int r_star = 0;
  long long n = 0;
  Rational lambda;
  double a = 0.0;  // 2(r+1)/sigma_Y
  Sigma2Bracket sigma2_bracket;
  SourcedValue sigma2;
  SourcedValue var_term;  // Var E[(Y'-Y)^2 | .] on the Y scale
  BoundTerms rollin;      // evaluated on the W scale
  BoundTerms assembled;   // evaluated on the Y scale; equal to `rollin` up to rounding
  double rollin_delta = 0.0;
  /// First-order propagated standard error of rollin_delta; set only when an
  /// input is estimated.
  std::optional<double> rollin_delta_se;
  double theorem_delta_rstar = 0.0;
  double theorem_delta_rsq = 0.0;
};

/// The analytic worst case for the Y-scale variance term, 4 (r*)^2 (r+1) / N.
double analytic_var_term(int r, int r_star, long long n);

/// Assembles every bound. `sigma2` falls back to the lower end of the
/// bracket and `var_term` to `analytic_var_term` when not supplied.
SteinReport make_stein_report(int r, int r_star, long long n, std::optional<SourcedValue> sigma2,
                              std::optional<SourcedValue> var_term);

}  // namespace nbattack
