#pragma once

#include <cstdint>

namespace pvalprior::special {

/// Regularized incomplete beta I_x(a, b), evaluated by continued fraction
/// (modified Lentz) with the usual switch to 1 - I_{1-x}(b, a) above the
/// mean. `y` must equal 1 - x; passing it separately avoids cancellation when
/// the caller can form it exactly (e.g. t^2 / (df + t^2)).
double regularized_beta(double a, double b, double x, double y);

inline double regularized_beta(double a, double b, double x) {
  return regularized_beta(a, b, x, 1.0 - x);
}

/// log C(n, k) via lgamma.
double log_choose(std::int64_t n, std::int64_t k);

/// Pr(X >= k) for X ~ Binomial(n, q). Exact term-by-term sum, accumulated in
/// log space.
double binomial_upper_tail(std::int64_t n, double q, std::int64_t k);

/// Pr(X >= k) for X ~ Hypergeometric(population, successes, draws).
double hypergeometric_upper_tail(std::int64_t population, std::int64_t successes,
                                 std::int64_t draws, std::int64_t k);

/// Upper-tail chi-square probability Pr(X >= x), X ~ chi-square(df).
double chi_square_upper_tail(double x, double df);

/// Standard normal quantile. u must lie in (0, 1).
double normal_quantile(double u);

}  // namespace pvalprior::special
