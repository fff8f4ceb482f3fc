#include "pvalprior/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "pvalprior/error.hpp"

namespace pvalprior::special {

namespace {

constexpr double kEpsilon = 1e-16;
constexpr double kTiny = 1e-300;
constexpr int kMaxIterations = 100000;

// Continued fraction for I_x(a, b), valid (fast) for x < (a + 1) / (a + b + 2).
double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double dm = m;
    const double m2 = 2.0 * dm;
    double aa = dm * (b - dm) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + dm) * (qab + dm) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEpsilon) return h;
  }
  throw Error("incomplete beta continued fraction did not converge (a=" + std::to_string(a) +
              ", b=" + std::to_string(b) + ", x=" + std::to_string(x) + ")");
}

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// log(sum(exp(terms))) without overflow.
double log_sum_exp(const std::vector<double>& terms) {
  if (terms.empty()) return -std::numeric_limits<double>::infinity();
  const double peak = *std::max_element(terms.begin(), terms.end());
  if (!std::isfinite(peak)) return peak;
  // Smallest terms first to keep the running sum accurate.
  std::vector<double> scaled;
  scaled.reserve(terms.size());
  for (double t : terms) scaled.push_back(std::exp(t - peak));
  std::sort(scaled.begin(), scaled.end());
  double sum = 0.0;
  for (double s : scaled) sum += s;
  return peak + std::log(sum);
}

}  // namespace

double regularized_beta(double a, double b, double x, double y) {
  if (!(a > 0.0) || !(b > 0.0)) throw Error("incomplete beta requires a > 0 and b > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw Error("incomplete beta requires x in [0, 1]");
  if (x == 0.0) return 0.0;
  if (y == 0.0) return 1.0;
  const double log_front = a * std::log(x) + b * std::log(y) - log_beta(a, b);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return std::exp(log_front) * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - std::exp(log_front) * beta_continued_fraction(b, a, y) / b;
}

double log_choose(std::int64_t n, std::int64_t k) {
  const auto dn = static_cast<double>(n);
  const auto dk = static_cast<double>(k);
  return std::lgamma(dn + 1.0) - std::lgamma(dk + 1.0) - std::lgamma(dn - dk + 1.0);
}

double binomial_upper_tail(std::int64_t n, double q, std::int64_t k) {
  if (n < 0) throw Error("binomial tail requires n >= 0");
  if (!(q >= 0.0 && q <= 1.0)) throw Error("binomial tail requires q in [0, 1]");
  if (k <= 0) return 1.0;
  if (k > n) return 0.0;
  if (q == 0.0) return 0.0;
  if (q == 1.0) return 1.0;

  const double log_q = std::log(q);
  const double log_1mq = std::log1p(-q);
  const auto term = [&](std::int64_t i) {
    return log_choose(n, i) + static_cast<double>(i) * log_q +
           static_cast<double>(n - i) * log_1mq;
  };

  // Sum whichever side of k is the tail, so the result never comes from
  // subtracting two numbers close to one another in the small-p regime.
  const auto mean = static_cast<double>(n) * q;
  std::vector<double> terms;
  if (static_cast<double>(k) >= mean) {
    for (std::int64_t i = k; i <= n; ++i) {
      terms.push_back(term(i));
      if (terms.size() > 32 && terms.back() < terms.front() - 80.0) break;
    }
    return std::min(1.0, std::exp(log_sum_exp(terms)));
  }
  for (std::int64_t i = k - 1; i >= 0; --i) {
    terms.push_back(term(i));
    if (terms.size() > 32 && terms.back() < terms.front() - 80.0) break;
  }
  return std::clamp(1.0 - std::exp(log_sum_exp(terms)), 0.0, 1.0);
}

double hypergeometric_upper_tail(std::int64_t population, std::int64_t successes,
                                 std::int64_t draws, std::int64_t k) {
  if (population < 0 || successes < 0 || draws < 0 || successes > population ||
      draws > population) {
    throw Error("invalid hypergeometric parameters");
  }
  const std::int64_t lo = std::max<std::int64_t>(0, draws - (population - successes));
  const std::int64_t hi = std::min(successes, draws);
  if (k <= lo) return 1.0;
  if (k > hi) return 0.0;
  const double log_denominator = log_choose(population, draws);
  std::vector<double> terms;
  for (std::int64_t i = k; i <= hi; ++i) {
    terms.push_back(log_choose(successes, i) + log_choose(population - successes, draws - i) -
                    log_denominator);
  }
  return std::clamp(std::exp(log_sum_exp(terms)), 0.0, 1.0);
}

double chi_square_upper_tail(double x, double df) {
  if (!(df > 0.0)) throw Error("chi-square tail requires df > 0");
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(df / 2.0, x / 2.0);
}

double normal_quantile(double u) {
  if (!(u > 0.0 && u < 1.0)) throw Error("normal quantile requires u in (0, 1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), u);
}

}  // namespace pvalprior::special
