#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pvalprior/expression.hpp"

namespace pvalprior {

/// Counts of p-values over a uniform partition of [0, 1]. Bins are half-open
/// [e_i, e_{i+1}) except the last, which also takes p = 1.
struct Histogram {
  std::vector<std::uint64_t> counts;

  std::size_t bins() const noexcept { return counts.size(); }
  double edge(std::size_t i) const noexcept {
    return static_cast<double>(i) / static_cast<double>(counts.size());
  }
  std::uint64_t total() const noexcept;
};

enum class Skew { LowConcentrated, Uniform, HighConcentrated };

std::string_view to_string(Skew skew) noexcept;

struct UniformityReport {
  double chi_square = 0.0;
  int chi_df = 0;
  double chi_p = 1.0;
  double ks_statistic = 0.0;
  bool consistent = true;  // chi-square verdict at the configured significance
};

/// Average between-group and within-group variance over genes.
struct SignalNoiseReport {
  double signal = 0.0;
  double noise = 0.0;
  std::size_t replicates = 0;  // n_r
  std::size_t genes = 0;       // n_c
};

inline constexpr std::size_t kDefaultBins = 20;
inline constexpr double kDiagnosticSignificance = 0.001;
inline constexpr double kDefaultLambda = 0.5;

Histogram histogram(std::span<const double> pvals, std::size_t bins = kDefaultBins);

/// Chi-square goodness of fit against equal counts over `bins` bins (df =
/// bins - 1) plus the one-sample Kolmogorov-Smirnov D against U(0, 1).
/// Needs at least 100 values.
UniformityReport uniformity_test(std::span<const double> pvals, std::size_t bins = kDefaultBins,
                                 double significance = kDiagnosticSignificance);

/// Kolmogorov-Smirnov D = sup |F_n(x) - x|.
double ks_statistic(std::span<const double> pvals);

/// Compares the first and last bin with the uniform expectation total / bins
/// using a two-sided binomial band at `significance`. An excess in the first
/// bin means LowConcentrated, an excess in the last bin HighConcentrated. If
/// both are in excess the more extreme one wins.
/// Requires >= 10 bins and a total count >= 1000.
Skew classify_skew(const Histogram& h, double significance = kDiagnosticSignificance);

/// signal = sum_g n_r (mean_t,g - mean_c,g)^2 / (2 n_c);
/// noise  = mean over genes of the average of the two groups' sample variances.
/// Both groups must have the same replicate count.
SignalNoiseReport signal_noise(const ExpressionMatrix& m, const GroupDesign& design,
                               std::string_view control, std::string_view treatment);

/// #{p > lambda} / ((1 - lambda) m). Deliberately not clamped to 1.
double estimate_pi0(std::span<const double> pvals, double lambda = kDefaultLambda);

/// Average of estimate_pi0 over a grid of lambdas.
double estimate_pi0_grid(std::span<const double> pvals, std::span<const double> lambdas);

/// Everything the diagnose step reports about one p-value vector.
struct DiagnosticsReport {
  std::size_t count = 0;
  Histogram histogram;
  UniformityReport uniformity;
  std::optional<Skew> skew;  // empty below the classifier's size requirements
  double lambda = kDefaultLambda;
  double pi0 = 0.0;
  std::optional<SignalNoiseReport> signal_noise;
};

DiagnosticsReport diagnose(std::span<const double> pvals, std::size_t bins = kDefaultBins,
                           double lambda = kDefaultLambda,
                           double significance = kDiagnosticSignificance);

/// CSV `bin_low,bin_high,count`.
void write_histogram(std::ostream& out, const Histogram& h);

}  // namespace pvalprior
