#include "pvalprior/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "csv.hpp"
#include "pvalprior/error.hpp"
#include "pvalprior/special.hpp"

namespace pvalprior {

namespace {

void require_probabilities(std::span<const double> pvals) {
  for (std::size_t i = 0; i < pvals.size(); ++i) {
    if (!(pvals[i] >= 0.0 && pvals[i] <= 1.0)) {
      throw Error("p-value at position " + std::to_string(i) + " is outside [0, 1]");
    }
  }
}

void require_count(std::span<const double> pvals, std::size_t minimum, const char* what) {
  if (pvals.size() < minimum) {
    throw Error(std::string(what) + " needs at least " + std::to_string(minimum) +
                " p-values, got " + std::to_string(pvals.size()));
  }
}

double sample_variance(std::span<const double> v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  if (*lo == *hi) return 0.0;
  const double mean = order_free_mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(v.size() - 1);
}

}  // namespace

std::string_view to_string(Skew skew) noexcept {
  switch (skew) {
    case Skew::LowConcentrated:
      return "low-concentrated";
    case Skew::Uniform:
      return "uniform";
    case Skew::HighConcentrated:
      return "high-concentrated";
  }
  return "unknown";
}

std::uint64_t Histogram::total() const noexcept {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

Histogram histogram(std::span<const double> pvals, std::size_t bins) {
  if (bins < 1) throw Error("histogram needs at least one bin");
  require_probabilities(pvals);
  Histogram h{std::vector<std::uint64_t>(bins, 0)};
  const auto nb = static_cast<double>(bins);
  for (double p : pvals) {
    auto idx = static_cast<std::size_t>(std::floor(p * nb));
    idx = std::min(idx, bins - 1);
    // p * bins can round across an edge; settle against the edges themselves.
    while (idx > 0 && p < h.edge(idx)) --idx;
    while (idx + 1 < bins && p >= h.edge(idx + 1)) ++idx;
    ++h.counts[idx];
  }
  return h;
}

double ks_statistic(std::span<const double> pvals) {
  require_probabilities(pvals);
  if (pvals.empty()) throw Error("KS statistic of an empty sample");
  std::vector<double> sorted(pvals.begin(), pvals.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double above = static_cast<double>(i + 1) / n - sorted[i];
    const double below = sorted[i] - static_cast<double>(i) / n;
    d = std::max({d, above, below});
  }
  return std::clamp(d, 0.0, 1.0);
}

UniformityReport uniformity_test(std::span<const double> pvals, std::size_t bins,
                                 double significance) {
  require_count(pvals, 100, "uniformity test");
  if (bins < 2) throw Error("uniformity test needs at least 2 bins");
  const auto h = histogram(pvals, bins);
  const double expected = static_cast<double>(pvals.size()) / static_cast<double>(bins);
  double chi = 0.0;
  for (auto c : h.counts) {
    const double diff = static_cast<double>(c) - expected;
    chi += diff * diff / expected;
  }
  UniformityReport r;
  r.chi_square = chi;
  r.chi_df = static_cast<int>(bins) - 1;
  r.chi_p = special::chi_square_upper_tail(chi, r.chi_df);
  r.ks_statistic = ks_statistic(pvals);
  r.consistent = r.chi_p >= significance;
  return r;
}

Skew classify_skew(const Histogram& h, double significance) {
  if (h.bins() < 10) throw Error("skew classification needs at least 10 bins");
  const auto total = h.total();
  if (total < 1000) throw Error("skew classification needs at least 1000 p-values");
  const auto n = static_cast<std::int64_t>(total);
  const double q = 1.0 / static_cast<double>(h.bins());
  const double tail = significance / 2.0;

  const double first_p = special::binomial_upper_tail(n, q, static_cast<std::int64_t>(h.counts.front()));
  const double last_p = special::binomial_upper_tail(n, q, static_cast<std::int64_t>(h.counts.back()));
  const bool first_high = first_p <= tail;
  const bool last_high = last_p <= tail;
  if (first_high && last_high) {
    return first_p <= last_p ? Skew::LowConcentrated : Skew::HighConcentrated;
  }
  if (first_high) return Skew::LowConcentrated;
  if (last_high) return Skew::HighConcentrated;
  return Skew::Uniform;
}

SignalNoiseReport signal_noise(const ExpressionMatrix& m, const GroupDesign& design,
                               std::string_view control, std::string_view treatment) {
  require_compatible(m, design);
  const auto& ctrl = design.group(control);
  const auto& trt = design.group(treatment);
  if (ctrl.replicates() != trt.replicates()) {
    throw Error("signal/noise needs equal replicate counts, got " +
                std::to_string(ctrl.replicates()) + " and " + std::to_string(trt.replicates()));
  }
  const auto n_r = static_cast<double>(ctrl.replicates());
  const auto n_c = static_cast<double>(m.genes());

  double signal = 0.0;
  double noise = 0.0;
  std::vector<double> a;
  std::vector<double> b;
  for (std::size_t g = 0; g < m.genes(); ++g) {
    gather(m, g, ctrl.columns, a);
    gather(m, g, trt.columns, b);
    const double diff = order_free_mean(b) - order_free_mean(a);
    signal += n_r * diff * diff;
    noise += 0.5 * (sample_variance(a) + sample_variance(b));
  }
  return {signal / (2.0 * n_c), noise / n_c, ctrl.replicates(), m.genes()};
}

double estimate_pi0(std::span<const double> pvals, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw Error("pi0 lambda must lie in (0, 1)");
  require_count(pvals, 100, "pi0 estimation");
  require_probabilities(pvals);
  const auto above = std::count_if(pvals.begin(), pvals.end(), [&](double p) { return p > lambda; });
  return static_cast<double>(above) / ((1.0 - lambda) * static_cast<double>(pvals.size()));
}

double estimate_pi0_grid(std::span<const double> pvals, std::span<const double> lambdas) {
  if (lambdas.empty()) throw Error("pi0 lambda grid is empty");
  double sum = 0.0;
  for (double lambda : lambdas) sum += estimate_pi0(pvals, lambda);
  return sum / static_cast<double>(lambdas.size());
}

DiagnosticsReport diagnose(std::span<const double> pvals, std::size_t bins, double lambda,
                           double significance) {
  DiagnosticsReport r;
  r.count = pvals.size();
  r.histogram = histogram(pvals, bins);
  r.uniformity = uniformity_test(pvals, bins, significance);
  if (bins >= 10 && pvals.size() >= 1000) r.skew = classify_skew(r.histogram, significance);
  r.lambda = lambda;
  r.pi0 = estimate_pi0(pvals, lambda);
  return r;
}

void write_histogram(std::ostream& out, const Histogram& h) {
  out << "bin_low,bin_high,count\n";
  for (std::size_t i = 0; i < h.bins(); ++i) {
    out << csv::format_shortest(h.edge(i)) << ',' << csv::format_shortest(h.edge(i + 1)) << ','
        << h.counts[i] << '\n';
  }
}

}  // namespace pvalprior
