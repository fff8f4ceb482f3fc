#include "pvalprior/ttest.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>

#include "csv.hpp"
#include "pvalprior/error.hpp"
#include "pvalprior/special.hpp"

namespace pvalprior {

namespace {

struct SampleMoments {
  double mean;
  double sum_squares;  // sum of squared deviations from the mean
};

// A constant sample gets mean = that value and zero spread exactly; averaging
// n copies of a double does not always give the double back.
SampleMoments sample_moments(std::span<const double> v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  if (*lo == *hi) return {*lo, 0.0};
  const double mean = order_free_mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, ss};
}

void check_sample(std::span<const double> v, const char* name) {
  if (v.size() < 2) {
    throw Error(std::string("t-test sample ") + name + " needs at least 2 values, got " +
                std::to_string(v.size()));
  }
  for (double x : v) {
    if (!std::isfinite(x)) throw Error(std::string("t-test sample ") + name + " has a non-finite value");
  }
}

}  // namespace

std::vector<double> PValueVector::p_values() const {
  std::vector<double> out(results.size());
  std::transform(results.begin(), results.end(), out.begin(),
                 [](const TestResult& r) { return r.p; });
  return out;
}

double t_two_sided_p(double t, int df) {
  if (df < 1) throw Error("t distribution requires df >= 1, got " + std::to_string(df));
  if (std::isnan(t)) throw Error("t statistic is NaN");
  if (std::isinf(t)) return 0.0;
  if (t == 0.0) return 1.0;
  const double nu = df;
  const double t2 = t * t;
  const double x = nu / (nu + t2);
  const double y = t2 / (nu + t2);
  const double one_sided = 0.5 * special::regularized_beta(nu / 2.0, 0.5, x, y);
  return std::clamp(2.0 * one_sided, 0.0, 1.0);
}

TestResult pooled_t(std::span<const double> x, std::span<const double> y) {
  check_sample(x, "x");
  check_sample(y, "y");
  const auto nx = static_cast<double>(x.size());
  const auto ny = static_cast<double>(y.size());
  const int df = static_cast<int>(x.size() + y.size() - 2);

  const auto mx = sample_moments(x);
  const auto my = sample_moments(y);
  const double pooled_var = (mx.sum_squares + my.sum_squares) / static_cast<double>(df);
  const double diff = mx.mean - my.mean;

  if (pooled_var == 0.0) {
    if (diff == 0.0) return {0.0, df, 1.0, true};
    const double inf = std::numeric_limits<double>::infinity();
    return {diff > 0.0 ? inf : -inf, df, 0.0, true};
  }
  const double t = diff / std::sqrt(pooled_var * (1.0 / nx + 1.0 / ny));
  return {t, df, t_two_sided_p(t, df), false};
}

PValueVector test_matrix(const ExpressionMatrix& m, const GroupDesign& design,
                         std::string_view control, std::string_view treatment,
                         Parallelism parallelism) {
  require_compatible(m, design);
  const auto& ctrl = design.group(control);
  const auto& trt = design.group(treatment);

  PValueVector out{m.gene_ids(), std::vector<TestResult>(m.genes())};
  parallel_for(m.genes(), parallelism, [&](std::size_t begin, std::size_t end) {
    std::vector<double> a;
    std::vector<double> b;
    for (std::size_t g = begin; g < end; ++g) {
      gather(m, g, trt.columns, b);
      gather(m, g, ctrl.columns, a);
      out.results[g] = pooled_t(b, a);
    }
  });
  return out;
}

void write_pvalues(std::ostream& out, const PValueVector& pv) {
  out << "gene_id,t,df,p\n";
  for (std::size_t g = 0; g < pv.size(); ++g) {
    const auto& r = pv.results[g];
    out << pv.gene_ids[g] << ',' << csv::format_shortest(r.t) << ',' << r.df << ','
        << csv::format_scientific(r.p, 10) << '\n';
  }
  if (!out) throw Error("I/O failure while writing p-values");
}

PValueVector load_pvalues(std::istream& in) {
  const auto lines = csv::read_lines(in);
  if (lines.empty()) throw ParseError(1, 0, "missing header row");
  csv::expect_header(lines.front(), {"gene_id", "t", "df", "p"});
  PValueVector pv;
  pv.gene_ids.reserve(lines.size() - 1);
  pv.results.reserve(lines.size() - 1);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& line = lines[i];
    const auto cells = csv::split(line.text);
    if (cells.size() != 4) throw ParseError(line.row, 0, "expected 4 fields");
    if (!csv::valid_label(cells[0])) throw ParseError(line.row, 1, "empty gene id");
    TestResult r;
    r.t = csv::parse_extended(cells[1], line.row, 2);
    const auto df = csv::parse_integer(cells[2], line.row, 3);
    if (df < 1 || df > std::numeric_limits<int>::max()) {
      throw ParseError(line.row, 3, "degrees of freedom must be a positive integer");
    }
    r.df = static_cast<int>(df);
    r.p = csv::parse_finite(cells[3], line.row, 4);
    if (r.p < 0.0 || r.p > 1.0) throw ParseError(line.row, 4, "p-value outside [0, 1]");
    r.degenerate = std::isinf(r.t);
    pv.gene_ids.emplace_back(cells[0]);
    pv.results.push_back(r);
  }
  return pv;
}

}  // namespace pvalprior
