#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pvalprior/expression.hpp"
#include "pvalprior/parallel.hpp"

namespace pvalprior {

/// Outcome of one two-sample comparison.
///
/// `degenerate` is set when the pooled variance is exactly zero (both groups
/// constant). Equal means then give t = 0, p = 1; unequal means give
/// t = +/-infinity and p = 0.
struct TestResult {
  double t = 0.0;
  int df = 0;
  double p = 1.0;
  bool degenerate = false;

  bool operator==(const TestResult&) const = default;
};

/// Per-gene results of one group-vs-group comparison, in matrix row order.
struct PValueVector {
  std::vector<std::string> gene_ids;
  std::vector<TestResult> results;

  std::size_t size() const noexcept { return results.size(); }
  std::vector<double> p_values() const;
};

/// Student's two-sample t-test with pooled (equal) variance, two-sided.
/// The statistic is mean(x) - mean(y) over its standard error.
TestResult pooled_t(std::span<const double> x, std::span<const double> y);

/// 2 * Pr(T_df >= |t|), capped at 1. Uses I_{df/(df+t^2)}(df/2, 1/2).
double t_two_sided_p(double t, int df);

/// Applies pooled_t to every gene, treatment vs control. Results land in
/// per-gene slots, so the output does not depend on the thread count.
PValueVector test_matrix(const ExpressionMatrix& m, const GroupDesign& design,
                         std::string_view control, std::string_view treatment,
                         Parallelism parallelism = {});

/// CSV `gene_id,t,df,p`; p in scientific notation with 10 significant digits.
void write_pvalues(std::ostream& out, const PValueVector& pv);

/// Reads the format written by write_pvalues. An infinite t marks a
/// degenerate result.
PValueVector load_pvalues(std::istream& in);

}  // namespace pvalprior
