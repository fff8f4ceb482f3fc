#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pvalprior/expression.hpp"
#include "pvalprior/ttest.hpp"

namespace pvalprior {

/// Genes with p <= threshold (inclusive).
struct SelectionSet {
  double threshold = 0.0;
  std::vector<std::size_t> indices;  // sorted, unique
  std::size_t total = 0;             // m

  std::size_t size() const noexcept { return indices.size(); }
};

enum class CoincidenceModel {
  /// X ~ Binomial(m, (k1/m)(k2/m)): each gene lands in both selections
  /// independently.
  Binomial,
  /// X ~ Hypergeometric(m, k1, k2): selection sizes held fixed.
  Hypergeometric,
};

struct CoincidenceResult {
  std::int64_t m = 0;
  std::int64_t k1 = 0;
  std::int64_t k2 = 0;
  std::int64_t overlap = 0;
  double q = 0.0;        // per-gene probability of a chance double selection
  double p_value = 1.0;  // Pr(X >= overlap)
  CoincidenceModel model = CoincidenceModel::Binomial;
};

struct ConcordanceReport {
  double rho_p = 0.0;       // Spearman on log10 p
  double rho_dz_all = 0.0;  // Spearman on delta z, all genes
  /// Spearman on delta z over the common positives; empty when fewer than two
  /// genes are shared or their ranks do not vary.
  std::optional<double> rho_dz_common;
  double threshold = 0.0;
  CoincidenceResult coincidence;
  std::vector<std::string> common_genes;
};

SelectionSet select_positives(const PValueVector& pv, double threshold);

CoincidenceResult coincidence_test(std::int64_t m, std::int64_t k1, std::int64_t k2,
                                   std::int64_t overlap,
                                   CoincidenceModel model = CoincidenceModel::Binomial);

/// Average ranks (1-based), ties sharing the mean of their positions.
std::vector<double> mid_ranks(std::span<const double> values);

/// Pearson correlation of mid-ranks. Throws on length mismatch, fewer than
/// two values, or a constant input.
double spearman_rho(std::span<const double> a, std::span<const double> b);

/// Cross-experiment comparison of two aligned result sets.
ConcordanceReport concordance_report(const PValueVector& pv1, const PValueVector& pv2,
                                     const DeltaZVector& dz1, const DeltaZVector& dz2,
                                     double threshold,
                                     CoincidenceModel model = CoincidenceModel::Binomial);

/// CSV `gene_id,p1,p2,dz1,dz2` for scatter plots.
void write_concordance_pairs(std::ostream& out, const PValueVector& pv1, const PValueVector& pv2,
                             const DeltaZVector& dz1, const DeltaZVector& dz2);

}  // namespace pvalprior
