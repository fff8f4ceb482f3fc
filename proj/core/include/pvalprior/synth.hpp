#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pvalprior/expression.hpp"
#include "pvalprior/parallel.hpp"
#include "pvalprior/rng.hpp"

namespace pvalprior {

/// Per-gene population targets for synthetic generation.
struct GeneMoments {
  std::vector<std::string> gene_ids;
  std::vector<double> mu;
  std::vector<double> sigma;

  std::size_t size() const noexcept { return gene_ids.size(); }
  /// Throws unless lengths agree and every sigma is finite and >= 0.
  void validate() const;
};

/// Constant added to one group: delta_factor * sigma_g in gene g.
struct EffectSpec {
  double delta_factor = 0.6;
  std::string target_group;
};

struct NullSpec {
  std::size_t groups = 2;
  std::size_t replicates = 3;
  /// Standard deviation of the per-(gene, replicate slot) offset, in units of
  /// sigma_g. The offset is shared by every group at the same slot.
  double source_offset_sd = 0.0;
};

/// Sample mean and sample standard deviation (n - 1) over the columns.
GeneMoments estimate_moments(const ExpressionMatrix& m, std::span<const std::size_t> columns);

/// Gene-wise normal data with the given moments. Groups are named G1..Gk and
/// laid out group-major with sample ids `G<k>_r<j>`. Cell (g, k, j) is
///   mu_g + o_{g,j} + sigma_g * z_{g,k,j},  o_{g,j} ~ N(0, source_offset_sd * sigma_g)
/// with every draw keyed on its coordinates, so the output is a pure function
/// of (moments, spec, master seed).
Dataset generate_null(const GeneMoments& moments, const NullSpec& spec,
                      const SeededGenerator& gen, Parallelism parallelism = {});

/// Adds spec.delta_factor * sigma_g to every cell of the target group.
ExpressionMatrix inject_effect(const ExpressionMatrix& m, const GroupDesign& design,
                               const GeneMoments& moments, const EffectSpec& spec);

/// Gene-specific variant: adds factors[g] * sigma_g to the target group.
/// Factors may be negative.
ExpressionMatrix inject_effect_pattern(const ExpressionMatrix& m, const GroupDesign& design,
                                       const GeneMoments& moments, std::span<const double> factors,
                                       std::string_view target_group);

/// factors[g] = scale * z_g with z_g standard normal from the EffectPattern
/// stream. Two experiments built from the same pattern generator share which
/// genes respond and how strongly.
std::vector<double> effect_pattern(std::size_t genes, double scale, const SeededGenerator& gen);

/// Reference moments for runs without real data: mu_g ~ N(0, 1),
/// sigma_g = 0.2 * exp(0.25 * z_g). Gene ids are g1..gN.
GeneMoments synthetic_moments(std::size_t genes, const SeededGenerator& gen);

/// Builds new groups from replicate slots: new group j holds replicate j of
/// every source, in source order. Each source must carry exactly one group and
/// all sources must share gene ids and replicate count. A single source is
/// returned unchanged.
Dataset transpose_regroup(std::span<const Dataset> sources);

/// Inverse view of transpose_regroup: source j holds replicate j of every
/// group (named R<j>). All groups must have the same replicate count.
std::vector<Dataset> split_by_replicate_slot(const Dataset& data);

/// One balanced split of a group's columns; half_a holds the first column.
struct Split {
  std::vector<std::size_t> half_a;
  std::vector<std::size_t> half_b;

  bool operator==(const Split&) const = default;
};

/// Every unordered split of 2k columns into two halves of k, ordered
/// lexicographically by half_a. There are C(2k, k) / 2 of them.
std::vector<Split> enumerate_splits(std::span<const std::size_t> group_columns);

/// Two-group design (A, B) for one split.
GroupDesign split_design(const Split& split, std::size_t column_count);

/// CSV `gene_id,mu,sigma`.
void write_moments(std::ostream& out, const GeneMoments& moments);
GeneMoments load_moments(std::istream& in);

}  // namespace pvalprior
