#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pvalprior {

/// Genes x samples grid of summarized expression scores (z-score scale).
///
/// Rows keep the order they were given in; nothing is sorted by id. Values are
/// stored row-major and are always finite. Instances are immutable.
class ExpressionMatrix {
 public:
  ExpressionMatrix(std::vector<std::string> gene_ids, std::vector<std::string> sample_ids,
                   std::vector<double> values);

  std::size_t genes() const noexcept { return gene_ids_.size(); }
  std::size_t samples() const noexcept { return sample_ids_.size(); }

  const std::vector<std::string>& gene_ids() const noexcept { return gene_ids_; }
  const std::vector<std::string>& sample_ids() const noexcept { return sample_ids_; }

  double operator()(std::size_t gene, std::size_t sample) const noexcept {
    return values_[gene * samples() + sample];
  }
  std::span<const double> row(std::size_t gene) const noexcept {
    return {values_.data() + gene * samples(), samples()};
  }
  std::span<const double> values() const noexcept { return values_; }

  bool operator==(const ExpressionMatrix&) const = default;

 private:
  std::vector<std::string> gene_ids_;
  std::vector<std::string> sample_ids_;
  std::vector<double> values_;
};

struct Group {
  std::string name;
  std::vector<std::size_t> columns;

  std::size_t replicates() const noexcept { return columns.size(); }
  bool operator==(const Group&) const = default;
};

/// Assignment of matrix columns to named replicate groups. Every group has at
/// least two columns and no column belongs to two groups; columns may be left
/// unassigned.
class GroupDesign {
 public:
  GroupDesign(std::vector<Group> groups, std::size_t column_count);

  const std::vector<Group>& groups() const noexcept { return groups_; }
  std::size_t column_count() const noexcept { return column_count_; }

  /// Throws Error naming the missing group.
  const Group& group(std::string_view name) const;
  bool contains(std::string_view name) const noexcept;

  bool operator==(const GroupDesign&) const = default;

 private:
  std::vector<Group> groups_;
  std::size_t column_count_;
};

/// A matrix together with the grouping of its columns.
struct Dataset {
  ExpressionMatrix matrix;
  GroupDesign design;

  bool operator==(const Dataset&) const = default;
};

/// Per-gene difference of group means, treatment minus control.
struct DeltaZVector {
  std::vector<std::string> gene_ids;
  std::vector<double> delta;
};

/// Throws unless the design was built for a matrix with m's column count.
void require_compatible(const ExpressionMatrix& m, const GroupDesign& design);

/// Mean of the values, summed in sorted order so the result depends only on
/// the multiset of inputs.
double order_free_mean(std::span<const double> values);

/// Copies the selected columns of one matrix row into out (resized to fit).
void gather(const ExpressionMatrix& m, std::size_t gene, std::span<const std::size_t> columns,
            std::vector<double>& out);

/// New matrix made of the given columns of m, in the given order.
ExpressionMatrix select_columns(const ExpressionMatrix& m, std::span<const std::size_t> columns);

/// CSV: header `gene_id,<sample ids...>`, then one row per gene. LF and CRLF
/// accepted. Throws ParseError naming the row/column on malformed input.
ExpressionMatrix load_matrix(std::istream& in);

/// Canonical CSV: LF line endings, shortest round-trip decimals.
void write_matrix(std::ostream& out, const ExpressionMatrix& m);

/// CSV: header `sample_id,group`; groups are ordered by first appearance.
/// Samples not listed stay unassigned.
GroupDesign load_design(std::istream& in, const ExpressionMatrix& m);
void write_design(std::ostream& out, const ExpressionMatrix& m, const GroupDesign& design);

DeltaZVector delta_z(const ExpressionMatrix& m, const GroupDesign& design,
                     std::string_view control, std::string_view treatment);

/// CSV: `gene_id,delta`.
void write_delta_z(std::ostream& out, const DeltaZVector& dz);
DeltaZVector load_delta_z(std::istream& in);

}  // namespace pvalprior
