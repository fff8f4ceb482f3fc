#include "pvalprior/expression.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "csv.hpp"
#include "pvalprior/error.hpp"

namespace pvalprior {

namespace {

void check_labels(const std::vector<std::string>& labels, const char* what) {
  std::unordered_set<std::string_view> seen;
  seen.reserve(labels.size());
  for (const auto& label : labels) {
    if (!csv::valid_label(label)) {
      throw Error(std::string("invalid ") + what + " '" + label +
                  "' (must be non-empty without commas, quotes or line breaks)");
    }
    if (!seen.insert(label).second) {
      throw Error(std::string("duplicate ") + what + " '" + label + "'");
    }
  }
}

}  // namespace

ExpressionMatrix::ExpressionMatrix(std::vector<std::string> gene_ids,
                                   std::vector<std::string> sample_ids, std::vector<double> values)
    : gene_ids_(std::move(gene_ids)), sample_ids_(std::move(sample_ids)), values_(std::move(values)) {
  if (gene_ids_.empty() || sample_ids_.empty()) {
    throw Error("expression matrix needs at least one gene and one sample");
  }
  if (values_.size() != gene_ids_.size() * sample_ids_.size()) {
    throw Error("expression matrix has " + std::to_string(values_.size()) + " values for " +
                std::to_string(gene_ids_.size()) + " genes x " +
                std::to_string(sample_ids_.size()) + " samples");
  }
  check_labels(gene_ids_, "gene id");
  check_labels(sample_ids_, "sample id");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error("non-finite value for gene '" + gene_ids_[i / sample_ids_.size()] +
                  "', sample '" + sample_ids_[i % sample_ids_.size()] + "'");
    }
  }
}

GroupDesign::GroupDesign(std::vector<Group> groups, std::size_t column_count)
    : groups_(std::move(groups)), column_count_(column_count) {
  if (groups_.empty()) throw Error("group design has no groups");
  std::vector<bool> used(column_count_, false);
  std::unordered_set<std::string_view> names;
  for (const auto& g : groups_) {
    if (!csv::valid_label(g.name)) throw Error("invalid group name '" + g.name + "'");
    if (!names.insert(g.name).second) throw Error("duplicate group name '" + g.name + "'");
    if (g.columns.size() < 2) {
      throw Error("group '" + g.name + "' has " + std::to_string(g.columns.size()) +
                  " column(s); at least 2 replicates are required");
    }
    for (auto c : g.columns) {
      if (c >= column_count_) {
        throw Error("group '" + g.name + "' refers to column " + std::to_string(c) +
                    " but the matrix has " + std::to_string(column_count_) + " columns");
      }
      if (used[c]) {
        throw Error("column " + std::to_string(c) + " appears in more than one group");
      }
      used[c] = true;
    }
  }
}

const Group& GroupDesign::group(std::string_view name) const {
  for (const auto& g : groups_) {
    if (g.name == name) return g;
  }
  throw Error("unknown group '" + std::string(name) + "'");
}

bool GroupDesign::contains(std::string_view name) const noexcept {
  return std::any_of(groups_.begin(), groups_.end(), [&](const Group& g) { return g.name == name; });
}

void require_compatible(const ExpressionMatrix& m, const GroupDesign& design) {
  if (design.column_count() != m.samples()) {
    throw Error("group design was built for " + std::to_string(design.column_count()) +
                " columns but the matrix has " + std::to_string(m.samples()));
  }
}

double order_free_mean(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  return std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(sorted.size());
}

void gather(const ExpressionMatrix& m, std::size_t gene, std::span<const std::size_t> columns,
            std::vector<double>& out) {
  out.resize(columns.size());
  const auto row = m.row(gene);
  for (std::size_t i = 0; i < columns.size(); ++i) out[i] = row[columns[i]];
}

ExpressionMatrix select_columns(const ExpressionMatrix& m, std::span<const std::size_t> columns) {
  std::vector<std::string> ids;
  ids.reserve(columns.size());
  for (auto c : columns) {
    if (c >= m.samples()) throw Error("column " + std::to_string(c) + " out of range");
    ids.push_back(m.sample_ids()[c]);
  }
  std::vector<double> values;
  values.reserve(m.genes() * columns.size());
  for (std::size_t g = 0; g < m.genes(); ++g) {
    const auto row = m.row(g);
    for (auto c : columns) values.push_back(row[c]);
  }
  return ExpressionMatrix(m.gene_ids(), std::move(ids), std::move(values));
}

ExpressionMatrix load_matrix(std::istream& in) {
  const auto lines = csv::read_lines(in);
  if (lines.empty()) throw ParseError(1, 0, "missing header row");

  const auto header = csv::split(lines.front().text);
  if (header.front() != "gene_id") {
    throw ParseError(1, 1, "header must start with 'gene_id'");
  }
  if (header.size() < 2) throw ParseError(1, 0, "header names no samples");
  std::vector<std::string> sample_ids(header.begin() + 1, header.end());
  for (std::size_t c = 0; c < sample_ids.size(); ++c) {
    if (!csv::valid_label(sample_ids[c])) throw ParseError(1, c + 2, "empty sample id");
  }
  {
    std::unordered_set<std::string_view> seen;
    for (std::size_t c = 0; c < sample_ids.size(); ++c) {
      if (!seen.insert(sample_ids[c]).second) {
        throw ParseError(1, c + 2, "duplicate sample id '" + sample_ids[c] + "'");
      }
    }
  }
  if (lines.size() < 2) throw ParseError(1, 0, "no gene rows after header");

  std::vector<std::string> gene_ids;
  std::vector<double> values;
  gene_ids.reserve(lines.size() - 1);
  values.reserve((lines.size() - 1) * sample_ids.size());
  std::unordered_map<std::string, std::size_t> gene_rows;

  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& line = lines[i];
    const auto cells = csv::split(line.text);
    if (cells.size() != sample_ids.size() + 1) {
      throw ParseError(line.row, 0,
                       "expected " + std::to_string(sample_ids.size() + 1) + " fields, found " +
                           std::to_string(cells.size()));
    }
    std::string id(cells.front());
    if (!csv::valid_label(id)) throw ParseError(line.row, 1, "empty gene id");
    if (auto [it, inserted] = gene_rows.emplace(id, line.row); !inserted) {
      throw ParseError(line.row, 1,
                       "duplicate gene id '" + id + "' (first seen on row " +
                           std::to_string(it->second) + ")");
    }
    for (std::size_t c = 1; c < cells.size(); ++c) {
      values.push_back(csv::parse_finite(cells[c], line.row, c + 1));
    }
    gene_ids.push_back(std::move(id));
  }
  return ExpressionMatrix(std::move(gene_ids), std::move(sample_ids), std::move(values));
}

void write_matrix(std::ostream& out, const ExpressionMatrix& m) {
  out << "gene_id";
  for (const auto& s : m.sample_ids()) out << ',' << s;
  out << '\n';
  for (std::size_t g = 0; g < m.genes(); ++g) {
    out << m.gene_ids()[g];
    for (double v : m.row(g)) out << ',' << csv::format_shortest(v);
    out << '\n';
  }
  if (!out) throw Error("I/O failure while writing expression matrix");
}

GroupDesign load_design(std::istream& in, const ExpressionMatrix& m) {
  const auto lines = csv::read_lines(in);
  if (lines.empty()) throw ParseError(1, 0, "missing header row");
  csv::expect_header(lines.front(), {"sample_id", "group"});

  std::unordered_map<std::string_view, std::size_t> column_of;
  for (std::size_t c = 0; c < m.samples(); ++c) column_of.emplace(m.sample_ids()[c], c);

  std::vector<Group> groups;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = csv::split(lines[i].text);
    if (cells.size() != 2) throw ParseError(lines[i].row, 0, "expected 2 fields");
    const auto it = column_of.find(cells[0]);
    if (it == column_of.end()) {
      throw ParseError(lines[i].row, 1, "sample '" + std::string(cells[0]) + "' not in matrix");
    }
    auto g = std::find_if(groups.begin(), groups.end(),
                          [&](const Group& x) { return x.name == cells[1]; });
    if (g == groups.end()) {
      groups.push_back({std::string(cells[1]), {}});
      g = std::prev(groups.end());
    }
    g->columns.push_back(it->second);
  }
  return GroupDesign(std::move(groups), m.samples());
}

void write_design(std::ostream& out, const ExpressionMatrix& m, const GroupDesign& design) {
  require_compatible(m, design);
  out << "sample_id,group\n";
  for (const auto& g : design.groups()) {
    for (auto c : g.columns) out << m.sample_ids()[c] << ',' << g.name << '\n';
  }
}

DeltaZVector delta_z(const ExpressionMatrix& m, const GroupDesign& design,
                     std::string_view control, std::string_view treatment) {
  require_compatible(m, design);
  const auto& ctrl = design.group(control);
  const auto& trt = design.group(treatment);

  DeltaZVector out{m.gene_ids(), std::vector<double>(m.genes())};
  std::vector<double> a;
  std::vector<double> b;
  for (std::size_t g = 0; g < m.genes(); ++g) {
    gather(m, g, ctrl.columns, a);
    gather(m, g, trt.columns, b);
    out.delta[g] = order_free_mean(b) - order_free_mean(a);
  }
  return out;
}

void write_delta_z(std::ostream& out, const DeltaZVector& dz) {
  out << "gene_id,delta\n";
  for (std::size_t g = 0; g < dz.gene_ids.size(); ++g) {
    out << dz.gene_ids[g] << ',' << csv::format_shortest(dz.delta[g]) << '\n';
  }
}

DeltaZVector load_delta_z(std::istream& in) {
  const auto lines = csv::read_lines(in);
  if (lines.empty()) throw ParseError(1, 0, "missing header row");
  csv::expect_header(lines.front(), {"gene_id", "delta"});
  DeltaZVector dz;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = csv::split(lines[i].text);
    if (cells.size() != 2) throw ParseError(lines[i].row, 0, "expected 2 fields");
    dz.gene_ids.emplace_back(cells[0]);
    dz.delta.push_back(csv::parse_finite(cells[1], lines[i].row, 2));
  }
  return dz;
}

}  // namespace pvalprior
