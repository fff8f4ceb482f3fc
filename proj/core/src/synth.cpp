#include "pvalprior/synth.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <unordered_set>

#include "csv.hpp"
#include "pvalprior/error.hpp"

namespace pvalprior {

using Stream = SeededGenerator::Stream;

void GeneMoments::validate() const {
  if (mu.size() != gene_ids.size() || sigma.size() != gene_ids.size()) {
    throw Error("gene moments have mismatched lengths");
  }
  if (gene_ids.empty()) throw Error("gene moments are empty");
  for (std::size_t g = 0; g < size(); ++g) {
    if (!std::isfinite(mu[g])) throw Error("non-finite mean for gene '" + gene_ids[g] + "'");
    if (!std::isfinite(sigma[g]) || sigma[g] < 0.0) {
      throw Error("standard deviation for gene '" + gene_ids[g] + "' must be finite and >= 0");
    }
  }
}

GeneMoments estimate_moments(const ExpressionMatrix& m, std::span<const std::size_t> columns) {
  if (columns.size() < 2) {
    throw Error("moment estimation needs at least 2 columns, got " +
                std::to_string(columns.size()));
  }
  for (auto c : columns) {
    if (c >= m.samples()) throw Error("column " + std::to_string(c) + " out of range");
  }
  GeneMoments out{m.gene_ids(), std::vector<double>(m.genes()), std::vector<double>(m.genes())};
  std::vector<double> v;
  for (std::size_t g = 0; g < m.genes(); ++g) {
    gather(m, g, columns, v);
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    if (*lo == *hi) {
      out.mu[g] = *lo;
      out.sigma[g] = 0.0;
      continue;
    }
    const double mean = order_free_mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    out.mu[g] = mean;
    out.sigma[g] = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return out;
}

Dataset generate_null(const GeneMoments& moments, const NullSpec& spec,
                      const SeededGenerator& gen, Parallelism parallelism) {
  moments.validate();
  if (spec.groups < 1) throw Error("null generation needs at least one group");
  if (spec.replicates < 2) throw Error("null generation needs at least 2 replicates per group");
  if (!std::isfinite(spec.source_offset_sd) || spec.source_offset_sd < 0.0) {
    throw Error("source offset sd must be finite and >= 0");
  }

  const std::size_t cols = spec.groups * spec.replicates;
  std::vector<std::string> sample_ids;
  std::vector<Group> groups;
  sample_ids.reserve(cols);
  for (std::size_t k = 0; k < spec.groups; ++k) {
    Group group{"G" + std::to_string(k + 1), {}};
    for (std::size_t j = 0; j < spec.replicates; ++j) {
      group.columns.push_back(sample_ids.size());
      sample_ids.push_back(group.name + "_r" + std::to_string(j + 1));
    }
    groups.push_back(std::move(group));
  }

  std::vector<double> values(moments.size() * cols);
  const bool with_offset = spec.source_offset_sd > 0.0;
  parallel_for(moments.size(), parallelism, [&](std::size_t begin, std::size_t end) {
    std::vector<double> offsets(spec.replicates, 0.0);
    for (std::size_t g = begin; g < end; ++g) {
      const double mu = moments.mu[g];
      const double sigma = moments.sigma[g];
      if (with_offset) {
        for (std::size_t j = 0; j < spec.replicates; ++j) {
          offsets[j] = spec.source_offset_sd * sigma * gen.normal(Stream::SourceOffset, g, 0, j);
        }
      }
      double* row = values.data() + g * cols;
      for (std::size_t k = 0; k < spec.groups; ++k) {
        for (std::size_t j = 0; j < spec.replicates; ++j) {
          const double noise = sigma == 0.0 ? 0.0 : sigma * gen.normal(Stream::Cell, g, k, j);
          row[k * spec.replicates + j] = mu + offsets[j] + noise;
        }
      }
    }
  });

  ExpressionMatrix matrix(moments.gene_ids, std::move(sample_ids), std::move(values));
  GroupDesign design(std::move(groups), cols);
  return {std::move(matrix), std::move(design)};
}

namespace {

void require_aligned(const ExpressionMatrix& m, const GeneMoments& moments) {
  moments.validate();
  if (moments.gene_ids != m.gene_ids()) {
    throw Error("gene moments are not aligned with the matrix genes");
  }
}

}  // namespace

ExpressionMatrix inject_effect_pattern(const ExpressionMatrix& m, const GroupDesign& design,
                                       const GeneMoments& moments, std::span<const double> factors,
                                       std::string_view target_group) {
  require_compatible(m, design);
  require_aligned(m, moments);
  if (factors.size() != m.genes()) throw Error("effect pattern length differs from gene count");
  const auto& target = design.group(target_group);

  std::vector<double> values(m.values().begin(), m.values().end());
  const std::size_t cols = m.samples();
  for (std::size_t g = 0; g < m.genes(); ++g) {
    if (!std::isfinite(factors[g])) throw Error("non-finite effect factor");
    const double shift = factors[g] * moments.sigma[g];
    for (auto c : target.columns) values[g * cols + c] += shift;
  }
  return ExpressionMatrix(m.gene_ids(), m.sample_ids(), std::move(values));
}

ExpressionMatrix inject_effect(const ExpressionMatrix& m, const GroupDesign& design,
                               const GeneMoments& moments, const EffectSpec& spec) {
  if (!std::isfinite(spec.delta_factor) || spec.delta_factor < 0.0) {
    throw Error("effect delta factor must be finite and >= 0");
  }
  const std::vector<double> factors(m.genes(), spec.delta_factor);
  return inject_effect_pattern(m, design, moments, factors, spec.target_group);
}

std::vector<double> effect_pattern(std::size_t genes, double scale, const SeededGenerator& gen) {
  std::vector<double> out(genes);
  for (std::size_t g = 0; g < genes; ++g) out[g] = scale * gen.normal(Stream::EffectPattern, g, 0, 0);
  return out;
}

GeneMoments synthetic_moments(std::size_t genes, const SeededGenerator& gen) {
  if (genes == 0) throw Error("synthetic moments need at least one gene");
  GeneMoments out;
  out.gene_ids.reserve(genes);
  out.mu.reserve(genes);
  out.sigma.reserve(genes);
  for (std::size_t g = 0; g < genes; ++g) {
    out.gene_ids.push_back("g" + std::to_string(g + 1));
    out.mu.push_back(gen.normal(Stream::Moments, g, 0, 0));
    out.sigma.push_back(0.2 * std::exp(0.25 * gen.normal(Stream::Moments, g, 1, 0)));
  }
  return out;
}

Dataset transpose_regroup(std::span<const Dataset> sources) {
  if (sources.empty()) throw Error("regrouping needs at least one source");
  if (sources.size() == 1) {
    // Nothing to interleave: the lone source is already its own regrouping.
    const auto& only = sources.front();
    require_compatible(only.matrix, only.design);
    if (only.design.groups().size() != 1) {
      throw Error("source 1 must carry exactly one group, found " +
                  std::to_string(only.design.groups().size()));
    }
    return only;
  }
  const auto& genes = sources.front().matrix.gene_ids();
  std::size_t reps = 0;
  for (std::size_t s = 0; s < sources.size(); ++s) {
    const auto& src = sources[s];
    require_compatible(src.matrix, src.design);
    if (src.design.groups().size() != 1) {
      throw Error("source " + std::to_string(s + 1) + " must carry exactly one group, found " +
                  std::to_string(src.design.groups().size()));
    }
    if (src.matrix.gene_ids() != genes) {
      throw Error("source " + std::to_string(s + 1) + " does not share the gene ids of source 1");
    }
    const std::size_t r = src.design.groups().front().replicates();
    if (s == 0) {
      reps = r;
    } else if (r != reps) {
      throw Error("source " + std::to_string(s + 1) + " has " + std::to_string(r) +
                  " replicates, source 1 has " + std::to_string(reps));
    }
  }

  const std::size_t n_sources = sources.size();
  const std::size_t cols = n_sources * reps;
  std::vector<std::string> sample_ids;
  sample_ids.reserve(cols);
  std::vector<Group> groups;
  for (std::size_t j = 0; j < reps; ++j) {
    Group group{"G" + std::to_string(j + 1), {}};
    for (const auto& src : sources) {
      group.columns.push_back(sample_ids.size());
      sample_ids.push_back(src.matrix.sample_ids()[src.design.groups().front().columns[j]]);
    }
    groups.push_back(std::move(group));
  }

  std::vector<double> values(genes.size() * cols);
  for (std::size_t g = 0; g < genes.size(); ++g) {
    std::size_t out_col = 0;
    for (std::size_t j = 0; j < reps; ++j) {
      for (const auto& src : sources) {
        values[g * cols + out_col++] = src.matrix(g, src.design.groups().front().columns[j]);
      }
    }
  }
  ExpressionMatrix matrix(genes, std::move(sample_ids), std::move(values));
  GroupDesign design(std::move(groups), cols);
  return {std::move(matrix), std::move(design)};
}

std::vector<Dataset> split_by_replicate_slot(const Dataset& data) {
  require_compatible(data.matrix, data.design);
  const auto& groups = data.design.groups();
  if (groups.size() < 2) throw Error("splitting by replicate slot needs at least 2 groups");
  const std::size_t reps = groups.front().replicates();
  for (const auto& g : groups) {
    if (g.replicates() != reps) {
      throw Error("group '" + g.name + "' has " + std::to_string(g.replicates()) +
                  " replicates; all groups must have " + std::to_string(reps));
    }
  }
  std::vector<Dataset> out;
  out.reserve(reps);
  for (std::size_t j = 0; j < reps; ++j) {
    std::vector<std::size_t> columns;
    for (const auto& g : groups) columns.push_back(g.columns[j]);
    auto matrix = select_columns(data.matrix, columns);
    std::vector<std::size_t> all(columns.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    GroupDesign design({Group{"R" + std::to_string(j + 1), std::move(all)}}, columns.size());
    out.push_back({std::move(matrix), std::move(design)});
  }
  return out;
}

std::vector<Split> enumerate_splits(std::span<const std::size_t> group_columns) {
  const std::size_t n = group_columns.size();
  if (n < 2 || n % 2 != 0) {
    throw Error("balanced splits need an even number of columns (>= 2), got " + std::to_string(n));
  }
  {
    std::unordered_set<std::size_t> seen(group_columns.begin(), group_columns.end());
    if (seen.size() != n) throw Error("split columns must be distinct");
  }
  const std::size_t k = n / 2;

  // Positions 1..n-1 choose k-1, in lexicographic order; position 0 is
  // always in half_a so each unordered split appears once.
  std::vector<std::size_t> pick(k - 1);
  std::iota(pick.begin(), pick.end(), std::size_t{1});
  std::vector<Split> out;
  while (true) {
    std::vector<bool> in_a(n, false);
    in_a[0] = true;
    for (auto p : pick) in_a[p] = true;
    Split split;
    for (std::size_t i = 0; i < n; ++i) {
      (in_a[i] ? split.half_a : split.half_b).push_back(group_columns[i]);
    }
    out.push_back(std::move(split));

    // Advance to the next (k-1)-combination of {1..n-1}.
    std::size_t i = pick.size();
    while (i > 0 && pick[i - 1] == n - 1 - (pick.size() - i)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < pick.size(); ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

GroupDesign split_design(const Split& split, std::size_t column_count) {
  return GroupDesign({Group{"A", split.half_a}, Group{"B", split.half_b}}, column_count);
}

void write_moments(std::ostream& out, const GeneMoments& moments) {
  moments.validate();
  out << "gene_id,mu,sigma\n";
  for (std::size_t g = 0; g < moments.size(); ++g) {
    out << moments.gene_ids[g] << ',' << csv::format_shortest(moments.mu[g]) << ','
        << csv::format_shortest(moments.sigma[g]) << '\n';
  }
}

GeneMoments load_moments(std::istream& in) {
  const auto lines = csv::read_lines(in);
  if (lines.empty()) throw ParseError(1, 0, "missing header row");
  csv::expect_header(lines.front(), {"gene_id", "mu", "sigma"});
  GeneMoments out;
  std::unordered_set<std::string> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& line = lines[i];
    const auto cells = csv::split(line.text);
    if (cells.size() != 3) throw ParseError(line.row, 0, "expected 3 fields");
    std::string id(cells[0]);
    if (!csv::valid_label(id)) throw ParseError(line.row, 1, "empty gene id");
    if (!seen.insert(id).second) throw ParseError(line.row, 1, "duplicate gene id '" + id + "'");
    const double mu = csv::parse_finite(cells[1], line.row, 2);
    const double sigma = csv::parse_finite(cells[2], line.row, 3);
    if (sigma < 0.0) throw ParseError(line.row, 3, "standard deviation must be >= 0");
    out.gene_ids.push_back(std::move(id));
    out.mu.push_back(mu);
    out.sigma.push_back(sigma);
  }
  out.validate();
  return out;
}

}  // namespace pvalprior
