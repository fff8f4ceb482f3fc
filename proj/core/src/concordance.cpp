#include "pvalprior/concordance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "csv.hpp"
#include "pvalprior/error.hpp"
#include "pvalprior/special.hpp"

namespace pvalprior {

SelectionSet select_positives(const PValueVector& pv, double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) throw Error("selection threshold must lie in (0, 1]");
  SelectionSet out{threshold, {}, pv.size()};
  for (std::size_t g = 0; g < pv.size(); ++g) {
    if (pv.results[g].p <= threshold) out.indices.push_back(g);
  }
  return out;
}

CoincidenceResult coincidence_test(std::int64_t m, std::int64_t k1, std::int64_t k2,
                                   std::int64_t overlap, CoincidenceModel model) {
  if (m < 1) throw Error("coincidence test needs m >= 1");
  if (k1 < 0 || k1 > m || k2 < 0 || k2 > m) throw Error("selection sizes must lie in [0, m]");
  if (overlap < 0 || overlap > std::min(k1, k2)) {
    throw Error("overlap must lie in [0, min(k1, k2)]");
  }
  const auto dm = static_cast<double>(m);
  CoincidenceResult r{m, k1, k2, overlap, 0.0, 1.0, model};
  r.q = (static_cast<double>(k1) / dm) * (static_cast<double>(k2) / dm);
  r.p_value = model == CoincidenceModel::Binomial
                  ? special::binomial_upper_tail(m, r.q, overlap)
                  : special::hypergeometric_upper_tail(m, k1, k2, overlap);
  return r;
}

std::vector<double> mid_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    // Positions i..j-1 (0-based) tie; their 1-based ranks average to (i+1+j)/2.
    const double rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

double spearman_rho(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error("Spearman correlation needs equal lengths, got " + std::to_string(a.size()) +
                " and " + std::to_string(b.size()));
  }
  if (a.size() < 2) throw Error("Spearman correlation needs at least 2 pairs");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::isnan(a[i]) || std::isnan(b[i])) throw Error("Spearman correlation input contains NaN");
  }
  const auto ra = mid_ranks(a);
  const auto rb = mid_ranks(b);
  // Mid-ranks always average to (n + 1) / 2.
  const double centre = 0.5 * static_cast<double>(a.size() + 1);
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    const double da = ra[i] - centre;
    const double db = rb[i] - centre;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0) throw Error("Spearman correlation undefined: first input is constant");
  if (sbb == 0.0) throw Error("Spearman correlation undefined: second input is constant");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

namespace {

std::vector<double> log10_p(const PValueVector& pv) {
  std::vector<double> out(pv.size());
  for (std::size_t g = 0; g < pv.size(); ++g) out[g] = std::log10(pv.results[g].p);
  return out;
}

}  // namespace

ConcordanceReport concordance_report(const PValueVector& pv1, const PValueVector& pv2,
                                     const DeltaZVector& dz1, const DeltaZVector& dz2,
                                     double threshold, CoincidenceModel model) {
  if (pv1.gene_ids != pv2.gene_ids || pv1.gene_ids != dz1.gene_ids ||
      pv1.gene_ids != dz2.gene_ids) {
    throw Error("concordance inputs are not aligned on the same gene ids in the same order");
  }
  ConcordanceReport r;
  r.threshold = threshold;
  const auto lp1 = log10_p(pv1);
  const auto lp2 = log10_p(pv2);
  r.rho_p = spearman_rho(lp1, lp2);
  r.rho_dz_all = spearman_rho(dz1.delta, dz2.delta);

  const auto sel1 = select_positives(pv1, threshold);
  const auto sel2 = select_positives(pv2, threshold);
  std::vector<std::size_t> common;
  std::set_intersection(sel1.indices.begin(), sel1.indices.end(), sel2.indices.begin(),
                        sel2.indices.end(), std::back_inserter(common));

  std::vector<double> c1;
  std::vector<double> c2;
  for (auto g : common) {
    r.common_genes.push_back(pv1.gene_ids[g]);
    c1.push_back(dz1.delta[g]);
    c2.push_back(dz2.delta[g]);
  }
  if (common.size() >= 2) {
    const auto varies = [](const std::vector<double>& v) {
      return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) != v.end();
    };
    if (varies(c1) && varies(c2)) r.rho_dz_common = spearman_rho(c1, c2);
  }
  r.coincidence = coincidence_test(static_cast<std::int64_t>(pv1.size()),
                                   static_cast<std::int64_t>(sel1.size()),
                                   static_cast<std::int64_t>(sel2.size()),
                                   static_cast<std::int64_t>(common.size()), model);
  return r;
}

void write_concordance_pairs(std::ostream& out, const PValueVector& pv1, const PValueVector& pv2,
                             const DeltaZVector& dz1, const DeltaZVector& dz2) {
  if (pv1.gene_ids != pv2.gene_ids || pv1.gene_ids != dz1.gene_ids ||
      pv1.gene_ids != dz2.gene_ids) {
    throw Error("concordance inputs are not aligned on the same gene ids in the same order");
  }
  out << "gene_id,p1,p2,dz1,dz2\n";
  for (std::size_t g = 0; g < pv1.size(); ++g) {
    out << pv1.gene_ids[g] << ',' << csv::format_scientific(pv1.results[g].p, 10) << ','
        << csv::format_scientific(pv2.results[g].p, 10) << ','
        << csv::format_shortest(dz1.delta[g]) << ',' << csv::format_shortest(dz2.delta[g])
        << '\n';
  }
}

}  // namespace pvalprior
