#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pvalprior/expression.hpp"
#include "pvalprior/rng.hpp"
#include "pvalprior/synth.hpp"
#include "pvalprior/ttest.hpp"

namespace pvalprior::testing {

// Matrix with ids g1.., s1.. from row-major nested values.
inline ExpressionMatrix make_matrix(const std::vector<std::vector<double>>& rows) {
  std::vector<std::string> genes;
  std::vector<std::string> samples;
  std::vector<double> values;
  for (std::size_t g = 0; g < rows.size(); ++g) {
    genes.push_back("g" + std::to_string(g + 1));
    values.insert(values.end(), rows[g].begin(), rows[g].end());
  }
  for (std::size_t s = 0; s < rows.front().size(); ++s) samples.push_back("s" + std::to_string(s + 1));
  return ExpressionMatrix(std::move(genes), std::move(samples), std::move(values));
}

// Groups of equal size laid out consecutively: A = [0, n), B = [n, 2n), ...
inline GroupDesign consecutive_design(std::size_t groups, std::size_t reps,
                                      std::vector<std::string> names = {"A", "B", "C", "D"}) {
  std::vector<Group> out;
  for (std::size_t k = 0; k < groups; ++k) {
    Group g{names[k], {}};
    for (std::size_t j = 0; j < reps; ++j) g.columns.push_back(k * reps + j);
    out.push_back(std::move(g));
  }
  return GroupDesign(std::move(out), groups * reps);
}

// m draws from U(0, 1) keyed on (seed, index).
inline std::vector<double> uniform_sample(std::size_t m, std::uint64_t seed) {
  const SeededGenerator gen(seed);
  std::vector<double> out(m);
  for (std::size_t i = 0; i < m; ++i) out[i] = gen.uniform(SeededGenerator::Stream::Cell, i, 0, 0);
  return out;
}

// p-values of G1 vs G2 for a null simulation with default synthetic moments.
inline PValueVector null_pvalues(std::size_t genes, std::uint64_t seed, std::size_t reps = 3) {
  const SeededGenerator gen(seed);
  const auto moments = synthetic_moments(genes, gen.derive(0));
  const auto data = generate_null(moments, {2, reps, 0.0}, gen);
  return test_matrix(data.matrix, data.design, "G1", "G2");
}

// p-values of G1 vs G2 after adding factor * sigma_g to G2.
inline PValueVector effect_pvalues(std::size_t genes, std::uint64_t seed, double factor) {
  const SeededGenerator gen(seed);
  const auto moments = synthetic_moments(genes, gen.derive(0));
  const auto data = generate_null(moments, {2, 3, 0.0}, gen);
  const auto shifted = inject_effect(data.matrix, data.design, moments, {factor, "G2"});
  return test_matrix(shifted, data.design, "G1", "G2");
}

}  // namespace pvalprior::testing
