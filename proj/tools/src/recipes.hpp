#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pvalprior/concordance.hpp"
#include "pvalprior/synth.hpp"
#include "pvalprior/ttest.hpp"

namespace pvalprior::cli {

inline constexpr std::string_view kRecipes[] = {
    "null-uniform", "effect-inject", "regroup-1b", "split-1c", "concordance-pair", "adjust-compare",
};

/// Everything a simulation recipe reads.
struct ExperimentConfig {
  std::string recipe = "null-uniform";
  std::size_t genes = 20000;
  std::optional<std::size_t> reps;  // recipe default when empty
  std::size_t groups = 2;
  double delta_factor = 0.6;
  double source_offset_sd = 0.0;
  double threshold = 0.005;
  std::size_t bins = 20;
  double lambda = 0.5;
  double alpha = 0.01;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  /// Replaces the synthetic reference moments when set.
  std::optional<GeneMoments> moments;
};

/// Replicates per group when the config leaves it open: 6 for split-1c (one
/// group split in halves), 3 otherwise.
std::size_t resolved_reps(const ExperimentConfig& config);

/// One output file held in memory until the caller decides where it goes.
struct Artifact {
  std::string file;
  std::string contents;
  std::string summary;
};

/// Runs a recipe. Outputs depend only on the config (threads excluded).
std::vector<Artifact> run_recipe(const ExperimentConfig& config);

/// Two experiments sharing moments and one effect pattern scaled by
/// delta_factor, with independent noise.
struct PairOutcome {
  std::vector<PValueVector> pvalues;
  std::vector<DeltaZVector> delta;
  ConcordanceReport report;
};
PairOutcome concordance_pair_outcome(const ExperimentConfig& config);

/// Short fixed-precision rendering for summaries.
std::string brief(double v);

}  // namespace pvalprior::cli
