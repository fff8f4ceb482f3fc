#include "recipes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "pvalprior/advisor.hpp"
#include "pvalprior/concordance.hpp"
#include "pvalprior/diagnostics.hpp"
#include "pvalprior/error.hpp"
#include "pvalprior/json.hpp"
#include "pvalprior/ttest.hpp"

namespace pvalprior::cli {
namespace {

// Child generators of the master seed, one per independent use.
enum Child : std::uint64_t { kMoments = 0, kData = 1, kSecondData = 2, kPattern = 3 };

template <typename Writer, typename... Args>
std::string render(Writer writer, const Args&... args) {
  std::ostringstream out;
  writer(out, args...);
  return out.str();
}

std::string json_text(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::size_t count_at_most(const PValueVector& pv, double threshold) {
  return static_cast<std::size_t>(std::count_if(pv.results.begin(), pv.results.end(),
                                                [&](const TestResult& r) { return r.p <= threshold; }));
}

void validate(const ExperimentConfig& c) {
  if (std::find(std::begin(kRecipes), std::end(kRecipes), c.recipe) == std::end(kRecipes)) {
    throw Error("unknown recipe '" + c.recipe + "'");
  }
  const std::size_t genes = c.moments ? c.moments->size() : c.genes;
  if (genes < 100) {
    throw Error("recipes need at least 100 genes for their diagnostics, got " + std::to_string(genes));
  }
  if (c.groups < 2) throw Error("groups must be >= 2");
  if (resolved_reps(c) < 2) throw Error("reps must be >= 2");
  if (!(c.threshold > 0.0 && c.threshold <= 1.0)) throw Error("threshold must be in (0, 1]");
  if (!(c.lambda > 0.0 && c.lambda < 1.0)) throw Error("lambda must be in (0, 1)");
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw Error("alpha must be in (0, 1)");
  if (c.bins < 2) throw Error("bins must be >= 2");
  if (!(c.delta_factor >= 0.0) || !std::isfinite(c.delta_factor)) {
    throw Error("delta factor must be finite and >= 0");
  }
}

GeneMoments reference_moments(const ExperimentConfig& c, const SeededGenerator& root) {
  if (c.moments) return *c.moments;
  return synthetic_moments(c.genes, root.derive(kMoments));
}

nlohmann::json config_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["recipe"] = c.recipe;
  j["genes"] = c.moments ? c.moments->size() : c.genes;
  j["reps"] = resolved_reps(c);
  j["groups"] = c.groups;
  j["delta_factor"] = c.delta_factor;
  j["source_offset_sd"] = c.source_offset_sd;
  j["threshold"] = c.threshold;
  j["bins"] = c.bins;
  j["lambda"] = c.lambda;
  j["alpha"] = c.alpha;
  j["seed"] = c.seed;
  j["moments"] = c.moments ? "file" : "synthetic";
  return j;
}

std::string skew_text(const DiagnosticsReport& r) {
  return r.skew ? std::string(to_string(*r.skew)) : std::string("n/a");
}

// Files shared by every recipe that ends in one two-group comparison.
void emit_comparison(std::vector<Artifact>& out, const ExperimentConfig& c, const Dataset& data,
                     const char* control, const char* treatment, bool with_matrix = true) {
  const Parallelism par{c.threads};
  if (with_matrix) {
    out.push_back({"matrix.csv", render(write_matrix, data.matrix),
                   std::to_string(data.matrix.genes()) + " genes x " +
                       std::to_string(data.matrix.samples()) + " samples"});
    out.push_back({"design.csv", render(write_design, data.matrix, data.design),
                   std::to_string(data.design.groups().size()) + " groups"});
  }
  const auto pv = test_matrix(data.matrix, data.design, control, treatment, par);
  out.push_back({"pvalues.csv", render(write_pvalues, pv),
                 std::string(treatment) + " vs " + control + ", " +
                     std::to_string(count_at_most(pv, c.threshold)) + " of " +
                     std::to_string(pv.size()) + " with p <= " + brief(c.threshold)});
  const auto dz = delta_z(data.matrix, data.design, control, treatment);
  out.push_back({"delta_z.csv", render(write_delta_z, dz), std::to_string(dz.delta.size()) + " genes"});

  const auto p = pv.p_values();
  auto report = diagnose(p, c.bins, c.lambda);
  report.signal_noise = signal_noise(data.matrix, data.design, control, treatment);
  out.push_back({"histogram.csv", render(write_histogram, report.histogram),
                 std::to_string(report.histogram.bins()) + " bins"});
  out.push_back({"diagnostics.json", json_text(report),
                 "chi2 p = " + brief(report.uniformity.chi_p) + ", skew " + skew_text(report) +
                     ", pi0 = " + brief(report.pi0) + ", signal/noise = " +
                     brief(report.signal_noise->signal / report.signal_noise->noise)});
}

Dataset null_data(const ExperimentConfig& c, const GeneMoments& moments, const SeededGenerator& gen,
                  std::size_t groups) {
  return generate_null(moments, {groups, resolved_reps(c), c.source_offset_sd}, gen, {c.threads});
}

std::vector<Artifact> null_uniform(const ExperimentConfig& c) {
  const SeededGenerator root(c.seed);
  const auto moments = reference_moments(c, root);
  const auto data = null_data(c, moments, root.derive(kData), c.groups);
  std::vector<Artifact> out;
  emit_comparison(out, c, data, "G1", "G2");
  return out;
}

std::vector<Artifact> effect_inject(const ExperimentConfig& c) {
  const SeededGenerator root(c.seed);
  const auto moments = reference_moments(c, root);
  auto data = null_data(c, moments, root.derive(kData), c.groups);
  data.matrix = inject_effect(data.matrix, data.design, moments, {c.delta_factor, "G2"});
  std::vector<Artifact> out;
  emit_comparison(out, c, data, "G1", "G2");
  return out;
}

// Every replicate slot plays one source (cell line); the offset shared by a
// slot is that source's own level. New groups take one sample per source.
std::vector<Artifact> regroup(const ExperimentConfig& c) {
  const SeededGenerator root(c.seed);
  const auto moments = reference_moments(c, root);
  const auto generated = null_data(c, moments, root.derive(kData), c.groups);
  const auto sources = split_by_replicate_slot(generated);
  const auto data = transpose_regroup(sources);
  std::vector<Artifact> out;
  emit_comparison(out, c, data, "G1", "G2");
  out.front().summary += ", regrouped from " + std::to_string(sources.size()) + " sources";
  return out;
}

std::string join_ids(const ExpressionMatrix& m, const std::vector<std::size_t>& cols) {
  std::string s;
  for (auto col : cols) {
    if (!s.empty()) s += ';';
    s += m.sample_ids()[col];
  }
  return s;
}

std::vector<Artifact> split_halves(const ExperimentConfig& c) {
  const std::size_t reps = resolved_reps(c);
  if (reps % 2 != 0) throw Error("split-1c needs an even number of reps, got " + std::to_string(reps));
  const SeededGenerator root(c.seed);
  const auto moments = reference_moments(c, root);
  const auto data = null_data(c, moments, root.derive(kData), 1);
  const auto splits = enumerate_splits(data.design.groups().front().columns);

  std::ostringstream split_csv;
  split_csv << "split,half_a,half_b\n";
  std::ostringstream hist_csv;
  hist_csv << "split,bin_low,bin_high,count\n";
  nlohmann::json reports = nlohmann::json::array();
  std::size_t high = 0;
  for (std::size_t s = 0; s < splits.size(); ++s) {
    const auto design = split_design(splits[s], data.matrix.samples());
    const auto pv = test_matrix(data.matrix, design, "A", "B", {c.threads});
    auto report = diagnose(pv.p_values(), c.bins, c.lambda);
    report.signal_noise = signal_noise(data.matrix, design, "A", "B");
    if (report.skew == Skew::HighConcentrated) ++high;

    split_csv << s + 1 << ',' << join_ids(data.matrix, splits[s].half_a) << ','
              << join_ids(data.matrix, splits[s].half_b) << '\n';
    std::istringstream rows(render(write_histogram, report.histogram));
    std::string line;
    std::getline(rows, line);  // header
    while (std::getline(rows, line)) hist_csv << s + 1 << ',' << line << '\n';
    nlohmann::json j = report;
    j["split"] = s + 1;
    j["positives"] = count_at_most(pv, c.threshold);
    reports.push_back(std::move(j));
  }

  std::vector<Artifact> out;
  out.push_back({"matrix.csv", render(write_matrix, data.matrix),
                 std::to_string(data.matrix.genes()) + " genes x " +
                     std::to_string(data.matrix.samples()) + " samples"});
  out.push_back({"splits.csv", split_csv.str(), std::to_string(splits.size()) + " balanced splits"});
  out.push_back({"split_histograms.csv", hist_csv.str(),
                 std::to_string(splits.size()) + " histograms of " + std::to_string(c.bins) + " bins"});
  out.push_back({"splits.json", json_text(reports),
                 std::to_string(high) + " of " + std::to_string(splits.size()) +
                     " splits high-concentrated"});
  return out;
}

std::vector<Artifact> concordance_pair(const ExperimentConfig& c) {
  const auto outcome = concordance_pair_outcome(c);
  const auto& pvs = outcome.pvalues;
  const auto& dzs = outcome.delta;
  const auto& report = outcome.report;
  std::vector<Artifact> out;
  for (std::size_t e = 0; e < 2; ++e) {
    const auto tag = std::to_string(e + 1);
    out.push_back({"pvalues_" + tag + ".csv", render(write_pvalues, pvs[e]),
                   std::to_string(count_at_most(pvs[e], c.threshold)) + " of " +
                       std::to_string(pvs[e].size()) + " with p <= " + brief(c.threshold)});
    out.push_back({"delta_z_" + tag + ".csv", render(write_delta_z, dzs[e]),
                   std::to_string(dzs[e].delta.size()) + " genes"});
  }
  out.push_back({"concordance_pairs.csv",
                 render(write_concordance_pairs, pvs[0], pvs[1], dzs[0], dzs[1]),
                 std::to_string(pvs[0].size()) + " paired genes"});
  out.push_back({"concordance.json", json_text(report),
                 "rho(p) = " + brief(report.rho_p) + ", overlap " +
                     std::to_string(report.coincidence.overlap) + ", coincidence p = " +
                     brief(report.coincidence.p_value)});
  return out;
}

std::vector<Artifact> adjust_compare(const ExperimentConfig& c) {
  const SeededGenerator root(c.seed);
  const auto moments = reference_moments(c, root);
  auto data = null_data(c, moments, root.derive(kData), c.groups);
  data.matrix = inject_effect(data.matrix, data.design, moments, {c.delta_factor, "G2"});
  const auto pv = test_matrix(data.matrix, data.design, "G1", "G2", {c.threads});
  const auto counts = compare_adjustments(pv, c.alpha, c.threshold);
  std::vector<Artifact> out;
  out.push_back({"pvalues.csv", render(write_pvalues, pv),
                 std::to_string(pv.size()) + " genes"});
  out.push_back({"adjust.json", json_text(counts),
                 "raw p <= " + brief(c.threshold) + ": " + std::to_string(counts.raw_count) +
                     ", bonferroni p <= " + brief(counts.bonferroni_threshold) + ": " +
                     std::to_string(counts.bonferroni_count)});
  return out;
}

}  // namespace

PairOutcome concordance_pair_outcome(const ExperimentConfig& c) {
  validate(c);
  const SeededGenerator root(c.seed);
  const auto moments = reference_moments(c, root);
  const auto pattern = effect_pattern(moments.size(), c.delta_factor, root.derive(kPattern));
  PairOutcome out;
  for (auto child : {kData, kSecondData}) {
    auto data = null_data(c, moments, root.derive(child), 2);
    data.matrix = inject_effect_pattern(data.matrix, data.design, moments, pattern, "G2");
    out.pvalues.push_back(test_matrix(data.matrix, data.design, "G1", "G2", {c.threads}));
    out.delta.push_back(delta_z(data.matrix, data.design, "G1", "G2"));
  }
  out.report = concordance_report(out.pvalues[0], out.pvalues[1], out.delta[0], out.delta[1], c.threshold);
  return out;
}

std::size_t resolved_reps(const ExperimentConfig& config) {
  if (config.reps) return *config.reps;
  return config.recipe == "split-1c" ? 6 : 3;
}

std::string brief(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::vector<Artifact> run_recipe(const ExperimentConfig& config) {
  validate(config);
  std::vector<Artifact> out;
  if (config.recipe == "null-uniform") {
    out = null_uniform(config);
  } else if (config.recipe == "effect-inject") {
    out = effect_inject(config);
  } else if (config.recipe == "regroup-1b") {
    out = regroup(config);
  } else if (config.recipe == "split-1c") {
    out = split_halves(config);
  } else if (config.recipe == "concordance-pair") {
    out = concordance_pair(config);
  } else {
    out = adjust_compare(config);
  }
  out.push_back({"config.json", json_text(config_json(config)), "recipe " + config.recipe});
  return out;
}

}  // namespace pvalprior::cli
