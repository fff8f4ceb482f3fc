#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <sstream>

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include "pvalprior/advisor.hpp"
#include "pvalprior/concordance.hpp"
#include "pvalprior/diagnostics.hpp"
#include "pvalprior/error.hpp"
#include "pvalprior/json.hpp"
#include "pvalprior/ttest.hpp"
#include "recipes.hpp"

namespace fs = std::filesystem;
using namespace pvalprior;
using cli::Artifact;
using cli::brief;

namespace {

constexpr const char* kOutEnv = "PVALPRIOR_OUT";

struct OutputOptions {
  std::string dir;
  CLI::Option* option = nullptr;
};

void add_output(CLI::App* sub, OutputOptions& out) {
  out.option = sub->add_option("--out", out.dir,
                               std::string("Output directory (default: $") + kOutEnv + " or .)");
}

std::string resolved_dir(const OutputOptions& out) {
  if (out.option->count() > 0) return out.dir;
  if (const char* env = std::getenv(kOutEnv); env != nullptr && *env != '\0') return env;
  return ".";
}

void add_config(CLI::App* sub, std::string& path) {
  sub->add_option("--config", path,
                  "JSON file whose keys match the long flag names; flags given on the command "
                  "line win")
      ->check(CLI::ExistingFile);
}

// Fills options the user did not pass from a flat JSON object.
void apply_config(CLI::App* sub, const std::string& path) {
  if (path.empty()) return;
  std::ifstream in(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw CLI::ValidationError("--config", "cannot parse " + path + ": " + e.what());
  }
  if (!j.is_object()) throw CLI::ValidationError("--config", path + " must hold a JSON object");
  for (const auto& [key, value] : j.items()) {
    std::string name = key;
    std::replace(name.begin(), name.end(), '_', '-');
    CLI::Option* opt = name == "config" ? nullptr : sub->get_option_no_throw("--" + name);
    if (opt == nullptr) {
      throw CLI::ValidationError("--config", "unknown key '" + key + "' for " + sub->get_name());
    }
    if (opt->count() > 0) continue;
    if (value.is_array() || value.is_object() || value.is_null()) {
      throw CLI::ValidationError("--config", "key '" + key + "' must be a scalar");
    }
    opt->add_result(value.is_string() ? value.get<std::string>() : value.dump());
    opt->run_callback();
  }
}

void emit(const std::vector<Artifact>& artifacts, const std::string& dir) {
  fs::create_directories(dir);
  for (const auto& a : artifacts) {
    const auto path = fs::path(dir) / a.file;
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    file << a.contents;
    file.close();
    if (!file) throw Error("cannot write " + path.string());
    std::cout << path.string() << ": " << a.summary << '\n';
  }
}

template <typename Loader>
auto load_file(const std::string& path, Loader loader) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  try {
    return loader(in);
  } catch (const ParseError& e) {
    throw Error(path + ": " + e.what());
  }
}

ExpressionMatrix read_matrix(const std::string& path) {
  return load_file(path, [](std::istream& in) { return load_matrix(in); });
}

GroupDesign read_design(const std::string& path, const ExpressionMatrix& m) {
  return load_file(path, [&](std::istream& in) { return load_design(in, m); });
}

PValueVector read_pvalues(const std::string& path) {
  return load_file(path, [](std::istream& in) { return load_pvalues(in); });
}

DeltaZVector read_delta_z(const std::string& path) {
  return load_file(path, [](std::istream& in) { return load_delta_z(in); });
}

template <typename T>
std::string render(void (*writer)(std::ostream&, const T&), const T& value) {
  std::ostringstream out;
  writer(out, value);
  return out.str();
}

std::string json_text(const nlohmann::json& j) { return j.dump(2) + "\n"; }

void print_table(std::ostream& os) {
  os << std::left << std::setw(16) << "Pr(H0 = true)" << std::setw(10) << "urgent" << std::setw(22)
     << "philosophy" << std::setw(24) << "indicator" << "adjustment\n";
  for (const auto& row : kMethodologyTable) {
    os << std::setw(16) << label(row.prior) << std::setw(10) << label(row.urgency) << std::setw(22)
       << label(row.recommendation.philosophy) << std::setw(24)
       << label(row.recommendation.indicator) << label(row.recommendation.adjustment) << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulate and diagnose gene-wise p-values under different priors Pr(H0 = true)."};
  app.require_subcommand(1);
  app.set_version_flag("--version", "pvalprior 0.1.0");

  // simulate
  cli::ExperimentConfig config;
  std::string sim_config, moments_path, source_input, source_design, source_group;
  OutputOptions sim_out;
  auto* simulate = app.add_subcommand("simulate", "Run a seeded experiment recipe");
  simulate->add_option("--recipe", config.recipe, "Experiment recipe")
      ->check(CLI::IsMember(std::vector<std::string>(std::begin(cli::kRecipes), std::end(cli::kRecipes))))
      ->capture_default_str();
  simulate->add_option("--genes", config.genes, "Number of genes m (synthetic moments)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_option("--reps", config.reps,
                       "Replicates per group n_r (default 3; 6 for split-1c, which needs an even count)")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1000}));
  simulate->add_option("--groups", config.groups, "Groups generated; regroup-1b: groups after regrouping")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1000}))
      ->capture_default_str();
  simulate->add_option("--delta-factor", config.delta_factor, "Effect size in units of each gene's sigma")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  simulate->add_option("--source-offset-sd", config.source_offset_sd,
                       "SD of per-source offsets in units of sigma (regroup-1b heterogeneity)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  simulate->add_option("--threshold", config.threshold, "Raw p-value threshold for positives")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  simulate->add_option("--bins", config.bins, "Histogram bins")
      ->check(CLI::Range(std::size_t{2}, std::size_t{100000}))
      ->capture_default_str();
  simulate->add_option("--lambda", config.lambda, "Tuning value for the pi0 estimate")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  simulate->add_option("--alpha", config.alpha, "Family-wise level for the Bonferroni threshold")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  simulate->add_option("--seed", config.seed, "Master seed")->capture_default_str();
  simulate->add_option("--threads", config.threads, "Worker threads, 0 = all cores")
      ->capture_default_str();
  simulate->add_option("--moments", moments_path, "CSV gene_id,mu,sigma replacing synthetic moments")
      ->check(CLI::ExistingFile);
  auto* input_opt = simulate->add_option("--input", source_input,
                                         "Expression matrix CSV to estimate moments from")
                        ->check(CLI::ExistingFile);
  simulate->add_option("--design", source_design, "Design CSV for --input")
      ->check(CLI::ExistingFile)
      ->needs(input_opt);
  simulate->add_option("--source-group", source_group,
                       "Group of --design whose columns give the moments (default: all columns)")
      ->needs(input_opt);
  simulate->get_option("--moments")->excludes(input_opt);
  add_config(simulate, sim_config);
  add_output(simulate, sim_out);

  // test
  std::string test_config, test_input, test_design, control, treatment;
  double test_threshold = 0.005;
  unsigned test_threads = 0;
  OutputOptions test_out;
  auto* test = app.add_subcommand("test", "Pooled two-sample t-test for every gene");
  test->add_option("--input", test_input, "Expression matrix CSV")->check(CLI::ExistingFile)->required();
  test->add_option("--design", test_design, "Design CSV sample_id,group")
      ->check(CLI::ExistingFile)
      ->required();
  test->add_option("--control", control, "Control group name")->required();
  test->add_option("--treatment", treatment, "Treatment group name")->required();
  test->add_option("--threshold", test_threshold, "Threshold used in the summary count")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  test->add_option("--threads", test_threads, "Worker threads, 0 = all cores")->capture_default_str();
  add_config(test, test_config);
  add_output(test, test_out);

  // diagnose
  std::string diag_config, diag_pvalues, diag_input, diag_design, diag_control, diag_treatment;
  std::size_t diag_bins = kDefaultBins;
  double diag_lambda = kDefaultLambda;
  OutputOptions diag_out;
  auto* diagnose_cmd = app.add_subcommand("diagnose", "Histogram, uniformity, skew and pi0 of p-values");
  diagnose_cmd->add_option("--pvalues", diag_pvalues, "p-value CSV gene_id,t,df,p")
      ->check(CLI::ExistingFile)
      ->required();
  diagnose_cmd->add_option("--bins", diag_bins, "Histogram bins")
      ->check(CLI::Range(std::size_t{2}, std::size_t{100000}))
      ->capture_default_str();
  diagnose_cmd->add_option("--lambda", diag_lambda, "Tuning value for the pi0 estimate")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  auto* diag_input_opt =
      diagnose_cmd->add_option("--input", diag_input, "Matrix CSV, adds the signal/noise report")
          ->check(CLI::ExistingFile);
  diagnose_cmd->add_option("--design", diag_design, "Design CSV for --input")
      ->check(CLI::ExistingFile)
      ->needs(diag_input_opt);
  diagnose_cmd->add_option("--control", diag_control, "Control group for --input")->needs(diag_input_opt);
  diagnose_cmd->add_option("--treatment", diag_treatment, "Treatment group for --input")
      ->needs(diag_input_opt);
  add_config(diagnose_cmd, diag_config);
  add_output(diagnose_cmd, diag_out);

  // concord
  std::string conc_config, pv1_path, pv2_path, dz1_path, dz2_path, model_name = "binomial";
  double conc_threshold = 0.005;
  OutputOptions conc_out;
  auto* concord = app.add_subcommand("concord", "Compare the results of two experiments");
  std::vector<std::int64_t> raw_counts;
  concord->add_option("--pvalues1", pv1_path, "p-values of experiment 1")->check(CLI::ExistingFile);
  concord->add_option("--pvalues2", pv2_path, "p-values of experiment 2")->check(CLI::ExistingFile);
  concord->add_option("--delta1", dz1_path, "delta z of experiment 1")->check(CLI::ExistingFile);
  concord->add_option("--delta2", dz2_path, "delta z of experiment 2")->check(CLI::ExistingFile);
  auto* counts_opt =
      concord->add_option("--counts", raw_counts,
                          "Coincidence test on raw counts m,k1,k2,overlap instead of result files")
          ->delimiter(',')
          ->expected(4);
  for (const char* name : {"--pvalues1", "--pvalues2", "--delta1", "--delta2"}) {
    concord->get_option(name)->excludes(counts_opt);
  }
  concord->add_option("--threshold", conc_threshold, "Selection threshold (p <= threshold)")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  concord->add_option("--model", model_name, "Chance-overlap model")
      ->check(CLI::IsMember({"binomial", "hypergeometric"}))
      ->capture_default_str();
  add_config(concord, conc_config);
  add_output(concord, conc_out);

  // adjust
  std::string adj_config, adj_pvalues;
  double adj_alpha = 0.01;
  double adj_threshold = 0.005;
  OutputOptions adj_out;
  auto* adjust = app.add_subcommand("adjust", "Raw threshold versus Bonferroni positives");
  adjust->add_option("--pvalues", adj_pvalues, "p-value CSV")->check(CLI::ExistingFile)->required();
  adjust->add_option("--alpha", adj_alpha, "Family-wise level")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  adjust->add_option("--threshold", adj_threshold, "Raw threshold")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  add_config(adjust, adj_config);
  add_output(adjust, adj_out);

  // advise
  std::string adv_config, prior_name, urgency_name = "unspecified";
  bool adv_json = false;
  bool adv_table = false;
  auto* advise_cmd = app.add_subcommand("advise", "Recommend a testing methodology for a prior regime");
  auto* prior_opt = advise_cmd->add_option("--prior", prior_name, "Prior regime")
                        ->check(CLI::IsMember({"quite-low", "given", "not-given", "possibly-high"}));
  advise_cmd->add_option("--urgency", urgency_name, "Must a decision be made now?")
      ->check(CLI::IsMember({"yes", "no", "unspecified"}))
      ->capture_default_str();
  advise_cmd->add_flag("--json", adv_json, "Print a JSON array instead of text");
  advise_cmd->add_flag("--table", adv_table, "Print the whole methodology table")->excludes(prior_opt);
  add_config(advise_cmd, adv_config);

  CLI::App* active = &app;
  try {
    app.parse(argc, argv);
    active = app.get_subcommands().front();
    apply_config(simulate, sim_config);
    apply_config(test, test_config);
    apply_config(diagnose_cmd, diag_config);
    apply_config(concord, conc_config);
    apply_config(adjust, adj_config);
    apply_config(advise_cmd, adv_config);
    if (active == advise_cmd && prior_opt->count() == 0 && !adv_table) {
      throw CLI::RequiredError("--prior");
    }
    if (active == diagnose_cmd && !diag_input.empty() &&
        (diag_design.empty() || diag_control.empty() || diag_treatment.empty())) {
      throw CLI::ValidationError("--input", "needs --design, --control and --treatment");
    }
    if (active == concord && raw_counts.empty() &&
        (pv1_path.empty() || pv2_path.empty() || dz1_path.empty() || dz2_path.empty())) {
      throw CLI::ValidationError("concord", "needs --pvalues1/2 and --delta1/2, or --counts");
    }
    if (active == simulate && !source_group.empty() && source_design.empty()) {
      throw CLI::ValidationError("--source-group", "needs --design");
    }
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    if (!app.get_subcommands().empty()) active = app.get_subcommands().front();
    std::cerr << "error: " << e.what() << "\n\n" << active->help();
    return 2;
  }

  try {
    if (active == simulate) {
      if (!moments_path.empty()) {
        config.moments = load_file(moments_path, [](std::istream& in) { return load_moments(in); });
      } else if (!source_input.empty()) {
        const auto m = read_matrix(source_input);
        std::vector<std::size_t> cols(m.samples());
        std::iota(cols.begin(), cols.end(), std::size_t{0});
        if (!source_design.empty()) {
          const auto design = read_design(source_design, m);
          if (!source_group.empty()) cols = design.group(source_group).columns;
        }
        config.moments = estimate_moments(m, cols);
      }
      emit(cli::run_recipe(config), resolved_dir(sim_out));
    } else if (active == test) {
      const auto m = read_matrix(test_input);
      const auto design = read_design(test_design, m);
      const auto pv = test_matrix(m, design, control, treatment, {test_threads});
      const auto dz = delta_z(m, design, control, treatment);
      std::size_t hits = 0;
      for (const auto& r : pv.results) hits += r.p <= test_threshold ? 1 : 0;
      emit({{"pvalues.csv", render(write_pvalues, pv),
             treatment + " vs " + control + ", " + std::to_string(hits) + " of " +
                 std::to_string(pv.size()) + " with p <= " + brief(test_threshold)},
            {"delta_z.csv", render(write_delta_z, dz), std::to_string(dz.delta.size()) + " genes"}},
           resolved_dir(test_out));
    } else if (active == diagnose_cmd) {
      const auto pv = read_pvalues(diag_pvalues);
      auto report = diagnose(pv.p_values(), diag_bins, diag_lambda);
      if (!diag_input.empty()) {
        const auto m = read_matrix(diag_input);
        report.signal_noise = signal_noise(m, read_design(diag_design, m), diag_control, diag_treatment);
      }
      std::string summary = "chi2 p = " + brief(report.uniformity.chi_p) + ", skew " +
                            (report.skew ? std::string(to_string(*report.skew)) : "n/a") +
                            ", pi0 = " + brief(report.pi0);
      if (report.signal_noise) {
        summary += ", signal/noise = " + brief(report.signal_noise->signal / report.signal_noise->noise);
      }
      emit({{"histogram.csv", render(write_histogram, report.histogram),
             std::to_string(report.histogram.bins()) + " bins, " + std::to_string(report.count) + " p-values"},
            {"diagnostics.json", json_text(report), summary}},
           resolved_dir(diag_out));
    } else if (active == concord && !raw_counts.empty()) {
      const auto model =
          model_name == "hypergeometric" ? CoincidenceModel::Hypergeometric : CoincidenceModel::Binomial;
      const auto r = coincidence_test(raw_counts[0], raw_counts[1], raw_counts[2], raw_counts[3], model);
      emit({{"coincidence.json", json_text(r),
             "overlap " + std::to_string(r.overlap) + " of " + std::to_string(r.k1) + " x " +
                 std::to_string(r.k2) + " in " + std::to_string(r.m) + ", p = " + brief(r.p_value)}},
           resolved_dir(conc_out));
    } else if (active == concord) {
      const auto pv1 = read_pvalues(pv1_path);
      const auto pv2 = read_pvalues(pv2_path);
      const auto dz1 = read_delta_z(dz1_path);
      const auto dz2 = read_delta_z(dz2_path);
      const auto model =
          model_name == "hypergeometric" ? CoincidenceModel::Hypergeometric : CoincidenceModel::Binomial;
      const auto report = concordance_report(pv1, pv2, dz1, dz2, conc_threshold, model);
      std::ostringstream pairs;
      write_concordance_pairs(pairs, pv1, pv2, dz1, dz2);
      emit({{"concordance.json", json_text(report),
             "rho(p) = " + brief(report.rho_p) + ", overlap " + std::to_string(report.coincidence.overlap) +
                 " (" + std::to_string(report.coincidence.k1) + " x " +
                 std::to_string(report.coincidence.k2) + "), coincidence p = " +
                 brief(report.coincidence.p_value)},
            {"concordance_pairs.csv", pairs.str(), std::to_string(pv1.size()) + " paired genes"}},
           resolved_dir(conc_out));
    } else if (active == adjust) {
      const auto pv = read_pvalues(adj_pvalues);
      const auto counts = compare_adjustments(pv, adj_alpha, adj_threshold);
      emit({{"adjust.json", json_text(counts),
             "raw p <= " + brief(adj_threshold) + ": " + std::to_string(counts.raw_count) +
                 ", bonferroni p <= " + brief(counts.bonferroni_threshold) + ": " +
                 std::to_string(counts.bonferroni_count) + " of " + std::to_string(counts.tests)}},
           resolved_dir(adj_out));
    } else if (active == advise_cmd) {
      if (adv_table) {
        print_table(std::cout);
        return 0;
      }
      const auto prior = *parse_prior(prior_name);
      const auto urgency = *parse_urgency(urgency_name);
      const auto recs = pvalprior::advise(prior, urgency);
      if (adv_json) {
        std::cout << recommendations_json(recs).dump(2) << '\n';
      } else {
        std::cout << "prior " << to_string(prior) << ", urgency " << to_string(urgency) << ":\n";
        for (const auto& r : recs) {
          std::cout << "  " << label(r.philosophy) << " / " << label(r.indicator) << " / "
                    << label(r.adjustment) << '\n';
        }
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
