#include "pvalprior/json.hpp"

#include <string>

namespace pvalprior {

using nlohmann::json;

void to_json(json& j, const UniformityReport& r) {
  j = json{{"chi_square", r.chi_square},
           {"chi_df", r.chi_df},
           {"chi_p", r.chi_p},
           {"ks", r.ks_statistic},
           {"uniform", r.consistent}};
}

void to_json(json& j, const SignalNoiseReport& r) {
  j = json{{"signal", r.signal}, {"noise", r.noise}, {"replicates", r.replicates}, {"genes", r.genes}};
}

void to_json(json& j, const DiagnosticsReport& r) {
  j = json{{"count", r.count},
           {"bins", r.histogram.bins()},
           {"chi_square", r.uniformity.chi_square},
           {"chi_df", r.uniformity.chi_df},
           {"chi_p", r.uniformity.chi_p},
           {"ks", r.uniformity.ks_statistic},
           {"uniform", r.uniformity.consistent},
           {"skew", r.skew ? json(std::string(to_string(*r.skew))) : json(nullptr)},
           {"lambda", r.lambda},
           {"pi0", r.pi0},
           {"signal", r.signal_noise ? json(r.signal_noise->signal) : json(nullptr)},
           {"noise", r.signal_noise ? json(r.signal_noise->noise) : json(nullptr)}};
}

void to_json(json& j, const CoincidenceResult& r) {
  j = json{{"m", r.m},
           {"k1", r.k1},
           {"k2", r.k2},
           {"overlap", r.overlap},
           {"q", r.q},
           {"p_value", r.p_value},
           {"model", r.model == CoincidenceModel::Binomial ? "binomial" : "hypergeometric"}};
}

void to_json(json& j, const ConcordanceReport& r) {
  j = json{{"rho_p", r.rho_p},
           {"rho_dz_all", r.rho_dz_all},
           {"rho_dz_common", r.rho_dz_common ? json(*r.rho_dz_common) : json(nullptr)},
           {"overlap", r.coincidence.overlap},
           {"coincidence_p", r.coincidence.p_value},
           {"common_genes", r.common_genes},
           {"threshold", r.threshold},
           {"m", r.coincidence.m},
           {"k1", r.coincidence.k1},
           {"k2", r.coincidence.k2},
           {"q", r.coincidence.q},
           {"model", r.coincidence.model == CoincidenceModel::Binomial ? "binomial"
                                                                       : "hypergeometric"}};
}

void to_json(json& j, const AdjustmentCounts& r) {
  j = json{{"tests", r.tests},
           {"raw_threshold", r.raw_threshold},
           {"raw_count", r.raw_count},
           {"bonferroni_threshold", r.bonferroni_threshold},
           {"bonferroni_count", r.bonferroni_count}};
}

void to_json(json& j, const Recommendation& r) {
  j = json{{"philosophy", std::string(to_string(r.philosophy))},
           {"indicator", std::string(to_string(r.indicator))},
           {"adjustment", std::string(to_string(r.adjustment))}};
}

json recommendations_json(const std::vector<Recommendation>& recs) {
  json out = json::array();
  for (const auto& r : recs) out.push_back(r);
  return out;
}

}  // namespace pvalprior
