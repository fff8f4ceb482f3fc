#pragma once

// JSON forms of the library's reports. Key names are part of the file format.

#include <vector>

#include <nlohmann/json.hpp>

#include "pvalprior/advisor.hpp"
#include "pvalprior/concordance.hpp"
#include "pvalprior/diagnostics.hpp"

namespace pvalprior {

void to_json(nlohmann::json& j, const UniformityReport& r);
void to_json(nlohmann::json& j, const SignalNoiseReport& r);

/// Keys: count, bins, chi_square, chi_df, chi_p, ks, uniform, skew, lambda,
/// pi0, signal, noise (the last two null when not computed).
void to_json(nlohmann::json& j, const DiagnosticsReport& r);

void to_json(nlohmann::json& j, const CoincidenceResult& r);

/// Keys: rho_p, rho_dz_all, rho_dz_common, overlap, coincidence_p,
/// common_genes, plus threshold, m, k1, k2, q, model.
void to_json(nlohmann::json& j, const ConcordanceReport& r);

void to_json(nlohmann::json& j, const AdjustmentCounts& r);

/// {philosophy, indicator, adjustment}
void to_json(nlohmann::json& j, const Recommendation& r);

nlohmann::json recommendations_json(const std::vector<Recommendation>& recs);

}  // namespace pvalprior
