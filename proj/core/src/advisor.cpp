#include "pvalprior/advisor.hpp"

#include <cmath>

#include "pvalprior/error.hpp"

namespace pvalprior {

namespace {

bool urgency_matches(UrgencyEntry entry, Urgency urgency) noexcept {
  if (urgency == Urgency::Unspecified) return true;
  switch (entry) {
    case UrgencyEntry::Any:
    case UrgencyEntry::YesOrNo:
      return true;
    case UrgencyEntry::Yes:
      return urgency == Urgency::Yes;
    case UrgencyEntry::No:
      return urgency == Urgency::No;
  }
  return false;
}

}  // namespace

std::vector<Recommendation> advise(PriorRegime prior, Urgency urgency) {
  std::vector<Recommendation> out;
  for (const auto& row : kMethodologyTable) {
    if (row.prior == prior && urgency_matches(row.urgency, urgency)) {
      out.push_back(row.recommendation);
    }
  }
  return out;
}

double bonferroni_threshold(double alpha, std::size_t m) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error("alpha must lie in (0, 1)");
  if (m < 1) throw Error("Bonferroni adjustment needs at least one test");
  return alpha / static_cast<double>(m);
}

AdjustmentCounts compare_adjustments(const PValueVector& pv, double alpha, double raw_threshold) {
  if (!(raw_threshold > 0.0 && raw_threshold < 1.0)) throw Error("raw threshold must lie in (0, 1)");
  if (pv.size() == 0) throw Error("no p-values to adjust");
  AdjustmentCounts out;
  out.tests = pv.size();
  out.raw_threshold = raw_threshold;
  out.bonferroni_threshold = bonferroni_threshold(alpha, pv.size());
  for (const auto& r : pv.results) {
    if (r.p <= out.raw_threshold) ++out.raw_count;
    if (r.p <= out.bonferroni_threshold) ++out.bonferroni_count;
  }
  return out;
}

std::string_view to_string(PriorRegime v) noexcept {
  switch (v) {
    case PriorRegime::QuiteLow: return "quite-low";
    case PriorRegime::Given: return "given";
    case PriorRegime::NotGiven: return "not-given";
    case PriorRegime::PossiblyHigh: return "possibly-high";
  }
  return "unknown";
}

std::string_view to_string(Urgency v) noexcept {
  switch (v) {
    case Urgency::Yes: return "yes";
    case Urgency::No: return "no";
    case Urgency::Unspecified: return "unspecified";
  }
  return "unknown";
}

std::string_view to_string(Philosophy v) noexcept {
  switch (v) {
    case Philosophy::Fisher: return "fisher";
    case Philosophy::BayesianBasic: return "bayesian-basic";
    case Philosophy::BayesianSubjective: return "bayesian-subjective";
    case Philosophy::BayesianObjective: return "bayesian-objective";
    case Philosophy::Suspend: return "suspend";
    case Philosophy::NeymanPearson: return "neyman-pearson";
  }
  return "unknown";
}

std::string_view to_string(Indicator v) noexcept {
  switch (v) {
    case Indicator::PValue: return "p-value";
    case Indicator::PosteriorProbability: return "posterior-probability";
    case Indicator::Threshold: return "threshold";
    case Indicator::None: return "none";
  }
  return "unknown";
}

std::string_view to_string(Adjustment v) noexcept {
  switch (v) {
    case Adjustment::NotRequired: return "not-required";
    case Adjustment::Required: return "required";
    case Adjustment::NotApplicable: return "not-applicable";
  }
  return "unknown";
}

std::string_view to_string(UrgencyEntry v) noexcept {
  switch (v) {
    case UrgencyEntry::Any: return "any";
    case UrgencyEntry::Yes: return "yes";
    case UrgencyEntry::No: return "no";
    case UrgencyEntry::YesOrNo: return "yes/no";
  }
  return "unknown";
}

std::string_view label(Philosophy v) noexcept {
  switch (v) {
    case Philosophy::Fisher: return "Fisher";
    case Philosophy::BayesianBasic: return "Bayesian (basic)";
    case Philosophy::BayesianSubjective: return "Bayesian (subjective)";
    case Philosophy::BayesianObjective: return "Bayesian (objective)";
    case Philosophy::Suspend: return "suspend";
    case Philosophy::NeymanPearson: return "Neyman-Pearson";
  }
  return "?";
}

std::string_view label(Indicator v) noexcept {
  switch (v) {
    case Indicator::PValue: return "p-value";
    case Indicator::PosteriorProbability: return "posterior probability";
    case Indicator::Threshold: return "threshold";
    case Indicator::None: return "-";
  }
  return "?";
}

std::string_view label(Adjustment v) noexcept {
  switch (v) {
    case Adjustment::NotRequired: return "not required";
    case Adjustment::Required: return "required";
    case Adjustment::NotApplicable: return "-";
  }
  return "?";
}

std::string_view label(PriorRegime v) noexcept {
  switch (v) {
    case PriorRegime::QuiteLow: return "quite low";
    case PriorRegime::Given: return "given";
    case PriorRegime::NotGiven: return "not given";
    case PriorRegime::PossiblyHigh: return "possibly high";
  }
  return "?";
}

std::string_view label(UrgencyEntry v) noexcept {
  switch (v) {
    case UrgencyEntry::Any: return "-";
    case UrgencyEntry::Yes: return "yes";
    case UrgencyEntry::No: return "no";
    case UrgencyEntry::YesOrNo: return "yes/no";
  }
  return "?";
}

std::optional<PriorRegime> parse_prior(std::string_view text) noexcept {
  for (auto p : kAllPriors) {
    if (to_string(p) == text) return p;
  }
  return std::nullopt;
}

std::optional<Urgency> parse_urgency(std::string_view text) noexcept {
  for (auto u : kAllUrgencies) {
    if (to_string(u) == text) return u;
  }
  return std::nullopt;
}

}  // namespace pvalprior
