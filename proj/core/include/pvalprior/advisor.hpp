#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "pvalprior/ttest.hpp"

namespace pvalprior {

/// Qualitative prior probability that the null hypothesis is true.
enum class PriorRegime { QuiteLow, Given, NotGiven, PossiblyHigh };

/// Whether a decision has to be made with present knowledge.
enum class Urgency { Yes, No, Unspecified };

enum class Philosophy {
  Fisher,
  BayesianBasic,
  BayesianSubjective,
  BayesianObjective,
  Suspend,
  NeymanPearson,
};

enum class Indicator { PValue, PosteriorProbability, Threshold, None };

enum class Adjustment { NotRequired, Required, NotApplicable };

struct Recommendation {
  Philosophy philosophy;
  Indicator indicator;
  Adjustment adjustment;

  bool operator==(const Recommendation&) const = default;
};

/// How a table row constrains urgency: "-" (Any), "yes", "no" or "yes/no".
enum class UrgencyEntry { Any, Yes, No, YesOrNo };

struct MethodologyRow {
  PriorRegime prior;
  UrgencyEntry urgency;
  Recommendation recommendation;
};

/// The methodology table, in printed order.
inline constexpr std::array<MethodologyRow, 6> kMethodologyTable{{
    {PriorRegime::QuiteLow, UrgencyEntry::Any,
     {Philosophy::Fisher, Indicator::PValue, Adjustment::NotRequired}},
    {PriorRegime::Given, UrgencyEntry::Any,
     {Philosophy::BayesianBasic, Indicator::PosteriorProbability, Adjustment::NotApplicable}},
    {PriorRegime::NotGiven, UrgencyEntry::Yes,
     {Philosophy::BayesianSubjective, Indicator::PosteriorProbability, Adjustment::NotApplicable}},
    {PriorRegime::NotGiven, UrgencyEntry::YesOrNo,
     {Philosophy::BayesianObjective, Indicator::PosteriorProbability, Adjustment::NotApplicable}},
    {PriorRegime::NotGiven, UrgencyEntry::No,
     {Philosophy::Suspend, Indicator::None, Adjustment::NotApplicable}},
    {PriorRegime::PossiblyHigh, UrgencyEntry::Any,
     {Philosophy::NeymanPearson, Indicator::Threshold, Adjustment::Required}},
}};

inline constexpr std::array<PriorRegime, 4> kAllPriors{
    PriorRegime::QuiteLow, PriorRegime::Given, PriorRegime::NotGiven, PriorRegime::PossiblyHigh};
inline constexpr std::array<Urgency, 3> kAllUrgencies{Urgency::Yes, Urgency::No,
                                                      Urgency::Unspecified};

/// Every table row matching (prior, urgency), in table order. Never empty.
std::vector<Recommendation> advise(PriorRegime prior, Urgency urgency);

/// alpha / m.
double bonferroni_threshold(double alpha, std::size_t m);

struct AdjustmentCounts {
  std::size_t raw_count = 0;
  std::size_t bonferroni_count = 0;
  double raw_threshold = 0.0;
  double bonferroni_threshold = 0.0;
  std::size_t tests = 0;
};

/// Positives at p <= raw_threshold versus p <= alpha / m.
AdjustmentCounts compare_adjustments(const PValueVector& pv, double alpha, double raw_threshold);

std::string_view to_string(PriorRegime v) noexcept;
std::string_view to_string(Urgency v) noexcept;
std::string_view to_string(Philosophy v) noexcept;
std::string_view to_string(Indicator v) noexcept;
std::string_view to_string(Adjustment v) noexcept;
std::string_view to_string(UrgencyEntry v) noexcept;

/// Human-readable labels as printed in the table ("Bayesian (basic)",
/// "p-value", "not required", ...).
std::string_view label(Philosophy v) noexcept;
std::string_view label(Indicator v) noexcept;
std::string_view label(Adjustment v) noexcept;
std::string_view label(PriorRegime v) noexcept;
std::string_view label(UrgencyEntry v) noexcept;

/// Accepts the kebab-case names produced by to_string.
std::optional<PriorRegime> parse_prior(std::string_view text) noexcept;
std::optional<Urgency> parse_urgency(std::string_view text) noexcept;

}  // namespace pvalprior
