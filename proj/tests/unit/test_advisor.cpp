#include <gtest/gtest.h>

#include <set>

#include "pvalprior/advisor.hpp"
#include "pvalprior/error.hpp"
#include "pvalprior/json.hpp"
#include "test_data.hpp"

namespace pvalprior {
namespace {

TEST(Advise, QuiteLowPrior) {
  const auto r = advise(PriorRegime::QuiteLow, Urgency::Unspecified);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0], (Recommendation{Philosophy::Fisher, Indicator::PValue, Adjustment::NotRequired}));
  EXPECT_EQ(label(r[0].philosophy), "Fisher");
  EXPECT_EQ(label(r[0].indicator), "p-value");
  EXPECT_EQ(label(r[0].adjustment), "not required");
}

TEST(Advise, PossiblyHighPrior) {
  const auto r = advise(PriorRegime::PossiblyHigh, Urgency::Unspecified);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0],
            (Recommendation{Philosophy::NeymanPearson, Indicator::Threshold, Adjustment::Required}));
}

TEST(Advise, NotGivenWithoutUrgency) {
  const auto r = advise(PriorRegime::NotGiven, Urgency::No);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].philosophy, Philosophy::BayesianObjective);
  EXPECT_EQ(r[1].philosophy, Philosophy::Suspend);
  EXPECT_EQ(r[1].indicator, Indicator::None);
}

TEST(Advise, NotGivenUrgent) {
  const auto r = advise(PriorRegime::NotGiven, Urgency::Yes);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].philosophy, Philosophy::BayesianSubjective);
  EXPECT_EQ(r[1].philosophy, Philosophy::BayesianObjective);
}

TEST(Advise, TotalAndConsistentWithTable) {
  std::set<Philosophy> reached;
  for (auto prior : kAllPriors) {
    for (auto urgency : kAllUrgencies) {
      const auto recs = advise(prior, urgency);
      ASSERT_FALSE(recs.empty()) << to_string(prior) << " " << to_string(urgency);
      for (const auto& rec : recs) {
        bool found = false;
        for (const auto& row : kMethodologyTable) {
          found = found || (row.prior == prior && row.recommendation == rec);
        }
        EXPECT_TRUE(found);
        reached.insert(rec.philosophy);
      }
    }
  }
  EXPECT_EQ(reached.size(), kMethodologyTable.size());
}

TEST(Advise, NamesRoundTrip) {
  for (auto prior : kAllPriors) EXPECT_EQ(parse_prior(to_string(prior)), prior);
  for (auto urgency : kAllUrgencies) EXPECT_EQ(parse_urgency(to_string(urgency)), urgency);
  EXPECT_FALSE(parse_prior("sometimes").has_value());
  EXPECT_FALSE(parse_urgency("").has_value());
}

TEST(Advise, JsonShape) {
  const auto j = recommendations_json(advise(PriorRegime::QuiteLow, Urgency::Unspecified));
  ASSERT_TRUE(j.is_array());
  EXPECT_EQ(j[0]["philosophy"], "fisher");
}

TEST(Bonferroni, Examples) {
  EXPECT_EQ(bonferroni_threshold(0.05, 1), 0.05);
  EXPECT_NEAR(bonferroni_threshold(0.01, 22626), 4.4197e-7, 5e-11);
  EXPECT_EQ(bonferroni_threshold(0.01, 2), 0.005);
  EXPECT_THROW(bonferroni_threshold(0.0, 3), Error);
  EXPECT_THROW(bonferroni_threshold(0.5, 0), Error);
}

PValueVector from_p(const std::vector<double>& p) {
  PValueVector pv;
  for (std::size_t i = 0; i < p.size(); ++i) {
    pv.gene_ids.push_back("g" + std::to_string(i + 1));
    pv.results.push_back({0.0, 4, p[i], false});
  }
  return pv;
}

TEST(CompareAdjustments, Examples) {
  const auto none = compare_adjustments(from_p({1, 1, 1}), 0.01, 0.005);
  EXPECT_EQ(none.raw_count, 0u);
  EXPECT_EQ(none.bonferroni_count, 0u);
  const auto single = compare_adjustments(from_p({1e-8}), 0.01, 0.005);
  EXPECT_EQ(single.raw_count, 1u);
  EXPECT_EQ(single.bonferroni_count, 1u);
  EXPECT_EQ(single.tests, 1u);
}

TEST(CompareAdjustments, BonferroniNeverExceedsRawAtSameLevel) {
  const auto p = testing::uniform_sample(5000, 12);
  const auto r = compare_adjustments(from_p(p), 0.01, 0.01);
  EXPECT_LE(r.bonferroni_count, r.raw_count);
}

TEST(CompareAdjustments, WeakSignalContrast) {
  const auto pv = testing::effect_pvalues(22626, 23, 0.6);
  const auto r = compare_adjustments(pv, 0.01, 0.005);
  EXPECT_GE(r.raw_count, 50u);
  EXPECT_LE(r.bonferroni_count, 5u);
}

}  // namespace
}  // namespace pvalprior
