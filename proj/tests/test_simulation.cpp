#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "prs/error.hpp"
#include "prs/simulation.hpp"

namespace {

using prs::ReferenceDistribution;

TEST(Estimate, BinomialStandardError) {
  const auto e = prs::make_estimate(25, 100);
  EXPECT_DOUBLE_EQ(e.value, 0.25);
  EXPECT_NEAR(e.std_error, std::sqrt(0.25 * 0.75 / 100), 1e-15);
  EXPECT_EQ(prs::make_estimate(0, 10).std_error, 0.0);
}

TEST(Spec, Validation) {
  prs::SimulationSpec spec{0, 5, 100, 1, prs::NoShift{}, 0};
  EXPECT_THROW(spec.validate(), prs::ValidationError);
  spec.n = 10;
  spec.categories = 1;
  EXPECT_THROW(spec.validate(), prs::ValidationError);
  spec.categories = 5;
  spec.replications = 0;
  EXPECT_THROW(spec.validate(), prs::ValidationError);
}

TEST(Reconstruction, ThreadInvariant) {
  prs::SimulationSpec spec{50, 5, 20000, 3, prs::NoShift{}, 1};
  const auto a = prs::reconstruction_probability(spec, 0.25);
  spec.threads = 4;
  const auto b = prs::reconstruction_probability(spec, 0.25);
  EXPECT_EQ(a.estimate.hits, b.estimate.hits);
  // near the published no-shift estimate 0.0226
  EXPECT_NEAR(a.estimate.value, 0.0226, 5.0 * a.estimate.std_error + 0.002);
}

TEST(Reconstruction, TargetScenarioCarriesSolution) {
  prs::SimulationSpec spec{100, 5, 5000, 3, prs::TargetJ{0.1}, 0};
  const auto r = prs::reconstruction_probability(spec, 0.25);
  ASSERT_TRUE(r.solution.has_value());
  EXPECT_NEAR(r.solution->achieved_j, 0.1, 1e-8);
  EXPECT_GT(r.estimate.value, 0.0);
  spec.scenario = prs::Perturbed{0.01};
  EXPECT_THROW(prs::reconstruction_probability(spec, 0.25), prs::ValidationError);
}

TEST(Stability, RatiosNearOneInLargeSamples) {
  const auto s = prs::stability_ratios(1000, 5, 20000, 9, 0);
  EXPECT_NEAR(s.mean_q, 1.0, 4.0 * s.mean_q_se);
  EXPECT_NEAR(s.mean_t, 1.0, 0.02);
  EXPECT_NEAR(s.var_q, 1.0, 0.05);
  EXPECT_GT(s.mean_q_se, 0.0);
}

TEST(Stability, ThreadInvariant) {
  const auto a = prs::stability_ratios(30, 5, 5000, 2, 1);
  const auto b = prs::stability_ratios(30, 5, 5000, 2, 3);
  EXPECT_EQ(a.mean_t, b.mean_t);
  EXPECT_EQ(a.var_t, b.var_t);
  EXPECT_EQ(a.mean_q, b.mean_q);
  EXPECT_EQ(a.var_q_se, b.var_q_se);
}

TEST(Regions, ProbabilitiesSumToOne) {
  const auto p0 = ReferenceDistribution::uniform(5);
  const auto bounds = prs::decision_boundaries(p0, 50, {});
  const auto r = prs::region_probabilities(50, p0, p0.as_proportions(), bounds, 4000, 1, 1, 0);
  const double total = r.probability(prs::Region::kAcceptable) +
                       r.probability(prs::Region::kPartial) + r.probability(prs::Region::kFull);
  EXPECT_NEAR(total, 1.0, 1e-15);
  EXPECT_GT(r.std_error(prs::Region::kFull), 0.0);
  const auto shifted = prs::region_probabilities(
      50, p0, prs::ProportionVector({0.1, 0.15, 0.2, 0.25, 0.3}), bounds, 4000, 1, 2, 0);
  EXPECT_GT(r.probability(prs::Region::kAcceptable), shifted.probability(prs::Region::kAcceptable));
  EXPECT_LT(r.probability(prs::Region::kFull), shifted.probability(prs::Region::kFull));
}

TEST(Sweep, GridAndMonotoneTrend) {
  const auto s = prs::classification_sweep(500, 10, {}, 12, 4000, 5, 0);
  ASSERT_EQ(s.grid.size(), 12u);
  ASSERT_EQ(s.region_probs.size(), 12u);
  EXPECT_EQ(s.grid.front(), 0.0);
  EXPECT_NEAR(s.grid.back(), 8.0 * s.boundaries.delta, 1e-15);
  EXPECT_EQ(s.grid_upper, s.requested_upper);
  EXPECT_GT(s.region_probs.front().probability(prs::Region::kAcceptable),
            s.region_probs.back().probability(prs::Region::kAcceptable));
  EXPECT_GT(s.region_probs.back().probability(prs::Region::kFull), 0.99);
}

TEST(Sweep, ClampsInsideSimplex) {
  const auto s = prs::classification_sweep(50, 5, {}, 30, 1000, 5, 0);
  EXPECT_GT(s.requested_upper, 0.2);
  EXPECT_NEAR(s.grid_upper, (1.0 - 1e-9) / 5.0, 1e-15);
  EXPECT_DOUBLE_EQ(s.grid.back(), s.grid_upper);
}

TEST(Csv, ByteIdenticalAcrossThreadCounts) {
  std::ostringstream a, b;
  prs::write_sweep_csv(a, prs::classification_sweep(50, 5, {}, 6, 3000, 8, 1));
  prs::write_sweep_csv(b, prs::classification_sweep(50, 5, {}, 6, 3000, 8, 4));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_EQ(a.str().rfind("delta_v,p_r1,p_r2,p_r3,se_r1,se_r2,se_r3\n", 0), 0u);
}

TEST(Csv, MetadataLines) {
  std::ostringstream os;
  prs::write_csv_metadata(os, {{"seed", "1"}, {"K", "10"}});
  EXPECT_EQ(os.str(), "# seed=1\n# K=10\n");
}

}  // namespace
