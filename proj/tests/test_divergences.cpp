#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "monitoring_cases.hpp"
#include "prs/divergences.hpp"
#include "prs/error.hpp"

namespace {

using prs::CategoryCounts;
using prs::ProportionVector;
using prs::ReferenceDistribution;

TEST(CategoryCounts, Validation) {
  EXPECT_THROW(CategoryCounts({5}), prs::ValidationError);
  EXPECT_THROW(CategoryCounts({5, -1, 3}), prs::ValidationError);
  EXPECT_THROW(CategoryCounts({0, 0, 0}), prs::ValidationError);
  const CategoryCounts c({6, 9, 10, 11, 14});
  EXPECT_EQ(c.total(), 50);
  EXPECT_EQ(c.size(), 5u);
  EXPECT_EQ(c[4], 14);
}

TEST(ProportionVector, Validation) {
  EXPECT_NO_THROW(ProportionVector({0.0, 0.5, 0.5}));
  EXPECT_THROW(ProportionVector({0.5, 0.6}), prs::ValidationError);
  EXPECT_THROW(ProportionVector({-0.1, 1.1}), prs::ValidationError);
  EXPECT_THROW(ProportionVector({0.3, 0.3, 0.3}), prs::ValidationError);
}

TEST(ReferenceDistribution, Validation) {
  EXPECT_THROW(ReferenceDistribution({1.0}), prs::ValidationError);
  EXPECT_THROW(ReferenceDistribution({0.0, 1.0}), prs::ValidationError);
  EXPECT_THROW(ReferenceDistribution({0.2, 0.2, 0.2, 0.2, 0.19}), prs::ValidationError);
  const std::vector<std::int64_t> zero_count{10, 0, 10};
  EXPECT_THROW(ReferenceDistribution::from_counts(zero_count), prs::ValidationError);
  const std::vector<std::int64_t> tens{10, 10, 10, 10, 10};
  EXPECT_EQ(ReferenceDistribution::from_counts(tens), ReferenceDistribution::uniform(5));
  const ReferenceDistribution r({0.1, 0.2, 0.3, 0.4});
  EXPECT_DOUBLE_EQ(r.min(), 0.1);
  EXPECT_DOUBLE_EQ(r.max(), 0.4);
}

TEST(Proportions, DivideByTotal) {
  const auto p = prs::proportions(CategoryCounts({6, 9, 10, 11, 14}));
  EXPECT_DOUBLE_EQ(p[0], 0.12);
  EXPECT_DOUBLE_EQ(p[4], 0.28);
}

TEST(Divergences, PublishedSnapshotValues) {
  for (const auto& table : prs::testing::monitoring_tables()) {
    const auto p0 = ReferenceDistribution::uniform(table.categories);
    for (const auto& row : table.rows) {
      const CategoryCounts counts(row.counts);
      const auto phat = prs::proportions(counts);
      EXPECT_NEAR(prs::psi(phat, p0), row.psi, 1e-3) << table.name << " " << row.label;
      EXPECT_NEAR(prs::prs(phat, p0), row.prs, 1e-3) << table.name << " " << row.label;
    }
  }
}

TEST(Divergences, PublishedRowWithInconsistentTotal) {
  // The last n=10000 row sums to 10003; its PRS is 0.0046 rather than the printed 0.0045.
  const auto& row = prs::testing::monitoring_tables().back().rows.back();
  const CategoryCounts counts(row.counts);
  EXPECT_EQ(counts.total(), 10003);
  EXPECT_NEAR(prs::prs(prs::proportions(counts), ReferenceDistribution::uniform(20)), 0.0046, 5e-5);
}

TEST(Divergences, HandComputedExample) {
  // phat = (0.12, 0.18, 0.2, 0.22, 0.28) against uniform(5).
  const auto phat = prs::proportions(CategoryCounts({6, 9, 10, 11, 14}));
  const auto p0 = ReferenceDistribution::uniform(5);
  const double d[] = {-0.08, -0.02, 0.0, 0.02, 0.08};
  double prs_value = 0.0, psi_value = 0.0;
  for (int j = 0; j < 5; ++j) {
    prs_value += d[j] * d[j] / 0.2;
    psi_value += d[j] * std::log((0.2 + d[j]) / 0.2);
  }
  EXPECT_NEAR(prs::prs(phat, p0), prs_value, 1e-15);
  EXPECT_NEAR(prs::psi(phat, p0), psi_value, 1e-15);
  EXPECT_NEAR(prs::chi2_divergence(phat, p0), prs_value, 1e-15);
  // Cumulative gaps: -0.08, -0.10, -0.10, -0.08.
  EXPECT_NEAR(prs::ks_statistic(phat, p0), 0.10, 1e-15);
}

TEST(Divergences, ZeroProportionsDropOutOfPsi) {
  const ProportionVector phat({0.0, 0.5, 0.5});
  const ReferenceDistribution p0({0.2, 0.4, 0.4});
  const double expected = 2.0 * 0.1 * std::log(0.5 / 0.4);
  EXPECT_NEAR(prs::psi(phat, p0), expected, 1e-15);
  EXPECT_THROW(prs::j_divergence(phat, p0), prs::DomainError);
}

TEST(Divergences, IdenticalDistributionsGiveZero) {
  const ReferenceDistribution p0({0.1, 0.2, 0.3, 0.4});
  const auto p = p0.as_proportions();
  EXPECT_EQ(prs::psi(p, p0), 0.0);
  EXPECT_EQ(prs::prs(p, p0), 0.0);
  EXPECT_EQ(prs::j_divergence(p, p0), 0.0);
  EXPECT_NEAR(prs::ks_statistic(p, p0), 0.0, 1e-15);
}

TEST(Divergences, JEqualsPsiForPopulations) {
  const ProportionVector p({0.15, 0.25, 0.25, 0.35});
  const ReferenceDistribution p0({0.25, 0.25, 0.25, 0.25});
  EXPECT_DOUBLE_EQ(prs::j_divergence(p, p0), prs::psi(p, p0));
  EXPECT_GT(prs::j_divergence(p, p0), 0.0);
}

TEST(Divergences, DimensionMismatch) {
  const ProportionVector p({0.5, 0.5});
  const auto p0 = ReferenceDistribution::uniform(3);
  EXPECT_THROW(prs::psi(p, p0), prs::DimensionMismatch);
  EXPECT_THROW(prs::prs(p, p0), prs::DimensionMismatch);
  EXPECT_THROW(prs::ks_statistic(p, p0), prs::DimensionMismatch);
}

TEST(Divergences, CountFormsAreBitIdentical) {
  std::mt19937_64 gen(7);
  std::uniform_int_distribution<int> cnt(0, 40);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t b = 2 + trial % 12;
    std::vector<std::int64_t> counts(b);
    for (auto& c : counts) c = cnt(gen);
    counts[0] += 1;
    std::vector<double> w(b);
    for (auto& x : w) x = 0.05 + std::uniform_real_distribution<double>(0, 1)(gen);
    const double s = std::accumulate(w.begin(), w.end(), 0.0);
    for (auto& x : w) x /= s;
    const ReferenceDistribution p0(w);
    const CategoryCounts cc(counts);
    const auto phat = prs::proportions(cc);
    EXPECT_EQ(prs::detail::psi_of_counts(counts, cc.total(), p0.probs()), prs::psi(phat, p0));
    EXPECT_EQ(prs::detail::prs_of_counts(counts, cc.total(), p0.probs()), prs::prs(phat, p0));
    EXPECT_EQ(prs::detail::ks_of_counts(counts, cc.total(), p0.probs()),
              prs::ks_statistic(phat, p0));
  }
}

}  // namespace

namespace {

TEST(Divergences, ExactMeanOfScaledPrsByEnumeration) {
  // E[n PRS] = B - 1 for every p0; check all 21 outcomes of Multinomial(5, p0), B = 3.
  for (const std::vector<double>& w :
       {std::vector<double>{1.0 / 3, 1.0 / 3, 1.0 / 3}, std::vector<double>{0.1, 0.3, 0.6}}) {
    const ReferenceDistribution p0(w);
    constexpr int kN = 5;
    double expectation = 0.0;
    int outcomes = 0;
    for (int a = 0; a <= kN; ++a) {
      for (int b = 0; a + b <= kN; ++b) {
        const int c = kN - a - b;
        const double coef =
            std::tgamma(kN + 1) / (std::tgamma(a + 1) * std::tgamma(b + 1) * std::tgamma(c + 1));
        const double mass = coef * std::pow(w[0], a) * std::pow(w[1], b) * std::pow(w[2], c);
        expectation += mass * kN * prs::prs(prs::proportions(CategoryCounts({a, b, c})), p0);
        ++outcomes;
      }
    }
    EXPECT_EQ(outcomes, 21);
    EXPECT_NEAR(expectation, 2.0, 1e-12);
  }
}

}  // namespace
