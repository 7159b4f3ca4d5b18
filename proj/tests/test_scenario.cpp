#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "prs/divergences.hpp"
#include "prs/error.hpp"
#include "prs/resemblance.hpp"
#include "prs/scenario.hpp"

namespace {

using prs::ReferenceDistribution;

double sum_of(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

TEST(Perturbation, EvenCategories) {
  const auto p = prs::perturbed_pv({4, 0.05});
  EXPECT_NEAR(p[0], 0.20, 1e-15);
  EXPECT_NEAR(p[1], 0.20, 1e-15);
  EXPECT_NEAR(p[2], 0.30, 1e-15);
  EXPECT_NEAR(p[3], 0.30, 1e-15);
}

TEST(Perturbation, OddCategoriesKeepTheCentre) {
  const auto p = prs::perturbed_pv({5, 0.03});
  EXPECT_NEAR(p[0], 0.17, 1e-15);
  EXPECT_NEAR(p[1], 0.17, 1e-15);
  EXPECT_NEAR(p[2], 0.20, 1e-15);
  EXPECT_NEAR(p[3], 0.23, 1e-15);
  EXPECT_NEAR(p[4], 0.23, 1e-15);
  EXPECT_NEAR(sum_of(p.probs()), 1.0, 1e-15);
}

TEST(Perturbation, ChiSquareDivergenceMatchesLeastFavourableForm) {
  // For uniform p0 the scheme is an extreme point, so n * chi2 equals lambda_sup.
  for (std::size_t b : {4u, 5u, 10u, 11u}) {
    const double d = 0.3 / static_cast<double>(b);
    const auto p = prs::perturbed_pv({b, d});
    const auto p0 = ReferenceDistribution::uniform(b);
    const double moved = 2.0 * static_cast<double>(b / 2);
    EXPECT_NEAR(prs::chi2_divergence(p, p0), moved * d * d * static_cast<double>(b), 1e-13);
  }
}

TEST(Perturbation, RejectsLeavingTheSimplex) {
  EXPECT_THROW(prs::perturbed_pv({5, 0.2}), prs::DomainError);
  EXPECT_THROW(prs::perturbed_pv({5, -0.01}), prs::DomainError);
  EXPECT_NO_THROW(prs::perturbed_pv({5, 0.0}));
}

TEST(TargetJ, ZeroTargetReturnsReference) {
  const auto p0 = ReferenceDistribution::uniform(5);
  const auto sol = prs::solve_p_for_target_j(p0, 0.0);
  EXPECT_NEAR(sol.distance, 0.0, 1e-15);
  EXPECT_EQ(sol.achieved_j, 0.0);
}

TEST(TargetJ, ConstraintAndSimplex) {
  for (std::size_t b : {3u, 5u, 10u}) {
    for (double target : {0.01, 0.1, 0.3}) {
      const auto p0 = ReferenceDistribution::uniform(b);
      const auto sol = prs::solve_p_for_target_j(p0, target);
      EXPECT_NEAR(prs::j_divergence(sol.p, p0), target, 1e-8);
      EXPECT_LE(sol.residual, 1e-8);
      EXPECT_NEAR(sum_of(sol.p.probs()), 1.0, 1e-12);
      for (double v : sol.p.probs()) EXPECT_GT(v, 0.0);
    }
  }
}

double radius_along(const ReferenceDistribution& p0, const std::vector<double>& u, double target) {
  // Smallest s with J(p0 + s u) = target by bisection, or +inf if p leaves the simplex first.
  double s_max = 1e300;
  for (std::size_t j = 0; j < u.size(); ++j) {
    if (u[j] < 0) s_max = std::min(s_max, -p0[j] / u[j]);
  }
  s_max *= (1.0 - 1e-12);
  auto j_at = [&](double s) {
    double j = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
      const double p = p0[k] + s * u[k];
      j += (p - p0[k]) * std::log(p / p0[k]);
    }
    return j;
  };
  if (j_at(s_max) < target) return INFINITY;
  double lo = 0.0, hi = s_max;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (j_at(mid) < target ? lo : hi) = mid;
  }
  return hi;
}

TEST(TargetJ, NoRandomDirectionIsCloser) {
  std::mt19937_64 gen(31337);
  std::normal_distribution<double> z(0.0, 1.0);
  for (std::size_t b : {5u, 10u}) {
    const auto p0 = ReferenceDistribution::uniform(b);
    const auto sol = prs::solve_p_for_target_j(p0, 0.1);
    for (int trial = 0; trial < 3000; ++trial) {
      std::vector<double> u(b);
      for (auto& x : u) x = z(gen);
      const double mean = sum_of(u) / static_cast<double>(b);
      double norm = 0.0;
      for (auto& x : u) norm += (x -= mean) * x;
      for (auto& x : u) x /= std::sqrt(norm);
      EXPECT_GE(radius_along(p0, u, 0.1), sol.distance - 1e-9) << "B=" << b;
    }
  }
}

TEST(TargetJ, NonUniformReference) {
  const ReferenceDistribution p0({0.1, 0.2, 0.3, 0.4});
  const auto sol = prs::solve_p_for_target_j(p0, 0.05);
  EXPECT_NEAR(prs::j_divergence(sol.p, p0), 0.05, 1e-8);
  double d2 = 0.0;
  for (std::size_t j = 0; j < 4; ++j) d2 += (sol.p[j] - p0[j]) * (sol.p[j] - p0[j]);
  EXPECT_NEAR(std::sqrt(d2), sol.distance, 1e-12);
}

TEST(TargetJ, RejectsNegativeTarget) {
  EXPECT_THROW(prs::solve_p_for_target_j(ReferenceDistribution::uniform(5), -0.1),
               prs::DomainError);
}

TEST(ExtremePoints, CountsAndMembership) {
  const auto p0 = ReferenceDistribution::uniform(4);
  const auto even = prs::enumerate_extreme_points(p0, 0.1);
  EXPECT_EQ(even.size(), 6u);  // choose which 2 of 4 move up
  const auto odd = prs::enumerate_extreme_points(ReferenceDistribution::uniform(5), 0.1);
  EXPECT_EQ(odd.size(), 30u);  // centre choice times 4 choose 2
  for (const auto& p : odd) {
    EXPECT_NEAR(sum_of(p.probs()), 1.0, 1e-14);
    EXPECT_TRUE(prs::is_delta_resemblant(p, ReferenceDistribution::uniform(5), 0.1));
  }
  EXPECT_EQ(prs::enumerate_extreme_points(ReferenceDistribution::uniform(2), 0.5).size(), 2u);
}

TEST(ExtremePoints, Limits) {
  EXPECT_THROW(prs::enumerate_extreme_points(ReferenceDistribution::uniform(13), 0.01),
               prs::DomainError);
  EXPECT_THROW(prs::enumerate_extreme_points(ReferenceDistribution::uniform(4), 0.3),
               prs::DomainError);
}

}  // namespace
