#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "prs/error.hpp"
#include "prs/special_functions.hpp"

namespace {

using prs::DegreesOfFreedom;
using prs::NonCentrality;

double boost_ncx2_cdf(double x, double df, double ncp) {
  if (ncp == 0.0) return boost::math::cdf(boost::math::chi_squared_distribution<double>(df), x);
  return boost::math::cdf(boost::math::non_central_chi_squared_distribution<double>(df, ncp), x);
}

TEST(StrongTypes, RejectInvalidParameters) {
  EXPECT_THROW(DegreesOfFreedom(0.0), prs::DomainError);
  EXPECT_THROW(DegreesOfFreedom(-1.0), prs::DomainError);
  EXPECT_THROW(DegreesOfFreedom(std::nan("")), prs::DomainError);
  EXPECT_THROW(NonCentrality(-1e-9), prs::DomainError);
  EXPECT_NO_THROW(NonCentrality(0.0));
  EXPECT_DOUBLE_EQ(DegreesOfFreedom(4.0).value(), 4.0);
}

TEST(IncompleteGamma, ClosedForms) {
  for (double x : {0.0, 0.01, 0.5, 1.0, 3.0, 10.0, 40.0}) {
    EXPECT_NEAR(prs::regularized_lower_gamma(1.0, x), -std::expm1(-x), 1e-15);
    EXPECT_NEAR(prs::regularized_lower_gamma(0.5, x), std::erf(std::sqrt(x)), 1e-14);
    // P(2, x) = 1 - e^-x (1 + x)
    EXPECT_NEAR(prs::regularized_lower_gamma(2.0, x), 1.0 - std::exp(-x) * (1.0 + x), 1e-14);
  }
}

TEST(IncompleteGamma, MatchesIndependentImplementation) {
  for (double a : {0.1, 0.5, 1.5, 2.0, 4.5, 10.0, 37.0, 150.0}) {
    for (double ratio : {0.01, 0.3, 0.9, 1.0, 1.1, 2.0, 5.0}) {
      const double x = a * ratio;
      EXPECT_NEAR(prs::regularized_lower_gamma(a, x), boost::math::gamma_p(a, x), 1e-13)
          << "a=" << a << " x=" << x;
    }
  }
}

TEST(IncompleteGamma, RejectsBadArguments) {
  EXPECT_THROW(prs::regularized_lower_gamma(0.0, 1.0), prs::DomainError);
  EXPECT_THROW(prs::regularized_lower_gamma(1.0, -1.0), prs::DomainError);
}

TEST(CentralChiSquare, TextbookQuantiles) {
  EXPECT_NEAR(prs::chi2_cdf(3.841458820694124, DegreesOfFreedom(1)), 0.95, 1e-13);
  EXPECT_NEAR(prs::chi2_quantile(0.95, DegreesOfFreedom(4)), 9.487729036781154, 1e-9);
  EXPECT_NEAR(prs::chi2_quantile(0.99, DegreesOfFreedom(4)), 13.276704135987622, 1e-9);
  EXPECT_NEAR(prs::chi2_quantile(0.90, DegreesOfFreedom(9)), 14.683656573259837, 1e-9);
  EXPECT_EQ(prs::chi2_cdf(0.0, DegreesOfFreedom(3)), 0.0);
  EXPECT_EQ(prs::chi2_cdf(-1.0, DegreesOfFreedom(3)), 0.0);
}

TEST(NoncentralChiSquare, MatchesIndependentImplementation) {
  for (double df : {1.0, 3.0, 4.0, 9.0, 19.0}) {
    for (double ncp : {0.1, 1.568, 3.2, 12.8, 60.0, 400.0}) {
      for (double q : {0.02, 0.25, 0.5, 0.75, 0.98}) {
        const double x = boost::math::quantile(
            boost::math::non_central_chi_squared_distribution<double>(df, ncp), q);
        EXPECT_NEAR(prs::ncx2_cdf(x, DegreesOfFreedom(df), NonCentrality(ncp)),
                    boost_ncx2_cdf(x, df, ncp), 1e-10)
            << "df=" << df << " ncp=" << ncp << " x=" << x;
      }
    }
  }
}

TEST(NoncentralChiSquare, ReducesToCentralAtZeroNoncentrality) {
  for (double df : {1.0, 4.0, 9.0, 19.0}) {
    for (double x : {0.05, 1.0, 4.0, 10.0, 30.0}) {
      EXPECT_NEAR(prs::ncx2_cdf(x, DegreesOfFreedom(df), NonCentrality(0.0)),
                  prs::chi2_cdf(x, DegreesOfFreedom(df)), 1e-12);
      EXPECT_NEAR(prs::ncx2_cdf(x, DegreesOfFreedom(df), NonCentrality(1e-14)),
                  prs::chi2_cdf(x, DegreesOfFreedom(df)), 1e-12);
    }
  }
}

TEST(NoncentralChiSquare, StochasticOrdering) {
  // The CDF falls as either the non-centrality or the degrees of freedom grow.
  for (double x : {0.5, 2.0, 5.0, 12.0, 40.0}) {
    for (double df : {1.0, 4.0, 9.0}) {
      double previous = 2.0;
      for (double ncp : {0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0}) {
        const double f = prs::ncx2_cdf(x, DegreesOfFreedom(df), NonCentrality(ncp));
        EXPECT_LE(f, previous + 1e-15) << "x=" << x << " df=" << df << " ncp=" << ncp;
        previous = f;
      }
    }
    for (double ncp : {0.0, 3.2}) {
      double previous = 2.0;
      for (double df : {1.0, 2.0, 4.0, 9.0, 19.0}) {
        const double f = prs::ncx2_cdf(x, DegreesOfFreedom(df), NonCentrality(ncp));
        EXPECT_LE(f, previous + 1e-15);
        previous = f;
      }
    }
  }
}

TEST(NoncentralChiSquare, QuantileRoundTrips) {
  for (double df : {1.0, 4.0, 9.0, 19.0}) {
    for (double ncp : {0.0, 0.4, 1.568, 12.8, 150.0}) {
      for (double p : {1e-6, 0.01, 0.05, 0.1, 0.5, 0.9, 0.95, 0.999999}) {
        const double x = prs::ncx2_quantile(p, DegreesOfFreedom(df), NonCentrality(ncp));
        EXPECT_NEAR(prs::ncx2_cdf(x, DegreesOfFreedom(df), NonCentrality(ncp)), p, 1e-8)
            << "df=" << df << " ncp=" << ncp << " p=" << p;
      }
    }
  }
}

TEST(NoncentralChiSquare, QuantileMatchesIndependentImplementation) {
  for (double ncp : {1.568, 6.272, 25.0}) {
    const boost::math::non_central_chi_squared_distribution<double> dist(4.0, ncp);
    for (double p : {0.05, 0.5, 0.9}) {
      const double expected = boost::math::quantile(dist, p);
      EXPECT_NEAR(prs::ncx2_quantile(p, DegreesOfFreedom(4), NonCentrality(ncp)), expected,
                  1e-8 * (1.0 + expected));
    }
  }
}

TEST(NoncentralChiSquare, QuantileRejectsDegenerateProbabilities) {
  EXPECT_THROW(prs::ncx2_quantile(0.0, DegreesOfFreedom(4), NonCentrality(1.0)), prs::DomainError);
  EXPECT_THROW(prs::ncx2_quantile(1.0, DegreesOfFreedom(4), NonCentrality(1.0)), prs::DomainError);
  EXPECT_THROW(prs::chi2_quantile(-0.1, DegreesOfFreedom(4)), prs::DomainError);
}

TEST(NoncentralChiSquare, MonteCarloAgreement) {
  // Sum of squares of four normals with means giving the requested ncp.
  constexpr int kSamples = 200000;
  for (double ncp : {1.568, 3.2, 12.8}) {
    std::mt19937_64 gen(12345);
    std::normal_distribution<double> z(0.0, 1.0);
    const double mu = std::sqrt(ncp / 4.0);
    std::vector<double> draws(kSamples);
    for (double& d : draws) {
      d = 0.0;
      for (int k = 0; k < 4; ++k) {
        const double v = z(gen) + mu;
        d += v * v;
      }
    }
    for (double q : {0.1, 0.5, 0.9}) {
      const double x = prs::ncx2_quantile(q, DegreesOfFreedom(4), NonCentrality(ncp));
      const double hits = static_cast<double>(
          std::count_if(draws.begin(), draws.end(), [x](double d) { return d <= x; }));
      const double se = std::sqrt(q * (1.0 - q) / kSamples);
      EXPECT_NEAR(hits / kSamples, q, 3.0 * se) << "ncp=" << ncp << " q=" << q;
    }
  }
}

}  // namespace
