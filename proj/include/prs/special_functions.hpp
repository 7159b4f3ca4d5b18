#pragma once

// Central and non-central chi-square distribution functions and their
// inverses. Everything here is a pure function of its arguments.

namespace prs {

class DegreesOfFreedom {
 public:
  /// Throws DomainError unless value > 0.
  explicit DegreesOfFreedom(double value);
  double value() const noexcept { return value_; }

 private:
  double value_;
};

class NonCentrality {
 public:
  /// Throws DomainError unless value >= 0. Zero is the central case.
  explicit NonCentrality(double value);
  double value() const noexcept { return value_; }

 private:
  double value_;
};

/// Regularized lower incomplete gamma P(a, x). Power series below x = a + 1,
/// Lentz continued fraction for the complement above.
double regularized_lower_gamma(double a, double x);

double chi2_cdf(double x, DegreesOfFreedom df);

/// Inverse of chi2_cdf; p must lie in (0, 1).
double chi2_quantile(double p, DegreesOfFreedom df);

/// Poisson(ncp/2) mixture of central chi-square CDFs with df + 2k degrees of
/// freedom. Summation starts at the modal Poisson index and walks outward
/// until the accumulated Poisson weight exceeds 1 - 1e-14.
double ncx2_cdf(double x, DegreesOfFreedom df, NonCentrality ncp);

/// Inverse of ncx2_cdf by bracketed Brent iteration. Throws ConvergenceError
/// if the CDF residual is not within 1e-9 after the iteration budget.
double ncx2_quantile(double p, DegreesOfFreedom df, NonCentrality ncp);

}  // namespace prs
