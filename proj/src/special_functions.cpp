#include "prs/special_functions.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "prs/error.hpp"
#include "prs/roots.hpp"

namespace prs {
namespace {

constexpr double kEps = 1e-17;
constexpr double kTiny = 1e-300;
constexpr int kMaxGammaIterations = 100000;

// Remaining Poisson tail weight at which the mixture sum is truncated.
constexpr double kPoissonTail = 1e-14;

// log(x^a e^-x / Gamma(a)), the common prefactor of P and Q.
double log_gamma_prefactor(double a, double x) { return a * std::log(x) - x - std::lgamma(a); }

double lower_gamma_series(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int i = 0; i < kMaxGammaIterations; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEps) {
      return sum * std::exp(log_gamma_prefactor(a, x));
    }
  }
  throw ConvergenceError("regularized_lower_gamma: series did not converge");
}

// Modified Lentz evaluation of the continued fraction for Q(a, x).
double upper_gamma_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxGammaIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps * 10) {
      return std::exp(log_gamma_prefactor(a, x)) * h;
    }
  }
  throw ConvergenceError("regularized_lower_gamma: continued fraction did not converge");
}

void require_probability(double p, const char* what) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError(std::string(what) + ": probability must lie in (0, 1), got " +
                      std::to_string(p));
  }
}

}  // namespace

DegreesOfFreedom::DegreesOfFreedom(double value) : value_(value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError("degrees of freedom must be positive and finite");
  }
}

NonCentrality::NonCentrality(double value) : value_(value) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw DomainError("non-centrality must be non-negative and finite");
  }
}

double regularized_lower_gamma(double a, double x) {
  if (!(a > 0.0) || std::isnan(x) || x < 0.0) {
    throw DomainError("regularized_lower_gamma: requires a > 0 and x >= 0");
  }
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return lower_gamma_series(a, x);
  return 1.0 - upper_gamma_fraction(a, x);
}

double chi2_cdf(double x, DegreesOfFreedom df) {
  if (std::isnan(x)) throw DomainError("chi2_cdf: x is NaN");
  if (x <= 0.0) return 0.0;
  return regularized_lower_gamma(0.5 * df.value(), 0.5 * x);
}

double ncx2_cdf(double x, DegreesOfFreedom df, NonCentrality ncp) {
  if (std::isnan(x)) throw DomainError("ncx2_cdf: x is NaN");
  if (x <= 0.0) return 0.0;
  if (ncp.value() == 0.0) return chi2_cdf(x, df);
  if (std::isinf(x)) return 1.0;

  const double a = 0.5 * df.value();
  const double y = 0.5 * x;
  const double h = 0.5 * ncp.value();

  // Poisson weight w_k = e^-h h^k / k!, and g_k = y^(a+k) e^-y / Gamma(a+k+1)
  // links neighbouring gamma CDFs: P(a+k+1, y) = P(a+k, y) - g_k.
  const double mode = std::floor(h);
  const double w_mode = std::exp(-h + mode * std::log(h) - std::lgamma(mode + 1.0));
  const double p_mode = regularized_lower_gamma(a + mode, y);
  const double g_mode = std::exp((a + mode) * std::log(y) - y - std::lgamma(a + mode + 1.0));

  double sum = w_mode * p_mode;
  double weight_total = w_mode;

  // Walk down towards k = 0.
  {
    double w = w_mode;
    double p = p_mode;
    double g = g_mode;
    for (double k = mode - 1.0; k >= 0.0; k -= 1.0) {
      w *= (k + 1.0) / h;
      g *= (a + k + 1.0) / y;
      p += g;
      sum += w * p;
      weight_total += w;
      // Weights fall geometrically with ratio k / h below the mode.
      const double ratio = k / h;
      if (ratio < 1.0 && w * ratio / (1.0 - ratio) < kPoissonTail * 1e-3) break;
    }
  }

  // Walk up until the remaining Poisson mass is negligible.
  {
    double w = w_mode;
    double p = p_mode;
    double g = g_mode;
    const double k_limit = mode + 100.0 + 40.0 * std::sqrt(h + 1.0);
    for (double k = mode + 1.0; k <= k_limit; k += 1.0) {
      w *= h / k;
      p -= g;
      if (p < 0.0) p = 0.0;
      g *= y / (a + k);
      sum += w * p;
      weight_total += w;
      if (1.0 - weight_total < kPoissonTail) break;
      const double ratio = h / (k + 1.0);
      if (ratio < 1.0 && w * ratio / (1.0 - ratio) < kPoissonTail) break;
    }
  }
  if (sum > 1.0) sum = 1.0;
  return sum;
}

double ncx2_quantile(double p, DegreesOfFreedom df, NonCentrality ncp) {
  require_probability(p, "ncx2_quantile");
  const double k = df.value();
  const double lambda = ncp.value();
  auto residual = [&](double x) { return ncx2_cdf(x, df, ncp) - p; };

  double lo = 0.0;
  double hi = k + lambda + 20.0 * std::sqrt(2.0 * k + 4.0 * lambda) + 50.0;
  for (int i = 0; residual(hi) < 0.0; ++i) {
    if (i == 64) throw ConvergenceError("ncx2_quantile: could not bracket the quantile");
    lo = hi;
    hi *= 2.0;
  }

  detail::RootOptions opt;
  opt.x_tolerance = 4e-16;
  opt.f_tolerance = 1e-15;
  const auto root = detail::brent_root(residual, lo, hi, opt);
  if (!(std::fabs(root.fx) <= 1e-9)) {
    throw ConvergenceError("ncx2_quantile: CDF residual " + std::to_string(root.fx) +
                           " exceeds tolerance");
  }
  return root.x;
}

double chi2_quantile(double p, DegreesOfFreedom df) {
  require_probability(p, "chi2_quantile");
  return ncx2_quantile(p, df, NonCentrality{0.0});
}

}  // namespace prs
