#pragma once

#include <cmath>
#include <utility>

#include "prs/error.hpp"

namespace prs::detail {

struct RootOptions {
  double x_tolerance = 1e-15;  // relative to |x|, floored by abs_tolerance
  double abs_tolerance = 1e-300;
  double f_tolerance = 0.0;  // stop early once |f(x)| <= f_tolerance
  int max_iterations = 300;
};

struct Root {
  double x;
  double fx;
  int iterations;
};

/// Brent's method on a sign-changing bracket [lo, hi]. Each step tries inverse
/// quadratic / secant interpolation and falls back to bisection when that step
/// would leave the bracket or fails to shrink it fast enough.
template <class F>
Root brent_root(F&& f, double lo, double hi, const RootOptions& opt = {}) {
  double a = lo, b = hi;
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return {a, fa, 0};
  if (fb == 0.0) return {b, fb, 0};
  if ((fa > 0.0) == (fb > 0.0)) {
    throw ConvergenceError("root finder: bracket does not change sign");
  }
  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol = 2.0 * opt.x_tolerance * std::fabs(b) + 0.5 * opt.abs_tolerance;
    const double half = 0.5 * (c - b);
    if (std::fabs(half) <= tol || fb == 0.0 || std::fabs(fb) <= opt.f_tolerance) {
      return {b, fb, it};
    }
    if (std::fabs(e) >= tol && std::fabs(fa) > std::fabs(fb)) {
      double p, q, r;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * half * s;
        q = 1.0 - s;
      } else {
        q = fa / fc;
        r = fb / fc;
        p = s * (2.0 * half * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::fabs(p);
      const double bound1 = 3.0 * half * q - std::fabs(tol * q);
      const double bound2 = std::fabs(e * q);
      if (2.0 * p < (bound1 < bound2 ? bound1 : bound2)) {
        e = d;
        d = p / q;
      } else {
        d = half;
        e = d;
      }
    } else {
      d = half;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::fabs(d) > tol) ? d : (half > 0.0 ? tol : -tol);
    fb = f(b);
  }
  throw ConvergenceError("root finder: iteration budget exhausted");
}

}  // namespace prs::detail
