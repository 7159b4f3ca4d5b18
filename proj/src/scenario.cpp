#include "prs/scenario.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "prs/error.hpp"
#include "prs/roots.hpp"

namespace prs {
namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();
constexpr int kMaxDescentIterations = 20000;

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Projects onto the sum-zero subspace and rescales to unit length.
bool to_unit_tangent(Vec& u) {
  const double mean = std::accumulate(u.begin(), u.end(), 0.0) / static_cast<double>(u.size());
  for (double& v : u) v -= mean;
  const double norm = std::sqrt(dot(u, u));
  if (!(norm > 0.0)) return false;
  for (double& v : u) v /= norm;
  return true;
}

double j_along(std::span<const double> p0, const Vec& u, double s) {
  double sum = 0.0;
  for (std::size_t j = 0; j < p0.size(); ++j) {
    const double p = p0[j] + s * u[j];
    sum += (p - p0[j]) * (std::log(p) - std::log(p0[j]));
  }
  return sum;
}

// Radius at which J(p0 + s u) = target. J is convex in s with its minimum at
// s = 0, so the root is unique. Returns +inf if the target is only reached
// at the simplex boundary.
double radius_for(std::span<const double> p0, const Vec& u, double target) {
  double s_max = kInfinity;
  for (std::size_t j = 0; j < p0.size(); ++j) {
    if (u[j] < 0.0) s_max = std::min(s_max, p0[j] / -u[j]);
  }
  const double hi = s_max * (1.0 - 1e-12);
  auto f = [&](double s) { return j_along(p0, u, s) - target; };
  if (!(f(hi) > 0.0)) return kInfinity;
  detail::RootOptions opt;
  opt.x_tolerance = 1e-16;
  opt.f_tolerance = 1e-15;
  return detail::brent_root(f, 0.0, hi, opt).x;
}

struct Descent {
  Vec u;
  double radius = kInfinity;
  int iterations = 0;
};

// Gradient of s(u) by implicit differentiation of J(p0 + s u) = target,
// projected onto the tangent space of the unit sphere in the sum-zero plane.
Vec radius_gradient(std::span<const double> p0, const Vec& u, double s) {
  Vec g(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double p = p0[j] + s * u[j];
    g[j] = std::log(p / p0[j]) + 1.0 - p0[j] / p;
  }
  const double slope = dot(g, u);
  for (double& v : g) v *= -s / slope;
  const double mean = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
  for (double& v : g) v -= mean;
  const double radial = dot(g, u);
  for (std::size_t j = 0; j < u.size(); ++j) g[j] -= radial * u[j];
  return g;
}

Descent descend(std::span<const double> p0, Vec u, double target) {
  Descent d;
  d.u = std::move(u);
  d.radius = radius_for(p0, d.u, target);
  if (!std::isfinite(d.radius)) return d;
  double step = 1.0;
  for (; d.iterations < kMaxDescentIterations; ++d.iterations) {
    const Vec grad = radius_gradient(p0, d.u, d.radius);
    const double gnorm2 = dot(grad, grad);
    if (gnorm2 < 1e-26) break;
    bool improved = false;
    while (step > 1e-14) {
      Vec trial = d.u;
      for (std::size_t j = 0; j < trial.size(); ++j) trial[j] -= step * grad[j];
      if (to_unit_tangent(trial)) {
        const double r = radius_for(p0, trial, target);
        // Armijo sufficient-decrease test.
        if (r < d.radius - 1e-4 * step * gnorm2) {
          d.u = std::move(trial);
          d.radius = r;
          improved = true;
          step = std::min(step * 2.0, 16.0);
          break;
        }
      }
      step *= 0.5;
    }
    if (!improved) break;
  }
  return d;
}

}  // namespace

ProportionVector perturbed_pv(const PerturbationSpec& spec) {
  const std::size_t B = spec.categories;
  if (B < 2) throw DomainError("perturbed_pv: at least two categories required");
  const double base = 1.0 / static_cast<double>(B);
  if (!(spec.delta_v >= 0.0) || !(base - spec.delta_v > 0.0)) {
    throw DomainError("perturbed_pv: delta_v must lie in [0, 1/B), got " +
                      std::to_string(spec.delta_v));
  }
  Vec p(B, base);
  const std::size_t lower = B / 2;        // 1-based j <= floor(B/2)
  const std::size_t upper = (B + 1) / 2;  // 1-based j >= ceil(B/2) + 1
  for (std::size_t j = 0; j < lower; ++j) p[j] = base - spec.delta_v;
  for (std::size_t j = upper; j < B; ++j) p[j] = base + spec.delta_v;
  return ProportionVector{std::move(p)};
}

TargetJSolution solve_p_for_target_j(const ReferenceDistribution& p0, double target_j) {
  if (!(target_j >= 0.0) || !std::isfinite(target_j)) {
    throw DomainError("solve_p_for_target_j: target must be finite and non-negative");
  }
  const std::size_t B = p0.size();
  if (target_j == 0.0) {
    return TargetJSolution{p0.as_proportions(), 0.0, 0.0, 0.0, 0, 0};
  }

  Descent best;
  int starts = 0;
  for (std::size_t j = 0; j < B; ++j) {
    for (double sign : {-1.0, 1.0}) {
      Vec u(B, 0.0);
      u[j] = sign;
      to_unit_tangent(u);
      ++starts;
      Descent d = descend(p0.probs(), std::move(u), target_j);
      if (d.radius < best.radius) best = std::move(d);
    }
  }
  if (!std::isfinite(best.radius)) {
    throw DomainError("solve_p_for_target_j: target J = " + std::to_string(target_j) +
                      " is not attainable inside the simplex");
  }

  Vec p(B);
  for (std::size_t j = 0; j < B; ++j) p[j] = p0[j] + best.radius * best.u[j];
  if (*std::min_element(p.begin(), p.end()) <= 1e-12) {
    throw DomainError("solve_p_for_target_j: solution reaches the simplex boundary");
  }
  ProportionVector pv{std::move(p)};
  const double achieved = j_divergence(pv, p0);
  double dist2 = 0.0;
  for (std::size_t j = 0; j < B; ++j) dist2 += (pv[j] - p0[j]) * (pv[j] - p0[j]);
  const double residual = std::fabs(achieved - target_j);
  if (!(residual <= 1e-8)) {
    throw ConvergenceError("solve_p_for_target_j: constraint residual " + std::to_string(residual) +
                           " exceeds 1e-8");
  }
  return TargetJSolution{std::move(pv),    achieved, residual,
                         std::sqrt(dist2), starts,   best.iterations};
}

std::vector<ProportionVector> enumerate_extreme_points(const ReferenceDistribution& p0,
                                                       double delta) {
  const std::size_t B = p0.size();
  if (B > kMaxEnumerationCategories) {
    throw DomainError("enumerate_extreme_points: at most " +
                      std::to_string(kMaxEnumerationCategories) + " categories supported");
  }
  if (!(delta > 0.0) || delta > p0.min()) {
    throw DomainError("enumerate_extreme_points: delta must lie in (0, min p0]");
  }
  std::vector<ProportionVector> points;
  const std::size_t fixed_choices = (B % 2 == 1) ? B : 1;
  const std::size_t perturbed = (B % 2 == 1) ? B - 1 : B;
  for (std::size_t fixed = 0; fixed < fixed_choices; ++fixed) {
    // Bit i of mask assigns +delta to the i-th perturbed coordinate.
    for (std::uint32_t mask = 0; mask < (1u << perturbed); ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) != perturbed / 2) continue;
      Vec p(p0.probs().begin(), p0.probs().end());
      std::size_t slot = 0;
      for (std::size_t j = 0; j < B; ++j) {
        if (B % 2 == 1 && j == fixed) continue;
        p[j] += ((mask >> slot) & 1u) ? delta : -delta;
        ++slot;
      }
      points.emplace_back(std::move(p));
    }
  }
  return points;
}

}  // namespace prs
