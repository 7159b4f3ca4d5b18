#pragma once

#include <cstddef>
#include <vector>

#include "prs/divergences.hpp"

namespace prs {

struct PerturbationSpec {
  std::size_t categories = 0;
  double delta_v = 0.0;
};

/// Equi-probable population shifted by -delta_v on the lower half of the
/// categories and +delta_v on the upper half; for odd B the centre category
/// keeps 1/B. Throws DomainError if an entry would be non-positive.
ProportionVector perturbed_pv(const PerturbationSpec& spec);

struct TargetJSolution {
  ProportionVector p;
  double achieved_j = 0.0;
  double residual = 0.0;  // |achieved_j - target|
  double distance = 0.0;  // Euclidean distance to p0
  int starts = 0;         // descent starts tried
  int iterations = 0;     // descent iterations of the winning start
};

/// Closest population to p0 in Euclidean distance with J(p, p0) = target_j.
///
/// For a unit direction u in the sum-zero subspace, the radius s(u) at which
/// J(p0 + s u) reaches the target is found by a one-dimensional root solve;
/// s(u) is then minimized over the sphere by projected gradient descent from
/// the 2B coordinate directions +-(e_j - 1/B). Throws ConvergenceError if the
/// constraint residual exceeds 1e-8 and DomainError if the solution touches
/// the simplex boundary.
TargetJSolution solve_p_for_target_j(const ReferenceDistribution& p0, double target_j);

/// Extreme points of the delta-ball around p0 intersected with the simplex:
/// coordinates in {p0_j - delta, p0_j, p0_j + delta}, equal numbers of +delta
/// and -delta, one unperturbed coordinate for odd B and none for even B.
/// Requires B <= 12 and delta <= min(p0).
std::vector<ProportionVector> enumerate_extreme_points(const ReferenceDistribution& p0,
                                                       double delta);

inline constexpr std::size_t kMaxEnumerationCategories = 12;

}  // namespace prs
