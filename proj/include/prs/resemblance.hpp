#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "prs/divergences.hpp"

namespace prs {

/// Practitioner parameters of the three-region decision framework.
struct ResemblanceConfig {
  double c = 0.7;        // scale of delta relative to the proportion standard error
  double M = 2.0;        // multiplier placing the full-discrepancy boundary at M * delta
  double alpha1 = 0.1;   // sensitivity to reconstruction (controls tau2)
  double alpha2 = 0.05;  // sensitivity to continued use (controls tau1)
  std::optional<double> delta_override;

  /// Throws ConfigurationError when c <= 0, M <= 1, or an alpha is outside (0, 1).
  void validate() const;

  friend bool operator==(const ResemblanceConfig&, const ResemblanceConfig&) = default;
};

enum class Region { kAcceptable = 1, kPartial = 2, kFull = 3 };

/// "green", "amber", "red".
std::string_view rag_name(Region region) noexcept;
/// 'g', 'a', 'r'.
char rag_letter(Region region) noexcept;
/// Inverse of rag_name; throws ValidationError for unknown spellings.
Region region_from_rag(std::string_view name);

struct DecisionBoundaries {
  double delta = 0.0;
  double lambda_sup = 0.0;
  double tau1 = 0.0;
  double tau2 = 0.0;
  std::int64_t n = 0;
  std::size_t categories = 0;

  /// Throws BoundaryOverlapError unless tau1 < tau2.
  void validate() const;

  friend bool operator==(const DecisionBoundaries&, const DecisionBoundaries&) = default;
};

/// delta = c * min_j sqrt(p0_j (1 - p0_j) / n).
double recommended_delta(const ReferenceDistribution& p0, std::int64_t n, double c);

/// Largest non-centrality of n * PRS over all delta-resemblant populations:
/// n delta^2 sum(1/p0_j) for even B, minus n delta^2 / max(p0) for odd B.
/// Requires 0 < delta <= min(p0).
double lambda_sup(const ReferenceDistribution& p0, std::int64_t n, double delta);

/// True iff max_j |p0_j - p_j| <= delta (with 1e-12 rounding slack).
bool is_delta_resemblant(const ProportionVector& p, const ReferenceDistribution& p0, double delta);

struct CriticalValues {
  double tau1;
  double tau2;
};

/// tau1 = F^-1(alpha2; B-1, M^2 lambda) / n and tau2 = F^-1(1 - alpha1; B-1, lambda) / n.
/// No ordering check; used to report configurations that overlap.
CriticalValues critical_values(std::size_t categories, std::int64_t n, double lambda, double M,
                               double alpha1, double alpha2);

/// Full boundary derivation for (p0, n, cfg). Throws ConstraintViolation if
/// M * delta > min(p0) and BoundaryOverlapError if tau1 >= tau2.
DecisionBoundaries decision_boundaries(const ReferenceDistribution& p0, std::int64_t n,
                                       const ResemblanceConfig& cfg);

/// R1 if prs <= tau1, R2 if tau1 < prs <= tau2, R3 otherwise.
Region classify_prs(double prs_value, const DecisionBoundaries& bounds);

/// Fixed PSI rule: R1 below 0.10, R2 on [0.10, 0.25), R3 from 0.25.
Region classify_psi_fixed(double psi_value);

/// Sample-size-normed PSI thresholds tau = 2 F^-1_{B-1}(1 - alpha) / n.
struct NormedPsiBoundaries {
  double tau_red = 0.0;    // from the upper significance level
  double tau_green = 0.0;  // from the lower significance level
  double alpha_upper = 0.01;
  double alpha_lower = 0.10;

  Region classify(double psi_value) const noexcept;

  friend bool operator==(const NormedPsiBoundaries&, const NormedPsiBoundaries&) = default;
};

NormedPsiBoundaries normed_psi_boundaries(std::int64_t n, std::size_t categories,
                                          double alpha_upper = 0.01, double alpha_lower = 0.10);

/// Monte Carlo p-value of the discrete KS statistic under Multinomial(n, p0):
/// (1 + #{D* >= D}) / (1 + replications). replications must be >= 1000.
/// Deterministic in (seed, replications) for any thread count.
double ks_p_value(const CategoryCounts& counts, const ReferenceDistribution& p0,
                  std::int64_t replications, std::uint64_t seed, int threads = 0);

/// R3 if p < upper, R1 if p > lower, R2 otherwise.
Region classify_ks(double p_value, double upper = 0.01, double lower = 0.10) noexcept;

}  // namespace prs
