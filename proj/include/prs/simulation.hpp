#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "prs/kernels.hpp"
#include "prs/resemblance.hpp"
#include "prs/scenario.hpp"

namespace prs {

struct NoShift {};
struct TargetJ {
  double value = 0.0;
};
struct Perturbed {
  double delta_v = 0.0;
};
using Scenario = std::variant<NoShift, TargetJ, Perturbed>;

/// One Monte Carlo study against the equi-probable reference on B categories.
struct SimulationSpec {
  std::int64_t n = 0;
  std::size_t categories = 0;
  std::int64_t replications = 0;
  std::uint64_t seed = 0;
  Scenario scenario = NoShift{};
  int threads = 0;  // <= 0: OpenMP default

  /// Throws ValidationError on n < 1, B < 2 or replications < 1.
  void validate() const;
};

struct ProbabilityEstimate {
  double value = 0.0;
  double std_error = 0.0;  // binomial standard error sqrt(p (1 - p) / K)
  std::int64_t hits = 0;
  std::int64_t replications = 0;
};

ProbabilityEstimate make_estimate(std::int64_t hits, std::int64_t replications);

struct ReconstructionResult {
  ProbabilityEstimate estimate;
  ProportionVector population;              // the sampled population p
  std::optional<TargetJSolution> solution;  // set for TargetJ scenarios
};

/// Fraction of replications with PSI(phat, p0) >= psi_threshold. The
/// scenario must be NoShift or TargetJ.
ReconstructionResult reconstruction_probability(const SimulationSpec& spec, double psi_threshold);

struct StabilityRatios {
  std::int64_t n = 0;
  std::size_t categories = 0;
  std::int64_t replications = 0;
  double mean_t = 0.0, mean_t_se = 0.0;  // E[n PSI] / (B - 1)
  double var_t = 0.0, var_t_se = 0.0;    // Var[n PSI] / (2 (B - 1))
  double mean_q = 0.0, mean_q_se = 0.0;  // E[n PRS] / (B - 1)
  double var_q = 0.0, var_q_se = 0.0;    // Var[n PRS] / (2 (B - 1))
};

/// Mean and variance stability ratios of n PSI and n PRS with no shift.
StabilityRatios stability_ratios(std::int64_t n, std::size_t categories, std::int64_t replications,
                                 std::uint64_t seed, int threads = 0);

struct RegionProbabilities {
  kernels::RegionCounts counts{};  // replications in R1, R2, R3
  std::int64_t replications = 0;

  double probability(Region region) const noexcept;
  double std_error(Region region) const noexcept;
};

/// Classifies the PRS of `replications` samples of size n drawn from
/// `population` against `bounds`. Replication r of stream s uses
/// CounterRng(seed, s, r).
RegionProbabilities region_probabilities(std::int64_t n, const ReferenceDistribution& p0,
                                         const ProportionVector& population,
                                         const DecisionBoundaries& bounds,
                                         std::int64_t replications, std::uint64_t seed,
                                         std::uint64_t stream, int threads = 0);

struct SweepResult {
  std::vector<double> grid;  // delta_v values, strictly increasing
  std::vector<RegionProbabilities> region_probs;
  DecisionBoundaries boundaries;
  double requested_upper = 0.0;  // (3M + 2) delta
  double grid_upper = 0.0;       // after clamping inside the simplex
};

/// Region probabilities over `grid_points` equally spaced delta_v in
/// [0, (3M + 2) delta] for the equi-probable reference. When (3M + 2) delta
/// leaves the simplex the upper end is clamped to (1 - 1e-9) / B.
SweepResult classification_sweep(std::int64_t n, std::size_t categories,
                                 const ResemblanceConfig& cfg, int grid_points,
                                 std::int64_t replications, std::uint64_t seed, int threads = 0);

using CsvMetadata = std::vector<std::pair<std::string, std::string>>;

/// Writes "# key=value" comment lines.
void write_csv_metadata(std::ostream& os, const CsvMetadata& meta);
void write_sweep_csv(std::ostream& os, const SweepResult& sweep);
void write_stability_csv(std::ostream& os, const std::vector<StabilityRatios>& rows);

struct ReconstructionRow {
  std::int64_t n = 0;
  std::size_t categories = 0;
  double target_j = 0.0;
  ReconstructionResult result;
};
void write_reconstruction_csv(std::ostream& os, const std::vector<ReconstructionRow>& rows);

}  // namespace prs
