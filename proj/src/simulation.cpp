#include "prs/simulation.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "prs/error.hpp"

namespace prs {
namespace {

enum class StreamKind : std::uint64_t { kReconstruction = 1, kStability = 2, kSweep = 3 };

std::uint64_t stream_id(StreamKind kind, std::int64_t n, std::size_t categories) {
  return (static_cast<std::uint64_t>(kind) << 56) ^ (static_cast<std::uint64_t>(categories) << 40) ^
         static_cast<std::uint64_t>(n);
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// Neumaier-compensated sum in index order.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double fourth_central = 0.0;
};

Moments moments(const std::vector<double>& xs) {
  const auto k = static_cast<double>(xs.size());
  CompensatedSum s;
  for (double x : xs) s.add(x);
  Moments m;
  m.mean = s.value() / k;
  CompensatedSum s2, s4;
  for (double x : xs) {
    const double d = x - m.mean;
    s2.add(d * d);
    s4.add(d * d * d * d);
  }
  m.variance = xs.size() > 1 ? s2.value() / (k - 1.0) : 0.0;
  m.fourth_central = s4.value() / k;
  return m;
}

}  // namespace

void SimulationSpec::validate() const {
  if (n < 1) throw ValidationError("simulation: n must be at least 1");
  if (categories < 2) throw ValidationError("simulation: at least two categories required");
  if (replications < 1) throw ValidationError("simulation: replications must be at least 1");
}

ProbabilityEstimate make_estimate(std::int64_t hits, std::int64_t replications) {
  ProbabilityEstimate e;
  e.hits = hits;
  e.replications = replications;
  e.value = static_cast<double>(hits) / static_cast<double>(replications);
  e.std_error = std::sqrt(e.value * (1.0 - e.value) / static_cast<double>(replications));
  return e;
}

ReconstructionResult reconstruction_probability(const SimulationSpec& spec, double psi_threshold) {
  spec.validate();
  const auto p0 = ReferenceDistribution::uniform(spec.categories);
  std::optional<TargetJSolution> solution;
  ProportionVector population = p0.as_proportions();
  if (const auto* target = std::get_if<TargetJ>(&spec.scenario)) {
    solution = solve_p_for_target_j(p0, target->value);
    population = solution->p;
  } else if (std::holds_alternative<Perturbed>(spec.scenario)) {
    throw ValidationError("reconstruction_probability: scenario must be NoShift or TargetJ");
  }
  kernels::McTask task;
  task.n = spec.n;
  task.sampling = population.probs();
  task.reference = p0.probs();
  task.replications = spec.replications;
  task.seed = spec.seed;
  task.stream = stream_id(StreamKind::kReconstruction, spec.n, spec.categories);
  const auto hits = kernels::parallel::count_psi_at_least(task, psi_threshold, spec.threads);
  return ReconstructionResult{make_estimate(hits, spec.replications), std::move(population),
                              std::move(solution)};
}

StabilityRatios stability_ratios(std::int64_t n, std::size_t categories, std::int64_t replications,
                                 std::uint64_t seed, int threads) {
  SimulationSpec{n, categories, replications, seed, NoShift{}, threads}.validate();
  const auto p0 = ReferenceDistribution::uniform(categories);
  std::vector<double> t(static_cast<std::size_t>(replications));
  std::vector<double> q(t.size());
  kernels::McTask task;
  task.n = n;
  task.sampling = p0.probs();
  task.reference = p0.probs();
  task.replications = replications;
  task.seed = seed;
  task.stream = stream_id(StreamKind::kStability, n, categories);
  kernels::parallel::scaled_statistics(task, t, q, threads);

  const double dof = static_cast<double>(categories) - 1.0;
  const double k = static_cast<double>(replications);
  const Moments mt = moments(t);
  const Moments mq = moments(q);
  StabilityRatios r;
  r.n = n;
  r.categories = categories;
  r.replications = replications;
  r.mean_t = mt.mean / dof;
  r.mean_t_se = std::sqrt(mt.variance / k) / dof;
  r.var_t = mt.variance / (2.0 * dof);
  r.var_t_se =
      std::sqrt(std::fmax(mt.fourth_central - mt.variance * mt.variance, 0.0) / k) / (2.0 * dof);
  r.mean_q = mq.mean / dof;
  r.mean_q_se = std::sqrt(mq.variance / k) / dof;
  r.var_q = mq.variance / (2.0 * dof);
  r.var_q_se =
      std::sqrt(std::fmax(mq.fourth_central - mq.variance * mq.variance, 0.0) / k) / (2.0 * dof);
  return r;
}

double RegionProbabilities::probability(Region region) const noexcept {
  const auto i = static_cast<std::size_t>(region) - 1;
  return static_cast<double>(counts[i]) / static_cast<double>(replications);
}

double RegionProbabilities::std_error(Region region) const noexcept {
  const double p = probability(region);
  return std::sqrt(p * (1.0 - p) / static_cast<double>(replications));
}

RegionProbabilities region_probabilities(std::int64_t n, const ReferenceDistribution& p0,
                                         const ProportionVector& population,
                                         const DecisionBoundaries& bounds,
                                         std::int64_t replications, std::uint64_t seed,
                                         std::uint64_t stream, int threads) {
  if (population.size() != p0.size()) {
    throw DimensionMismatch("region_probabilities: dimension mismatch");
  }
  if (replications < 1) throw ValidationError("region_probabilities: replications < 1");
  kernels::McTask task;
  task.n = n;
  task.sampling = population.probs();
  task.reference = p0.probs();
  task.replications = replications;
  task.seed = seed;
  task.stream = stream;
  RegionProbabilities out;
  out.counts = kernels::parallel::count_regions(task, bounds.tau1, bounds.tau2, threads);
  out.replications = replications;
  return out;
}

SweepResult classification_sweep(std::int64_t n, std::size_t categories,
                                 const ResemblanceConfig& cfg, int grid_points,
                                 std::int64_t replications, std::uint64_t seed, int threads) {
  if (grid_points < 2) throw ValidationError("classification_sweep: need at least 2 grid points");
  SimulationSpec{n, categories, replications, seed, NoShift{}, threads}.validate();
  const auto p0 = ReferenceDistribution::uniform(categories);
  SweepResult sweep;
  sweep.boundaries = decision_boundaries(p0, n, cfg);
  sweep.requested_upper = (3.0 * cfg.M + 2.0) * sweep.boundaries.delta;
  const double simplex_cap = (1.0 - 1e-9) / static_cast<double>(categories);
  sweep.grid_upper = std::fmin(sweep.requested_upper, simplex_cap);
  const auto base_stream = stream_id(StreamKind::kSweep, n, categories);
  for (int i = 0; i < grid_points; ++i) {
    const double delta_v =
        sweep.grid_upper * static_cast<double>(i) / static_cast<double>(grid_points - 1);
    const auto population = perturbed_pv({categories, delta_v});
    sweep.grid.push_back(delta_v);
    sweep.region_probs.push_back(
        region_probabilities(n, p0, population, sweep.boundaries, replications, seed,
                             base_stream + static_cast<std::uint64_t>(i), threads));
  }
  return sweep;
}

void write_csv_metadata(std::ostream& os, const CsvMetadata& meta) {
  for (const auto& [key, value] : meta) os << "# " << key << '=' << value << '\n';
}

void write_sweep_csv(std::ostream& os, const SweepResult& sweep) {
  os << "delta_v,p_r1,p_r2,p_r3,se_r1,se_r2,se_r3\n";
  for (std::size_t i = 0; i < sweep.grid.size(); ++i) {
    const auto& rp = sweep.region_probs[i];
    os << num(sweep.grid[i]);
    for (Region r : {Region::kAcceptable, Region::kPartial, Region::kFull}) {
      os << ',' << num(rp.probability(r));
    }
    for (Region r : {Region::kAcceptable, Region::kPartial, Region::kFull}) {
      os << ',' << num(rp.std_error(r));
    }
    os << '\n';
  }
}

void write_stability_csv(std::ostream& os, const std::vector<StabilityRatios>& rows) {
  os << "n,B,replications,mean_ratio_psi,mean_ratio_psi_se,var_ratio_psi,var_ratio_psi_se,"
        "mean_ratio_prs,mean_ratio_prs_se,var_ratio_prs,var_ratio_prs_se\n";
  for (const auto& r : rows) {
    os << r.n << ',' << r.categories << ',' << r.replications << ',' << num(r.mean_t) << ','
       << num(r.mean_t_se) << ',' << num(r.var_t) << ',' << num(r.var_t_se) << ',' << num(r.mean_q)
       << ',' << num(r.mean_q_se) << ',' << num(r.var_q) << ',' << num(r.var_q_se) << '\n';
  }
}

void write_reconstruction_csv(std::ostream& os, const std::vector<ReconstructionRow>& rows) {
  os << "n,B,target_j,achieved_j,distance,replications,hits,probability,std_error\n";
  for (const auto& row : rows) {
    const auto& est = row.result.estimate;
    const double achieved = row.result.solution ? row.result.solution->achieved_j : 0.0;
    const double distance = row.result.solution ? row.result.solution->distance : 0.0;
    os << row.n << ',' << row.categories << ',' << num(row.target_j) << ',' << num(achieved) << ','
       << num(distance) << ',' << est.replications << ',' << est.hits << ',' << num(est.value)
       << ',' << num(est.std_error) << '\n';
  }
}

}  // namespace prs
