#include "prs/resemblance.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "prs/error.hpp"
#include "prs/kernels.hpp"
#include "prs/special_functions.hpp"

namespace prs {
namespace {

constexpr double kResemblanceSlack = 1e-12;
constexpr std::uint64_t kKsStream = 0x4B53;  // "KS"

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void require_positive_n(std::int64_t n) {
  if (n < 1) throw DomainError("sample size n must be at least 1");
}

}  // namespace

void ResemblanceConfig::validate() const {
  if (!(c > 0.0)) throw ConfigurationError("config: c must be positive, got " + fmt(c));
  if (!(M > 1.0)) throw ConfigurationError("config: M must exceed 1, got " + fmt(M));
  if (!(alpha1 > 0.0 && alpha1 < 1.0)) {
    throw ConfigurationError("config: alpha1 must lie in (0, 1), got " + fmt(alpha1));
  }
  if (!(alpha2 > 0.0 && alpha2 < 1.0)) {
    throw ConfigurationError("config: alpha2 must lie in (0, 1), got " + fmt(alpha2));
  }
  if (delta_override && !(*delta_override > 0.0)) {
    throw ConfigurationError("config: delta_override must be positive");
  }
}

std::string_view rag_name(Region region) noexcept {
  switch (region) {
    case Region::kAcceptable:
      return "green";
    case Region::kPartial:
      return "amber";
    case Region::kFull:
      return "red";
  }
  return "unknown";
}

char rag_letter(Region region) noexcept { return rag_name(region).front(); }

Region region_from_rag(std::string_view name) {
  if (name == "green") return Region::kAcceptable;
  if (name == "amber") return Region::kPartial;
  if (name == "red") return Region::kFull;
  throw ValidationError("unknown rag status '" + std::string(name) + "'");
}

void DecisionBoundaries::validate() const {
  if (!(tau1 < tau2)) {
    throw BoundaryOverlapError(
        "critical values overlap (tau1 = " + fmt(tau1) + " >= tau2 = " + fmt(tau2) +
        "): the partially discrepant region vanished; reduce alpha1/alpha2 or increase M");
  }
}

double recommended_delta(const ReferenceDistribution& p0, std::int64_t n, double c) {
  require_positive_n(n);
  if (!(c > 0.0)) throw DomainError("recommended_delta: c must be positive");
  double smallest = INFINITY;
  for (double p : p0.probs()) smallest = std::fmin(smallest, p * (1.0 - p));
  return c * std::sqrt(smallest / static_cast<double>(n));
}

double lambda_sup(const ReferenceDistribution& p0, std::int64_t n, double delta) {
  require_positive_n(n);
  if (!(delta > 0.0) || delta > p0.min()) {
    throw DomainError("lambda_sup: delta must lie in (0, min p0] = (0, " + fmt(p0.min()) +
                      "], got " + fmt(delta));
  }
  double inverse_sum = 0.0;
  for (double p : p0.probs()) inverse_sum += 1.0 / p;
  if (p0.size() % 2 == 1) inverse_sum -= 1.0 / p0.max();
  return static_cast<double>(n) * delta * delta * inverse_sum;
}

bool is_delta_resemblant(const ProportionVector& p, const ReferenceDistribution& p0, double delta) {
  if (p.size() != p0.size()) {
    throw DimensionMismatch("is_delta_resemblant: dimension mismatch");
  }
  for (std::size_t j = 0; j < p0.size(); ++j) {
    if (std::fabs(p0[j] - p[j]) > delta + kResemblanceSlack) return false;
  }
  return true;
}

CriticalValues critical_values(std::size_t categories, std::int64_t n, double lambda, double M,
                               double alpha1, double alpha2) {
  require_positive_n(n);
  const DegreesOfFreedom df(static_cast<double>(categories) - 1.0);
  const auto dn = static_cast<double>(n);
  return {ncx2_quantile(alpha2, df, NonCentrality{M * M * lambda}) / dn,
          ncx2_quantile(1.0 - alpha1, df, NonCentrality{lambda}) / dn};
}

DecisionBoundaries decision_boundaries(const ReferenceDistribution& p0, std::int64_t n,
                                       const ResemblanceConfig& cfg) {
  cfg.validate();
  require_positive_n(n);
  DecisionBoundaries b;
  b.n = n;
  b.categories = p0.size();
  b.delta = cfg.delta_override ? *cfg.delta_override : recommended_delta(p0, n, cfg.c);
  if (cfg.M * b.delta > p0.min()) {
    throw ConstraintViolation("M * delta = " + fmt(cfg.M * b.delta) +
                              " exceeds the smallest reference probability " + fmt(p0.min()) +
                              "; reduce c, M or delta_override");
  }
  b.lambda_sup = lambda_sup(p0, n, b.delta);
  const auto cv = critical_values(p0.size(), n, b.lambda_sup, cfg.M, cfg.alpha1, cfg.alpha2);
  b.tau1 = cv.tau1;
  b.tau2 = cv.tau2;
  b.validate();
  return b;
}

Region classify_prs(double prs_value, const DecisionBoundaries& bounds) {
  if (prs_value <= bounds.tau1) return Region::kAcceptable;
  if (prs_value <= bounds.tau2) return Region::kPartial;
  return Region::kFull;
}

Region classify_psi_fixed(double psi_value) {
  if (psi_value < 0.10) return Region::kAcceptable;
  if (psi_value < 0.25) return Region::kPartial;
  return Region::kFull;
}

Region NormedPsiBoundaries::classify(double psi_value) const noexcept {
  if (psi_value > tau_red) return Region::kFull;
  if (psi_value < tau_green) return Region::kAcceptable;
  return Region::kPartial;
}

NormedPsiBoundaries normed_psi_boundaries(std::int64_t n, std::size_t categories,
                                          double alpha_upper, double alpha_lower) {
  require_positive_n(n);
  if (categories < 2) throw DomainError("normed_psi_boundaries: at least two categories required");
  if (!(alpha_upper < alpha_lower)) {
    throw ConfigurationError("normed_psi_boundaries: alpha_upper must be below alpha_lower");
  }
  const DegreesOfFreedom df(static_cast<double>(categories) - 1.0);
  const double scale = 2.0 / static_cast<double>(n);
  NormedPsiBoundaries normed;
  normed.alpha_upper = alpha_upper;
  normed.alpha_lower = alpha_lower;
  normed.tau_red = scale * chi2_quantile(1.0 - alpha_upper, df);
  normed.tau_green = scale * chi2_quantile(1.0 - alpha_lower, df);
  return normed;
}

double ks_p_value(const CategoryCounts& counts, const ReferenceDistribution& p0,
                  std::int64_t replications, std::uint64_t seed, int threads) {
  if (counts.size() != p0.size()) throw DimensionMismatch("ks_p_value: dimension mismatch");
  if (replications < 1000) {
    throw ValidationError("ks_p_value: at least 1000 replications are required");
  }
  const double observed = detail::ks_of_counts(counts.counts(), counts.total(), p0.probs());
  kernels::McTask task;
  task.n = counts.total();
  task.sampling = p0.probs();
  task.reference = p0.probs();
  task.replications = replications;
  task.seed = seed;
  task.stream = kKsStream;
  const auto exceed = kernels::parallel::count_ks_at_least(task, observed, threads);
  return static_cast<double>(1 + exceed) / static_cast<double>(1 + replications);
}

Region classify_ks(double p_value, double upper, double lower) noexcept {
  if (p_value < upper) return Region::kFull;
  if (p_value > lower) return Region::kAcceptable;
  return Region::kPartial;
}

}  // namespace prs
