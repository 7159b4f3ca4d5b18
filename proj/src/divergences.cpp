#include "prs/divergences.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "prs/error.hpp"

namespace prs {
namespace {

constexpr double kSumTolerance = 1e-12;

void check_unit_sum(std::span<const double> probs, const char* what) {
  double sum = 0.0;
  for (double v : probs) sum += v;
  if (!(std::fabs(sum - 1.0) <= kSumTolerance)) {
    throw ValidationError(std::string(what) + ": probabilities sum to " + std::to_string(sum) +
                          ", expected 1");
  }
}

void check_same_size(std::size_t a, std::size_t b) {
  if (a != b) {
    throw DimensionMismatch("dimension mismatch: " + std::to_string(a) + " vs " +
                            std::to_string(b) + " categories");
  }
}

double psi_term(double phat, double p0) {
  if (phat <= 0.0) return 0.0;
  return (phat - p0) * (std::log(phat) - std::log(p0));
}

double prs_term(double phat, double p0) {
  const double d = phat - p0;
  return d * d / p0;
}

}  // namespace

CategoryCounts::CategoryCounts(std::vector<std::int64_t> counts) : counts_(std::move(counts)) {
  if (counts_.size() < 2) {
    throw ValidationError("counts: at least two categories are required");
  }
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (counts_[i] < 0) {
      throw ValidationError("counts: category " + std::to_string(i + 1) + " has negative count " +
                            std::to_string(counts_[i]));
    }
    total_ += counts_[i];
  }
  if (total_ == 0) throw ValidationError("counts: empty sample (n = 0)");
}

ProportionVector::ProportionVector(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw ValidationError("proportions: empty vector");
  for (double v : probs_) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ValidationError("proportions: entry " + std::to_string(v) + " outside [0, 1]");
    }
  }
  check_unit_sum(probs_, "proportions");
}

ReferenceDistribution::ReferenceDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.size() < 2) {
    throw ValidationError("reference: at least two categories are required");
  }
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    if (!(probs_[i] > 0.0 && probs_[i] <= 1.0)) {
      throw ValidationError("reference: category " + std::to_string(i + 1) +
                            " must have probability in (0, 1], got " + std::to_string(probs_[i]));
    }
  }
  check_unit_sum(probs_, "reference");
}

ReferenceDistribution ReferenceDistribution::from_counts(std::span<const std::int64_t> counts) {
  std::int64_t total = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] <= 0) {
      throw ValidationError("reference: category " + std::to_string(i + 1) +
                            " has non-positive count " + std::to_string(counts[i]));
    }
    total += counts[i];
  }
  std::vector<double> probs(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    probs[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  }
  return ReferenceDistribution{std::move(probs)};
}

ReferenceDistribution ReferenceDistribution::uniform(std::size_t categories) {
  return ReferenceDistribution{
      std::vector<double>(categories, 1.0 / static_cast<double>(categories))};
}

double ReferenceDistribution::min() const noexcept {
  return *std::min_element(probs_.begin(), probs_.end());
}

double ReferenceDistribution::max() const noexcept {
  return *std::max_element(probs_.begin(), probs_.end());
}

ProportionVector proportions(const CategoryCounts& counts) {
  const auto n = static_cast<double>(counts.total());
  std::vector<double> probs(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    probs[i] = static_cast<double>(counts[i]) / n;
  }
  return ProportionVector{std::move(probs)};
}

double psi(const ProportionVector& phat, const ReferenceDistribution& p0) {
  check_same_size(phat.size(), p0.size());
  double sum = 0.0;
  for (std::size_t j = 0; j < p0.size(); ++j) sum += psi_term(phat[j], p0[j]);
  return sum;
}

double prs(const ProportionVector& phat, const ReferenceDistribution& p0) {
  check_same_size(phat.size(), p0.size());
  double sum = 0.0;
  for (std::size_t j = 0; j < p0.size(); ++j) sum += prs_term(phat[j], p0[j]);
  return sum;
}

double j_divergence(const ProportionVector& p, const ReferenceDistribution& p0) {
  check_same_size(p.size(), p0.size());
  double sum = 0.0;
  for (std::size_t j = 0; j < p0.size(); ++j) {
    if (!(p[j] > 0.0)) {
      throw DomainError("j_divergence: population category " + std::to_string(j + 1) +
                        " has zero probability");
    }
    sum += (p[j] - p0[j]) * (std::log(p[j]) - std::log(p0[j]));
  }
  return sum;
}

double chi2_divergence(const ProportionVector& p, const ReferenceDistribution& p0) {
  return prs(p, p0);
}

double ks_statistic(const ProportionVector& phat, const ReferenceDistribution& p0) {
  check_same_size(phat.size(), p0.size());
  double fhat = 0.0, f0 = 0.0, best = 0.0;
  // The last partial sums are both one; skipping index B avoids rounding noise.
  for (std::size_t j = 0; j + 1 < p0.size(); ++j) {
    fhat += phat[j];
    f0 += p0[j];
    best = std::max(best, std::fabs(fhat - f0));
  }
  return best;
}

namespace detail {

double psi_of_counts(std::span<const std::int64_t> counts, std::int64_t n,
                     std::span<const double> p0) {
  const auto dn = static_cast<double>(n);
  double sum = 0.0;
  for (std::size_t j = 0; j < p0.size(); ++j) {
    sum += psi_term(static_cast<double>(counts[j]) / dn, p0[j]);
  }
  return sum;
}

double prs_of_counts(std::span<const std::int64_t> counts, std::int64_t n,
                     std::span<const double> p0) {
  const auto dn = static_cast<double>(n);
  double sum = 0.0;
  for (std::size_t j = 0; j < p0.size(); ++j) {
    sum += prs_term(static_cast<double>(counts[j]) / dn, p0[j]);
  }
  return sum;
}

double ks_of_counts(std::span<const std::int64_t> counts, std::int64_t n,
                    std::span<const double> p0) {
  const auto dn = static_cast<double>(n);
  double fhat = 0.0, f0 = 0.0, best = 0.0;
  for (std::size_t j = 0; j + 1 < p0.size(); ++j) {
    fhat += static_cast<double>(counts[j]) / dn;
    f0 += p0[j];
    best = std::max(best, std::fabs(fhat - f0));
  }
  return best;
}

}  // namespace detail
}  // namespace prs
