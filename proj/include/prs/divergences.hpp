#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace prs {

/// Observed counts per risk category. At least two categories, non-negative
/// entries and a positive total.
class CategoryCounts {
 public:
  explicit CategoryCounts(std::vector<std::int64_t> counts);

  std::span<const std::int64_t> counts() const noexcept { return counts_; }
  std::int64_t total() const noexcept { return total_; }
  std::size_t size() const noexcept { return counts_.size(); }
  std::int64_t operator[](std::size_t i) const { return counts_[i]; }

  friend bool operator==(const CategoryCounts&, const CategoryCounts&) = default;

 private:
  std::vector<std::int64_t> counts_;
  std::int64_t total_ = 0;
};

/// Probability vector on the simplex: entries in [0, 1] summing to one within
/// 1e-12. Zero entries are allowed (observed proportions, sampling vectors).
class ProportionVector {
 public:
  explicit ProportionVector(std::vector<double> probs);

  std::span<const double> probs() const noexcept { return probs_; }
  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }

  friend bool operator==(const ProportionVector&, const ProportionVector&) = default;

 private:
  std::vector<double> probs_;
};

/// Fixed reference distribution p0: at least two categories, every entry
/// strictly positive, unit sum within 1e-12.
class ReferenceDistribution {
 public:
  explicit ReferenceDistribution(std::vector<double> probs);

  /// Normalizes reference counts n0_i; every count must be positive.
  static ReferenceDistribution from_counts(std::span<const std::int64_t> counts);
  static ReferenceDistribution uniform(std::size_t categories);

  std::span<const double> probs() const noexcept { return probs_; }
  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  double min() const noexcept;
  double max() const noexcept;

  ProportionVector as_proportions() const { return ProportionVector{probs_}; }

  friend bool operator==(const ReferenceDistribution&, const ReferenceDistribution&) = default;

 private:
  std::vector<double> probs_;
};

/// phat_i = n_i / n.
ProportionVector proportions(const CategoryCounts& counts);

/// Population Stability Index. Categories with phat_j = 0 contribute nothing.
double psi(const ProportionVector& phat, const ReferenceDistribution& p0);

/// Population Resemblance Statistic, sum (phat_j - p0_j)^2 / p0_j.
double prs(const ProportionVector& phat, const ReferenceDistribution& p0);

/// Symmetrized Kullback-Leibler divergence between two populations. Any zero
/// entry of p makes the divergence infinite and is rejected with DomainError.
double j_divergence(const ProportionVector& p, const ReferenceDistribution& p0);

/// Chi-square divergence of a population from p0 (same formula as prs).
double chi2_divergence(const ProportionVector& p, const ReferenceDistribution& p0);

/// max_j |Fhat(j) - F0(j)| over cumulative sums in category order.
double ks_statistic(const ProportionVector& phat, const ReferenceDistribution& p0);

/// Unchecked count-based forms used inside the Monte Carlo loops. They produce
/// the same bits as the checked functions applied to proportions(counts).
namespace detail {
double psi_of_counts(std::span<const std::int64_t> counts, std::int64_t n,
                     std::span<const double> p0);
double prs_of_counts(std::span<const std::int64_t> counts, std::int64_t n,
                     std::span<const double> p0);
double ks_of_counts(std::span<const std::int64_t> counts, std::int64_t n,
                    std::span<const double> p0);
}  // namespace detail

}  // namespace prs
