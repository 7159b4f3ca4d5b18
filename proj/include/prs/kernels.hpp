#pragma once

// Monte Carlo replication loops. Every loop exists twice: a plain serial
// reference and an OpenMP version. Replication r always draws from
// CounterRng(seed, stream, r), and reductions are integer counts or
// per-replication output slots, so both versions return identical bits for
// any thread count.

#include <array>
#include <cstdint>
#include <span>

namespace prs::kernels {

struct McTask {
  std::int64_t n = 0;                 // sample size per replication
  std::span<const double> sampling;   // population the samples are drawn from
  std::span<const double> reference;  // p0 the statistics are measured against
  std::int64_t replications = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

using RegionCounts = std::array<std::int64_t, 3>;

namespace serial {

/// Replications with PSI >= threshold.
std::int64_t count_psi_at_least(const McTask& task, double threshold);

/// Replications whose KS statistic is >= statistic (up to rounding slack).
std::int64_t count_ks_at_least(const McTask& task, double statistic);

/// Replications with PRS <= tau1, in (tau1, tau2], and > tau2.
RegionCounts count_regions(const McTask& task, double tau1, double tau2);

/// n * PSI and n * PRS for every replication.
void scaled_statistics(const McTask& task, std::span<double> t_out, std::span<double> q_out);

}  // namespace serial

namespace parallel {

// threads <= 0 uses the OpenMP default team size.
std::int64_t count_psi_at_least(const McTask& task, double threshold, int threads = 0);
std::int64_t count_ks_at_least(const McTask& task, double statistic, int threads = 0);
RegionCounts count_regions(const McTask& task, double tau1, double tau2, int threads = 0);
void scaled_statistics(const McTask& task, std::span<double> t_out, std::span<double> q_out,
                       int threads = 0);

}  // namespace parallel

/// Slack used when comparing simulated KS statistics with the observed one:
/// equal cumulative gaps reached through different categories may differ in
/// the last few bits.
inline constexpr double kKsTieSlack = 1e-12;

}  // namespace prs::kernels
