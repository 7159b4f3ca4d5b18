#include "prs/kernels.hpp"

#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "prs/divergences.hpp"
#include "prs/random.hpp"

namespace prs::kernels {
namespace {

int team_size(int threads) {
#ifdef _OPENMP
  return threads > 0 ? threads : omp_get_max_threads();
#else
  (void)threads;
  return 1;
#endif
}

void draw(const McTask& task, std::int64_t replication, std::span<std::int64_t> counts) {
  CounterRng rng(task.seed, task.stream, static_cast<std::uint64_t>(replication));
  multinomial_sample(task.n, task.sampling, rng, counts);
}

int region_index(double value, double tau1, double tau2) {
  if (value <= tau1) return 0;
  if (value <= tau2) return 1;
  return 2;
}

}  // namespace

namespace serial {

std::int64_t count_psi_at_least(const McTask& task, double threshold) {
  std::vector<std::int64_t> counts(task.sampling.size());
  std::int64_t hits = 0;
  for (std::int64_t r = 0; r < task.replications; ++r) {
    draw(task, r, counts);
    if (detail::psi_of_counts(counts, task.n, task.reference) >= threshold) ++hits;
  }
  return hits;
}

std::int64_t count_ks_at_least(const McTask& task, double statistic) {
  std::vector<std::int64_t> counts(task.sampling.size());
  std::int64_t hits = 0;
  for (std::int64_t r = 0; r < task.replications; ++r) {
    draw(task, r, counts);
    if (detail::ks_of_counts(counts, task.n, task.reference) >= statistic - kKsTieSlack) ++hits;
  }
  return hits;
}

RegionCounts count_regions(const McTask& task, double tau1, double tau2) {
  std::vector<std::int64_t> counts(task.sampling.size());
  RegionCounts out{0, 0, 0};
  for (std::int64_t r = 0; r < task.replications; ++r) {
    draw(task, r, counts);
    ++out[region_index(detail::prs_of_counts(counts, task.n, task.reference), tau1, tau2)];
  }
  return out;
}

void scaled_statistics(const McTask& task, std::span<double> t_out, std::span<double> q_out) {
  std::vector<std::int64_t> counts(task.sampling.size());
  const auto dn = static_cast<double>(task.n);
  for (std::int64_t r = 0; r < task.replications; ++r) {
    draw(task, r, counts);
    t_out[r] = dn * detail::psi_of_counts(counts, task.n, task.reference);
    q_out[r] = dn * detail::prs_of_counts(counts, task.n, task.reference);
  }
}

}  // namespace serial

namespace parallel {

std::int64_t count_psi_at_least(const McTask& task, double threshold, int threads) {
  std::int64_t hits = 0;
#pragma omp parallel num_threads(team_size(threads)) reduction(+ : hits)
  {
    std::vector<std::int64_t> counts(task.sampling.size());
#pragma omp for schedule(static)
    for (std::int64_t r = 0; r < task.replications; ++r) {
      draw(task, r, counts);
      if (detail::psi_of_counts(counts, task.n, task.reference) >= threshold) ++hits;
    }
  }
  return hits;
}

std::int64_t count_ks_at_least(const McTask& task, double statistic, int threads) {
  std::int64_t hits = 0;
#pragma omp parallel num_threads(team_size(threads)) reduction(+ : hits)
  {
    std::vector<std::int64_t> counts(task.sampling.size());
#pragma omp for schedule(static)
    for (std::int64_t r = 0; r < task.replications; ++r) {
      draw(task, r, counts);
      if (detail::ks_of_counts(counts, task.n, task.reference) >= statistic - kKsTieSlack) {
        ++hits;
      }
    }
  }
  return hits;
}

RegionCounts count_regions(const McTask& task, double tau1, double tau2, int threads) {
  std::int64_t r1 = 0, r2 = 0, r3 = 0;
#pragma omp parallel num_threads(team_size(threads)) reduction(+ : r1, r2, r3)
  {
    std::vector<std::int64_t> counts(task.sampling.size());
#pragma omp for schedule(static)
    for (std::int64_t r = 0; r < task.replications; ++r) {
      draw(task, r, counts);
      switch (region_index(detail::prs_of_counts(counts, task.n, task.reference), tau1, tau2)) {
        case 0:
          ++r1;
          break;
        case 1:
          ++r2;
          break;
        default:
          ++r3;
          break;
      }
    }
  }
  return {r1, r2, r3};
}

void scaled_statistics(const McTask& task, std::span<double> t_out, std::span<double> q_out,
                       int threads) {
  const auto dn = static_cast<double>(task.n);
#pragma omp parallel num_threads(team_size(threads))
  {
    std::vector<std::int64_t> counts(task.sampling.size());
#pragma omp for schedule(static)
    for (std::int64_t r = 0; r < task.replications; ++r) {
      draw(task, r, counts);
      t_out[r] = dn * detail::psi_of_counts(counts, task.n, task.reference);
      q_out[r] = dn * detail::prs_of_counts(counts, task.n, task.reference);
    }
  }
}

}  // namespace parallel
}  // namespace prs::kernels
