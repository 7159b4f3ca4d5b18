#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "prs/divergences.hpp"

namespace prs {

/// Counter-based generator. The i-th output is a pure function of
/// (seed, stream, substream, i), so replication r of a study can be drawn on
/// any thread and still produce the same variates. Satisfies
/// UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  std::uint64_t draws() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Multinomial(n, p) by sequential conditional binomials: category j receives
/// Binomial(remaining, p_j / remaining mass). Exact for every n. Writes into
/// `out`, which must have p.size() entries.
void multinomial_sample(std::int64_t n, std::span<const double> p, CounterRng& rng,
                        std::span<std::int64_t> out);

std::vector<std::int64_t> multinomial_sample(std::int64_t n, const ProportionVector& p,
                                             CounterRng& rng);

}  // namespace prs
