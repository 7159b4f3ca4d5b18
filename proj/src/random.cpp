#include "prs/random.hpp"

#include <random>

namespace prs {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream) noexcept
    : key_(mix64(mix64(mix64(seed + kGolden) ^ (stream * 0xD1B54A32D192ED03ULL)) ^
                 (substream * 0xAEF17502108EF2D9ULL))) {}

CounterRng::result_type CounterRng::operator()() noexcept {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

void multinomial_sample(std::int64_t n, std::span<const double> p, CounterRng& rng,
                        std::span<std::int64_t> out) {
  std::int64_t remaining = n;
  double mass = 1.0;
  const std::size_t last = p.size() - 1;
  for (std::size_t j = 0; j < last; ++j) {
    if (remaining == 0 || p[j] <= 0.0) {
      out[j] = 0;
    } else {
      const double q = p[j] / mass;
      if (q >= 1.0) {
        out[j] = remaining;
      } else {
        std::binomial_distribution<std::int64_t> binom(remaining, q);
        out[j] = binom(rng);
      }
    }
    remaining -= out[j];
    mass -= p[j];
  }
  out[last] = remaining;
}

std::vector<std::int64_t> multinomial_sample(std::int64_t n, const ProportionVector& p,
                                             CounterRng& rng) {
  std::vector<std::int64_t> out(p.size());
  multinomial_sample(n, p.probs(), rng, out);
  return out;
}

}  // namespace prs
