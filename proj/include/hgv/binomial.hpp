#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "hgv/errors.hpp"

namespace hgv {

/// P[Bin(trials, p) >= at_least], summed in log space.
inline double binomial_tail_at_least(std::uint64_t trials, double p, std::uint64_t at_least) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("binomial probability outside [0, 1]");
  if (at_least == 0) return 1.0;
  if (at_least > trials) return 0.0;
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  const double n = static_cast<double>(trials);
  const double lp = std::log(p);
  const double lq = std::log1p(-p);
  const double lgn = std::lgamma(n + 1.0);
  auto pmf = [&](std::uint64_t k) {
    const double kk = static_cast<double>(k);
    return std::exp(lgn - std::lgamma(kk + 1.0) - std::lgamma(n - kk + 1.0) + kk * lp + (n - kk) * lq);
  };
  // Sum whichever side of the mean is the small one, so tails near 1 keep
  // full absolute precision.
  double sum = 0.0;
  if (static_cast<double>(at_least) > n * p) {
    for (std::uint64_t k = at_least; k <= trials; ++k) sum += pmf(k);
    return std::min(sum, 1.0);
  }
  for (std::uint64_t k = 0; k < at_least; ++k) sum += pmf(k);
  return std::max(0.0, 1.0 - sum);
}

/// Standard error of an empirical frequency with true probability p.
inline double binomial_sigma(double p, std::uint64_t trials) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

}  // namespace hgv
