#pragma once

#include <cstdint>

namespace deadlisten::classifier {

// P(X <= k) for X ~ Binomial(n, p). Requires 0 <= k <= n, n >= 1 and
// p in [0, 1]; throws DomainError otherwise.
double bcdf(std::uint64_t k, std::uint64_t n, double p);

// P(X >= k) = 1 - bcdf(k - 1, n, p), computed without cancellation.
// Same domain as bcdf.
double binomial_sf(std::uint64_t k, std::uint64_t n, double p);

}  // namespace deadlisten::classifier
