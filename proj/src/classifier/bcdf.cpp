#include "deadlisten/classifier/bcdf.hpp"

#include <cmath>

#include <boost/math/distributions/binomial.hpp>
#include <fmt/format.h>

#include "deadlisten/error.hpp"

namespace deadlisten::classifier {

namespace {

void check_domain(std::uint64_t k, std::uint64_t n, double p) {
  if (n < 1) throw DomainError(fmt::format("binomial test needs n >= 1, got n={}", n));
  if (k > n) throw DomainError(fmt::format("binomial test needs k <= n, got k={} n={}", k, n));
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError(fmt::format("probability out of [0,1]: {}", p));
}

boost::math::binomial_distribution<double> dist(std::uint64_t n, double p) {
  return boost::math::binomial_distribution<double>(static_cast<double>(n), p);
}

}  // namespace

double bcdf(std::uint64_t k, std::uint64_t n, double p) {
  check_domain(k, n, p);
  if (k == n || p == 0.0) return 1.0;
  if (p == 1.0) return 0.0;
  return boost::math::cdf(dist(n, p), static_cast<double>(k));
}

double binomial_sf(std::uint64_t k, std::uint64_t n, double p) {
  check_domain(k, n, p);
  if (k == 0 || p == 1.0) return 1.0;
  if (p == 0.0) return 0.0;
  return boost::math::cdf(boost::math::complement(dist(n, p), static_cast<double>(k - 1)));
}

}  // namespace deadlisten::classifier
