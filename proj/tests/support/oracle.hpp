#pragma once

#include <cstdint>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace deadlisten::testing {

// P(X <= k) for X ~ Binomial(n, p) by direct summation of the probability
// mass function in 100-digit floating point.
inline double oracle_bcdf(std::uint64_t k, std::uint64_t n, double p) {
  using Big = boost::multiprecision::cpp_bin_float_100;
  Big bp = p;
  Big q = Big(1) - bp;
  Big coefficient = 1;  // C(n, i)
  Big sum = 0;
  for (std::uint64_t i = 0; i <= k; ++i) {
    if (i > 0) coefficient = coefficient * Big(n - i + 1) / Big(i);
    sum += coefficient * boost::multiprecision::pow(bp, static_cast<int>(i)) *
           boost::multiprecision::pow(q, static_cast<int>(n - i));
  }
  return sum.convert_to<double>();
}

}  // namespace deadlisten::testing
