#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace deadlisten::eval {

// Seeded generator with a fixed, versioned algorithm so that reports are
// reproducible across standard library implementations: mt19937_64 output
// (fully specified by the standard) and an explicit Fisher-Yates shuffle
// with rejection sampling for unbiased bounded integers.
class SeededShuffler {
 public:
  static constexpr std::string_view kName = "mt19937_64/fisher-yates-v1";

  explicit SeededShuffler(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  template <class T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace deadlisten::eval
