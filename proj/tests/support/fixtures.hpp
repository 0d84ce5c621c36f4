#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "deadlisten/corpus/counts_index.hpp"
#include "deadlisten/corpus/occurrences.hpp"
#include "deadlisten/eval/labels.hpp"
#include "deadlisten/eval/sweep.hpp"

namespace deadlisten::testing {

inline constexpr const char* kResponsePath = "require(http).request(1)(0)";
inline constexpr const char* kRequestPath = "require(http).request()";
// Line of the timeout registration in the http_request fixture project.
inline constexpr std::uint32_t kTimeoutLine = 10;

// data 996, end 898, timeout 1 on the response path; 215 more timeout
// registrations on the request path.
corpus::CountsIndex http_counts_index();

inline constexpr const char* kDogePackage = "socket.io-client";
// 519 paths registering `doge` once, one path registering it three times;
// every path also registers `connect` 50 times.
corpus::CountsIndex doge_index();
std::vector<std::string> doge_single_paths();

// Labeled corpus: 400 incorrect labels of which the default config flags
// 30, plus 3 flagged correct labels. Flagged incorrect pairs carry 75
// occurrences.
struct LabeledCorpus {
  corpus::CountsIndex index;
  std::vector<eval::LabeledPair> labels;
};
LabeledCorpus threshold_corpus();

// Eight reference configurations with their scores on 400 incorrect labels.
std::vector<eval::ConfigResult> reference_rows();

// Grid holding only the reference configurations' values.
eval::Grid reference_grid();

// Small random corpus: `packages` packages, each with a few paths and
// events and skewed counts.
std::vector<corpus::OccurrenceRecord> random_records(std::mt19937_64& rng, std::size_t packages,
                                                     std::size_t max_pairs);

}  // namespace deadlisten::testing
