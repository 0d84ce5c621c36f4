#include "fixtures.hpp"

#include <fmt/format.h>

namespace deadlisten::testing {

corpus::CountsIndex http_counts_index() {
  corpus::CountsIndex index;
  index.add(kResponsePath, "data", 996);
  index.add(kResponsePath, "end", 898);
  index.add(kResponsePath, "timeout", 1);
  index.add(kRequestPath, "timeout", 215);
  return index;
}

std::vector<std::string> doge_single_paths() {
  std::vector<std::string> out;
  for (int i = 0; i < 519; ++i) out.push_back(fmt::format("require({}).s{}", kDogePackage, i));
  return out;
}

corpus::CountsIndex doge_index() {
  corpus::CountsIndex index;
  for (const std::string& path : doge_single_paths()) {
    index.add(path, "doge", 1);
    index.add(path, "connect", 50);
  }
  std::string main = fmt::format("require({}).main", kDogePackage);
  index.add(main, "doge", 3);
  index.add(main, "connect", 50);
  return index;
}

namespace {

// A pair the default config flags: `rare` on path a next to a frequent
// event, and frequent on a sibling path.
void add_rare_pair(LabeledCorpus& c, const std::string& pkg, std::uint64_t k, eval::Label label) {
  std::string a = fmt::format("require({}).a", pkg);
  std::string b = fmt::format("require({}).b", pkg);
  c.index.add(a, "main", 200);
  c.index.add(a, "rare", k);
  c.index.add(b, "rare", 200);
  c.labels.push_back({pkg, a, "rare", label});
}

}  // namespace

LabeledCorpus threshold_corpus() {
  LabeledCorpus c;
  for (int i = 0; i < 30; ++i) add_rare_pair(c, fmt::format("t{}", i), i < 15 ? 2 : 3, eval::Label::Incorrect);
  for (int i = 0; i < 3; ++i) add_rare_pair(c, fmt::format("f{}", i), 2, eval::Label::Correct);
  for (int i = 0; i < 369; ++i) {
    std::string pkg = fmt::format("n{}", i);
    std::string a = fmt::format("require({}).a", pkg);
    c.index.add(a, "x", 100);
    c.index.add(a, "y", 100);
    c.labels.push_back({pkg, a, "x", eval::Label::Incorrect});
  }
  c.index.add("require(u0).a", "x", 1);
  c.labels.push_back({"u0", "require(u0).a", "x", eval::Label::Incorrect});
  return c;
}

std::vector<eval::ConfigResult> reference_rows() {
  struct Row {
    classifier::Config config;
    std::uint64_t tp, fp, up, occ, projects;
  };
  const Row rows[] = {
      {{0.05, 0.05, 0.02, 0.1}, 12, 0, 0, 23, 22},   {{0.1, 0.05, 0.05, 0.1}, 23, 1, 0, 57, 48},
      {{0.1, 0.05, 0.1, 0.1}, 24, 2, 0, 58, 49},     {{0.1, 0.1, 0.03, 0.01}, 30, 3, 1, 75, 64},
      {{0.25, 0.04, 0.01, 0.005}, 31, 4, 3, 77, 61}, {{0.25, 0.05, 0.01, 0.01}, 32, 5, 3, 79, 63},
      {{0.25, 0.01, 1, 0.04}, 35, 6, 9, 48, 36},     {{0.25, 0.01, 1, 0.1}, 39, 7, 12, 55, 41},
  };
  std::vector<eval::ConfigResult> out;
  for (const Row& r : rows) {
    eval::ScoreReport s;
    s.true_positives = r.tp;
    s.false_positives = r.fp;
    s.unclassified_incorrect = r.up;
    s.incorrect_labels = 400;
    s.false_negatives = 400 - r.tp;
    s.precision = 100.0 * static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fp);
    s.recall = 100.0 * static_cast<double>(r.tp) / 400.0;
    s.occurrences_of_tps = r.occ;
    s.projects_of_tps = r.projects;
    out.push_back({r.config, s});
  }
  return out;
}

eval::Grid reference_grid() {
  return {{0.05, 0.1, 0.25}, {0.01, 0.04, 0.05, 0.1}, {0.01, 0.02, 0.03, 0.05, 0.1, 1}, {0.005, 0.01, 0.04, 0.1}};
}

std::vector<corpus::OccurrenceRecord> random_records(std::mt19937_64& rng, std::size_t packages,
                                                     std::size_t max_pairs) {
  std::vector<corpus::OccurrenceRecord> out;
  std::uniform_int_distribution<std::size_t> pairs_dist(1, max_pairs);
  std::uniform_int_distribution<int> path_dist(0, 5);
  std::uniform_int_distribution<int> event_dist(0, 6);
  std::uniform_int_distribution<int> project_dist(0, 20);
  // mostly small counts with an occasional large one
  std::geometric_distribution<int> small(0.5);
  std::bernoulli_distribution big(0.15);
  std::uniform_int_distribution<int> big_count(20, 300);
  const char* shapes[] = {"{}", "{}.on", "{}()", "{}.get(0)", "{}[new]()", "{}.x.y"};
  for (std::size_t p = 0; p < packages; ++p) {
    std::string pkg = fmt::format("pkg{}", p);
    std::size_t pairs = pairs_dist(rng);
    for (std::size_t i = 0; i < pairs; ++i) {
      std::string path = fmt::format(fmt::runtime(shapes[path_dist(rng)]), fmt::format("require({})", pkg));
      std::string event = fmt::format("e{}", event_dist(rng));
      int count = big(rng) ? big_count(rng) : 1 + small(rng);
      for (int c = 0; c < count; ++c) {
        out.push_back({path, event, pkg, fmt::format("proj{}", project_dist(rng)), "index.js",
                       static_cast<std::uint32_t>(c + 1)});
      }
    }
  }
  return out;
}

}  // namespace deadlisten::testing
