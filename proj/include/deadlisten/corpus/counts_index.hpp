#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "deadlisten/corpus/occurrences.hpp"
#include "deadlisten/error.hpp"
#include "deadlisten/miner/mine.hpp"

namespace deadlisten::corpus {

class MissingPair : public Error {
 public:
  MissingPair(const std::string& path, const std::string& event);
};

// An event is identified by its name together with the package that roots
// the paths it is registered on.
struct EventKey {
  std::string root_package;
  std::string event_name;
  friend auto operator<=>(const EventKey&, const EventKey&) = default;
};

struct PairKey {
  std::string path;  // canonical serialization
  std::string event;
  friend auto operator<=>(const PairKey&, const PairKey&) = default;
};

template <class V>
using StringMap = std::map<std::string, V, std::less<>>;

// Counts of one root package. Paths are canonical strings.
struct PackageCounts {
  StringMap<StringMap<std::uint64_t>> by_path;   // a -> e -> k(a,e)
  StringMap<StringMap<std::uint64_t>> by_event;  // e -> a -> k(a,e)
  StringMap<std::uint64_t> path_totals;                     // n_a
  StringMap<std::uint64_t> event_totals;                    // n_e

  friend bool operator==(const PackageCounts&, const PackageCounts&) = default;
};

struct CorpusSummary {
  std::size_t packages = 0;
  std::size_t unique_pairs = 0;
  std::uint64_t total_occurrences = 0;
  std::size_t unique_paths = 0;
  std::size_t unique_events = 0;
};

// Occurrence counts k(a,e), n_a and n_e, scoped per root package. Build with
// add()/merge(); afterwards the index is read-only and safe to share.
class CountsIndex {
 public:
  // `path` must be canonical; its root selects the package. Throws
  // PathSyntaxError otherwise. `count` must be positive.
  void add(std::string_view path, std::string_view event, std::uint64_t count = 1);
  void add(const OccurrenceRecord& record);
  void add(const miner::PairOccurrence& occurrence);
  void merge(const CountsIndex& other);

  bool contains(std::string_view path, std::string_view event) const;
  std::uint64_t count(std::string_view path, std::string_view event) const;  // 0 if absent
  std::uint64_t path_total(std::string_view path) const;                     // n_a
  std::uint64_t event_total(const EventKey& event) const;                    // n_e

  // k_e(⌈a⌉): sum of k(a',e) over paths a' with 0 < k(a',e) <= k(a,e).
  std::uint64_t cumulative_count_for_path(std::string_view path, std::string_view event) const;
  // k_a(⌈e⌉): sum of k(a,e') over events e' with 0 < k(a,e') <= k(a,e).
  std::uint64_t cumulative_count_for_event(std::string_view path, std::string_view event) const;

  const StringMap<PackageCounts>& packages() const { return packages_; }
  const PackageCounts* package(std::string_view pkg) const;

  // Visits every pair in (package, path, event) order.
  void for_each_pair(const std::function<void(const std::string& pkg, const std::string& path,
                                              const std::string& event, std::uint64_t k)>& fn) const;

  // Distinct projects a pair was seen in; only known for indexes built from
  // occurrence records.
  bool has_project_info() const { return projects_known_ && !packages_.empty(); }
  std::optional<std::size_t> project_count(std::string_view path, std::string_view event) const;
  // nullptr when unknown.
  const std::set<std::string>* project_set(std::string_view path, std::string_view event) const;

  CorpusSummary summary() const;
  bool empty() const { return packages_.empty(); }

  friend bool operator==(const CountsIndex& a, const CountsIndex& b) { return a.packages_ == b.packages_; }

 private:
  const PackageCounts* package_of_path(std::string_view path) const;

  StringMap<PackageCounts> packages_;
  std::map<PairKey, std::set<std::string>, std::less<>> projects_;
  bool projects_known_ = false;
};

CountsIndex aggregate(const std::vector<miner::PairOccurrence>& occurrences);
CountsIndex aggregate(const std::vector<OccurrenceRecord>& records);

// CSV `pkg,path,event,count`, rows sorted by pkg, path, event.
void write_index_csv(std::ostream& out, const CountsIndex& index);
CountsIndex read_index_csv(std::istream& in, const std::string& source);

}  // namespace deadlisten::corpus
