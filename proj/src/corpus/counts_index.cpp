#include "deadlisten/corpus/counts_index.hpp"

#include <charconv>

#include <fmt/format.h>

#include "deadlisten/corpus/csv.hpp"
#include "deadlisten/corpus/path_codec.hpp"

namespace deadlisten::corpus {

MissingPair::MissingPair(const std::string& path, const std::string& event)
    : Error(fmt::format("pair not in index: <{}, {}>", path, event)) {}

namespace {

template <class Map, class Key>
auto* find_in(const Map& map, const Key& key) {
  auto it = map.find(key);
  return it == map.end() ? nullptr : &it->second;
}

// Sum of the values in `counts` that are positive and at most `bound`.
std::uint64_t sum_at_most(const StringMap<std::uint64_t>& counts, std::uint64_t bound) {
  std::uint64_t sum = 0;
  for (const auto& [key, k] : counts) {
    if (k > 0 && k <= bound) sum += k;
  }
  return sum;
}

}  // namespace

void CountsIndex::add(std::string_view path, std::string_view event, std::uint64_t count) {
  if (count == 0) throw DomainError("pair count must be positive");
  miner::AccessPath parsed = parse_path(path);
  PackageCounts& pc = packages_[parsed.root_package];
  std::string p(path);
  std::string e(event);
  pc.by_path[p][e] += count;
  pc.by_event[e][p] += count;
  pc.path_totals[p] += count;
  pc.event_totals[e] += count;
  projects_known_ = false;
}

void CountsIndex::add(const OccurrenceRecord& record) {
  bool known = packages_.empty() || projects_known_;
  add(record.path, record.event, 1);
  projects_[PairKey{record.path, record.event}].insert(record.project);
  projects_known_ = known;
}

void CountsIndex::add(const miner::PairOccurrence& occurrence) {
  add(to_record(occurrence));
}

void CountsIndex::merge(const CountsIndex& other) {
  if (other.packages_.empty()) return;
  bool known = (packages_.empty() || projects_known_) && other.projects_known_;
  for (const auto& [pkg, pc] : other.packages_) {
    PackageCounts& mine = packages_[pkg];
    for (const auto& [path, events] : pc.by_path) {
      for (const auto& [event, k] : events) {
        mine.by_path[path][event] += k;
        mine.by_event[event][path] += k;
      }
    }
    for (const auto& [path, n] : pc.path_totals) mine.path_totals[path] += n;
    for (const auto& [event, n] : pc.event_totals) mine.event_totals[event] += n;
  }
  for (const auto& [key, projects] : other.projects_) projects_[key].insert(projects.begin(), projects.end());
  projects_known_ = known;
}

const PackageCounts* CountsIndex::package(std::string_view pkg) const {
  return find_in(packages_, pkg);
}

const PackageCounts* CountsIndex::package_of_path(std::string_view path) const {
  std::string pkg;
  try {
    pkg = root_package_of(path);
  } catch (const PathSyntaxError&) {
    return nullptr;
  }
  return package(pkg);
}

bool CountsIndex::contains(std::string_view path, std::string_view event) const {
  return count(path, event) > 0;
}

std::uint64_t CountsIndex::count(std::string_view path, std::string_view event) const {
  const PackageCounts* pc = package_of_path(path);
  if (!pc) return 0;
  const auto* events = find_in(pc->by_path, path);
  if (!events) return 0;
  const std::uint64_t* k = find_in(*events, event);
  return k ? *k : 0;
}

std::uint64_t CountsIndex::path_total(std::string_view path) const {
  const PackageCounts* pc = package_of_path(path);
  if (!pc) return 0;
  const std::uint64_t* n = find_in(pc->path_totals, path);
  return n ? *n : 0;
}

std::uint64_t CountsIndex::event_total(const EventKey& event) const {
  const PackageCounts* pc = package(event.root_package);
  if (!pc) return 0;
  const std::uint64_t* n = find_in(pc->event_totals, event.event_name);
  return n ? *n : 0;
}

std::uint64_t CountsIndex::cumulative_count_for_path(std::string_view path, std::string_view event) const {
  std::uint64_t k = count(path, event);
  if (k == 0) throw MissingPair(std::string(path), std::string(event));
  const PackageCounts* pc = package_of_path(path);
  return sum_at_most(pc->by_event.find(event)->second, k);
}

std::uint64_t CountsIndex::cumulative_count_for_event(std::string_view path, std::string_view event) const {
  std::uint64_t k = count(path, event);
  if (k == 0) throw MissingPair(std::string(path), std::string(event));
  const PackageCounts* pc = package_of_path(path);
  return sum_at_most(pc->by_path.find(path)->second, k);
}

void CountsIndex::for_each_pair(
    const std::function<void(const std::string&, const std::string&, const std::string&, std::uint64_t)>& fn)
    const {
  for (const auto& [pkg, pc] : packages_) {
    for (const auto& [path, events] : pc.by_path) {
      for (const auto& [event, k] : events) fn(pkg, path, event, k);
    }
  }
}

const std::set<std::string>* CountsIndex::project_set(std::string_view path, std::string_view event) const {
  if (!projects_known_ || packages_.empty()) return nullptr;
  auto it = projects_.find(PairKey{std::string(path), std::string(event)});
  return it == projects_.end() ? nullptr : &it->second;
}

std::optional<std::size_t> CountsIndex::project_count(std::string_view path, std::string_view event) const {
  const std::set<std::string>* s = project_set(path, event);
  if (!s) return std::nullopt;
  return s->size();
}

CorpusSummary CountsIndex::summary() const {
  CorpusSummary s;
  s.packages = packages_.size();
  for (const auto& [pkg, pc] : packages_) {
    s.unique_paths += pc.by_path.size();
    s.unique_events += pc.by_event.size();
    for (const auto& [path, events] : pc.by_path) s.unique_pairs += events.size();
    for (const auto& [path, n] : pc.path_totals) s.total_occurrences += n;
  }
  return s;
}

CountsIndex aggregate(const std::vector<miner::PairOccurrence>& occurrences) {
  CountsIndex index;
  for (const auto& o : occurrences) index.add(o);
  return index;
}

CountsIndex aggregate(const std::vector<OccurrenceRecord>& records) {
  CountsIndex index;
  for (const auto& r : records) index.add(r);
  return index;
}

void write_index_csv(std::ostream& out, const CountsIndex& index) {
  csv::write_row(out, {"pkg", "path", "event", "count"});
  index.for_each_pair([&](const std::string& pkg, const std::string& path, const std::string& event,
                          std::uint64_t k) { csv::write_row(out, {pkg, path, event, std::to_string(k)}); });
}

CountsIndex read_index_csv(std::istream& in, const std::string& source) {
  csv::Reader reader(in, source);
  std::vector<std::string> row;
  if (!reader.next(row)) throw FormatError(source, 0, "empty index file");
  if (row != std::vector<std::string>{"pkg", "path", "event", "count"}) {
    throw FormatError(source, reader.line(), "expected header pkg,path,event,count");
  }
  CountsIndex index;
  while (reader.next(row)) {
    if (row.size() != 4) throw FormatError(source, reader.line(), "expected 4 fields");
    std::uint64_t k = 0;
    const std::string& c = row[3];
    auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), k);
    if (c.empty() || ec != std::errc{} || ptr != c.data() + c.size() || k == 0) {
      throw FormatError(source, reader.line(), "count must be a positive integer");
    }
    try {
      if (root_package_of(row[1]) != row[0]) {
        throw FormatError(source, reader.line(), "pkg does not match path root");
      }
      index.add(row[1], row[2], k);
    } catch (const PathSyntaxError& e) {
      throw FormatError(source, reader.line(), e.what());
    }
  }
  return index;
}

}  // namespace deadlisten::corpus
