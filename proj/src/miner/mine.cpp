#include "deadlisten/miner/mine.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>
#include <tuple>

#include <fmt/format.h>

#include "deadlisten/miner/def_use.hpp"
#include "deadlisten/miner/registrations.hpp"

namespace deadlisten::miner {

namespace fs = std::filesystem;

void MiningDiagnostics::merge(const MiningDiagnostics& other) {
  files_scanned += other.files_scanned;
  files_parsed += other.files_parsed;
  registrations += other.registrations;
  unresolved_receivers += other.unresolved_receivers;
  paths_too_long += other.paths_too_long;
  candidates_truncated += other.candidates_truncated;
  parse_failures.insert(parse_failures.end(), other.parse_failures.begin(), other.parse_failures.end());
  read_failures.insert(read_failures.end(), other.read_failures.begin(), other.read_failures.end());
}

void OccurrenceSink::append(MiningResult&& part) {
  std::lock_guard lock(mutex_);
  result_.occurrences.insert(result_.occurrences.end(),
                             std::make_move_iterator(part.occurrences.begin()),
                             std::make_move_iterator(part.occurrences.end()));
  result_.diagnostics.merge(part.diagnostics);
}

MiningResult OccurrenceSink::take() {
  std::lock_guard lock(mutex_);
  MiningResult out = std::move(result_);
  result_ = {};
  return out;
}

MiningResult mine_source(std::string_view text, const std::string& file,
                         const std::string& project_id) {
  MiningResult result;
  result.diagnostics.files_scanned = 1;
  SyntaxTree tree;
  try {
    tree = parse_source(text, file);
  } catch (const ParseError& e) {
    result.diagnostics.parse_failures.push_back({file, e.line(), e.column(), e.message()});
    return result;
  }
  result.diagnostics.files_parsed = 1;

  DefUseAnalysis analysis(tree);
  for (const Registration& reg : extract_registrations(analysis)) {
    ++result.diagnostics.registrations;
    std::vector<AccessPath> paths = analysis.resolve(reg.receiver);
    if (paths.empty()) {
      ++result.diagnostics.unresolved_receivers;
      continue;
    }
    std::vector<AccessPath> rewritten;
    for (const AccessPath& p : paths) {
      AccessPath r = rewrite_chained_aliases(p);
      if (r.length() > kMaxPathLength) {
        ++result.diagnostics.paths_too_long;
        continue;
      }
      rewritten.push_back(std::move(r));
    }
    // distinct candidates may collapse to one path after rewriting
    std::sort(rewritten.begin(), rewritten.end());
    rewritten.erase(std::unique(rewritten.begin(), rewritten.end()), rewritten.end());
    for (AccessPath& p : rewritten) {
      PairOccurrence occ;
      occ.root_package = p.root_package;
      occ.path = std::move(p);
      occ.event = reg.event;
      occ.project_id = project_id;
      occ.location = reg.location;
      result.occurrences.push_back(std::move(occ));
    }
  }
  result.diagnostics.paths_too_long += analysis.counters().paths_too_long;
  result.diagnostics.candidates_truncated += analysis.counters().candidates_truncated;
  return result;
}

namespace {

std::string lower(std::string s) {
  for (char& c : s) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return s;
}

bool skipped_directory(const fs::path& p) {
  std::string name = p.filename().string();
  return name == "node_modules" || (name.size() > 1 && name[0] == '.');
}

void sort_occurrences(std::vector<PairOccurrence>& occs) {
  std::stable_sort(occs.begin(), occs.end(), [](const PairOccurrence& a, const PairOccurrence& b) {
    return std::tie(a.location.file, a.location.line, a.location.column, a.event, a.path) <
           std::tie(b.location.file, b.location.line, b.location.column, b.event, b.path);
  });
}

}  // namespace

std::vector<fs::path> list_source_files(const fs::path& root, const MiningOptions& options) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw IoError(fmt::format("not a readable directory: {}", root.string()));
  }
  std::vector<fs::path> files;
  fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec);
  if (ec) throw IoError(fmt::format("cannot read directory {}: {}", root.string(), ec.message()));
  for (; it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (ec) break;
    const fs::directory_entry& entry = *it;
    std::error_code type_ec;
    if (entry.is_directory(type_ec)) {
      if (skipped_directory(entry.path())) it.disable_recursion_pending();
      continue;
    }
    if (!entry.is_regular_file(type_ec)) continue;
    std::string ext = lower(entry.path().extension().string());
    if (std::find(options.extensions.begin(), options.extensions.end(), ext) == options.extensions.end()) {
      continue;
    }
    files.push_back(entry.path().lexically_relative(root));
  }
  if (ec) throw IoError(fmt::format("cannot read directory {}: {}", root.string(), ec.message()));
  std::sort(files.begin(), files.end());
  return files;
}

MiningResult mine_project(const fs::path& root, const std::string& project_id,
                          const MiningOptions& options) {
  const std::vector<fs::path> files = list_source_files(root, options);
  OccurrenceSink sink;
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      const std::string rel = files[i].generic_string();
      std::ifstream in(root / files[i], std::ios::binary);
      std::ostringstream buf;
      if (in) buf << in.rdbuf();
      if (!in || in.bad()) {
        MiningResult failed;
        failed.diagnostics.files_scanned = 1;
        failed.diagnostics.read_failures.push_back({rel, 0, 0, "cannot read file"});
        sink.append(std::move(failed));
        continue;
      }
      sink.append(mine_source(buf.str(), rel, project_id));
    }
  };

  unsigned jobs = std::max(1u, options.jobs);
  if (jobs == 1 || files.size() < 2) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < std::min<std::size_t>(jobs, files.size()); ++j) pool.emplace_back(worker);
  }

  MiningResult result = sink.take();
  sort_occurrences(result.occurrences);
  auto by_file = [](const FileFailure& a, const FileFailure& b) { return a.file < b.file; };
  std::sort(result.diagnostics.parse_failures.begin(), result.diagnostics.parse_failures.end(), by_file);
  std::sort(result.diagnostics.read_failures.begin(), result.diagnostics.read_failures.end(), by_file);
  return result;
}

}  // namespace deadlisten::miner
