#pragma once

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "deadlisten/miner/access_path.hpp"
#include "deadlisten/miner/syntax.hpp"

namespace deadlisten::miner {

struct PairOccurrence {
  AccessPath path;
  std::string event;
  std::string root_package;
  std::string project_id;
  SourceLocation location;
};

struct FileFailure {
  std::string file;
  std::uint32_t line = 0;
  std::uint32_t column = 0;
  std::string message;
};

struct MiningDiagnostics {
  std::uint64_t files_scanned = 0;
  std::uint64_t files_parsed = 0;
  std::uint64_t registrations = 0;
  std::uint64_t unresolved_receivers = 0;
  std::uint64_t paths_too_long = 0;
  std::uint64_t candidates_truncated = 0;
  std::vector<FileFailure> parse_failures;
  std::vector<FileFailure> read_failures;

  void merge(const MiningDiagnostics& other);
};

struct MiningResult {
  std::vector<PairOccurrence> occurrences;
  MiningDiagnostics diagnostics;
};

struct MiningOptions {
  // Lower-case extensions with the leading dot.
  std::vector<std::string> extensions{".js"};
  unsigned jobs = 1;
};

// Accepted by --ext in addition to the default.
inline constexpr std::string_view kOptionalExtensions[] = {".jsx", ".mjs", ".cjs"};

// Mines one file's text. Syntax errors are recorded, not thrown.
MiningResult mine_source(std::string_view text, const std::string& file,
                         const std::string& project_id);

// Mines every matching file under `root`, skipping node_modules and hidden
// directories. `file` locations are relative to `root`. Throws IoError when
// `root` is not a readable directory. Occurrences are sorted by file, line,
// column and event.
MiningResult mine_project(const std::filesystem::path& root, const std::string& project_id,
                          const MiningOptions& options = {});

// Files mine_project would visit, relative to root, sorted.
std::vector<std::filesystem::path> list_source_files(const std::filesystem::path& root,
                                                     const MiningOptions& options = {});

// Append-only collector shared by mining workers.
class OccurrenceSink {
 public:
  void append(MiningResult&& part);
  MiningResult take();

 private:
  std::mutex mutex_;
  MiningResult result_;
};

}  // namespace deadlisten::miner
