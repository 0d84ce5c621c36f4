#include "deadlisten/cli/cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include <CLI11.hpp>
#include <fmt/chrono.h>
#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>

#include "deadlisten/classifier/classify.hpp"
#include "deadlisten/classifier/model_io.hpp"
#include "deadlisten/corpus/counts_index.hpp"
#include "deadlisten/corpus/csv.hpp"
#include "deadlisten/corpus/occurrences.hpp"
#include "deadlisten/corpus/path_codec.hpp"
#include "deadlisten/eval/experiments.hpp"
#include "deadlisten/eval/reports.hpp"
#include "deadlisten/eval/rng.hpp"
#include "deadlisten/miner/mine.hpp"

#ifndef DEADLISTEN_VERSION
#define DEADLISTEN_VERSION "0.0.0"
#endif

namespace deadlisten::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

// Paths with at least this many steps are reported with a triage note.
constexpr std::size_t kLongPathSteps = 5;

std::string read_file(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open {}", file.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError(fmt::format("cannot read {}", file.string()));
  return buf.str();
}

// Writes to `path`, or to `fallback` when path is empty.
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : path_(path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw IoError(fmt::format("cannot write {}", path));
    }
    stream_ = path.empty() ? &fallback : &file_;
  }
  std::ostream& stream() { return *stream_; }
  void close() {
    if (!path_.empty()) {
      file_.close();
      if (!file_) throw IoError(fmt::format("cannot write {}", path_));
    }
  }

 private:
  std::string path_;
  std::ofstream file_;
  std::ostream* stream_;
};

bool looks_like_jsonl(const std::string& text) {
  std::size_t i = text.find_first_not_of(" \t\r\n");
  return i != std::string::npos && text[i] == '{';
}

bool blank(const std::string& text) { return text.find_first_not_of(" \t\r\n") == std::string::npos; }

// Occurrence JSONL or aggregated CSV, detected from the content.
corpus::CountsIndex load_index(const std::string& file) {
  std::string text = read_file(file);
  if (blank(text)) return {};
  std::istringstream in(text);
  if (looks_like_jsonl(text)) return corpus::aggregate(corpus::read_jsonl(in, file));
  return corpus::read_index_csv(in, file);
}

std::string utc_now() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(t));
}

ordered_json config_json(const classifier::Config& c) {
  return {{"p_a", c.p_a}, {"p_e", c.p_e}, {"p_ca", c.p_ca}, {"p_ce", c.p_ce}};
}

ordered_json grid_json(const eval::Grid& g) {
  return {{"p_a", g.p_a}, {"p_e", g.p_e}, {"p_ca", g.p_ca}, {"p_ce", g.p_ce}};
}

ordered_json diagnostics_json(const miner::MiningDiagnostics& d) {
  ordered_json failures = ordered_json::array();
  for (const auto& f : d.parse_failures) {
    failures.push_back({{"file", f.file}, {"line", f.line}, {"column", f.column}, {"message", f.message}});
  }
  ordered_json unreadable = ordered_json::array();
  for (const auto& f : d.read_failures) unreadable.push_back(f.file);
  return {{"files_scanned", d.files_scanned},
          {"files_parsed", d.files_parsed},
          {"registrations", d.registrations},
          {"unresolved_receivers", d.unresolved_receivers},
          {"paths_too_long", d.paths_too_long},
          {"candidates_truncated", d.candidates_truncated},
          {"parse_failures", failures},
          {"unreadable_files", unreadable}};
}

// Run record written next to an output file as `<out>.manifest.json`.
class Manifest {
 public:
  Manifest(std::string command, const std::vector<std::string>& args)
      : started_(std::chrono::steady_clock::now()) {
    json_["command"] = std::move(command);
    json_["arguments"] = args;
    json_["tool_version"] = DEADLISTEN_VERSION;
    json_["started_at"] = utc_now();
  }
  ordered_json& operator[](const char* key) { return json_[key]; }

  void write(const std::string& out_path) {
    if (out_path.empty()) return;
    json_["finished_at"] = utc_now();
    json_["elapsed_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
    std::ofstream f(out_path + ".manifest.json", std::ios::trunc);
    if (!f) throw IoError(fmt::format("cannot write {}.manifest.json", out_path));
    f << json_.dump(2) << '\n';
  }

 private:
  ordered_json json_;
  std::chrono::steady_clock::time_point started_;
};

std::vector<std::string> extensions_from(const std::vector<std::string>& ext_flags) {
  std::vector<std::string> exts{".js"};
  for (const std::string& flag : ext_flags) {
    std::stringstream ss(flag);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      if (item[0] != '.') item.insert(item.begin(), '.');
      bool known = item == ".js" || std::find(std::begin(miner::kOptionalExtensions),
                                              std::end(miner::kOptionalExtensions),
                                              item) != std::end(miner::kOptionalExtensions);
      if (!known) throw CLI::ValidationError("--ext", "unsupported extension " + item);
      if (std::find(exts.begin(), exts.end(), item) == exts.end()) exts.push_back(item);
    }
  }
  return exts;
}

std::string project_id_of(const fs::path& root) {
  fs::path canonical = fs::weakly_canonical(root);
  std::string name = canonical.filename().string();
  if (name.empty()) name = canonical.parent_path().filename().string();
  return name.empty() ? root.string() : name;
}

void print_diagnostics(std::ostream& err, const miner::MiningDiagnostics& d) {
  fmt::print(err, "scanned {} files, parsed {}, {} registrations, {} unresolved receivers\n", d.files_scanned,
             d.files_parsed, d.registrations, d.unresolved_receivers);
  for (const auto& f : d.parse_failures) fmt::print(err, "warning: {}:{}:{}: {}\n", f.file, f.line, f.column, f.message);
  for (const auto& f : d.read_failures) fmt::print(err, "warning: {}: {}\n", f.file, f.message);
}

// ---- commands ----

struct MineOptions {
  std::vector<std::string> roots;
  std::string out;
  std::vector<std::string> ext;
  unsigned jobs = 1;
};

int cmd_mine(const MineOptions& o, const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Manifest manifest("mine", args);
  miner::MiningOptions mo;
  mo.extensions = extensions_from(o.ext);
  mo.jobs = o.jobs;
  Output output(o.out, out);
  miner::MiningDiagnostics total;
  std::size_t records = 0;
  ordered_json projects = ordered_json::array();
  int status = kExitOk;
  for (const std::string& root : o.roots) {
    std::string project = project_id_of(root);
    try {
      miner::MiningResult r = miner::mine_project(root, project, mo);
      corpus::write_jsonl(output.stream(), r.occurrences);
      records += r.occurrences.size();
      total.merge(r.diagnostics);
      projects.push_back({{"root", root}, {"project", project}, {"occurrences", r.occurrences.size()}});
    } catch (const IoError& e) {
      fmt::print(err, "error: {}\n", e.what());
      projects.push_back({{"root", root}, {"project", project}, {"error", e.what()}});
      status = kExitError;
    }
  }
  output.close();
  print_diagnostics(err, total);
  fmt::print(err, "{} occurrence records\n", records);
  manifest["inputs"] = o.roots;
  manifest["extensions"] = mo.extensions;
  manifest["projects"] = projects;
  manifest["records"] = records;
  manifest["diagnostics"] = diagnostics_json(total);
  manifest.write(o.out);
  return status;
}

struct AggregateOptions {
  std::vector<std::string> inputs;
  std::string out;
};

int cmd_aggregate(const AggregateOptions& o, const std::vector<std::string>& args, std::ostream& out,
                  std::ostream& err) {
  Manifest manifest("aggregate", args);
  corpus::CountsIndex index;
  for (const std::string& in : o.inputs) index.merge(load_index(in));
  Output output(o.out, out);
  corpus::write_index_csv(output.stream(), index);
  output.close();
  corpus::CorpusSummary s = index.summary();
  fmt::print(err, "{} occurrences, {} unique pairs, {} packages\n", s.total_occurrences, s.unique_pairs, s.packages);
  manifest["inputs"] = o.inputs;
  manifest["summary"] = {{"packages", s.packages},
                         {"unique_pairs", s.unique_pairs},
                         {"total_occurrences", s.total_occurrences},
                         {"unique_paths", s.unique_paths},
                         {"unique_events", s.unique_events}};
  manifest.write(o.out);
  return kExitOk;
}

struct ClassifyOptions {
  std::string input;
  std::string config;
  std::string out;
};

int cmd_classify(const ClassifyOptions& o, const std::vector<std::string>& args, std::ostream& out,
                 std::ostream& err) {
  Manifest manifest("classify", args);
  classifier::Config config = o.config.empty() ? classifier::Config{} : classifier::parse_config(o.config);
  config.validate();
  corpus::CountsIndex index = load_index(o.input);
  classifier::Model model = classifier::classify_corpus(index, config);
  Output output(o.out, out);
  classifier::write_model_json(output.stream(), model);
  output.close();
  fmt::print(err, "{} pairs, {} anomalous under {}\n", model.pair_count(), model.anomalous_count(),
             classifier::to_string(config));
  manifest["inputs"] = {o.input};
  manifest["config"] = config_json(config);
  manifest["pairs"] = model.pair_count();
  manifest["anomalous"] = model.anomalous_count();
  manifest.write(o.out);
  return kExitOk;
}

struct CheckOptions {
  std::string root;
  std::string model;
  std::string suppress;
  std::string format = "text";
  std::string out;
  std::vector<std::string> ext;
  unsigned jobs = 1;
};

struct Finding {
  miner::PairOccurrence occurrence;
  std::string path;
  classifier::PairStatistics stats;
  double bcdf_path = 1;
  double bcdf_event = 1;
  bool long_path = false;
};

std::set<std::tuple<std::string, std::string, std::string>> load_suppressions(const std::string& file) {
  std::set<std::tuple<std::string, std::string, std::string>> out;
  if (file.empty()) return out;
  std::string text = read_file(file);
  std::istringstream in(text);
  corpus::csv::Reader reader(in, file);
  std::vector<std::string> row;
  if (!reader.next(row)) return out;
  if (row != std::vector<std::string>{"pkg", "path", "event"}) {
    throw corpus::FormatError(file, reader.line(), "expected header pkg,path,event");
  }
  while (reader.next(row)) {
    if (row.size() != 3) throw corpus::FormatError(file, reader.line(), "expected 3 fields");
    out.emplace(row[0], row[1], row[2]);
  }
  return out;
}

ordered_json findings_json(const std::vector<Finding>& findings, const std::string& project) {
  ordered_json arr = ordered_json::array();
  for (const Finding& f : findings) {
    ordered_json j;
    j["file"] = f.occurrence.location.file;
    j["line"] = f.occurrence.location.line;
    j["column"] = f.occurrence.location.column;
    j["pkg"] = f.occurrence.root_package;
    j["path"] = f.path;
    j["event"] = f.occurrence.event;
    j["k"] = f.stats.k;
    j["n_a"] = f.stats.n_a;
    j["n_e"] = f.stats.n_e;
    j["k_cum_path"] = f.stats.k_cum_path;
    j["k_cum_event"] = f.stats.k_cum_event;
    j["bcdf_path"] = f.bcdf_path;
    j["bcdf_event"] = f.bcdf_event;
    j["low_confidence"] = f.long_path;
    arr.push_back(std::move(j));
  }
  return {{"project", project}, {"findings", arr}};
}

int cmd_check(const CheckOptions& o, const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Manifest manifest("check", args);
  auto model_started = std::chrono::steady_clock::now();
  std::string model_text = read_file(o.model);
  std::istringstream model_in(model_text);
  classifier::Model model = classifier::read_model_json(model_in, o.model);
  auto suppressions = load_suppressions(o.suppress);

  miner::MiningOptions mo;
  mo.extensions = extensions_from(o.ext);
  mo.jobs = o.jobs;
  std::string project = project_id_of(o.root);
  auto mine_started = std::chrono::steady_clock::now();
  miner::MiningResult mined = miner::mine_project(o.root, project, mo);
  auto mine_finished = std::chrono::steady_clock::now();

  std::vector<Finding> findings;
  std::size_t suppressed = 0;
  for (const auto& occ : mined.occurrences) {
    std::string path = corpus::serialize_path(occ.path);
    classifier::Verdict verdict;
    const classifier::ModelEntry* e = model.find(path, occ.event, &verdict);
    if (!e || verdict != classifier::Verdict::Anomalous) continue;
    if (suppressions.contains({occ.root_package, path, occ.event})) {
      ++suppressed;
      continue;
    }
    findings.push_back(Finding{occ, path, e->classification.stats, e->classification.bcdf_path,
                               e->classification.bcdf_event, occ.path.length() >= kLongPathSteps});
  }

  if (o.format == "json") {
    out << findings_json(findings, project).dump(2) << '\n';
  } else {
    for (const Finding& f : findings) {
      fmt::print(out, "{}:{}:{}: dead listener? '{}' on {} (k={}, n_a={}, n_e={})", f.occurrence.location.file,
                 f.occurrence.location.line, f.occurrence.location.column, f.occurrence.event, f.path, f.stats.k,
                 f.stats.n_a, f.stats.n_e);
      if (f.long_path) out << " [low-confidence: long path]";
      out << '\n';
    }
    fmt::print(out, "{} finding{}\n", findings.size(), findings.size() == 1 ? "" : "s");
  }
  if (!o.out.empty()) {
    Output file(o.out, out);
    file.stream() << findings_json(findings, project).dump(2) << '\n';
    file.close();
  }
  if (!mined.diagnostics.parse_failures.empty() || !mined.diagnostics.read_failures.empty()) {
    print_diagnostics(err, mined.diagnostics);
  }

  manifest["inputs"] = {o.root, o.model};
  manifest["config"] = config_json(model.config);
  manifest["suppressed"] = suppressed;
  manifest["findings"] = findings.size();
  manifest["timing"] = {
      {"load_seconds", std::chrono::duration<double>(mine_started - model_started).count()},
      {"mine_seconds", std::chrono::duration<double>(mine_finished - mine_started).count()}};
  manifest["diagnostics"] = diagnostics_json(mined.diagnostics);
  manifest.write(o.out);
  return findings.empty() ? kExitOk : kExitFindings;
}

struct EvalOptions {
  std::string index;
  std::string labels;
  std::string mode = "score";
  std::string config;
  std::string grid;
  std::uint64_t seed = 1;
  std::size_t folds = 10;
  std::size_t iterations = 10;
  std::vector<double> percentages = eval::kStandardPercentages;
  double min_precision = 90.0;
  std::string out;
};

int cmd_eval(const EvalOptions& o, const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Manifest manifest("eval", args);
  eval::Grid grid = o.grid.empty() ? eval::Grid::standard() : eval::read_grid_file(o.grid);
  classifier::Config config = o.config.empty() ? classifier::Config{} : classifier::parse_config(o.config);
  corpus::CountsIndex index = load_index(o.index);
  std::vector<eval::LabeledPair> labels = eval::load_labels_file(o.labels);

  manifest["inputs"] = {o.index, o.labels};
  manifest["mode"] = o.mode;
  eval::ReportHeader header;
  header.kind = o.mode;
  header.extra.emplace_back("labels", std::to_string(labels.size()));

  Output output(o.out, out);
  if (o.mode == "score") {
    eval::Evaluator ev(index, labels);
    std::vector<eval::ConfigResult> rows{{config, ev.score(config)}};
    header.extra.emplace_back("config", classifier::to_string(config));
    eval::write_results_csv(output.stream(), header, rows);
    manifest["config"] = config_json(config);
    fmt::print(err, "precision {}%, recall {}%\n", eval::format_percent(rows[0].report.precision),
               eval::format_percent(rows[0].report.recall));
  } else if (o.mode == "sweep" || o.mode == "pareto") {
    std::vector<eval::ConfigResult> results = eval::sweep(index, labels, grid);
    header.grid = grid;
    manifest["grid"] = grid_json(grid);
    if (o.mode == "pareto") {
      auto front = eval::pareto_front(results);
      eval::write_results_csv(output.stream(), header, front);
      try {
        eval::ConfigResult best = eval::select_optimal(results, o.min_precision);
        fmt::print(err, "optimal {}: precision {}%, recall {}%\n", classifier::to_string(best.config),
                   eval::format_percent(best.report.precision), eval::format_percent(best.report.recall));
        manifest["optimal"] = config_json(best.config);
      } catch (const eval::NoQualifyingConfig& e) {
        fmt::print(err, "{}\n", e.what());
      }
    } else {
      eval::write_results_csv(output.stream(), header, results);
    }
  } else if (o.mode == "cv") {
    header.seed = o.seed;
    header.grid = grid;
    auto report = eval::cross_validate(index, labels, o.folds, o.seed, grid, o.min_precision);
    eval::write_cross_validation_csv(output.stream(), header, report);
    manifest["seed"] = o.seed;
    manifest["generator"] = std::string(eval::SeededShuffler::kName);
    manifest["grid"] = grid_json(grid);
  } else if (o.mode == "subset") {
    header.seed = o.seed;
    header.grid = grid;
    auto report = eval::subset_experiment(index, labels, o.percentages, o.iterations, o.seed, grid, o.min_precision);
    eval::write_subset_csv(output.stream(), header, report);
    manifest["seed"] = o.seed;
    manifest["generator"] = std::string(eval::SeededShuffler::kName);
    manifest["grid"] = grid_json(grid);
  }
  output.close();
  manifest.write(o.out);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mines listener registrations from JavaScript and flags likely dead listeners."};
  app.name("deadlisten");
  app.require_subcommand(1);
  app.set_version_flag("--version", DEADLISTEN_VERSION);

  MineOptions mine;
  auto* mine_cmd = app.add_subcommand("mine", "Mine listener-registration pairs from project directories");
  mine_cmd->add_option("paths", mine.roots, "Project root directories")->required();
  mine_cmd->add_option("--out", mine.out, "Occurrence JSONL output (default stdout)");
  mine_cmd->add_option("--ext", mine.ext, "Extra extensions: jsx,mjs,cjs");
  mine_cmd->add_option("--jobs", mine.jobs, "Worker threads")->check(CLI::PositiveNumber);

  AggregateOptions agg;
  auto* agg_cmd = app.add_subcommand("aggregate", "Aggregate occurrence JSONL into a counts CSV");
  agg_cmd->add_option("inputs", agg.inputs, "Occurrence JSONL or counts CSV files")->required();
  agg_cmd->add_option("--out", agg.out, "Counts CSV output (default stdout)");

  ClassifyOptions cls;
  auto* cls_cmd = app.add_subcommand("classify", "Classify every pair of a corpus");
  cls_cmd->add_option("input", cls.input, "Occurrence JSONL or counts CSV")->required();
  cls_cmd->add_option("--config", cls.config, "p_a,p_e,p_ca,p_ce (default 0.1,0.1,0.03,0.01)");
  cls_cmd->add_option("--out", cls.out, "Model JSON output (default stdout)");

  CheckOptions chk;
  auto* chk_cmd = app.add_subcommand("check", "Report registrations of anomalous pairs in a project");
  chk_cmd->add_option("project", chk.root, "Project root directory")->required();
  chk_cmd->add_option("--model", chk.model, "Model JSON from classify")->required();
  chk_cmd->add_option("--suppress", chk.suppress, "CSV pkg,path,event of pairs to ignore");
  chk_cmd->add_option("--format", chk.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  chk_cmd->add_option("--out", chk.out, "Also write findings as JSON to this file");
  chk_cmd->add_option("--ext", chk.ext, "Extra extensions: jsx,mjs,cjs");
  chk_cmd->add_option("--jobs", chk.jobs, "Worker threads")->check(CLI::PositiveNumber);

  EvalOptions ev;
  auto* ev_cmd = app.add_subcommand("eval", "Score models against labels and run experiments");
  ev_cmd->add_option("--index", ev.index, "Occurrence JSONL or counts CSV")->required();
  ev_cmd->add_option("--labels", ev.labels, "Labels CSV pkg,path,event,label")->required();
  ev_cmd->add_option("--mode", ev.mode, "score, sweep, pareto, cv or subset")
      ->check(CLI::IsMember({"score", "sweep", "pareto", "cv", "subset"}));
  ev_cmd->add_option("--config", ev.config, "p_a,p_e,p_ca,p_ce for score mode");
  ev_cmd->add_option("--grid", ev.grid, "Grid JSON file");
  ev_cmd->add_option("--seed", ev.seed, "Random seed for cv and subset");
  ev_cmd->add_option("--folds", ev.folds, "Cross-validation folds");
  ev_cmd->add_option("--iterations", ev.iterations, "Subset iterations per percentage");
  ev_cmd->add_option("--percentages", ev.percentages, "Subset percentages")->delimiter(',');
  ev_cmd->add_option("--min-precision", ev.min_precision, "Precision floor for optimal configs (%)");
  ev_cmd->add_option("--out", ev.out, "Report CSV output (default stdout)");

  std::vector<const char*> argv{"deadlisten"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    out << DEADLISTEN_VERSION << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }

  try {
    if (mine_cmd->parsed()) return cmd_mine(mine, args, out, err);
    if (agg_cmd->parsed()) return cmd_aggregate(agg, args, out, err);
    if (cls_cmd->parsed()) return cmd_classify(cls, args, out, err);
    if (chk_cmd->parsed()) return cmd_check(chk, args, out, err);
    if (ev_cmd->parsed()) return cmd_eval(ev, args, out, err);
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace deadlisten::cli
