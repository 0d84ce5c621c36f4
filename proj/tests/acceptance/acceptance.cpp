// Prints one PASS/FAIL line per acceptance criterion; exits non-zero on any
// failure.
#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "deadlisten/classifier/bcdf.hpp"
#include "deadlisten/classifier/classify.hpp"
#include "deadlisten/cli/cli.hpp"
#include "deadlisten/corpus/counts_index.hpp"
#include "deadlisten/corpus/path_codec.hpp"
#include "deadlisten/eval/experiments.hpp"
#include "deadlisten/eval/reports.hpp"
#include "deadlisten/eval/sweep.hpp"
#include "deadlisten/miner/def_use.hpp"
#include "deadlisten/miner/mine.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace deadlisten;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fixture(const std::string& name) { return std::string(DEADLISTEN_FIXTURES) + "/" + name; }

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Outcome bcdf_fidelity() {
  Outcome o;
  auto start = Clock::now();
  double a = classifier::bcdf(2, 216, 0.05);
  double b = classifier::bcdf(1, 522, 0.01);
  double c = classifier::bcdf(519, 522, 0.01);
  double elapsed = seconds_since(start);
  o.expect(a >= 0.0005 && a <= 0.002, fmt::format("bcdf(2,216,0.05)={}", a));
  o.expect(b >= 0.025 && b <= 0.035, fmt::format("bcdf(1,522,0.01)={}", b));
  o.expect(c > 0.999, fmt::format("bcdf(519,522,0.01)={}", c));
  o.expect(elapsed < 1.0, fmt::format("took {:.3f}s", elapsed));
  if (o.pass) o.detail = fmt::format("{:.6g}, {:.6g}, {:.6g} in {:.2g}s", a, b, c, elapsed);
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<std::uint64_t> n_dist(1, 200);
  std::uniform_real_distribution<double> p_dist(0.0, 1.0);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    std::uint64_t n = n_dist(rng);
    std::uint64_t k = std::uniform_int_distribution<std::uint64_t>(0, n)(rng);
    double p = p_dist(rng);
    double diff = std::abs(classifier::bcdf(k, n, p) - testing::oracle_bcdf(k, n, p));
    worst = std::max(worst, diff);
    o.expect(diff <= 1e-9, fmt::format("k={} n={} p={} diff={}", k, n, p, diff));
  }
  if (o.pass) o.detail = fmt::format("1000 samples, max |diff| {:.3g}", worst);
  return o;
}

std::vector<std::string> pair_multiset(const std::string& project) {
  std::vector<std::string> out;
  for (const auto& occ : miner::mine_project(fixture(project), project).occurrences) {
    out.push_back(corpus::serialize_path(occ.path) + " " + occ.event);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Resolved paths of the n-th occurrence of identifier `name`.
std::vector<std::string> resolve_nth(const miner::SyntaxTree& tree, miner::DefUseAnalysis& analysis,
                                     const std::string& name, int nth) {
  for (miner::NodeId id : tree.preorder()) {
    if (tree.kind(id) != miner::NodeKind::Identifier || tree.node(id).text != name || nth-- > 0) continue;
    std::vector<std::string> out;
    for (const auto& p : analysis.resolve(id)) out.push_back(corpus::serialize_path(p));
    return out;
  }
  return {};
}

Outcome miner_golden() {
  Outcome o;
  std::vector<std::string> expected{"require(http).request(1)(0) data", "require(http).request(1)(0) end",
                                    "require(http).request(1)(0) timeout"};
  auto plain = pair_multiset("http_request");
  o.expect(plain == expected, fmt::format("request fixture pairs: {}", fmt::join(plain, ", ")));
  auto chained = pair_multiset("http_request_chained");
  o.expect(chained == plain, fmt::format("chained pairs: {}", fmt::join(chained, ", ")));

  miner::SyntaxTree tree = miner::parse_source(read_file(fixture("http_request") + "/index.js"), "index.js");
  miner::DefUseAnalysis analysis(tree);
  auto res = resolve_nth(tree, analysis, "res", 1);
  auto req = resolve_nth(tree, analysis, "req", 2);
  o.expect(res == std::vector<std::string>{"require(http).request(1)(0)"}, fmt::format("res -> {}", fmt::join(res, ",")));
  o.expect(req == std::vector<std::string>{"require(http).request()"}, fmt::format("req -> {}", fmt::join(req, ",")));
  if (o.pass) o.detail = "3 pairs; res and req resolved; chained variant identical";
  return o;
}

Outcome refinement_doge() {
  Outcome o;
  corpus::CountsIndex index = testing::doge_index();
  std::vector<eval::LabeledPair> labels;
  for (const std::string& path : testing::doge_single_paths()) {
    labels.push_back({testing::kDogePackage, path, "doge", eval::Label::Correct});
  }
  eval::Evaluator evaluator(index, labels);
  std::vector<classifier::Config> configs;
  for (const auto& c : eval::Grid::standard().configs()) {
    if (c.p_ca < 1) configs.push_back(c);
  }
  auto table = evaluator.verdict_table(configs);
  std::size_t flagged = 0;
  for (std::size_t c = 0; c < configs.size(); ++c) {
    for (classifier::Verdict v : table[c]) flagged += v == classifier::Verdict::Anomalous;
  }
  o.expect(index.summary().total_occurrences - 50 * 520 == 522, "fixture does not hold 522 doge occurrences");
  o.expect(flagged == 0, fmt::format("{} anomalous verdicts on count-1 paths", flagged));
  if (o.pass) o.detail = fmt::format("519 paths x {} configs, none anomalous", configs.size());
  return o;
}

struct TempDir {
  fs::path path = fs::temp_directory_path() / fmt::format("deadlisten-acceptance-{}", std::random_device{}());
  TempDir() { fs::create_directories(path); }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

Outcome end_to_end() {
  Outcome o;
  TempDir tmp;
  auto start = Clock::now();
  {
    std::ofstream f(tmp.file("index.csv"));
    corpus::write_index_csv(f, testing::http_counts_index());
  }
  std::ostringstream out, err;
  int code = cli::run({"classify", tmp.file("index.csv"), "--config", "0.1,0.1,0.03,0.01", "--out", tmp.file("model.json")},
                      out, err);
  o.expect(code == 0, fmt::format("classify exit {}: {}", code, err.str()));
  auto model = nlohmann::json::parse(read_file(tmp.file("model.json")));
  auto anomalous = model["packages"]["http"]["anomalous"];
  bool timeout = false;
  for (const auto& e : anomalous) {
    if (e["path"] != testing::kResponsePath) continue;
    if (e["event"] == "timeout") timeout = true;
    if (e["event"] == "data" || e["event"] == "end") o.expect(false, fmt::format("{} marked anomalous", e["event"].get<std::string>()));
  }
  o.expect(timeout, "timeout pair not anomalous");

  std::ostringstream check_out, check_err;
  code = cli::run({"check", fixture("http_request"), "--model", tmp.file("model.json"), "--format", "json"}, check_out, check_err);
  o.expect(code == cli::kExitFindings, fmt::format("check exit {}", code));
  auto findings = nlohmann::json::parse(check_out.str())["findings"];
  o.expect(findings.size() == 1, fmt::format("{} findings", findings.size()));
  if (findings.size() == 1) {
    o.expect(findings[0]["line"] == testing::kTimeoutLine && findings[0]["event"] == "timeout",
             fmt::format("finding at line {}", findings[0]["line"].dump()));
  }
  double elapsed = seconds_since(start);
  o.expect(elapsed < 5.0, fmt::format("took {:.2f}s", elapsed));
  if (o.pass) o.detail = fmt::format("timeout flagged; 1 finding at line {}, exit 1, {:.2f}s", testing::kTimeoutLine, elapsed);
  return o;
}

Outcome scoring_arithmetic() {
  Outcome o;
  auto corpus = testing::threshold_corpus();
  eval::Evaluator evaluator(corpus.index, corpus.labels);
  eval::ScoreReport r = evaluator.score(classifier::Config{0.1, 0.1, 0.03, 0.01});
  o.expect(r.true_positives == 30 && r.false_positives == 3,
           fmt::format("TP {} FP {}", r.true_positives, r.false_positives));
  o.expect(r.precision && std::abs(*r.precision - 90.9) <= 0.05, fmt::format("precision {}", eval::format_percent(r.precision)));

  auto results = eval::sweep(evaluator, eval::Grid::standard());
  std::ostringstream csv;
  eval::write_results_csv(csv, eval::ReportHeader{"sweep", std::nullopt, eval::Grid::standard(), {}}, results);
  std::istringstream lines(csv.str());
  std::string line;
  std::size_t rows = 0;
  while (std::getline(lines, line)) rows += !line.empty() && line[0] != '#';
  o.expect(rows == 4096 + 1, fmt::format("{} sweep rows", rows - 1));

  auto published = testing::reference_rows();
  auto front = eval::pareto_front(published);
  for (const auto& a : front) {
    for (const auto& b : published) {
      bool ge = *b.report.precision >= *a.report.precision && *b.report.recall >= *a.report.recall;
      bool gt = *b.report.precision > *a.report.precision || *b.report.recall > *a.report.recall;
      o.expect(!(ge && gt), fmt::format("front row {} dominated", classifier::to_string(a.config)));
    }
  }
  o.expect(!front.empty(), "empty front");
  auto best = eval::select_optimal(published, 90).config;
  o.expect(best == classifier::Config{0.1, 0.1, 0.03, 0.01}, fmt::format("optimal {}", classifier::to_string(best)));
  if (o.pass) {
    o.detail = fmt::format("precision {}%, 4096 sweep rows, front of {}, optimal {}", eval::format_percent(r.precision),
                           front.size(), classifier::to_string(best));
  }
  return o;
}

Outcome determinism() {
  Outcome o;
  auto corpus = testing::threshold_corpus();
  auto cv = [&] {
    std::ostringstream out;
    eval::ReportHeader h{"cv", 7, eval::Grid::standard(), {}};
    eval::write_cross_validation_csv(out, h, eval::cross_validate(corpus.index, corpus.labels, 10, 7));
    return out.str();
  };
  auto subset = [&] {
    std::ostringstream out;
    eval::ReportHeader h{"subset", 7, eval::Grid::standard(), {}};
    eval::write_subset_csv(out, h, eval::subset_experiment(corpus.index, corpus.labels, eval::kStandardPercentages, 2, 7));
    return out.str();
  };
  o.expect(cv() == cv(), "cross-validation reports differ");
  o.expect(subset() == subset(), "subset reports differ");

  std::mt19937_64 rng(99);
  auto records = testing::random_records(rng, 20, 15);
  corpus::CountsIndex reference = corpus::aggregate(records);
  for (int i = 0; i < 5; ++i) {
    std::shuffle(records.begin(), records.end(), rng);
    o.expect(corpus::aggregate(records) == reference, "shuffled aggregation differs");
  }
  if (o.pass) o.detail = fmt::format("cv and subset reports byte-identical; {} records aggregated in 5 orders", records.size());
  return o;
}

Outcome property_suites() {
  Outcome o;
  std::string command = fmt::format("\"{}\" --no-intro --minimal", DEADLISTEN_PROPERTY_TESTS);
  int status = std::system(command.c_str());
  o.expect(status == 0, fmt::format("property suite exit status {}", status));
  if (o.pass) o.detail = "round trip, rewrite idempotence, partition, refinement shrinkage, count consistency";
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"bcdf fidelity", bcdf_fidelity},
      {"oracle equivalence", oracle_equivalence},
      {"miner golden test", miner_golden},
      {"refinement behavior", refinement_doge},
      {"end-to-end dead-listener detection", end_to_end},
      {"scoring arithmetic", scoring_arithmetic},
      {"determinism", determinism},
      {"property suites", property_suites},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = fmt::format("exception: {}", e.what());
    }
    failures += !o.pass;
    std::cout << fmt::format("{} {}: {}", o.pass ? "PASS" : "FAIL", name, o.detail) << std::endl;
  }
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
