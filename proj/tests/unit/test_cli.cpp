#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "deadlisten/cli/cli.hpp"
#include "deadlisten/corpus/counts_index.hpp"
#include "deadlisten/eval/labels.hpp"
#include "fixtures.hpp"

using namespace deadlisten;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / fs::path("deadlisten-cli-" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

const std::string kHttpProject = std::string(DEADLISTEN_FIXTURES) + "/http_request";

std::string write_http_model(const TempDir& tmp) {
  {
    std::ofstream f(tmp / "index.csv");
    corpus::write_index_csv(f, testing::http_counts_index());
  }
  Run r = run_cli({"classify", tmp / "index.csv", "--config", "0.1,0.1,0.03,0.01", "--out", tmp / "model.json"});
  REQUIRE(r.code == 0);
  return tmp / "model.json";
}

}  // namespace

TEST_CASE("mine writes records and a manifest") {
  TempDir tmp;
  Run r = run_cli({"mine", kHttpProject, "--out", tmp / "pairs.jsonl"});
  CHECK(r.code == 0);
  std::istringstream lines(slurp(tmp / "pairs.jsonl"));
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) n += !line.empty();
  CHECK(n == 3);
  auto manifest = nlohmann::json::parse(slurp(tmp / "pairs.jsonl.manifest.json"));
  CHECK(manifest["command"] == "mine");
  CHECK(manifest["records"] == 3);
  CHECK(manifest.contains("tool_version"));
  CHECK(manifest.contains("diagnostics"));
}

TEST_CASE("mine on an empty directory and on a missing one") {
  TempDir tmp;
  fs::create_directories(tmp.path / "empty");
  Run r = run_cli({"mine", tmp / "empty"});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  Run missing = run_cli({"mine", tmp / "nope"});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("error") != std::string::npos);
}

TEST_CASE("classify flags the timeout pair") {
  TempDir tmp;
  std::string model = write_http_model(tmp);
  auto j = nlohmann::json::parse(slurp(model));
  auto& anomalous = j["packages"]["http"]["anomalous"];
  REQUIRE(anomalous.size() == 1);
  CHECK(anomalous[0]["path"] == testing::kResponsePath);
  CHECK(anomalous[0]["event"] == "timeout");
}

TEST_CASE("classify edge cases") {
  TempDir tmp;
  { std::ofstream(tmp / "empty.jsonl"); }
  Run empty = run_cli({"classify", tmp / "empty.jsonl"});
  CHECK(empty.code == 0);
  CHECK(nlohmann::json::parse(empty.out)["packages"].empty());
  Run bad = run_cli({"classify", tmp / "empty.jsonl", "--config", "1.5,0.1,0.1,0.1"});
  CHECK(bad.code == 2);
  Run missing = run_cli({"classify", tmp / "absent.csv"});
  CHECK(missing.code == 2);
}

TEST_CASE("check reports the dead listener") {
  TempDir tmp;
  std::string model = write_http_model(tmp);
  Run r = run_cli({"check", kHttpProject, "--model", model, "--out", tmp / "findings.json"});
  CHECK(r.code == 1);
  CHECK(r.out.find("index.js:10:") != std::string::npos);
  CHECK(r.out.find("timeout") != std::string::npos);
  CHECK(r.out.find("1 finding\n") != std::string::npos);
  auto findings = nlohmann::json::parse(slurp(tmp / "findings.json"))["findings"];
  REQUIRE(findings.size() == 1);
  CHECK(findings[0]["line"] == testing::kTimeoutLine);

  Run json = run_cli({"check", kHttpProject, "--model", model, "--format", "json"});
  CHECK(json.code == 1);
  CHECK(nlohmann::json::parse(json.out)["findings"].size() == 1);
}

TEST_CASE("check without findings and with suppression") {
  TempDir tmp;
  std::string model = write_http_model(tmp);
  fs::create_directories(tmp.path / "clean");
  {
    std::ofstream f(tmp / "clean/index.js");
    f << "const http = require('http');\n"
         "http.request('u', res => { res.on('data', () => {}); res.on('end', () => {}); });\n";
  }
  CHECK(run_cli({"check", tmp / "clean", "--model", model}).code == 0);
  {
    std::ofstream f(tmp / "suppress.csv");
    f << "pkg,path,event\nhttp," << testing::kResponsePath << ",timeout\n";
  }
  Run r = run_cli({"check", kHttpProject, "--model", model, "--suppress", tmp / "suppress.csv"});
  CHECK(r.code == 0);
  CHECK(r.out.find("0 findings") != std::string::npos);
}

TEST_CASE("long paths carry a low-confidence note") {
  TempDir tmp;
  corpus::CountsIndex index;
  const char* path = "require(m).a().b().c";
  index.add(path, "main", 1000);
  index.add(path, "rare", 1);
  index.add("require(m).z", "rare", 300);
  {
    std::ofstream f(tmp / "index.csv");
    corpus::write_index_csv(f, index);
  }
  REQUIRE(run_cli({"classify", tmp / "index.csv", "--out", tmp / "model.json"}).code == 0);
  fs::create_directories(tmp.path / "proj");
  {
    std::ofstream f(tmp / "proj/index.js");
    f << "require('m').a().b().c.on('rare', () => {});\n";
  }
  Run r = run_cli({"check", tmp / "proj", "--model", tmp / "model.json"});
  CHECK(r.code == 1);
  CHECK(r.out.find("low-confidence: long path") != std::string::npos);
}

TEST_CASE("eval modes") {
  TempDir tmp;
  auto c = testing::threshold_corpus();
  {
    std::ofstream f(tmp / "index.csv");
    corpus::write_index_csv(f, c.index);
    std::ofstream l(tmp / "labels.csv");
    eval::write_labels(l, c.labels);
  }
  Run score = run_cli({"eval", "--index", tmp / "index.csv", "--labels", tmp / "labels.csv", "--mode", "score",
                       "--config", "0.1,0.1,0.03,0.01"});
  CHECK(score.code == 0);
  CHECK(score.out.find("0.1,0.1,0.03,0.01,90.909,7.500,30,3,1,370,400,75,") != std::string::npos);

  Run sweep = run_cli({"eval", "--index", tmp / "index.csv", "--labels", tmp / "labels.csv", "--mode", "sweep",
                       "--out", tmp / "sweep.csv"});
  CHECK(sweep.code == 0);
  std::istringstream rows(slurp(tmp / "sweep.csv"));
  std::string line;
  int data_rows = 0;
  while (std::getline(rows, line)) {
    if (!line.empty() && line[0] != '#') ++data_rows;
  }
  CHECK(data_rows == 4096 + 1);
  CHECK(fs::exists(tmp / "sweep.csv.manifest.json"));

  std::vector<std::string> cv{"eval", "--index", tmp / "index.csv", "--labels", tmp / "labels.csv",
                              "--mode", "cv",     "--seed",          "7",      "--folds", "3"};
  Run a = run_cli(cv);
  Run b = run_cli(cv);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("# seed: 7") != std::string::npos);

  CHECK(run_cli({"eval", "--index", tmp / "index.csv", "--labels", tmp / "labels.csv", "--mode", "bogus"}).code == 2);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"frobnicate"}).code == 2);
  CHECK(run_cli({"mine", "x", "--ext", "ts"}).code == 2);
  CHECK(run_cli({"--help"}).code == 0);
}
