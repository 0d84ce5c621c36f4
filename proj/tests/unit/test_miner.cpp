#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "deadlisten/corpus/path_codec.hpp"
#include "deadlisten/miner/def_use.hpp"
#include "deadlisten/miner/mine.hpp"
#include "deadlisten/miner/registrations.hpp"

using namespace deadlisten;
using namespace deadlisten::miner;

namespace {

std::string read_fixture(const std::string& name) {
  std::ifstream in(std::string(DEADLISTEN_FIXTURES) + "/" + name + "/index.js");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// "path event" for every mined occurrence, in output order.
std::vector<std::string> mined(std::string_view source) {
  std::vector<std::string> out;
  for (const auto& o : mine_source(source, "t.js", "p").occurrences) {
    out.push_back(corpus::serialize_path(o.path) + " " + o.event);
  }
  return out;
}

// Paths of the first identifier named `name` that is not a declaration.
std::vector<std::string> resolve_identifier(const std::string& source, const std::string& name, int skip = 0) {
  SyntaxTree tree = parse_source(source, "t.js");
  DefUseAnalysis analysis(tree);
  for (NodeId id : tree.preorder()) {
    if (tree.kind(id) != NodeKind::Identifier || tree.node(id).text != name) continue;
    if (skip-- > 0) continue;
    std::vector<std::string> out;
    for (const AccessPath& p : analysis.resolve(id)) out.push_back(corpus::serialize_path(p));
    std::sort(out.begin(), out.end());
    return out;
  }
  return {};
}

}  // namespace

TEST_CASE("request fixture yields the three listener pairs") {
  MiningResult r = mine_source(read_fixture("http_request"), "index.js", "http_request");
  REQUIRE(r.occurrences.size() == 3);
  const char* events[] = {"data", "end", "timeout"};
  const std::uint32_t lines[] = {5, 6, 10};
  for (int i = 0; i < 3; ++i) {
    CHECK(corpus::serialize_path(r.occurrences[i].path) == "require(http).request(1)(0)");
    CHECK(r.occurrences[i].event == events[i]);
    CHECK(r.occurrences[i].root_package == "http");
    CHECK(r.occurrences[i].location.line == lines[i]);
    CHECK(r.occurrences[i].project_id == "http_request");
  }
  CHECK(r.diagnostics.registrations == 3);
  CHECK(r.diagnostics.unresolved_receivers == 0);
}

TEST_CASE("request fixture receivers resolve to response and request paths") {
  std::string src = read_fixture("http_request");
  // first `res` is the arrow parameter, the second its use in res.on
  CHECK(resolve_identifier(src, "res", 1) == std::vector<std::string>{"require(http).request(1)(0)"});
  // first `req` is the declaration, the next reject(req), then req.end()
  CHECK(resolve_identifier(src, "req", 2) == std::vector<std::string>{"require(http).request()"});
}

TEST_CASE("chained registrations alias their receiver") {
  auto plain = mined(read_fixture("http_request"));
  auto chained = mined(read_fixture("http_request_chained"));
  std::sort(plain.begin(), plain.end());
  std::sort(chained.begin(), chained.end());
  CHECK(plain == chained);
}

TEST_CASE("import forms map to require paths") {
  CHECK(mined("import ws from 'ws'; ws.on('open', () => {});") == std::vector<std::string>{"require(ws) open"});
  CHECK(mined("import * as ws from 'ws'; ws.on('open', () => {});") == std::vector<std::string>{"require(ws) open"});
  CHECK(mined("import { Server } from 'ws'; new Server().on('connection', () => {});") ==
        std::vector<std::string>{"require(ws).Server[new]() connection"});
  CHECK(mined("const fs = require('node:fs'); fs.watch('x').on('change', function () {});") ==
        std::vector<std::string>{"require(fs).watch() change"});
}

TEST_CASE("process is a package when not shadowed") {
  CHECK(mined("process.on('exit', () => {});") == std::vector<std::string>{"require(process) exit"});
  CHECK(mined("function f(process) { process.on('exit', () => {}); }").empty());
}

TEST_CASE("unresolvable receivers produce no pairs") {
  CHECK(mined("require('./local').on('a', () => {});").empty());
  CHECK(mined("const m = require('m'); m[key].on('a', () => {});").empty());
  CHECK(mined("emitter.on('a', () => {});").empty());
  MiningResult r = mine_source("emitter.on('a', () => {});", "t.js", "p");
  CHECK(r.diagnostics.registrations == 1);
  CHECK(r.diagnostics.unresolved_receivers == 1);
}

TEST_CASE("registration needs a constant event and a function callback") {
  CHECK(mined("const e = require('e'); e.on(name, () => {});").empty());
  CHECK(mined("const e = require('e'); e.on('a', 42);").empty());
  CHECK(mined("const e = require('e'); e.emit('a', () => {});").empty());
  CHECK(mined("const e = require('e'); function h() {} e.once('a', h);") == std::vector<std::string>{"require(e) a"});
  CHECK(mined("const e = require('e'); e.prependListener(`a`, () => {});") ==
        std::vector<std::string>{"require(e) a"});
}

TEST_CASE("callback parameters follow call sites") {
  auto got = mined(
      "const net = require('net');\n"
      "function attach(sock) { sock.on('data', () => {}); }\n"
      "net.createServer(s => attach(s));\n");
  CHECK(got == std::vector<std::string>{"require(net).createServer(0)(0) data"});
}

TEST_CASE("syntax errors are recorded, not thrown") {
  MiningResult r = mine_source("const = ;", "bad.js", "p");
  CHECK(r.occurrences.empty());
  REQUIRE(r.diagnostics.parse_failures.size() == 1);
  CHECK(r.diagnostics.parse_failures[0].file == "bad.js");
  CHECK(r.diagnostics.files_parsed == 0);
}

TEST_CASE("deep nesting fails cleanly") {
  std::string deep(5000, '(');
  deep += "1" + std::string(5000, ')') + ";";
  MiningResult r = mine_source(deep, "deep.js", "p");
  CHECK(r.diagnostics.parse_failures.size() == 1);
}

TEST_CASE("chained alias rewrite") {
  AccessPath base("x");
  AccessPath p = base.property("on").call().property("once").call();
  CHECK(rewrite_chained_aliases(p) == base);
  AccessPath inner = base.property("get").call().property("on").call().property("q");
  CHECK(rewrite_chained_aliases(inner) == base.property("get").call().property("q"));
  CHECK(rewrite_chained_aliases(rewrite_chained_aliases(inner)) == rewrite_chained_aliases(inner));
  AccessPath not_alias = base.property("on").argument(1);
  CHECK(rewrite_chained_aliases(not_alias) == not_alias);
}

TEST_CASE("mine_project walks a directory") {
  MiningResult r = mine_project(std::string(DEADLISTEN_FIXTURES) + "/http_request", "http_request");
  REQUIRE(r.occurrences.size() == 3);
  CHECK(r.occurrences[0].location.file == "index.js");
  CHECK_THROWS_AS(mine_project("/nonexistent/dir", "x"), IoError);
}
