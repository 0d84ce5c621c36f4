#include <doctest.h>

#include <sstream>

#include "deadlisten/corpus/counts_index.hpp"
#include "deadlisten/corpus/csv.hpp"
#include "deadlisten/corpus/occurrences.hpp"
#include "deadlisten/corpus/path_codec.hpp"
#include "fixtures.hpp"

using namespace deadlisten;
using namespace deadlisten::corpus;

TEST_CASE("path serialization") {
  miner::AccessPath p("http");
  CHECK(serialize_path(p) == "require(http)");
  CHECK(serialize_path(p.property("request").argument(1).argument(0)) == "require(http).request(1)(0)");
  CHECK(serialize_path(p.property("Agent").instance().call()) == "require(http).Agent[new]()()");
  CHECK(serialize_path(miner::AccessPath("@scope/pkg").call()) == "require(@scope/pkg)()");
  for (const char* text : {"require(http)", "require(a).b.c()(12)[new]()", "require(@s/x).$y(0)"}) {
    CHECK(serialize_path(parse_path(text)) == text);
  }
}

TEST_CASE("malformed paths are rejected") {
  for (const char* text : {"", "http.get", "require()", "require(./x)", "require(a).", "require(a)(01)", "require(a).1b",
                           "require(a)[new]", "require(a)(", "require(a) "}) {
    CAPTURE(text);
    CHECK_THROWS_AS(parse_path(text), PathSyntaxError);
  }
  CHECK(root_package_of("require(ws).Server[new]()") == "ws");
}

TEST_CASE("csv escaping and reading") {
  CHECK(csv::escape("plain") == "plain");
  CHECK(csv::escape("a,b") == "\"a,b\"");
  CHECK(csv::escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
  std::istringstream in("# comment\nx,\"y,z\"\n\n\"multi\nline\",2\n");
  csv::Reader reader(in, "t.csv");
  std::vector<std::string> row;
  REQUIRE(reader.next(row));
  CHECK(row == std::vector<std::string>{"x", "y,z"});
  CHECK(reader.line() == 2);
  REQUIRE(reader.next(row));
  CHECK(row == std::vector<std::string>{"multi\nline", "2"});
  CHECK_FALSE(reader.next(row));
  std::istringstream bad("\"open\n");
  csv::Reader bad_reader(bad, "bad.csv");
  CHECK_THROWS_AS(bad_reader.next(row), FormatError);
}

TEST_CASE("occurrence jsonl round trip and validation") {
  OccurrenceRecord r{"require(http).request(1)(0)", "data", "http", "p1", "src/a.js", 5};
  std::ostringstream out;
  write_jsonl(out, r);
  CHECK(out.str() ==
        "{\"path\":\"require(http).request(1)(0)\",\"event\":\"data\",\"pkg\":\"http\",\"project\":\"p1\","
        "\"file\":\"src/a.js\",\"line\":5}\n");
  std::istringstream in(out.str() + "\n" + out.str());
  auto back = read_jsonl(in, "t.jsonl");
  REQUIRE(back.size() == 2);
  CHECK(back[0] == r);
  for (const char* bad : {"not json", "{\"path\":\"require(x)\"}",
                          "{\"path\":\"require(x)\",\"event\":\"e\",\"pkg\":\"y\",\"project\":\"p\",\"file\":\"f\",\"line\":1}",
                          "{\"path\":\"x.y\",\"event\":\"e\",\"pkg\":\"x\",\"project\":\"p\",\"file\":\"f\",\"line\":1}"}) {
    CAPTURE(bad);
    std::istringstream b(bad);
    CHECK_THROWS_AS(read_jsonl(b, "b.jsonl"), FormatError);
  }
}

TEST_CASE("counts index totals and cumulative counts") {
  CountsIndex index = testing::http_counts_index();
  const std::string res = testing::kResponsePath;
  CHECK(index.count(res, "data") == 996);
  CHECK(index.count(res, "missing") == 0);
  CHECK(index.path_total(res) == 1895);
  CHECK(index.event_total({"http", "timeout"}) == 216);
  CHECK(index.cumulative_count_for_event(res, "timeout") == 1);
  CHECK(index.cumulative_count_for_event(res, "end") == 899);
  CHECK(index.cumulative_count_for_event(res, "data") == 1895);
  CHECK(index.cumulative_count_for_path(res, "timeout") == 1);
  CHECK(index.cumulative_count_for_path(testing::kRequestPath, "timeout") == 216);
  CHECK_THROWS_AS(index.cumulative_count_for_path(res, "close"), MissingPair);
  CorpusSummary s = index.summary();
  CHECK(s.packages == 1);
  CHECK(s.unique_pairs == 4);
  CHECK(s.total_occurrences == 2110);
  CHECK_FALSE(index.has_project_info());
  CHECK_THROWS_AS(index.add(res, "data", 0), DomainError);
}

TEST_CASE("counts are kept per root package") {
  CountsIndex index;
  index.add("require(a).x", "e", 3);
  index.add("require(b).x", "e", 4);
  CHECK(index.event_total({"a", "e"}) == 3);
  CHECK(index.event_total({"b", "e"}) == 4);
  CHECK(index.cumulative_count_for_path("require(a).x", "e") == 3);
}

TEST_CASE("project information") {
  CountsIndex index;
  index.add(OccurrenceRecord{"require(a).x", "e", "a", "p1", "f", 1});
  index.add(OccurrenceRecord{"require(a).x", "e", "a", "p2", "f", 2});
  index.add(OccurrenceRecord{"require(a).x", "e", "a", "p1", "g", 3});
  CHECK(index.has_project_info());
  CHECK(index.project_count("require(a).x", "e") == 2u);
  index.add("require(a).y", "e", 1);
  CHECK_FALSE(index.has_project_info());
  CHECK_FALSE(index.project_count("require(a).x", "e").has_value());
}

TEST_CASE("index csv round trip") {
  CountsIndex index = testing::http_counts_index();
  index.add("require(\"odd,pkg\").x", "e v", 2);
  std::ostringstream out;
  write_index_csv(out, index);
  std::istringstream in(out.str());
  CHECK(read_index_csv(in, "i.csv") == index);
  std::istringstream wrong_pkg("pkg,path,event,count\nws,require(http),e,1\n");
  CHECK_THROWS_AS(read_index_csv(wrong_pkg, "w.csv"), FormatError);
  std::istringstream zero("pkg,path,event,count\nhttp,require(http),e,0\n");
  CHECK_THROWS_AS(read_index_csv(zero, "z.csv"), FormatError);
}

TEST_CASE("aggregation ignores record order") {
  std::mt19937_64 rng(11);
  auto records = testing::random_records(rng, 5, 6);
  CountsIndex a = aggregate(records);
  std::shuffle(records.begin(), records.end(), rng);
  CountsIndex b = aggregate(records);
  CHECK(a == b);
  CHECK(a.summary().total_occurrences == records.size());
}
