#include <doctest.h>

#include <random>
#include <sstream>

#include "deadlisten/classifier/bcdf.hpp"
#include "deadlisten/classifier/classify.hpp"
#include "deadlisten/classifier/config.hpp"
#include "deadlisten/classifier/model_io.hpp"
#include "deadlisten/corpus/csv.hpp"
#include "deadlisten/eval/sweep.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace deadlisten;
using namespace deadlisten::classifier;
using doctest::Approx;

TEST_CASE("bcdf matches reference values") {
  // reference values from an independent statistics library
  CHECK(bcdf(2, 216, 0.05) == Approx(0.00118314).epsilon(1e-5));
  CHECK(bcdf(1, 522, 0.01) == Approx(0.03303908).epsilon(1e-6));
  CHECK(bcdf(519, 522, 0.01) == Approx(1.0));
  CHECK(bcdf(0, 10, 0.1) == Approx(0.3486784401).epsilon(1e-9));
  CHECK(bcdf(1, 216, 0.1) == Approx(3.268e-9).epsilon(1e-3));
  CHECK(binomial_sf(3, 10, 0.1) == Approx(0.0701908264).epsilon(1e-8));
}

TEST_CASE("bcdf edge cases and domain") {
  CHECK(bcdf(5, 5, 0.3) == 1.0);
  CHECK(bcdf(0, 5, 0.0) == 1.0);
  CHECK(bcdf(4, 5, 1.0) == 0.0);
  CHECK(binomial_sf(0, 5, 0.3) == 1.0);
  CHECK_THROWS_AS(bcdf(6, 5, 0.1), DomainError);
  CHECK_THROWS_AS(bcdf(0, 0, 0.1), DomainError);
  CHECK_THROWS_AS(bcdf(1, 5, -0.1), DomainError);
  CHECK_THROWS_AS(bcdf(1, 5, 1.5), DomainError);
}

TEST_CASE("bcdf agrees with exact summation") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::uint64_t> n_dist(1, 150);
  std::uniform_real_distribution<double> p_dist(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    std::uint64_t n = n_dist(rng);
    std::uint64_t k = std::uniform_int_distribution<std::uint64_t>(0, n)(rng);
    double p = p_dist(rng);
    CAPTURE(k);
    CAPTURE(n);
    CAPTURE(p);
    CHECK(std::abs(bcdf(k, n, p) - testing::oracle_bcdf(k, n, p)) <= 1e-9);
    if (k > 0) CHECK(std::abs(binomial_sf(k, n, p) - (1 - testing::oracle_bcdf(k - 1, n, p))) <= 1e-9);
  }
}

TEST_CASE("config parsing and printing") {
  Config c = parse_config("0.1,0.1,0.03,0.01");
  CHECK(c == Config{});
  CHECK(to_string(c) == "(0.1, 0.1, 0.03, 0.01)");
  CHECK(to_csv_field(parse_config(" 0.25 , 0.01,1,0.04")) == "0.25,0.01,1,0.04");
  for (const char* bad : {"1.5,0.1,0.1,0.1", "0,0.1,0.1,0.1", "0.1,0.1,0.1", "a,b,c,d", "0.1,0.1,0.1,0.1,0.1", ""}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_config(bad), DomainError);
  }
}

TEST_CASE("http counts: timeout anomalous, data and end not") {
  corpus::CountsIndex index = testing::http_counts_index();
  Config config{0.1, 0.1, 0.03, 0.01};
  Classification timeout = classify_pair(index, testing::kResponsePath, "timeout", config);
  CHECK(timeout.verdict == Verdict::Anomalous);
  CHECK(timeout.stats == PairStatistics{1, 1895, 216, 1, 1});
  CHECK(timeout.bcdf_path == Approx(testing::oracle_bcdf(1, 216, 0.1)).epsilon(1e-9));
  CHECK(timeout.bcdf_event == Approx(testing::oracle_bcdf(1, 1895, 0.1)).epsilon(1e-9));
  CHECK(classify_pair(index, testing::kResponsePath, "data", config).verdict != Verdict::Anomalous);
  CHECK(classify_pair(index, testing::kResponsePath, "end", config).verdict != Verdict::Anomalous);
  // 215 of 216 timeout registrations sit on the request path
  CHECK(classify_pair(index, testing::kRequestPath, "timeout", config).verdict == Verdict::Expected);
}

TEST_CASE("doge: refined counts suppress the count-1 paths") {
  corpus::CountsIndex index = testing::doge_index();
  Config config{0.01, 0.1, 0.1, 0.1};
  for (const std::string& path : testing::doge_single_paths()) {
    PairStatistics s = pair_statistics(index, path, "doge");
    REQUIRE(s.k_cum_path == 519);
    REQUIRE(s.n_e == 522);
    REQUIRE(classify_statistics(s, config).verdict != Verdict::Anomalous);
  }
  // raw counts alone would flag them: bcdf(1, 522, 0.01) < 0.1
  PairStatistics s = pair_statistics(index, testing::doge_single_paths().front(), "doge");
  CHECK(decide(s.k, s.n_e, s.k, s.n_a, config).verdict == Verdict::Anomalous);
}

TEST_CASE("rank table cumulative sums") {
  CumulativeRankTable t({5, 1, 1, 3, 8});
  CHECK(t.cumulative(0) == 0);
  CHECK(t.cumulative(1) == 2);
  CHECK(t.cumulative(4) == 5);
  CHECK(t.cumulative(5) == 10);
  CHECK(t.cumulative(100) == 18);
  CHECK(t.total() == 18);
}

TEST_CASE("corpus statistics equal per-pair statistics") {
  std::mt19937_64 rng(5);
  corpus::CountsIndex index = corpus::aggregate(testing::random_records(rng, 6, 12));
  for (const auto& [key, stats] : all_pair_statistics(index)) {
    CHECK(stats == pair_statistics(index, key.path, key.event));
  }
}

TEST_CASE("model json round trip") {
  Model model = classify_corpus(testing::http_counts_index(), Config{});
  CHECK(model.pair_count() == 4);
  CHECK(model.anomalous_count() == 1);
  Verdict v;
  REQUIRE(model.find(testing::kResponsePath, "timeout", &v) != nullptr);
  CHECK(v == Verdict::Anomalous);
  std::ostringstream out;
  write_model_json(out, model);
  std::istringstream in(out.str());
  Model back = read_model_json(in, "m.json");
  CHECK(back.config == model.config);
  CHECK(back.pair_count() == 4);
  REQUIRE(back.find(testing::kResponsePath, "timeout", &v) != nullptr);
  CHECK(v == Verdict::Anomalous);
  std::ostringstream again;
  write_model_json(again, back);
  CHECK(again.str() == out.str());
  std::istringstream bad("{\"config\": 3}");
  CHECK_THROWS_AS(read_model_json(bad, "bad.json"), corpus::FormatError);
}
