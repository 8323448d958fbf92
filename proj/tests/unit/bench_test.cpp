#include <doctest.h>

#include <json.hpp>

#include <random>

#include "facadex/bench/bench.hpp"
#include "facadex/error.hpp"

namespace bench = facadex::bench;

TEST_CASE("tokenizer examples") {
  CHECK(bench::tokenize("SELECT ?x {?x a ?y}") == std::vector<std::string>{"SELECT", "?x", "?x", "a", "?y"});
  CHECK(bench::tokenize("").empty());
  CHECK(bench::tokenize("a,a;a") == std::vector<std::string>{"a", "a", "a"});
  CHECK(bench::tokenize("\"quoted\"(x)") == std::vector<std::string>{"quoted", "x"});
  CHECK(bench::tokenize("a.b:c") == std::vector<std::string>{"a.b:c"});
  CHECK(bench::tokenize(" \t\r\n") == std::vector<std::string>{});
}

TEST_CASE("token stats") {
  auto one = bench::token_stats({{"f", "x"}});
  CHECK(one.average_total == 1);
  CHECK(one.average_distinct == 1);
  auto two = bench::token_stats({{"a", "p q"}, {"b", "r s t u"}});
  CHECK(two.average_total == 3);
  CHECK(two.average_distinct == 3);
  auto empty = bench::token_stats({{"e", ""}});
  CHECK(empty.per_file[0].total == 0);
  CHECK(empty.per_file[0].distinct == 0);
  CHECK_THROWS_AS(bench::token_stats({}), facadex::PreconditionError);
}

TEST_CASE("tokenizer properties on random text") {
  std::mt19937_64 rng(11);
  const std::string alphabet = "ab?x:.\"(){},;\n\t\r ";
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  for (int i = 0; i < 500; ++i) {
    std::string text(rng() % 80, ' ');
    for (char& c : text) c = alphabet[pick(rng)];
    auto tokens = bench::tokenize(text);
    auto stats = bench::token_stats({{"t", text}});
    CHECK(stats.per_file[0].distinct <= stats.per_file[0].total);
    std::string joined;
    for (const auto& t : tokens) joined += (joined.empty() ? "" : " ") + t;
    CHECK(bench::tokenize(joined) == tokens);
  }
}

TEST_CASE("array generation") {
  std::string doc = bench::generate_array(R"({"id": 0, "name": "n"})", 3);
  nlohmann::json j = nlohmann::json::parse(doc);
  REQUIRE(j.size() == 3);
  CHECK(j[2]["id"] == 2);
  CHECK(j[1]["name"] == "n");
  CHECK(nlohmann::json::parse(bench::generate_array("{}", 0)).empty());
  CHECK_THROWS_AS(bench::generate_array(R"({"id": 0})", 1000, 100), facadex::ResourceLimitError);
}

TEST_CASE("scale harness") {
  auto samples = bench::scale_harness(R"({"id": 0, "v": "x"})", {10, 100}, bench::default_scale_query(),
                                      {.runs = 3});
  CHECK(samples.size() == 6);
  auto medians = bench::median_by_size(samples);
  REQUIRE(medians.size() == 2);
  CHECK(medians[0].first == 10);
  CHECK(medians[1].second >= medians[0].second);
  CHECK(bench::scale_harness("{}", {1}, bench::default_scale_query(), {.runs = 1}).size() == 1);
  std::string csv = bench::scale_csv(samples);
  CHECK(csv.rfind("size,run,elapsed_ms\n", 0) == 0);
}

TEST_CASE("median and r squared") {
  std::vector<bench::ScaleSample> s = {{1, 1, 5}, {1, 2, 1}, {1, 3, 3}, {2, 1, 10}, {2, 2, 20}};
  auto m = bench::median_by_size(s);
  CHECK(m[0].second == 3);
  CHECK(m[1].second == 15);
  CHECK(bench::linear_r_squared({1, 2, 3, 4}, {2, 4, 6, 8}) == doctest::Approx(1.0));
  std::vector<double> x = {1, 2, 3, 4, 5}, y = {2, 4, 5, 4, 5};
  // Mean y 4; ss_tot = 6; slope 0.6, intercept 2.2; ss_res = 2.4; R^2 = 0.6.
  CHECK(bench::linear_r_squared(x, y) == doctest::Approx(0.6));
}
