#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "json.hpp"
#include "slspectra/error.hpp"
#include "slspectra/report.hpp"

using namespace slspectra;

TEST_CASE("format_double") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = u(rng) * std::pow(10.0, int(rng() % 40) - 20);
    CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
  }
}

TEST_CASE("CSV round trip of eigen records is exact") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<EigenRecord> recs;
  for (int n = 0; n < 30; ++n) {
    EigenRecord r;
    r.disk_index = n;
    r.branch = n % 3;
    r.lambda = {u(rng) * 1e4, u(rng) * 1e-9};
    r.multiplicity = 1 + n % 2;
    r.residual = std::abs(u(rng)) * 1e-15;
    recs.push_back(r);
  }
  const auto back = records_from_table(parse_csv(to_csv(spectrum_table(recs))));
  REQUIRE(back.size() == recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    CHECK(back[i].disk_index == recs[i].disk_index);
    CHECK(back[i].branch == recs[i].branch);
    CHECK(back[i].lambda == recs[i].lambda);
    CHECK(back[i].multiplicity == recs[i].multiplicity);
    CHECK(back[i].residual == recs[i].residual);
  }
}

TEST_CASE("CSV parsing errors") {
  CHECK_THROWS_AS(parse_csv(""), ConfigError);
  CHECK_THROWS_AS(parse_csv("a,b\n1\n"), ConfigError);
  const Table t = parse_csv("n,x\n1,abc\n");
  CHECK_THROWS_AS(t.number(0, "x"), ConfigError);
  CHECK_THROWS_AS(t.column("y"), ConfigError);
}

TEST_CASE("deviation column") {
  std::vector<EigenRecord> recs(2);
  recs[0].disk_index = 1;
  recs[1].disk_index = 2;
  const Table t = spectrum_table(recs, {{1, 1e-9}});
  CHECK(t.columns.back() == "max_deviation");
  CHECK(t.number(0, "max_deviation") == 1e-9);
  CHECK(std::isnan(t.number(1, "max_deviation")));
}

TEST_CASE("JSON output") {
  Table t{{"n", "flag", "v"}, {{"3", "true", "nan"}, {"4", "false", "2.5"}}};
  const auto j = nlohmann::json::parse(to_json(t));
  REQUIRE(j.size() == 2);
  CHECK(j[0]["n"] == 3);
  CHECK(j[0]["flag"] == true);
  CHECK(j[0]["v"].is_null());
  CHECK(j[1]["v"] == 2.5);
}
