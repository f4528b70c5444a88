#include <cmath>
#include "json.hpp"

#include "doctest.h"
#include "gangnet/error.hpp"
#include "gangnet/graph.hpp"
#include "gangnet/synth.hpp"
#include "records.hpp"

using namespace gangnet;

namespace {

GeneratorConfig config(std::size_t offenders, std::uint64_t seed, double contagion = 8.0) {
  GeneratorConfig c;
  c.offenders = offenders;
  c.seed = seed;
  c.contagion_strength = contagion;
  return c;
}

// Pearson correlation between a node's own violent label and the violent
// share of its neighbours.
double label_neighbour_correlation(const Dataset& d) {
  const auto g = build_network(d);
  const auto v = label_mask(g, d, CrimeSet::violent());
  std::vector<double> a, b;
  for (NodeId x = 0; x < g.node_count(); ++x) {
    const auto nb = g.neighbors(x);
    double hit = 0;
    for (NodeId u : nb) hit += v[u];
    a.push_back(v[x]);
    b.push_back(hit / static_cast<double>(nb.size()));
  }
  const double n = static_cast<double>(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) ma += a[i] / n, mb += b[i] / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

TEST_CASE("fixed seed gives a byte-identical stream") {
  const auto a = write_records(generate(config(600, 4)));
  CHECK(a == write_records(generate(config(600, 4))));
  CHECK(a != write_records(generate(config(600, 5))));
}

TEST_CASE("generated records pass validation and parse back") {
  for (std::uint64_t s : {0u, 1u, 2u}) {
    const auto rows = generate(config(500, s));
    CHECK_NOTHROW(Dataset{rows});
    CHECK(parse_records(write_records(rows)) == rows);
    CHECK(Dataset(rows).any_homicide_victim());
  }
}

TEST_CASE("default config reaches the degree target") {
  const auto s = validate_stats(generate(GeneratorConfig{}));
  CHECK(s.mean_degree == doctest::Approx(3.66).epsilon(0.15));
  CHECK(s.exp_fit_r2 >= 0.7);
  CHECK(s.exp_fit_slope < 0);
  CHECK(s.offenders == 2000);
  CHECK(s.violent_records > 0);
  CHECK(s.monthly_events.size() == 36);
}

TEST_CASE("seasonal trough") {
  const auto c = GeneratorConfig{};
  const auto s = validate_stats(generate(c));
  std::size_t lo = SIZE_MAX, hi = 0;
  for (const auto& [m, k] : s.monthly_events) lo = std::min(lo, k), hi = std::max(hi, k);
  CHECK(static_cast<double>(lo) / static_cast<double>(hi) < 1 - c.seasonality_amplitude / 2);
}

TEST_CASE("without contagion labels ignore the network") {
  double sum = 0;
  for (std::uint64_t s = 0; s < 5; ++s) sum += label_neighbour_correlation(Dataset(generate(config(2000, s, 0.0))));
  CHECK(std::abs(sum / 5) <= 0.05);
}

TEST_CASE("stronger contagion clusters violence more") {
  double prev = -1;
  for (double k : {0.0, 4.0, 8.0, 16.0}) {
    double sum = 0;
    for (std::uint64_t s = 0; s < 5; ++s) sum += label_neighbour_correlation(Dataset(generate(config(1000, s, k))));
    CHECK(sum / 5 > prev);
    prev = sum / 5;
  }
}

TEST_CASE("statistics on hand-made streams") {
  const auto one = parse_records(fixture::csv(
      "A1,a,2012-01-02,theft,0,D01,B0101,,0\n"
      "A1,b,2012-01-02,theft,0,D01,B0101,,0\n"
      "A1,c,2012-01-02,theft,0,D01,B0101,,0\n"
      "A1,d,2012-01-02,theft,0,D01,B0101,,0\n"));
  const auto s = validate_stats(one);
  CHECK(s.avg_clustering == 1);
  CHECK(s.transitivity == 1);
  CHECK(s.components == 1);
  CHECK(s.mean_degree == 3);
  const auto two = parse_records(fixture::csv(
      "A1,a,2012-01-02,theft,0,D01,B0101,,0\n"
      "A1,b,2012-01-02,theft,0,D01,B0101,,0\n"
      "A2,c,2012-02-02,robbery,1,D01,B0101,,0\n"
      "A2,d,2012-02-02,theft,0,D01,B0101,,0\n"));
  const auto t = validate_stats(two);
  CHECK(t.components == 2);
  CHECK(t.violent_records == 1);
  CHECK(t.monthly_events.at("2012-02") == 1);
  const auto j = nlohmann::json::parse(stats_json(t));
  CHECK(j["components"] == 2);
}

TEST_CASE("bad configs are rejected") {
  auto c = GeneratorConfig{};
  c.offenders = 1;
  CHECK_THROWS_AS(generate(c), ConfigError);
  c = GeneratorConfig{};
  c.seasonality_amplitude = 1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = GeneratorConfig{};
  c.violent_record_fraction = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = GeneratorConfig{};
  c.offenders = 20;
  c.target_mean_degree = 40;
  CHECK_THROWS_AS(generate(c), ConfigError);
}
