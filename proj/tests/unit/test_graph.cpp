#include <sstream>

#include "corpus.hpp"
#include "doctest.h"
#include "gangnet/error.hpp"
#include "gangnet/graph.hpp"
#include "gangnet/synth.hpp"
#include "records.hpp"

using namespace gangnet;

namespace {

std::vector<std::string> names(const CoOffenderNetwork& g, const std::vector<NodeId>& xs) {
  std::vector<std::string> out;
  for (auto x : xs) out.push_back(g.id(x));
  return out;
}

CoOffenderNetwork path3() {
  const std::pair<NodeId, NodeId> e[] = {{0, 1}, {1, 2}};
  return CoOffenderNetwork::from_edge_list(3, e);
}

}  // namespace

TEST_CASE("event cliques, solo offenders dropped, repeats collapse") {
  const auto d = fixture::dataset(
      "A1,O1,2012-01-02,theft,0,D01,B0101,,0\n"
      "A1,O2,2012-01-02,theft,0,D01,B0101,,0\n"
      "A1,O3,2012-01-02,theft,0,D01,B0101,,0\n"
      "A2,O4,2012-01-03,theft,0,D01,B0101,,0\n"
      "A3,O1,2012-02-03,theft,0,D01,B0101,,0\n"
      "A3,O2,2012-02-03,theft,0,D01,B0101,,0\n");
  const auto g = build_network(d);
  CHECK(g.node_count() == 3);
  CHECK(g.edge_count() == 3);
  CHECK_FALSE(g.find("O4"));
  for (NodeId v = 0; v < 3; ++v) CHECK(g.degree(v) == 2);
}

TEST_CASE("window restricts contributing events") {
  const auto d = fixture::dataset(
      "A1,O1,2012-01-02,theft,0,D01,B0101,,0\n"
      "A1,O2,2012-01-02,theft,0,D01,B0101,,0\n"
      "A2,O2,2012-06-02,theft,0,D01,B0101,,0\n"
      "A2,O3,2012-06-02,theft,0,D01,B0101,,0\n");
  CHECK(build_network(d, DateRange::parse("2012-03-01..")).edge_count() == 1);
  CHECK(build_network(d, DateRange::parse("2013-01-01..2013-02-01")).node_count() == 0);
  CHECK(build_network(Dataset{}).node_count() == 0);
}

TEST_CASE("hop neighborhoods on a path") {
  const auto g = path3();
  CHECK(hop_neighborhood(g, 0, 2) == std::vector<NodeId>{2});
  CHECK(hop_neighborhood(g, 1, 1) == std::vector<NodeId>{0, 2});
  CHECK(hop_neighborhood(g, 0, 3).empty());
  CHECK_THROWS_AS(hop_neighborhood(g, 9, 1), LookupError);
  CHECK_THROWS_AS(g.require("nobody"), LookupError);
}

TEST_CASE("bfs counts: path and 4-cycle") {
  const auto p = bfs_counts(path3(), 0);
  CHECK(*p.dist[2] == 2);
  CHECK(p.sigma[2] == 1);
  const std::pair<NodeId, NodeId> e[] = {{0, 1}, {1, 2}, {2, 3}, {3, 0}};
  const auto c = bfs_counts(CoOffenderNetwork::from_edge_list(4, e), 0);
  CHECK(c.sigma[2] == 2);
  CHECK(*c.dist[2] == 2);
  const std::pair<NodeId, NodeId> split[] = {{0, 1}};
  const auto u = bfs_counts(CoOffenderNetwork::from_edge_list(3, split), 0);
  CHECK_FALSE(u.dist[2]);
  CHECK(u.sigma[2] == 0);
}

TEST_CASE("bfs counts and levels against enumeration on the corpus") {
  for (const auto& c : corpus::graph_corpus()) {
    const auto d = corpus::floyd(c.adj);
    for (NodeId s = 0; s < c.n; ++s) {
      const auto pc = bfs_counts(c.graph, s);
      CHECK(*pc.dist[s] == 0);
      CHECK(pc.sigma[s] == 1);
      for (NodeId t = 0; t < c.n; ++t) {
        if (d[s][t] == corpus::kInf) {
          CHECK_FALSE(pc.dist[t]);
          continue;
        }
        CHECK(*pc.dist[t] == d[s][t]);
        if (t != s) CHECK(pc.sigma[t] == corpus::shortest_paths(c.adj, s, t).size());
        // sigma recurrence over predecessors
        if (t != s) {
          std::uint64_t sum = 0;
          for (NodeId u = 0; u < c.n; ++u)
            if (c.adj[u][t] && d[s][u] + 1 == d[s][t]) sum += pc.sigma[u];
          CHECK(pc.sigma[t] == sum);
        }
      }
      for (unsigned i = 1; i <= 3; ++i) {
        std::vector<NodeId> expect;
        for (NodeId t = 0; t < c.n; ++t)
          if (d[s][t] == i) expect.push_back(t);
        CHECK(hop_neighborhood(c.graph, s, i) == expect);
      }
    }
  }
}

TEST_CASE("adjacency is symmetric, simple and sorted") {
  for (const auto& c : corpus::graph_corpus(60)) {
    for (NodeId v = 0; v < c.n; ++v) {
      const auto nb = c.graph.neighbors(v);
      CHECK(std::is_sorted(nb.begin(), nb.end()));
      CHECK(std::adjacent_find(nb.begin(), nb.end()) == nb.end());
      for (NodeId u : nb) {
        CHECK(u != v);
        CHECK(c.graph.has_edge(u, v));
      }
    }
  }
}

TEST_CASE("ring sizes sum to the component size") {
  for (const auto& c : corpus::graph_corpus(60)) {
    const auto comps = connected_components(c.graph);
    for (NodeId v = 0; v < c.n; ++v) {
      std::size_t total = 1;
      for (unsigned i = 1; i <= c.n; ++i) total += hop_neighborhood(c.graph, v, i).size();
      CHECK(total == comps.block(comps.block_of(v)).size());
    }
  }
}

TEST_CASE("components: small cases and union-find on synthetic data") {
  const std::pair<NodeId, NodeId> two[] = {{0, 1}, {2, 3}};
  const auto p = connected_components(CoOffenderNetwork::from_edge_list(4, two));
  CHECK(p.size() == 2);
  CHECK(p.block(0).size() == 2);
  CHECK(p.largest() == 0);  // tie goes to the block with the smallest node
  CHECK(connected_components(path3()).size() == 1);

  GeneratorConfig cfg;
  cfg.seed = 2;
  const Dataset d(generate(cfg));
  const auto g = build_network(d);
  CHECK(connected_components(g).size() == corpus::components(g.node_count(), g.edges()));
}

TEST_CASE("deterministic adjacency regardless of record order") {
  GeneratorConfig cfg;
  cfg.offenders = 300;
  auto rows = generate(cfg);
  const auto a = build_network(Dataset(rows));
  std::mt19937_64 r(3);
  for (std::size_t i = rows.size(); i > 1; --i) std::swap(rows[i - 1], rows[r() % i]);
  const auto b = build_network(Dataset(rows));
  CHECK(a.edges() == b.edges());
  CHECK(std::equal(a.ids().begin(), a.ids().end(), b.ids().begin(), b.ids().end()));
}

TEST_CASE("label and gang subgraphs") {
  const auto d = fixture::dataset(
      "A1,O1,2012-01-02,robbery,1,D01,B0101,G1,0\n"
      "A1,O2,2012-01-02,theft,0,D01,B0101,G1,0\n"
      "A1,O3,2012-01-02,robbery,1,D01,B0101,G2,0\n");
  const auto g = build_network(d);
  const auto same = label_subgraph(g, d, CrimeSet::none());
  CHECK(same.edges() == g.edges());
  const auto v = label_subgraph(g, d, CrimeSet::violent());
  CHECK(names(v, {0, 1}) == std::vector<std::string>{"O1", "O3"});
  CHECK(v.edge_count() == 1);
  CHECK(label_subgraph(g, d, CrimeSet::of({"homicide"})).node_count() == 0);
  const auto g1 = gang_subgraph(g, d, "G1");
  CHECK(g1.node_count() == 2);
  CHECK(g1.id(0) == "O1");
}

TEST_CASE("edge list export") {
  const auto d = fixture::dataset(
      "A1,O2,2012-01-02,theft,0,D01,B0101,,0\n"
      "A1,O1,2012-01-02,theft,0,D01,B0101,,0\n"
      "A1,O3,2012-01-02,theft,0,D01,B0101,,0\n");
  std::ostringstream out;
  write_edge_list(out, build_network(d));
  CHECK(out.str() == "O1,O2\nO1,O3\nO2,O3\n");
}
