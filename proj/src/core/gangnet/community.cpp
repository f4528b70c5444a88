#include "gangnet/community.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <ostream>

#include "gangnet/error.hpp"
#include "gangnet/parallel.hpp"
#include "gangnet/rng.hpp"

namespace gangnet {

double modularity(const CoOffenderNetwork& g, const Partition& p) {
  if (p.assignment().size() != g.node_count()) throw ValidationError("partition does not cover the network");
  const double m = static_cast<double>(g.edge_count());
  if (m == 0) throw ValidationError("modularity is undefined on an edgeless graph");
  std::vector<double> internal(p.size(), 0.0), degree(p.size(), 0.0);
  for (NodeId u = 0; u < g.node_count(); ++u) {
    const auto b = p.block_of(u);
    degree[b] += static_cast<double>(g.degree(u));
    for (NodeId w : g.neighbors(u))
      if (u < w && p.block_of(w) == b) internal[b] += 1.0;
  }
  double q = 0.0;
  for (std::size_t b = 0; b < p.size(); ++b) {
    const double frac = degree[b] / (2.0 * m);
    q += internal[b] / m - frac * frac;
  }
  return q;
}

namespace {

// Weighted graph for the aggregation levels. self[i] is A_ii, which counts
// every edge folded into i twice.
struct Level {
  std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;
  std::vector<double> self;
  std::vector<double> strength;  // sum_j A_ij including A_ii
};

Level base_level(const CoOffenderNetwork& g) {
  Level l;
  const std::size_t n = g.node_count();
  l.adj.resize(n);
  l.self.assign(n, 0.0);
  l.strength.assign(n, 0.0);
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId w : g.neighbors(u)) l.adj[u].emplace_back(w, 1.0);
    l.strength[u] = static_cast<double>(g.degree(u));
  }
  return l;
}

// Local-move phase. Returns whether any node changed community.
bool local_moves(const Level& l, double m2, std::vector<std::uint32_t>& comm, Rng& rng) {
  const std::size_t n = l.adj.size();
  std::vector<double> tot(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) tot[comm[i]] += l.strength[i];
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  rng.shuffle(order);

  std::vector<double> link(n, 0.0);
  std::vector<std::uint32_t> touched;
  bool moved_any = false;
  for (bool moved = true; moved;) {
    moved = false;
    for (std::uint32_t i : order) {
      const std::uint32_t own = comm[i];
      const double k = l.strength[i];
      touched.clear();
      for (auto [j, w] : l.adj[i]) {
        if (link[comm[j]] == 0.0) touched.push_back(comm[j]);
        link[comm[j]] += w;
      }
      tot[own] -= k;
      // Gain of joining c, up to a shared positive factor.
      auto gain = [&](std::uint32_t c) { return link[c] - tot[c] * k / m2; };
      std::uint32_t best = own;
      double best_gain = gain(own);
      for (std::uint32_t c : touched) {
        const double gc = gain(c);
        if (gc > best_gain + 1e-12) {
          best = c;
          best_gain = gc;
        }
      }
      tot[best] += k;
      if (best != own) {
        comm[i] = best;
        moved = true;
        moved_any = true;
      }
      for (std::uint32_t c : touched) link[c] = 0.0;
    }
  }
  return moved_any;
}

Level aggregate(const Level& l, const std::vector<std::uint32_t>& comm, std::size_t count) {
  Level out;
  out.adj.resize(count);
  out.self.assign(count, 0.0);
  out.strength.assign(count, 0.0);
  std::vector<std::map<std::uint32_t, double>> acc(count);
  for (std::size_t i = 0; i < l.adj.size(); ++i) {
    const auto ci = comm[i];
    out.self[ci] += l.self[i];
    out.strength[ci] += l.strength[i];
    for (auto [j, w] : l.adj[i]) {
      if (comm[j] == ci)
        out.self[ci] += w;  // seen from both ends, so counted twice
      else
        acc[ci][comm[j]] += w;
    }
  }
  for (std::size_t c = 0; c < count; ++c) out.adj[c].assign(acc[c].begin(), acc[c].end());
  return out;
}

// Renumber communities densely in order of first appearance.
std::size_t compact(std::vector<std::uint32_t>& comm) {
  std::vector<std::uint32_t> relabel(comm.size(), kNoGroup);
  std::uint32_t next = 0;
  for (auto& c : comm) {
    if (relabel[c] == kNoGroup) relabel[c] = next++;
    c = relabel[c];
  }
  return next;
}

}  // namespace

LouvainTrace louvain_trace(const CoOffenderNetwork& g, std::uint64_t seed) {
  if (g.edge_count() == 0) throw ValidationError("louvain needs at least one edge");
  const double m2 = 2.0 * static_cast<double>(g.edge_count());
  Level level = base_level(g);
  std::vector<std::uint32_t> membership(g.node_count());
  std::iota(membership.begin(), membership.end(), 0u);

  LouvainTrace trace;
  for (std::uint64_t round = 0;; ++round) {
    std::vector<std::uint32_t> comm(level.adj.size());
    std::iota(comm.begin(), comm.end(), 0u);
    Rng rng(mix_seed(seed, round));
    const bool moved = local_moves(level, m2, comm, rng);
    const std::size_t count = compact(comm);
    for (auto& c : membership) c = comm[c];
    trace.phase_modularity.push_back(modularity(g, Partition::from_assignment(membership)));
    if (!moved || count == level.adj.size()) break;
    level = aggregate(level, comm, count);
  }
  trace.partition = Partition::from_assignment(membership);
  return trace;
}

Partition louvain(const CoOffenderNetwork& g, std::uint64_t seed) { return louvain_trace(g, seed).partition; }

std::optional<std::vector<NodeId>> group_of(NodeId v, const CoOffenderNetwork& g_gang, const Partition& p) {
  if (v >= g_gang.node_count() || v >= p.assignment().size()) return std::nullopt;
  return p.block(p.block_of(v));
}

GangGroups gang_groups(const CoOffenderNetwork& g, const Dataset& data, std::uint64_t seed, unsigned threads) {
  const std::size_t n = g.node_count();
  GangGroups out;
  out.group_of.assign(n, kNoGroup);
  out.gang_of.assign(n, kNoGroup);
  std::map<std::string, std::vector<NodeId>> members;
  for (NodeId v = 0; v < n; ++v) {
    const auto& gang = data.history(g.offender(v)).gang();
    if (!gang.empty()) members[gang].push_back(v);
  }
  std::vector<std::vector<NodeId>> gang_nodes;
  for (auto& [gang, nodes] : members) {
    for (NodeId v : nodes) out.gang_of[v] = static_cast<std::uint32_t>(out.gangs.size());
    out.gangs.push_back(gang);
    gang_nodes.push_back(std::move(nodes));
  }

  std::vector<Partition> parts(gang_nodes.size());
  parallel_for(gang_nodes.size(), threads, [&](std::size_t i) {
    NodeMask keep(n, 0);
    for (NodeId v : gang_nodes[i]) keep[v] = 1;
    const auto sub = induced_subgraph(g, keep);
    if (sub.edge_count() == 0) {
      std::vector<std::uint32_t> singletons(sub.node_count());
      std::iota(singletons.begin(), singletons.end(), 0u);
      parts[i] = Partition::from_assignment(singletons);
    } else {
      parts[i] = louvain(sub, mix_seed(seed, i));
    }
  });

  for (std::size_t i = 0; i < gang_nodes.size(); ++i) {
    for (const auto& block : parts[i].blocks()) {
      std::vector<NodeId> global;
      global.reserve(block.size());
      for (NodeId local : block) global.push_back(gang_nodes[i][local]);
      for (NodeId v : global) out.group_of[v] = static_cast<std::uint32_t>(out.groups.size());
      out.groups.push_back(std::move(global));
      out.gang_of_group.push_back(static_cast<std::uint32_t>(i));
    }
  }
  return out;
}

void write_partition_csv(std::ostream& out, const CoOffenderNetwork& g, const Partition& p) {
  if (p.assignment().size() != g.node_count()) throw ValidationError("partition does not cover the network");
  out << "node,block_index\n";
  for (NodeId v = 0; v < g.node_count(); ++v) out << g.id(v) << ',' << p.block_of(v) << '\n';
}

}  // namespace gangnet
