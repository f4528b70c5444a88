#include "gangnet/centrality.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>

#include "gangnet/parallel.hpp"

namespace gangnet {

namespace {

// Fixed chunking keeps floating-point reduction order independent of the
// worker count.
constexpr std::size_t kChunks = 64;

struct ChunkRange {
  std::size_t begin, end;
};

ChunkRange chunk_range(std::size_t count, std::size_t chunks, std::size_t i) {
  return {count * i / chunks, count * (i + 1) / chunks};
}

NodeMask apply_mask(const NodeMask& members, std::optional<NodeId> masked) {
  NodeMask m = members;
  if (masked && *masked < m.size()) m[*masked] = 0;
  return m;
}

// Bucketed minimum-degree peeling over an arbitrary neighbor accessor.
template <class Neighbors>
std::vector<std::uint32_t> peel(std::size_t n, const NodeMask* keep, Neighbors&& neighbors) {
  auto in = [&](NodeId v) { return keep == nullptr || (*keep)[v] != 0; };
  std::vector<std::uint32_t> deg(n, 0);
  std::uint32_t max_deg = 0;
  for (NodeId v = 0; v < n; ++v) {
    if (!in(v)) continue;
    std::uint32_t d = 0;
    for (NodeId u : neighbors(v))
      if (in(u)) ++d;
    deg[v] = d;
    max_deg = std::max(max_deg, d);
  }
  std::vector<std::uint32_t> bin(max_deg + 1, 0);
  for (NodeId v = 0; v < n; ++v)
    if (in(v)) ++bin[deg[v]];
  std::uint32_t start = 0;
  for (auto& b : bin) {
    const auto c = b;
    b = start;
    start += c;
  }
  std::vector<NodeId> vert(start);
  std::vector<std::uint32_t> pos(n, 0);
  for (NodeId v = 0; v < n; ++v) {
    if (!in(v)) continue;
    pos[v] = bin[deg[v]]++;
    vert[pos[v]] = v;
  }
  for (std::size_t d = max_deg; d > 0; --d) bin[d] = bin[d - 1];
  if (!bin.empty()) bin[0] = 0;
  for (std::size_t i = 0; i < vert.size(); ++i) {
    const NodeId v = vert[i];
    for (NodeId u : neighbors(v)) {
      if (!in(u) || deg[u] <= deg[v]) continue;
      const std::uint32_t du = deg[u];
      const std::uint32_t pu = pos[u];
      const std::uint32_t pw = bin[du];
      const NodeId w = vert[pw];
      if (u != w) {
        pos[u] = pw;
        vert[pu] = w;
        pos[w] = pu;
        vert[pw] = u;
      }
      ++bin[du];
      --deg[u];
    }
  }
  return deg;
}

// Shell number of v in H + v, where H is the subgraph induced by `members`
// (v not in it) and core_h its core numbers.
std::uint32_t shell_of_outsider(const CoOffenderNetwork& g, const NodeMask& members,
                                const std::vector<std::uint32_t>& core_h, NodeId v, std::vector<std::uint32_t>& local,
                                std::vector<NodeId>& nodes) {
  std::vector<std::uint32_t> nb_core;
  for (NodeId u : g.neighbors(v))
    if (members[u]) nb_core.push_back(core_h[u]);
  const auto d = static_cast<std::uint32_t>(nb_core.size());
  if (d <= 1) return d;
  std::sort(nb_core.begin(), nb_core.end(), std::greater<>());
  // lo: v has >= k neighbours already in the k-core of H, so k-core(H) + v
  // is a k-core. hi: a neighbour in the k-core of H + v has core_H >= k - 1.
  std::uint32_t lo = 1, hi = 1;
  for (std::uint32_t k = 1; k <= d; ++k) {
    if (nb_core[k - 1] >= k) lo = k;
    if (nb_core[k - 1] + 1 >= k) hi = k;
  }
  if (lo == hi) return lo;

  // Any k-core of H + v with k > lo lives inside {core_H >= lo} + v, so peel
  // v's component of that region.
  constexpr auto unset = std::numeric_limits<std::uint32_t>::max();
  nodes.clear();
  nodes.push_back(v);
  local[v] = 0;
  for (std::size_t head = 0; head < nodes.size(); ++head) {
    const NodeId x = nodes[head];
    for (NodeId u : g.neighbors(x)) {
      if (!members[u] || core_h[u] < lo || local[u] != unset) continue;
      local[u] = static_cast<std::uint32_t>(nodes.size());
      nodes.push_back(u);
    }
  }
  auto neighbors = [&](NodeId lx) {
    std::vector<NodeId> out;
    for (NodeId u : g.neighbors(nodes[lx]))
      if (local[u] != unset) out.push_back(local[u]);
    return out;
  };
  const auto cores = peel(nodes.size(), nullptr, neighbors);
  const std::uint32_t result = std::max(lo, cores[0]);
  for (NodeId x : nodes) local[x] = unset;
  return result;
}

}  // namespace

CentralityScores betweenness_wrt(const CoOffenderNetwork& g, const NodeMask& endpoints, std::optional<NodeId> masked,
                                 unsigned threads) {
  const std::size_t n = g.node_count();
  const NodeMask ends = apply_mask(endpoints, masked);
  std::vector<NodeId> sources;
  for (NodeId v = 0; v < n; ++v)
    if (ends[v]) sources.push_back(v);

  const std::size_t chunks = std::min(kChunks, std::max<std::size_t>(sources.size(), 1));
  std::vector<std::vector<double>> partial(chunks);
  parallel_for(chunks, threads, [&](std::size_t c) {
    auto& acc = partial[c];
    acc.assign(n, 0.0);
    std::vector<std::int32_t> dist(n, -1);
    std::vector<double> sigma(n, 0.0), delta(n, 0.0);
    std::vector<NodeId> order;
    order.reserve(n);
    const auto range = chunk_range(sources.size(), chunks, c);
    for (std::size_t si = range.begin; si < range.end; ++si) {
      const NodeId s = sources[si];
      order.clear();
      order.push_back(s);
      dist[s] = 0;
      sigma[s] = 1.0;
      for (std::size_t head = 0; head < order.size(); ++head) {
        const NodeId u = order[head];
        for (NodeId w : g.neighbors(u)) {
          if (dist[w] < 0) {
            dist[w] = dist[u] + 1;
            order.push_back(w);
          }
          if (dist[w] == dist[u] + 1) sigma[w] += sigma[u];
        }
      }
      for (std::size_t i = order.size(); i-- > 0;) {
        const NodeId w = order[i];
        const double coeff = ((ends[w] ? 1.0 : 0.0) + delta[w]) / sigma[w];
        for (NodeId u : g.neighbors(w))
          if (dist[u] == dist[w] - 1) delta[u] += sigma[u] * coeff;
        if (w != s) acc[w] += delta[w];
      }
      for (NodeId w : order) {
        dist[w] = -1;
        sigma[w] = 0.0;
        delta[w] = 0.0;
      }
    }
  });

  CentralityScores out{Measure::betweenness, "custom", std::vector<double>(n, 0.0)};
  for (const auto& acc : partial)
    if (!acc.empty())
      for (std::size_t v = 0; v < n; ++v) out.values[v] += acc[v];
  // Each unordered pair was reached once from each endpoint.
  for (auto& x : out.values) x *= 0.5;
  return out;
}

namespace {

// For every v: number of members reachable from v other than v, and the sum of
// their distances.
void closeness_pass(const CoOffenderNetwork& g, const NodeMask& members, unsigned threads,
                    std::vector<std::uint64_t>& count, std::vector<std::uint64_t>& sum) {
  const std::size_t n = g.node_count();
  count.assign(n, 0);
  sum.assign(n, 0);
  const std::size_t chunks = std::min(kChunks, std::max<std::size_t>(n, 1));
  parallel_for(chunks, threads, [&](std::size_t c) {
    std::vector<std::int32_t> dist(n, -1);
    std::vector<NodeId> order;
    order.reserve(n);
    const auto range = chunk_range(n, chunks, c);
    for (std::size_t sv = range.begin; sv < range.end; ++sv) {
      const auto s = static_cast<NodeId>(sv);
      order.clear();
      order.push_back(s);
      dist[s] = 0;
      std::uint64_t cnt = 0, total = 0;
      for (std::size_t head = 0; head < order.size(); ++head) {
        const NodeId u = order[head];
        if (u != s && members[u]) {
          ++cnt;
          total += static_cast<std::uint64_t>(dist[u]);
        }
        for (NodeId w : g.neighbors(u))
          if (dist[w] < 0) {
            dist[w] = dist[u] + 1;
            order.push_back(w);
          }
      }
      count[s] = cnt;
      sum[s] = total;
      for (NodeId w : order) dist[w] = -1;
    }
  });
}

double closeness_value(std::uint64_t reachable, std::uint64_t distance_sum) {
  if (reachable <= 1 || distance_sum == 0) return 0.0;
  return static_cast<double>(reachable - 1) / static_cast<double>(distance_sum);
}

}  // namespace

CentralityScores closeness_wrt(const CoOffenderNetwork& g, const NodeMask& members, std::optional<NodeId> masked,
                               unsigned threads) {
  const NodeMask m = apply_mask(members, masked);
  std::vector<std::uint64_t> count, sum;
  closeness_pass(g, m, threads, count, sum);
  CentralityScores out{Measure::closeness, "custom", std::vector<double>(g.node_count(), 0.0)};
  for (NodeId v = 0; v < g.node_count(); ++v) out.values[v] = closeness_value(count[v] + (m[v] ? 1 : 0), sum[v]);
  return out;
}

std::vector<double> closeness_self_masked(const CoOffenderNetwork& g, const NodeMask& members, unsigned threads) {
  std::vector<std::uint64_t> count, sum;
  closeness_pass(g, members, threads, count, sum);
  std::vector<double> out(g.node_count(), 0.0);
  for (NodeId v = 0; v < g.node_count(); ++v) out[v] = closeness_value(count[v], sum[v]);
  return out;
}

std::vector<std::uint32_t> core_numbers(const CoOffenderNetwork& g, const NodeMask& keep) {
  return peel(g.node_count(), &keep, [&](NodeId v) { return g.neighbors(v); });
}

CentralityScores shell_number_wrt(const CoOffenderNetwork& g, const NodeMask& members, std::optional<NodeId> masked,
                                  unsigned threads) {
  const std::size_t n = g.node_count();
  const NodeMask m = apply_mask(members, masked);
  const auto core_h = core_numbers(g, m);
  CentralityScores out{Measure::shell, "custom", std::vector<double>(n, 0.0)};
  const std::size_t chunks = std::min(kChunks, std::max<std::size_t>(n, 1));
  parallel_for(chunks, threads, [&](std::size_t c) {
    std::vector<std::uint32_t> local(n, std::numeric_limits<std::uint32_t>::max());
    std::vector<NodeId> nodes;
    const auto range = chunk_range(n, chunks, c);
    for (std::size_t vi = range.begin; vi < range.end; ++vi) {
      const auto v = static_cast<NodeId>(vi);
      out.values[v] = m[v] ? core_h[v] : shell_of_outsider(g, m, core_h, v, local, nodes);
    }
  });
  return out;
}

CentralityScores betweenness_wrt(const CoOffenderNetwork& g, const Dataset& data, const CrimeSet& c,
                                 std::optional<NodeId> masked, unsigned threads) {
  auto s = betweenness_wrt(g, label_mask(g, data, c), masked, threads);
  s.restriction = c.name();
  return s;
}

CentralityScores closeness_wrt(const CoOffenderNetwork& g, const Dataset& data, const CrimeSet& c,
                               std::optional<NodeId> masked, unsigned threads) {
  auto s = closeness_wrt(g, label_mask(g, data, c), masked, threads);
  s.restriction = c.name();
  return s;
}

CentralityScores shell_number_wrt(const CoOffenderNetwork& g, const Dataset& data, const CrimeSet& c,
                                  std::optional<NodeId> masked, unsigned threads) {
  auto s = shell_number_wrt(g, label_mask(g, data, c), masked, threads);
  s.restriction = c.name();
  return s;
}

}  // namespace gangnet
