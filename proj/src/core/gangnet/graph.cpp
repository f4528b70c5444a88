#include "gangnet/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>

#include "gangnet/error.hpp"

namespace gangnet {

CoOffenderNetwork CoOffenderNetwork::from_edges(std::vector<std::string> ids,
                                                std::span<const std::pair<NodeId, NodeId>> edges,
                                                std::vector<std::uint32_t> offenders, bool keep_isolated) {
  const std::size_t n = ids.size();
  for (std::size_t i = 1; i < n; ++i)
    if (!(ids[i - 1] < ids[i])) throw ValidationError("node ids must be strictly ascending");
  if (offenders.empty()) {
    offenders.resize(n);
    std::iota(offenders.begin(), offenders.end(), 0u);
  }
  if (offenders.size() != n) throw ValidationError("offender index size mismatch");

  std::vector<std::uint64_t> keys;
  keys.reserve(edges.size());
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) throw LookupError("edge endpoint out of range");
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    keys.push_back((static_cast<std::uint64_t>(u) << 32) | v);
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

  std::vector<std::size_t> deg(n, 0);
  for (auto k : keys) {
    ++deg[k >> 32];
    ++deg[k & 0xffffffffu];
  }

  std::vector<NodeId> remap(n, std::numeric_limits<NodeId>::max());
  CoOffenderNetwork g;
  for (std::size_t v = 0; v < n; ++v) {
    if (deg[v] == 0 && !keep_isolated) continue;
    remap[v] = static_cast<NodeId>(g.ids_.size());
    g.ids_.push_back(std::move(ids[v]));
    g.offenders_.push_back(offenders[v]);
  }
  const std::size_t m = g.ids_.size();
  g.offsets_.assign(m + 1, 0);
  for (std::size_t v = 0; v < n; ++v)
    if (remap[v] != std::numeric_limits<NodeId>::max()) g.offsets_[remap[v] + 1] = deg[v];
  std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
  g.adjacency_.resize(g.offsets_.back());
  std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  // keys ascend by (u, v): each list receives its smaller neighbors first
  // and then its larger ones, both in ascending order.
  for (auto k : keys) {
    const NodeId u = remap[k >> 32], v = remap[k & 0xffffffffu];
    g.adjacency_[fill[u]++] = v;
    g.adjacency_[fill[v]++] = u;
  }
  return g;
}

CoOffenderNetwork CoOffenderNetwork::from_edge_list(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges,
                                                    bool keep_isolated) {
  std::vector<std::string> ids(n);
  for (std::size_t i = 0; i < n; ++i) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "n%06zu", i);
    ids[i] = buf;
  }
  return from_edges(std::move(ids), edges, {}, keep_isolated);
}

bool CoOffenderNetwork::has_edge(NodeId u, NodeId v) const {
  const auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::optional<NodeId> CoOffenderNetwork::find(std::string_view id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return std::nullopt;
  return static_cast<NodeId>(it - ids_.begin());
}

NodeId CoOffenderNetwork::require(std::string_view id) const {
  if (auto v = find(id)) return *v;
  throw LookupError("offender '" + std::string(id) + "' is not a node of the network");
}

void CoOffenderNetwork::check(NodeId v) const {
  if (v >= node_count()) throw LookupError("node " + std::to_string(v) + " is not in the network");
}

std::vector<std::pair<NodeId, NodeId>> CoOffenderNetwork::edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(edge_count());
  for (NodeId u = 0; u < node_count(); ++u)
    for (NodeId v : neighbors(u))
      if (u < v) out.emplace_back(u, v);
  return out;
}

Partition Partition::from_assignment(std::span<const std::uint32_t> assignment) {
  Partition p;
  const std::size_t n = assignment.size();
  std::vector<std::uint32_t> relabel;
  p.assignment_.resize(n);
  // Labels in order of first appearance, i.e. ordered by smallest member.
  for (std::size_t v = 0; v < n; ++v) {
    const auto lab = assignment[v];
    if (lab >= relabel.size()) relabel.resize(lab + 1, std::numeric_limits<std::uint32_t>::max());
    if (relabel[lab] == std::numeric_limits<std::uint32_t>::max()) {
      relabel[lab] = static_cast<std::uint32_t>(p.blocks_.size());
      p.blocks_.emplace_back();
    }
    p.assignment_[v] = relabel[lab];
    p.blocks_[relabel[lab]].push_back(static_cast<NodeId>(v));
  }
  return p;
}

std::size_t Partition::largest() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < blocks_.size(); ++i)
    if (blocks_[i].size() > blocks_[best].size()) best = i;
  return best;
}

bool CrimeSet::matches(const OffenderHistory& h) const {
  switch (kind_) {
    case Kind::none:
      return true;
    case Kind::violent:
      return h.has_violent();
    case Kind::codes:
      for (const auto& e : h.events())
        if (e.crime && codes_.count(e.crime->code)) return true;
      return false;
  }
  return false;
}

std::string CrimeSet::name() const {
  switch (kind_) {
    case Kind::none:
      return "none";
    case Kind::violent:
      return "violent";
    case Kind::codes: {
      std::string s;
      for (const auto& c : codes_) {
        if (!s.empty()) s += '+';
        s += c;
      }
      return s;
    }
  }
  return {};
}

CoOffenderNetwork build_network(const Dataset& data, std::optional<DateRange> window) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (const auto& ev : data.events()) {
    if (window && !window->contains(ev.date)) continue;
    const auto& off = ev.offenders;
    for (std::size_t i = 0; i < off.size(); ++i)
      for (std::size_t j = i + 1; j < off.size(); ++j) edges.emplace_back(off[i], off[j]);
  }
  std::vector<std::string> ids(data.offender_count());
  std::vector<std::uint32_t> offenders(data.offender_count());
  for (std::uint32_t i = 0; i < data.offender_count(); ++i) {
    ids[i] = data.offender_id(i);
    offenders[i] = i;
  }
  return CoOffenderNetwork::from_edges(std::move(ids), edges, std::move(offenders), false);
}

std::vector<NodeId> hop_neighborhood(const CoOffenderNetwork& g, NodeId v, unsigned hops) {
  g.check(v);
  if (hops == 0) throw ConfigError("hop radius must be positive");
  std::vector<std::uint32_t> dist(g.node_count(), std::numeric_limits<std::uint32_t>::max());
  std::vector<NodeId> frontier{v}, next;
  dist[v] = 0;
  for (unsigned level = 1; level <= hops && !frontier.empty(); ++level) {
    next.clear();
    for (NodeId u : frontier)
      for (NodeId w : g.neighbors(u))
        if (dist[w] == std::numeric_limits<std::uint32_t>::max()) {
          dist[w] = level;
          next.push_back(w);
        }
    frontier.swap(next);
  }
  std::sort(frontier.begin(), frontier.end());
  return frontier;
}

PathCounts bfs_counts(const CoOffenderNetwork& g, NodeId source) {
  g.check(source);
  const std::size_t n = g.node_count();
  PathCounts pc;
  pc.source = source;
  pc.dist.assign(n, std::nullopt);
  pc.sigma.assign(n, 0);
  std::vector<NodeId> queue;
  queue.reserve(n);
  queue.push_back(source);
  pc.dist[source] = 0;
  pc.sigma[source] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId u = queue[head];
    const std::uint32_t du = *pc.dist[u];
    for (NodeId w : g.neighbors(u)) {
      if (!pc.dist[w]) {
        pc.dist[w] = du + 1;
        queue.push_back(w);
      }
      if (*pc.dist[w] == du + 1) {
        if (pc.sigma[w] > std::numeric_limits<std::uint64_t>::max() - pc.sigma[u])
          throw Error(ErrorKind::runtime, "shortest-path count overflow");
        pc.sigma[w] += pc.sigma[u];
      }
    }
  }
  return pc;
}

Partition connected_components(const CoOffenderNetwork& g) {
  const std::size_t n = g.node_count();
  constexpr auto unset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> label(n, unset);
  std::vector<NodeId> stack;
  std::uint32_t next = 0;
  for (NodeId s = 0; s < n; ++s) {
    if (label[s] != unset) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      for (NodeId w : g.neighbors(u))
        if (label[w] == unset) {
          label[w] = next;
          stack.push_back(w);
        }
    }
    ++next;
  }
  return Partition::from_assignment(label);
}

CoOffenderNetwork induced_subgraph(const CoOffenderNetwork& g, const NodeMask& keep) {
  const std::size_t n = g.node_count();
  std::vector<NodeId> remap(n, std::numeric_limits<NodeId>::max());
  std::vector<std::string> ids;
  std::vector<std::uint32_t> offenders;
  for (NodeId v = 0; v < n; ++v) {
    if (!keep[v]) continue;
    remap[v] = static_cast<NodeId>(ids.size());
    ids.push_back(g.id(v));
    offenders.push_back(g.offender(v));
  }
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId u = 0; u < n; ++u) {
    if (!keep[u]) continue;
    for (NodeId w : g.neighbors(u))
      if (u < w && keep[w]) edges.emplace_back(remap[u], remap[w]);
  }
  return CoOffenderNetwork::from_edges(std::move(ids), edges, std::move(offenders), true);
}

NodeMask all_nodes(const CoOffenderNetwork& g) { return NodeMask(g.node_count(), 1); }

NodeMask label_mask(const CoOffenderNetwork& g, const Dataset& data, const CrimeSet& c) {
  NodeMask mask(g.node_count(), 0);
  for (NodeId v = 0; v < g.node_count(); ++v) mask[v] = c.matches(data.history(g.offender(v))) ? 1 : 0;
  return mask;
}

CoOffenderNetwork label_subgraph(const CoOffenderNetwork& g, const Dataset& data, const CrimeSet& c) {
  if (c.is_none()) return g;
  return induced_subgraph(g, label_mask(g, data, c));
}

CoOffenderNetwork gang_subgraph(const CoOffenderNetwork& g, const Dataset& data, std::string_view gang) {
  NodeMask mask(g.node_count(), 0);
  for (NodeId v = 0; v < g.node_count(); ++v) mask[v] = data.history(g.offender(v)).gang() == gang ? 1 : 0;
  return induced_subgraph(g, mask);
}

void write_edge_list(std::ostream& out, const CoOffenderNetwork& g) {
  for (auto [u, v] : g.edges()) out << g.id(u) << ',' << g.id(v) << '\n';
}

}  // namespace gangnet
