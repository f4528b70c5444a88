#include "gangnet/features.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <unordered_map>

#include "gangnet/centrality.hpp"
#include "gangnet/diffusion.hpp"
#include "gangnet/error.hpp"
#include "gangnet/parallel.hpp"

namespace gangnet {

namespace {

const std::vector<std::string> kNeighborhood = {
    "degree",         "degree_violent", "frac_1hop_violent", "frac_2hop_violent", "maj_1hop_and_2hop_violent",
    "minority_1hop_majority_2hop_violent"};
const std::vector<std::string> kCommunity = {"component_size_without_v",
                                             "largest_violent_component_without_v",
                                             "group_size",
                                             "group_edges",
                                             "group_violent_members",
                                             "group_triangles",
                                             "group_transitivity",
                                             "group_boundary_nodes",
                                             "gang_boundary_nodes"};
const std::vector<std::string> kPath = {"betweenness",    "betweenness_violent", "closeness",      "closeness_violent",
                                        "shell",          "shell_violent",       "propagation_k2", "propagation_k3",
                                        "propagation_k4", "propagation_k5",      "propagation_k6"};
const std::vector<std::string> kGeographic = {"district_frequency", "beat_frequency", "beat_violence",
                                              "district_violence"};
const std::vector<std::string> kTemporal = {"avg_interval_days", "violent_groups"};

constexpr unsigned kKappaMin = 2, kKappaMax = 6;

NodeMask without(NodeMask m, std::optional<NodeId> masked) {
  if (masked && *masked < m.size()) m[*masked] = 0;
  return m;
}

// Nodes at distance exactly 1 and exactly 2, via a stamp array.
void two_hop(const CoOffenderNetwork& g, NodeId v, std::vector<std::uint32_t>& stamp, std::uint32_t mark,
             std::vector<NodeId>& ring2) {
  ring2.clear();
  stamp[v] = mark;
  for (NodeId u : g.neighbors(v)) stamp[u] = mark;
  for (NodeId u : g.neighbors(v))
    for (NodeId w : g.neighbors(u))
      if (stamp[w] != mark) {
        stamp[w] = mark;
        ring2.push_back(w);
      }
}

struct GroupStats {
  double size = 0, edges = 0, violent = 0, triangles = 0, triples = 0, boundary = 0;
};

GroupStats group_stats(const CoOffenderNetwork& g, const NodeMask& violent, const GangGroups& groups,
                       std::uint32_t gid) {
  GroupStats s;
  const auto& members = groups.groups[gid];
  s.size = static_cast<double>(members.size());
  auto in = [&](NodeId u) { return groups.group_of[u] == gid; };
  for (NodeId u : members) {
    if (violent[u]) s.violent += 1;
    std::size_t d = 0;
    bool boundary = false;
    for (NodeId w : g.neighbors(u)) {
      if (!in(w)) {
        boundary = true;
        continue;
      }
      ++d;
      if (u < w) {
        s.edges += 1;
        for (NodeId x : g.neighbors(w))
          if (x > w && in(x) && g.has_edge(u, x)) s.triangles += 1;
      }
    }
    if (boundary) s.boundary += 1;
    s.triples += static_cast<double>(d * (d - 1) / 2);
  }
  return s;
}

double gang_boundary(const CoOffenderNetwork& g, const GangGroups& groups, std::uint32_t gang) {
  double count = 0;
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (groups.gang_of[u] != gang) continue;
    for (NodeId w : g.neighbors(u))
      if (groups.gang_of[w] != gang) {
        count += 1;
        break;
      }
  }
  return count;
}

struct ComponentRemoval {
  std::vector<double> largest, largest_violent;
};

// Sizes of the pieces left when each node is cut out of its component, from
// one iterative articulation-point DFS.
ComponentRemoval component_removal(const CoOffenderNetwork& g, const NodeMask& violent) {
  const std::size_t n = g.node_count();
  ComponentRemoval out{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  constexpr auto unset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> disc(n, unset), low(n, 0), parent(n, unset);
  std::vector<std::size_t> sub(n, 0), sub_v(n, 0), sep(n, 0), sep_v(n, 0), best(n, 0), best_v(n, 0);
  std::vector<std::pair<NodeId, std::size_t>> stack;
  std::vector<NodeId> comp;
  std::uint32_t clock = 0;
  for (NodeId root = 0; root < n; ++root) {
    if (disc[root] != unset) continue;
    comp.clear();
    stack.emplace_back(root, 0);
    disc[root] = low[root] = clock++;
    comp.push_back(root);
    while (!stack.empty()) {
      auto& [u, next] = stack.back();
      const auto nb = g.neighbors(u);
      if (next < nb.size()) {
        const NodeId w = nb[next++];
        if (disc[w] == unset) {
          parent[w] = u;
          disc[w] = low[w] = clock++;
          comp.push_back(w);
          stack.emplace_back(w, 0);
        } else if (w != parent[u]) {
          low[u] = std::min(low[u], disc[w]);
        }
        continue;
      }
      const NodeId c = u;
      sub[c] += 1;
      sub_v[c] += violent[c] ? 1 : 0;
      stack.pop_back();
      if (stack.empty()) break;
      const NodeId p = stack.back().first;
      low[p] = std::min(low[p], low[c]);
      sub[p] += sub[c];
      sub_v[p] += sub_v[c];
      if (low[c] >= disc[p]) {
        sep[p] += sub[c];
        sep_v[p] += sub_v[c];
        best[p] = std::max(best[p], sub[c]);
        if (sub_v[c] > 0) best_v[p] = std::max(best_v[p], sub[c]);
      }
    }
    const std::size_t size = sub[root], viol = sub_v[root];
    for (NodeId v : comp) {
      const std::size_t rest = size - 1 - sep[v];
      const std::size_t rest_v = viol - (violent[v] ? 1 : 0) - sep_v[v];
      if (rest > 0) best[v] = std::max(best[v], rest);
      if (rest > 0 && rest_v > 0) best_v[v] = std::max(best_v[v], rest);
      out.largest[v] = static_cast<double>(best[v]);
      out.largest_violent[v] = static_cast<double>(best_v[v]);
    }
  }
  return out;
}

struct GeoCounts {
  std::unordered_map<std::string, std::pair<std::size_t, std::size_t>> district, beat;  // rows, violent rows
};

GeoCounts geo_counts(const Dataset& data) {
  GeoCounts c;
  for (const auto& r : data.records()) {
    if (!r.crime) continue;  // victim-only rows are not arrests
    if (!r.district.empty()) {
      auto& d = c.district[r.district];
      ++d.first;
      if (r.violent()) ++d.second;
    }
    if (!r.beat.empty()) {
      auto& b = c.beat[r.beat];
      ++b.first;
      if (r.violent()) ++b.second;
    }
  }
  return c;
}

NamedValues geographic_from(const GeoCounts& c, const OffenderHistory& h, bool masked) {
  std::set<std::string> districts, beats;
  for (const auto& e : h.events()) {
    if (!e.crime) continue;
    if (!e.district.empty()) districts.insert(e.district);
    if (!e.beat.empty()) beats.insert(e.beat);
  }
  double df = 0, dv = 0, bf = 0, bv = 0;
  for (const auto& d : districts) {
    const auto& x = c.district.at(d);
    df += static_cast<double>(x.first);
    dv += static_cast<double>(x.second);
  }
  for (const auto& b : beats) {
    const auto& x = c.beat.at(b);
    bf += static_cast<double>(x.first);
    bv += static_cast<double>(x.second);
  }
  if (masked) {
    // Every violent row of v lies in one of v's own districts and beats.
    for (const auto& e : h.events())
      if (e.violent()) {
        if (!e.district.empty()) dv -= 1;
        if (!e.beat.empty()) bv -= 1;
      }
  }
  return {{"district_frequency", df}, {"beat_frequency", bf}, {"beat_violence", bv}, {"district_violence", dv}};
}

}  // namespace

std::optional<std::size_t> FeatureMatrix::column(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  return std::nullopt;
}

const std::vector<std::string>& default_feature_columns() {
  static const std::vector<std::string> cols = [] {
    std::vector<std::string> c;
    for (const auto* group : {&kNeighborhood, &kCommunity, &kPath, &kGeographic, &kTemporal})
      c.insert(c.end(), group->begin(), group->end());
    return c;
  }();
  return cols;
}

std::vector<std::string> all_feature_columns(const CrimeTable& crimes, bool per_crime) {
  std::vector<std::string> c;
  c.insert(c.end(), kNeighborhood.begin(), kNeighborhood.end());
  c.insert(c.end(), kCommunity.begin(), kCommunity.end());
  c.insert(c.end(), kPath.begin(), kPath.end());
  if (per_crime)
    for (const auto& code : crimes.violent_codes()) {
      c.push_back("betweenness_" + code);
      c.push_back("closeness_" + code);
      c.push_back("shell_" + code);
    }
  c.insert(c.end(), kGeographic.begin(), kGeographic.end());
  c.insert(c.end(), kTemporal.begin(), kTemporal.end());
  return c;
}

bool maj(const CoOffenderNetwork& g, NodeId v, const NodeMask& members, unsigned i, std::optional<NodeId> masked) {
  g.check(v);
  if (i == 0) throw ConfigError("majority radius must be positive");
  const NodeMask m = without(members, masked);
  std::size_t pool = 0, hit = 0;
  for (unsigned j = 1; j <= i; ++j)
    for (NodeId u : hop_neighborhood(g, v, j)) {
      ++pool;
      if (m[u]) ++hit;
    }
  return pool > 0 && 2 * hit >= pool;
}

NamedValues neighborhood_features(const CoOffenderNetwork& g, const NodeMask& violent, NodeId v,
                                  std::optional<NodeId> masked) {
  g.check(v);
  const NodeMask m = without(violent, masked);
  const auto n1 = hop_neighborhood(g, v, 1);
  const auto n2 = hop_neighborhood(g, v, 2);
  auto count = [&](const std::vector<NodeId>& s) {
    return static_cast<double>(std::count_if(s.begin(), s.end(), [&](NodeId u) { return m[u] != 0; }));
  };
  const double d1 = count(n1), d2 = count(n2);
  const bool maj1 = maj(g, v, m, 1), maj2 = maj(g, v, m, 2);
  return {{"degree", static_cast<double>(n1.size())},
          {"degree_violent", d1},
          {"frac_1hop_violent", n1.empty() ? 0.0 : d1 / static_cast<double>(n1.size())},
          {"frac_2hop_violent", n2.empty() ? 0.0 : d2 / static_cast<double>(n2.size())},
          {"maj_1hop_and_2hop_violent", maj1 && maj2 ? 1.0 : 0.0},
          {"minority_1hop_majority_2hop_violent", !maj1 && maj2 ? 1.0 : 0.0}};
}

NamedValues community_features(const CoOffenderNetwork& g, const NodeMask& violent, const GangGroups& groups, NodeId v,
                               std::optional<NodeId> masked) {
  g.check(v);
  const NodeMask m = without(violent, masked);
  // Components of C_v(G) with v deleted, by plain BFS.
  const auto comps = connected_components(g);
  const auto& mine = comps.block(comps.block_of(v));
  std::vector<std::uint8_t> seen(g.node_count(), 0);
  seen[v] = 1;
  double largest = 0, largest_v = 0;
  for (NodeId s : mine) {
    if (seen[s]) continue;
    std::vector<NodeId> queue{s};
    seen[s] = 1;
    bool any_violent = false;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      if (m[queue[h]]) any_violent = true;
      for (NodeId w : g.neighbors(queue[h]))
        if (!seen[w]) {
          seen[w] = 1;
          queue.push_back(w);
        }
    }
    largest = std::max(largest, static_cast<double>(queue.size()));
    if (any_violent) largest_v = std::max(largest_v, static_cast<double>(queue.size()));
  }
  NamedValues out{{"component_size_without_v", largest}, {"largest_violent_component_without_v", largest_v}};
  const auto gid = groups.group_of[v];
  if (gid == kNoGroup) {
    for (std::size_t i = 2; i < kCommunity.size(); ++i) out.emplace_back(kCommunity[i], 0.0);
    return out;
  }
  const auto s = group_stats(g, m, groups, gid);
  out.insert(out.end(), {{"group_size", s.size},
                         {"group_edges", s.edges},
                         {"group_violent_members", s.violent},
                         {"group_triangles", s.triangles},
                         {"group_transitivity", s.triples > 0 ? 3.0 * s.triangles / s.triples : 0.0},
                         {"group_boundary_nodes", s.boundary},
                         {"gang_boundary_nodes", gang_boundary(g, groups, groups.gang_of[v])}});
  return out;
}

NamedValues path_features(const CoOffenderNetwork& g, const NodeMask& violent, NodeId v, std::optional<NodeId> masked) {
  g.check(v);
  const NodeMask all = all_nodes(g);
  const NodeMask m = without(violent, masked);
  NamedValues out{{"betweenness", betweenness_wrt(g, all).values[v]},
                  {"betweenness_violent", betweenness_wrt(g, m).values[v]},
                  {"closeness", closeness_wrt(g, all).values[v]},
                  {"closeness_violent", closeness_wrt(g, m).values[v]},
                  {"shell", shell_number_wrt(g, all).values[v]},
                  {"shell_violent", shell_number_wrt(g, m).values[v]}};
  for (unsigned k = kKappaMin; k <= kKappaMax; ++k)
    out.emplace_back("propagation_k" + std::to_string(k), propagation_feature(g, v, m, k) ? 1.0 : 0.0);
  return out;
}

NamedValues geographic_features(const Dataset& data, std::uint32_t offender, bool masked) {
  return geographic_from(geo_counts(data), data.history(offender), masked);
}

NamedValues temporal_features(const Dataset& data, std::uint32_t offender) {
  std::vector<HistoryEntry> ev;
  for (const auto& e : data.history(offender).events())
    if (e.crime) ev.push_back(e);
  double interval = 0;
  if (ev.size() > 1)
    interval = static_cast<double>(ev.back().date.days() - ev.front().date.days()) / static_cast<double>(ev.size());
  double groups = 0;
  for (const auto& e : ev) {
    const auto& event = data.event(data.record_event(e.row));
    for (std::uint32_t r : event.rows)
      if (r != e.row && data.record(r).violent()) {
        groups += 1;
        break;
      }
  }
  return {{"avg_interval_days", interval}, {"violent_groups", groups}};
}

FeatureMatrix assemble(const Dataset& data, const CoOffenderNetwork& g, const FeatureConfig& config,
                       const CrimeTable& crimes) {
  const auto canonical = all_feature_columns(crimes, config.per_crime);
  std::vector<std::string> wanted = canonical;
  if (!config.columns.empty()) {
    std::set<std::string, std::less<>> req(config.columns.begin(), config.columns.end());
    for (const auto& c : req)
      if (std::find(canonical.begin(), canonical.end(), c) == canonical.end())
        throw ConfigError("unknown feature column '" + c + "'");
    wanted.clear();
    for (const auto& c : canonical)
      if (req.count(c)) wanted.push_back(c);
  }
  auto need = [&](std::string_view name) { return std::find(wanted.begin(), wanted.end(), name) != wanted.end(); };
  auto need_any = [&](const std::vector<std::string>& names) {
    return std::any_of(names.begin(), names.end(), [&](const std::string& s) { return need(s); });
  };

  const std::size_t n = g.node_count();
  const unsigned threads = config.threads;
  const bool mask = config.mask_own_labels;

  FeatureMatrix fm;
  fm.columns = wanted;
  fm.ids.assign(g.ids().begin(), g.ids().end());
  fm.values.assign(n * wanted.size(), 0.0);
  fm.labels.resize(n);
  const NodeMask violent = label_mask(g, data, CrimeSet::violent());
  for (NodeId v = 0; v < n; ++v) fm.labels[v] = violent[v];

  auto put = [&](NodeId v, std::string_view name, double x) {
    if (auto c = fm.column(name)) fm.at(v, *c) = x;
  };
  auto put_all = [&](std::string_view name, const std::vector<double>& xs) {
    if (auto c = fm.column(name))
      for (NodeId v = 0; v < n; ++v) fm.at(v, *c) = xs[v];
  };

  if (need_any(kNeighborhood)) {
    // Masking v never changes its own neighbourhood counts (v is not its own
    // neighbour), so one unmasked pass serves both modes.
    std::vector<std::array<double, 6>> rows(n);
    constexpr std::size_t chunks = 64;
    parallel_for(chunks, threads, [&](std::size_t c) {
      std::vector<std::uint32_t> stamp(n, 0);
      std::vector<NodeId> ring2;
      for (std::size_t vi = n * c / chunks; vi < n * (c + 1) / chunks; ++vi) {
        const auto v = static_cast<NodeId>(vi);
        two_hop(g, v, stamp, v + 1, ring2);
        const auto nb = g.neighbors(v);
        double d1 = 0, d2 = 0;
        for (NodeId u : nb) d1 += violent[u] ? 1 : 0;
        for (NodeId u : ring2) d2 += violent[u] ? 1 : 0;
        const double s1 = static_cast<double>(nb.size()), s2 = static_cast<double>(ring2.size());
        const bool maj1 = s1 > 0 && 2 * d1 >= s1;
        const bool maj2 = s1 + s2 > 0 && 2 * (d1 + d2) >= s1 + s2;
        rows[v] = {s1, d1, s1 > 0 ? d1 / s1 : 0.0, s2 > 0 ? d2 / s2 : 0.0, maj1 && maj2 ? 1.0 : 0.0,
                   !maj1 && maj2 ? 1.0 : 0.0};
      }
    });
    for (NodeId v = 0; v < n; ++v)
      for (std::size_t i = 0; i < kNeighborhood.size(); ++i) put(v, kNeighborhood[i], rows[v][i]);
  }

  if (need_any(kCommunity)) {
    const auto cut = component_removal(g, violent);
    put_all("component_size_without_v", cut.largest);
    put_all("largest_violent_component_without_v", cut.largest_violent);
    const auto groups = gang_groups(g, data, config.seed, threads);
    std::vector<GroupStats> stats(groups.groups.size());
    parallel_for(stats.size(), threads,
                 [&](std::size_t i) { stats[i] = group_stats(g, violent, groups, static_cast<std::uint32_t>(i)); });
    std::vector<double> gang_b(groups.gangs.size());
    for (NodeId u = 0; u < n; ++u) {
      const auto k = groups.gang_of[u];
      if (k == kNoGroup) continue;
      for (NodeId w : g.neighbors(u))
        if (groups.gang_of[w] != k) {
          gang_b[k] += 1;
          break;
        }
    }
    for (NodeId v = 0; v < n; ++v) {
      const auto gid = groups.group_of[v];
      if (gid == kNoGroup) continue;
      const auto& s = stats[gid];
      put(v, "group_size", s.size);
      put(v, "group_edges", s.edges);
      put(v, "group_violent_members", s.violent - (mask && violent[v] ? 1.0 : 0.0));
      put(v, "group_triangles", s.triangles);
      put(v, "group_transitivity", s.triples > 0 ? 3.0 * s.triangles / s.triples : 0.0);
      put(v, "group_boundary_nodes", s.boundary);
      put(v, "gang_boundary_nodes", gang_b[groups.gang_of[v]]);
    }
  }

  const NodeMask all = all_nodes(g);
  // Betweenness excludes pairs containing v and shell evaluates v plus V_C
  // either way, so neither depends on v's own label. Closeness and
  // propagation do.
  auto closeness_for = [&](const NodeMask& members) {
    return mask ? closeness_self_masked(g, members, threads) : closeness_wrt(g, members, std::nullopt, threads).values;
  };
  if (need("betweenness")) put_all("betweenness", betweenness_wrt(g, all, std::nullopt, threads).values);
  if (need("betweenness_violent"))
    put_all("betweenness_violent", betweenness_wrt(g, violent, std::nullopt, threads).values);
  if (need("closeness")) put_all("closeness", closeness_wrt(g, all, std::nullopt, threads).values);
  if (need("closeness_violent")) put_all("closeness_violent", closeness_for(violent));
  if (need("shell")) put_all("shell", shell_number_wrt(g, all, std::nullopt, threads).values);
  if (need("shell_violent")) put_all("shell_violent", shell_number_wrt(g, violent, std::nullopt, threads).values);
  for (unsigned k = kKappaMin; k <= kKappaMax; ++k) {
    const std::string name = "propagation_k" + std::to_string(k);
    if (!need(name)) continue;
    const auto active =
        mask ? propagation_self_masked(g, violent, k, threads) : propagate_to_fixpoint(g, violent, k).active;
    put_all(name, std::vector<double>(active.begin(), active.end()));
  }
  if (config.per_crime)
    for (const auto& code : crimes.violent_codes()) {
      const bool b = need("betweenness_" + code), c = need("closeness_" + code), s = need("shell_" + code);
      if (!b && !c && !s) continue;
      const NodeMask members = label_mask(g, data, CrimeSet::of({code}));
      if (b) put_all("betweenness_" + code, betweenness_wrt(g, members, std::nullopt, threads).values);
      if (c) put_all("closeness_" + code, closeness_for(members));
      if (s) put_all("shell_" + code, shell_number_wrt(g, members, std::nullopt, threads).values);
    }

  if (need_any(kGeographic)) {
    const auto counts = geo_counts(data);
    for (NodeId v = 0; v < n; ++v)
      for (const auto& [name, x] : geographic_from(counts, data.history(g.offender(v)), mask)) put(v, name, x);
  }
  if (need_any(kTemporal))
    for (NodeId v = 0; v < n; ++v)
      for (const auto& [name, x] : temporal_features(data, g.offender(v))) put(v, name, x);
  return fm;
}

std::string format_value(double x) {
  if (x == 0) return "0";  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void write_features_csv(std::ostream& out, const FeatureMatrix& m) {
  out << "offender_id";
  for (const auto& c : m.columns) out << ',' << c;
  out << ",label\n";
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out << m.ids[r];
    for (std::size_t c = 0; c < m.columns.size(); ++c) out << ',' << format_value(m.at(r, c));
    out << ',' << static_cast<int>(m.labels[r]) << '\n';
  }
}

}  // namespace gangnet
