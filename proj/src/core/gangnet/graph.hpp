#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gangnet/date.hpp"
#include "gangnet/domain.hpp"

namespace gangnet {

using NodeId = std::uint32_t;
// One byte per node; nonzero means member.
using NodeMask = std::vector<std::uint8_t>;

// Undirected simple graph over offenders. Node ids are dense and follow
// ascending offender id order; neighbor lists are sorted.
class CoOffenderNetwork {
 public:
  CoOffenderNetwork() = default;

  // ids must be strictly ascending. offenders maps node -> dataset offender
  // index and defaults to the identity. Self-loops and repeated pairs are
  // collapsed; isolated nodes are dropped unless keep_isolated is set.
  static CoOffenderNetwork from_edges(std::vector<std::string> ids, std::span<const std::pair<NodeId, NodeId>> edges,
                                      std::vector<std::uint32_t> offenders = {}, bool keep_isolated = false);
  // Test and tooling helper: n nodes named by zero-padded integers.
  static CoOffenderNetwork from_edge_list(std::size_t n, std::span<const std::pair<NodeId, NodeId>> edges,
                                          bool keep_isolated = true);

  std::size_t node_count() const { return ids_.size(); }
  std::size_t edge_count() const { return adjacency_.size() / 2; }
  std::span<const NodeId> neighbors(NodeId v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
  bool has_edge(NodeId u, NodeId v) const;

  const std::string& id(NodeId v) const { return ids_[v]; }
  std::span<const std::string> ids() const { return ids_; }
  std::optional<NodeId> find(std::string_view id) const;
  NodeId require(std::string_view id) const;  // throws LookupError
  void check(NodeId v) const;                 // throws LookupError
  std::uint32_t offender(NodeId v) const { return offenders_[v]; }

  // Each undirected edge once as (u, v) with u < v, ascending.
  std::vector<std::pair<NodeId, NodeId>> edges() const;

 private:
  std::vector<std::string> ids_;
  std::vector<std::uint32_t> offenders_;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> adjacency_;
};

// Disjoint cover of a node set. Blocks are sorted internally and ordered by
// their smallest member.
class Partition {
 public:
  Partition() = default;
  // assignment[v] is an arbitrary block label; relabeled canonically.
  static Partition from_assignment(std::span<const std::uint32_t> assignment);

  std::size_t size() const { return blocks_.size(); }
  std::span<const std::vector<NodeId>> blocks() const { return blocks_; }
  const std::vector<NodeId>& block(std::size_t i) const { return blocks_[i]; }
  std::span<const std::uint32_t> assignment() const { return assignment_; }
  std::uint32_t block_of(NodeId v) const { return assignment_[v]; }
  // Largest block; ties go to the block holding the smallest node id.
  std::size_t largest() const;

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<std::vector<NodeId>> blocks_;
  std::vector<std::uint32_t> assignment_;
};

// Label restriction C. none() is the empty set, which selects every node.
class CrimeSet {
 public:
  static CrimeSet none() { return CrimeSet(Kind::none, {}); }
  static CrimeSet violent() { return CrimeSet(Kind::violent, {}); }
  static CrimeSet of(std::set<std::string> codes) { return CrimeSet(Kind::codes, std::move(codes)); }

  bool is_none() const { return kind_ == Kind::none; }
  bool matches(const OffenderHistory& h) const;
  std::string name() const;

 private:
  enum class Kind { none, violent, codes };
  CrimeSet(Kind k, std::set<std::string> c) : kind_(k), codes_(std::move(c)) {}
  Kind kind_;
  std::set<std::string> codes_;
};

// Co-arrest graph: each arrest event (optionally restricted to a window)
// contributes a clique over its offenders.
CoOffenderNetwork build_network(const Dataset& data, std::optional<DateRange> window = std::nullopt);

// d(v, v') == hops (hops >= 1), ascending.
std::vector<NodeId> hop_neighborhood(const CoOffenderNetwork& g, NodeId v, unsigned hops);

struct PathCounts {
  NodeId source = 0;
  std::vector<std::optional<std::uint32_t>> dist;  // nullopt when unreachable
  std::vector<std::uint64_t> sigma;                // 0 when unreachable
};

PathCounts bfs_counts(const CoOffenderNetwork& g, NodeId source);

Partition connected_components(const CoOffenderNetwork& g);

// Induced subgraph on keep; isolated members are retained.
CoOffenderNetwork induced_subgraph(const CoOffenderNetwork& g, const NodeMask& keep);

NodeMask all_nodes(const CoOffenderNetwork& g);
NodeMask label_mask(const CoOffenderNetwork& g, const Dataset& data, const CrimeSet& c);
// V_C induced subgraph; C = none() returns g unchanged.
CoOffenderNetwork label_subgraph(const CoOffenderNetwork& g, const Dataset& data, const CrimeSet& c);
// Nodes whose most recent gang is `gang`.
CoOffenderNetwork gang_subgraph(const CoOffenderNetwork& g, const Dataset& data, std::string_view gang);

// "u,v" per line with u < v by id, ascending.
void write_edge_list(std::ostream& out, const CoOffenderNetwork& g);

}  // namespace gangnet
