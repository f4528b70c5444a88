#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gangnet/graph.hpp"

namespace gangnet {

// Newman modularity at resolution 1. Throws on an edgeless graph.
double modularity(const CoOffenderNetwork& g, const Partition& p);

struct LouvainTrace {
  Partition partition;
  // Modularity of the flattened partition after each local-move phase.
  std::vector<double> phase_modularity;
};

LouvainTrace louvain_trace(const CoOffenderNetwork& g, std::uint64_t seed);
Partition louvain(const CoOffenderNetwork& g, std::uint64_t seed);

// Block of p containing v. nullopt when v is outside the partitioned graph.
std::optional<std::vector<NodeId>> group_of(NodeId v, const CoOffenderNetwork& g_gang, const Partition& p);

inline constexpr std::uint32_t kNoGroup = std::numeric_limits<std::uint32_t>::max();

// Louvain groups of every gang subgraph, expressed in global node ids.
struct GangGroups {
  std::vector<std::uint32_t> group_of;      // per global node; kNoGroup when gangless
  std::vector<std::vector<NodeId>> groups;  // ascending members
  std::vector<std::uint32_t> gang_of_group;
  std::vector<std::string> gangs;           // ascending gang tokens
  std::vector<std::uint32_t> gang_of;       // per global node; kNoGroup when gangless
};

// Gang subgraphs without edges are split into singletons.
GangGroups gang_groups(const CoOffenderNetwork& g, const Dataset& data, std::uint64_t seed, unsigned threads = 1);

// "node,block_index" with a header, one line per node in id order.
void write_partition_csv(std::ostream& out, const CoOffenderNetwork& g, const Partition& p);

}  // namespace gangnet
