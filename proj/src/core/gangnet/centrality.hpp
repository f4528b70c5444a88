#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gangnet/graph.hpp"

namespace gangnet {

enum class Measure { betweenness, closeness, shell };

struct CentralityScores {
  Measure measure = Measure::betweenness;
  std::string restriction;     // name of C
  std::vector<double> values;  // indexed by node
};

// Unnormalized betweenness over unordered endpoint pairs {u, w} drawn from
// `endpoints` (minus `masked`), excluding pairs that contain the scored node.
CentralityScores betweenness_wrt(const CoOffenderNetwork& g, const NodeMask& endpoints,
                                 std::optional<NodeId> masked = std::nullopt, unsigned threads = 1);

// (|R| - 1) / sum of distances to R, where R is the reachable part of
// `members` (minus `masked`) including the node itself when it is a member.
CentralityScores closeness_wrt(const CoOffenderNetwork& g, const NodeMask& members,
                               std::optional<NodeId> masked = std::nullopt, unsigned threads = 1);

// closeness_wrt evaluated for every v with v itself masked, in one pass.
std::vector<double> closeness_self_masked(const CoOffenderNetwork& g, const NodeMask& members, unsigned threads = 1);

// For each v: shell number of v in the subgraph induced by v and `members`
// (minus `masked`). An all-ones mask gives the ordinary shell decomposition.
CentralityScores shell_number_wrt(const CoOffenderNetwork& g, const NodeMask& members,
                                  std::optional<NodeId> masked = std::nullopt, unsigned threads = 1);

// Core numbers of the subgraph induced by `keep` (zero outside it), by
// bucketed minimum-degree peeling.
std::vector<std::uint32_t> core_numbers(const CoOffenderNetwork& g, const NodeMask& keep);

// Convenience overloads resolving C against the dataset's label histories.
CentralityScores betweenness_wrt(const CoOffenderNetwork& g, const Dataset& data, const CrimeSet& c,
                                 std::optional<NodeId> masked = std::nullopt, unsigned threads = 1);
CentralityScores closeness_wrt(const CoOffenderNetwork& g, const Dataset& data, const CrimeSet& c,
                               std::optional<NodeId> masked = std::nullopt, unsigned threads = 1);
CentralityScores shell_number_wrt(const CoOffenderNetwork& g, const Dataset& data, const CrimeSet& c,
                                  std::optional<NodeId> masked = std::nullopt, unsigned threads = 1);

}  // namespace gangnet
