#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gangnet/community.hpp"
#include "gangnet/graph.hpp"

namespace gangnet {

struct FeatureConfig {
  // Treat each offender's own violent labels as unknown for that offender's row.
  bool mask_own_labels = true;
  // Adds betweenness/closeness/shell columns restricted to each single violent code.
  bool per_crime = false;
  // Subset of column names to emit, in canonical order. Empty means all.
  std::vector<std::string> columns;
  std::uint64_t seed = 0;  // Louvain visit order
  unsigned threads = 1;
};

// Dense row-major matrix, one row per network node in node order.
struct FeatureMatrix {
  std::vector<std::string> columns;
  std::vector<std::string> ids;
  std::vector<double> values;
  std::vector<std::uint8_t> labels;

  std::size_t rows() const { return ids.size(); }
  double at(std::size_t row, std::size_t col) const { return values[row * columns.size() + col]; }
  double& at(std::size_t row, std::size_t col) { return values[row * columns.size() + col]; }
  std::optional<std::size_t> column(std::string_view name) const;
};

// The 32 default columns in output order.
const std::vector<std::string>& default_feature_columns();
// Default columns plus per-crime ones for the table's violent codes.
std::vector<std::string> all_feature_columns(const CrimeTable& crimes, bool per_crime);

// Label: the offender has at least one violent offense in `data`.
FeatureMatrix assemble(const Dataset& data, const CoOffenderNetwork& g, const FeatureConfig& config,
                       const CrimeTable& crimes = {});

// offender_id, feature columns, label; values with 12 significant digits.
void write_features_csv(std::ostream& out, const FeatureMatrix& m);
std::string format_value(double x);

// Per-node reference evaluation. `masked` names the node whose violent
// labels are hidden; `violent` is the node-level violent mask before masking.
using NamedValues = std::vector<std::pair<std::string, double>>;

// Within-distance-i majority: at least half of the nodes at distance 1..i are
// members. False for an empty pool.
bool maj(const CoOffenderNetwork& g, NodeId v, const NodeMask& members, unsigned i,
         std::optional<NodeId> masked = std::nullopt);

NamedValues neighborhood_features(const CoOffenderNetwork& g, const NodeMask& violent, NodeId v,
                                  std::optional<NodeId> masked = std::nullopt);
NamedValues community_features(const CoOffenderNetwork& g, const NodeMask& violent, const GangGroups& groups, NodeId v,
                               std::optional<NodeId> masked = std::nullopt);
NamedValues path_features(const CoOffenderNetwork& g, const NodeMask& violent, NodeId v,
                          std::optional<NodeId> masked = std::nullopt);
NamedValues geographic_features(const Dataset& data, std::uint32_t offender, bool masked = false);
NamedValues temporal_features(const Dataset& data, std::uint32_t offender);

}  // namespace gangnet
