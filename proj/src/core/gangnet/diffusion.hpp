#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "gangnet/graph.hpp"

namespace gangnet {

struct ActivationState {
  NodeMask active;
  std::size_t step = 0;
};

// One synchronous round of the tipping model: inactive nodes with at least
// kappa active neighbours switch on.
ActivationState step_activation(const CoOffenderNetwork& g, const ActivationState& state, unsigned kappa);

struct Fixpoint {
  NodeMask active;
  std::size_t size = 0;
  // Rounds applied, counting the final round that detected no change.
  std::size_t steps = 0;
};

Fixpoint propagate_to_fixpoint(const CoOffenderNetwork& g, const NodeMask& seeds, unsigned kappa);

// v in the fixpoint grown from `seeds` with `masked` removed from them.
bool propagation_feature(const CoOffenderNetwork& g, NodeId v, const NodeMask& seeds, unsigned kappa,
                         std::optional<NodeId> masked = std::nullopt);

// propagation_feature for every v with v itself masked.
std::vector<std::uint8_t> propagation_self_masked(const CoOffenderNetwork& g, const NodeMask& seeds, unsigned kappa,
                                                  unsigned threads = 1);

}  // namespace gangnet
