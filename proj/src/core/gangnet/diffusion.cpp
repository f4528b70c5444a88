#include "gangnet/diffusion.hpp"

#include "gangnet/error.hpp"
#include "gangnet/parallel.hpp"

namespace gangnet {

namespace {

void check_kappa(unsigned kappa) {
  if (kappa == 0) throw ConfigError("tipping threshold must be positive");
}

}  // namespace

ActivationState step_activation(const CoOffenderNetwork& g, const ActivationState& state, unsigned kappa) {
  check_kappa(kappa);
  if (state.active.size() != g.node_count()) throw ValidationError("activation state does not match the network");
  ActivationState next{state.active, state.step + 1};
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (state.active[v]) continue;
    unsigned hits = 0;
    for (NodeId u : g.neighbors(v))
      if (state.active[u] && ++hits >= kappa) break;
    if (hits >= kappa) next.active[v] = 1;
  }
  return next;
}

Fixpoint propagate_to_fixpoint(const CoOffenderNetwork& g, const NodeMask& seeds, unsigned kappa) {
  check_kappa(kappa);
  const std::size_t n = g.node_count();
  if (seeds.size() != n) throw ValidationError("seed mask does not match the network");
  Fixpoint fp{seeds, 0, 0};
  std::vector<unsigned> hits(n, 0);
  std::vector<NodeId> frontier, next;
  for (NodeId v = 0; v < n; ++v)
    if (seeds[v]) {
      fp.active[v] = 1;
      frontier.push_back(v);
    }
  fp.size = frontier.size();
  // Round r activates exactly the nodes whose count crossed kappa from the
  // activations of round r - 1, which matches step_activation.
  for (;;) {
    ++fp.steps;
    next.clear();
    for (NodeId u : frontier)
      for (NodeId w : g.neighbors(u))
        if (!fp.active[w] && ++hits[w] == kappa) next.push_back(w);
    if (next.empty()) break;
    for (NodeId w : next) fp.active[w] = 1;
    fp.size += next.size();
    frontier.swap(next);
  }
  return fp;
}

bool propagation_feature(const CoOffenderNetwork& g, NodeId v, const NodeMask& seeds, unsigned kappa,
                         std::optional<NodeId> masked) {
  g.check(v);
  if (!masked || !seeds[*masked]) return propagate_to_fixpoint(g, seeds, kappa).active[v] != 0;
  NodeMask s = seeds;
  s[*masked] = 0;
  return propagate_to_fixpoint(g, s, kappa).active[v] != 0;
}

std::vector<std::uint8_t> propagation_self_masked(const CoOffenderNetwork& g, const NodeMask& seeds, unsigned kappa,
                                                  unsigned threads) {
  const auto full = propagate_to_fixpoint(g, seeds, kappa);
  std::vector<std::uint8_t> out(full.active.begin(), full.active.end());
  std::vector<NodeId> rerun;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (!seeds[v]) continue;
    // Removing v shrinks the fixpoint, so v can only come back through
    // neighbours that are active in the full one.
    unsigned hits = 0;
    for (NodeId u : g.neighbors(v))
      if (full.active[u]) ++hits;
    if (hits < kappa)
      out[v] = 0;
    else
      rerun.push_back(v);
  }
  parallel_for(rerun.size(), threads, [&](std::size_t i) {
    const NodeId v = rerun[i];
    NodeMask s = seeds;
    s[v] = 0;
    out[v] = propagate_to_fixpoint(g, s, kappa).active[v];
  });
  return out;
}

}  // namespace gangnet
