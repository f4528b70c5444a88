#include "gangnet/baselines.hpp"

#include <algorithm>

#include "gangnet/error.hpp"

namespace gangnet {

bool Watchlist::contains(std::string_view id) const {
  return std::binary_search(members.begin(), members.end(), id);
}

Watchlist pva(const Dataset& data, Date as_of, std::optional<int> delta_days) {
  if (delta_days && *delta_days < 0) throw ConfigError("delta-days must be non-negative");
  Watchlist w{Method::pva, as_of, {}};
  for (std::uint32_t o = 0; o < data.offender_count(); ++o) {
    const auto last = data.history(o).last_violent_on_or_before(as_of);
    if (!last) continue;
    if (delta_days && *last < as_of.add_days(-*delta_days)) continue;
    w.members.push_back(data.offender_id(o));
  }
  return w;
}

Watchlist thh(const CoOffenderNetwork& g, const Dataset& data, bool masked_labels) {
  Watchlist w{Method::thh, data.last_date(), {}};
  NodeMask picked(g.node_count(), 0);
  for (NodeId u = 0; u < g.node_count(); ++u) {
    if (!data.history(g.offender(u)).is_homicide_victim()) continue;
    for (unsigned hops = 1; hops <= 2; ++hops)
      for (NodeId x : hop_neighborhood(g, u, hops))
        if (masked_labels || !data.history(g.offender(x)).has_violent()) picked[x] = 1;
  }
  for (NodeId x = 0; x < g.node_count(); ++x)
    if (picked[x]) w.members.push_back(g.id(x));
  return w;
}

std::string write_watchlist(const Watchlist& w) {
  std::string out;
  for (const auto& id : w.members) out += id + '\n';
  return out;
}

}  // namespace gangnet
