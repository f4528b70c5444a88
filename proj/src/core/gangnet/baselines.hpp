#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gangnet/graph.hpp"

namespace gangnet {

enum class Method { pva, thh };

struct Watchlist {
  Method method = Method::pva;
  std::optional<Date> as_of;
  std::vector<std::string> members;  // ascending offender ids

  bool contains(std::string_view id) const;
};

// Offenders with a violent offense dated <= as_of, and >= as_of - delta_days
// when a window is given. Works on the dataset, so solo offenders count.
Watchlist pva(const Dataset& data, Date as_of, std::optional<int> delta_days = std::nullopt);

// Non-violent nodes within two hops of a homicide victim. With `masked_labels`
// every node's own violent labels are treated as unknown for its own filter
// test, so the violent filter drops nobody.
Watchlist thh(const CoOffenderNetwork& g, const Dataset& data, bool masked_labels = false);

// Sorted ids one per line.
std::string write_watchlist(const Watchlist& w);

}  // namespace gangnet
