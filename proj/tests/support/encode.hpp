#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "gangnet/date.hpp"

namespace fixture {

inline std::string node_name(gangnet::NodeId v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "n%02u", v);
  return buf;
}

// Arrest rows for a corpus graph: one two-person theft per edge, a solo
// robbery for each violent node and a victim-only row for each victim.
// Isolated nodes therefore never enter the co-offender network.
inline std::string encode(const corpus::Case& c, const std::vector<bool>& violent, const std::vector<bool>& victim) {
  const auto day = [](int offset) { return gangnet::Date::from_ymd(2012, 1, 1)->add_days(offset).to_string(); };
  std::string body;
  int e = 0;
  for (auto [u, v] : c.edges) {
    for (gangnet::NodeId x : {u, v})
      body += "E" + std::to_string(e) + "," + node_name(x) + "," + day(e) + ",theft,0,D01,B0101,,0\n";
    ++e;
  }
  for (gangnet::NodeId v = 0; v < c.n; ++v) {
    const int i = static_cast<int>(v);
    if (violent[v]) body += "S" + std::to_string(v) + "," + node_name(v) + "," + day(500 + i) + ",robbery,1,D01,B0101,,0\n";
    if (victim[v]) body += "V" + std::to_string(v) + "," + node_name(v) + "," + day(800 + i) + ",,0,D01,B0101,,1\n";
  }
  return body;
}

}  // namespace fixture
