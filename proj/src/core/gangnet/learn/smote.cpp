#include "gangnet/learn/smote.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gangnet/error.hpp"
#include "gangnet/rng.hpp"

namespace gangnet {

std::size_t smote_count(std::size_t minority, std::size_t majority, double amount) {
  if (amount < 0) throw ConfigError("smote amount must be non-negative");
  if (amount == 0) return majority > minority ? majority - minority : 0;
  return static_cast<std::size_t>(std::llround(amount * static_cast<double>(minority)));
}

std::vector<Row> smote(const std::vector<Row>& minority, std::size_t k, std::size_t count, std::uint64_t seed) {
  const std::size_t m = minority.size();
  if (k == 0) throw ConfigError("smote needs k >= 1");
  if (m <= k)
    throw ValidationError("smote needs more than " + std::to_string(k) + " minority rows, got " + std::to_string(m));
  const std::size_t p = minority.front().size();
  for (const auto& r : minority)
    if (r.size() != p) throw ValidationError("smote rows differ in width");

  std::vector<double> mean(p, 0.0), sd(p, 0.0);
  for (const auto& r : minority)
    for (std::size_t j = 0; j < p; ++j) mean[j] += r[j];
  for (auto& x : mean) x /= static_cast<double>(m);
  for (const auto& r : minority)
    for (std::size_t j = 0; j < p; ++j) sd[j] += (r[j] - mean[j]) * (r[j] - mean[j]);
  for (auto& x : sd) {
    x = std::sqrt(x / static_cast<double>(m));
    if (x == 0) x = 1;
  }
  std::vector<double> z(m * p);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < p; ++j) z[i * p + j] = (minority[i][j] - mean[j]) / sd[j];

  // k nearest per row, ties broken by index.
  std::vector<std::vector<std::uint32_t>> nn(m);
  std::vector<std::pair<double, std::uint32_t>> d(m - 1);
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t w = 0;
    for (std::size_t o = 0; o < m; ++o) {
      if (o == i) continue;
      double s = 0;
      for (std::size_t j = 0; j < p; ++j) {
        const double t = z[i * p + j] - z[o * p + j];
        s += t * t;
      }
      d[w++] = {s, static_cast<std::uint32_t>(o)};
    }
    std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k), d.end());
    for (std::size_t t = 0; t < k; ++t) nn[i].push_back(d[t].second);
  }

  Rng rng(seed);
  std::vector<Row> out;
  out.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    const std::size_t i = rng.index(m);
    const auto& a = minority[i];
    const auto& b = minority[nn[i][rng.index(k)]];
    const double u = rng.uniform();
    Row r(p);
    for (std::size_t j = 0; j < p; ++j) r[j] = a[j] + u * (b[j] - a[j]);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace gangnet
