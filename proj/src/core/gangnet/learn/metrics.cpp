#include "gangnet/learn/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "gangnet/error.hpp"

namespace gangnet {

namespace {

void check(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) throw ValidationError("scores and labels differ in length");
}

// Indices by descending score.
std::vector<std::size_t> by_score(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

}  // namespace

double f1_score(std::optional<double> precision, std::optional<double> recall) {
  if (!precision || !recall || *precision + *recall == 0) return 0;
  return 2 * *precision * *recall / (*precision + *recall);
}

SliceMetrics evaluate(std::span<const double> scores, std::span<const std::uint8_t> labels, double threshold) {
  check(scores, labels);
  SliceMetrics m;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool pred = scores[i] >= threshold;
    if (pred && labels[i]) ++m.tp;
    else if (pred) ++m.fp;
    else if (labels[i]) ++m.fn;
    else ++m.tn;
  }
  if (m.tp + m.fp > 0) m.precision = static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp);
  if (m.tp + m.fn > 0) m.recall = static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn);
  m.f1 = f1_score(m.precision, m.recall);
  m.auc = auc_rank(scores, labels);
  return m;
}

std::optional<double> auc_rank(std::span<const double> scores, std::span<const std::uint8_t> labels) {
  check(scores, labels);
  const std::size_t pos = static_cast<std::size_t>(std::count_if(labels.begin(), labels.end(), [](auto y) { return y != 0; }));
  const std::size_t neg = labels.size() - pos;
  if (pos == 0 || neg == 0) return std::nullopt;
  // Mann-Whitney with midranks over tied groups, ascending.
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double rank_sum = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double mid = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2;
    for (std::size_t t = i; t < j; ++t)
      if (labels[order[t]]) rank_sum += mid;
    i = j;
  }
  const double p = static_cast<double>(pos), n = static_cast<double>(neg);
  return (rank_sum - p * (p + 1) / 2) / (p * n);
}

std::vector<std::pair<double, double>> roc_points(std::span<const double> scores,
                                                  std::span<const std::uint8_t> labels) {
  check(scores, labels);
  const double pos = static_cast<double>(std::count_if(labels.begin(), labels.end(), [](auto y) { return y != 0; }));
  const double neg = static_cast<double>(labels.size()) - pos;
  if (pos == 0 || neg == 0) return {};
  const auto order = by_score(scores);
  std::vector<std::pair<double, double>> pts{{0.0, 0.0}};
  double tp = 0, fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      if (labels[order[j]]) tp += 1;
      else fp += 1;
      ++j;
    }
    pts.emplace_back(fp / neg, tp / pos);
    i = j;
  }
  return pts;
}

}  // namespace gangnet
