#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gangnet {

struct SliceMetrics {
  std::string id;
  std::string method;
  std::optional<double> precision, recall, auc;  // nullopt when undefined
  double f1 = 0;
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
};

// Predicted positive when score >= threshold.
SliceMetrics evaluate(std::span<const double> scores, std::span<const std::uint8_t> labels, double threshold = 0.5);

// Probability a random positive outscores a random negative, ties half.
// nullopt unless both classes are present.
std::optional<double> auc_rank(std::span<const double> scores, std::span<const std::uint8_t> labels);

// (fpr, tpr) at every distinct threshold, from (0,0) to (1,1). Empty when a
// class is missing.
std::vector<std::pair<double, double>> roc_points(std::span<const double> scores,
                                                  std::span<const std::uint8_t> labels);

double f1_score(std::optional<double> precision, std::optional<double> recall);

}  // namespace gangnet
