#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gangnet/learn/tree.hpp"

namespace gangnet {

struct ForestParams {
  std::size_t trees = 100;
  std::size_t features_per_split = 0;  // 0: ceil(sqrt(p))
  bool bootstrap = true;
  std::size_t max_depth = 0;
  std::size_t min_leaf = 1;
  std::uint64_t seed = 0;
};

class ForestModel {
 public:
  // Mean of the trees' leaf probabilities.
  double score(const double* row) const;
  std::size_t size() const { return trees_.size(); }
  const TreeModel& tree(std::size_t i) const { return trees_[i]; }
  std::uint64_t seed() const { return seed_; }
  std::size_t features_per_split() const { return mtry_; }
  std::string serialize() const;

 private:
  friend ForestModel fit_forest(const Samples&, const ForestParams&, unsigned);
  std::vector<TreeModel> trees_;
  std::uint64_t seed_ = 0;
  std::size_t mtry_ = 0;
};

ForestModel fit_forest(const Samples& data, const ForestParams& params, unsigned threads = 1);

}  // namespace gangnet
