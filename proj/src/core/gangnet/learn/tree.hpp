#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace gangnet {

// Row-major training table with binary labels.
struct Samples {
  std::size_t cols = 0;
  std::vector<double> x;
  std::vector<std::uint8_t> y;

  std::size_t rows() const { return y.size(); }
  const double* row(std::size_t i) const { return x.data() + i * cols; }
  void add(std::span<const double> values, std::uint8_t label);
};

struct TreeParams {
  std::size_t max_depth = 0;           // 0: unlimited
  std::size_t min_leaf = 1;
  std::size_t features_per_split = 0;  // 0: all features
  std::uint64_t seed = 0;
};

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0;       // go left when x[feature] <= threshold
  std::uint32_t left = 0, right = 0;
  double probability = 0;     // positive-class probability at a leaf
};

class TreeModel {
 public:
  double predict(const double* row) const;
  std::span<const TreeNode> nodes() const { return nodes_; }
  std::size_t depth() const;
  std::string serialize() const;

 private:
  friend class TreeBuilder;
  std::vector<TreeNode> nodes_;
};

// CART with Gini impurity. `sample` lists training row indices, repeats
// allowed (bootstrap); empty means every row once.
TreeModel fit_tree(const Samples& data, const TreeParams& params, std::span<const std::uint32_t> sample = {});

}  // namespace gangnet
