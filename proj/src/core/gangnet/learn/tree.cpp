#include "gangnet/learn/tree.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

#include "gangnet/error.hpp"
#include "gangnet/rng.hpp"

namespace gangnet {

void Samples::add(std::span<const double> values, std::uint8_t label) {
  if (cols == 0 && y.empty()) cols = values.size();
  if (values.size() != cols) throw ValidationError("sample width mismatch");
  x.insert(x.end(), values.begin(), values.end());
  y.push_back(label);
}

double TreeModel::predict(const double* row) const {
  std::uint32_t i = 0;
  while (nodes_[i].feature >= 0) i = row[nodes_[i].feature] <= nodes_[i].threshold ? nodes_[i].left : nodes_[i].right;
  return nodes_[i].probability;
}

std::size_t TreeModel::depth() const {
  std::vector<std::size_t> d(nodes_.size(), 0);
  std::size_t best = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    best = std::max(best, d[i]);
    if (nodes_[i].feature >= 0) d[nodes_[i].left] = d[nodes_[i].right] = d[i] + 1;
  }
  return best;
}

std::string TreeModel::serialize() const {
  std::string out;
  char buf[96];
  for (const auto& n : nodes_) {
    if (n.feature < 0)
      std::snprintf(buf, sizeof buf, "L %.17g\n", n.probability);
    else
      std::snprintf(buf, sizeof buf, "S %d %.17g %u %u\n", n.feature, n.threshold, n.left, n.right);
    out += buf;
  }
  return out;
}

class TreeBuilder {
 public:
  TreeBuilder(const Samples& data, const TreeParams& params)
      : data_(data), params_(params), rng_(params.seed) {
    mtry_ = params.features_per_split == 0 ? data.cols : std::min(params.features_per_split, data.cols);
  }

  TreeModel build(std::vector<std::uint32_t> idx) {
    TreeModel model;
    nodes_ = &model.nodes_;
    // Rows of a node are kept contiguous in idx; a work stack of
    // (node, begin, end, depth) expands nodes depth-first, left first.
    idx_ = std::move(idx);
    nodes_->push_back({});
    struct Work {
      std::uint32_t node;
      std::size_t begin, end, depth;
    };
    std::vector<Work> stack{{0, 0, idx_.size(), 0}};
    while (!stack.empty()) {
      const Work w = stack.back();
      stack.pop_back();
      std::size_t pos = 0;
      for (std::size_t i = w.begin; i < w.end; ++i) pos += data_.y[idx_[i]];
      const std::size_t count = w.end - w.begin;
      (*nodes_)[w.node].probability = static_cast<double>(pos) / static_cast<double>(count);
      if (pos == 0 || pos == count) continue;
      if (params_.max_depth != 0 && w.depth >= params_.max_depth) continue;
      if (count < 2 * params_.min_leaf) continue;
      auto split = best_split(w.begin, w.end, pos);
      if (split.feature < 0) continue;
      // Partition rows in place: left block first, stable to stay deterministic.
      auto mid = std::stable_partition(idx_.begin() + static_cast<std::ptrdiff_t>(w.begin),
                                       idx_.begin() + static_cast<std::ptrdiff_t>(w.end), [&](std::uint32_t r) {
                                         return data_.row(r)[split.feature] <= split.threshold;
                                       });
      const std::size_t m = static_cast<std::size_t>(mid - idx_.begin());
      const auto left = static_cast<std::uint32_t>(nodes_->size());
      nodes_->push_back({});
      nodes_->push_back({});
      auto& n = (*nodes_)[w.node];
      n.feature = split.feature;
      n.threshold = split.threshold;
      n.left = left;
      n.right = left + 1;
      stack.push_back({left + 1, m, w.end, w.depth + 1});
      stack.push_back({left, w.begin, m, w.depth + 1});
    }
    return model;
  }

 private:
  struct Split {
    std::int32_t feature = -1;
    double threshold = 0;
  };

  // Features are tried in a random order; constant ones do not count toward
  // the per-split budget.
  Split best_split(std::size_t begin, std::size_t end, std::size_t pos_total) {
    std::vector<std::uint32_t> features(data_.cols);
    std::iota(features.begin(), features.end(), 0u);
    rng_.shuffle(features);
    const std::size_t count = end - begin;
    const double n = static_cast<double>(count);
    const double parent = gini(static_cast<double>(pos_total), n);
    Split best;
    // Zero-gain splits are kept (XOR-like cells need one to get started).
    double best_score = parent + 1e-12;
    std::vector<std::pair<double, std::uint8_t>> col(count);
    std::size_t tried = 0;
    for (std::uint32_t f : features) {
      if (tried >= mtry_) break;
      for (std::size_t i = 0; i < count; ++i) {
        const auto r = idx_[begin + i];
        col[i] = {data_.row(r)[f], data_.y[r]};
      }
      std::sort(col.begin(), col.end());
      if (col.front().first == col.back().first) continue;
      ++tried;
      std::size_t lpos = 0;
      for (std::size_t i = 0; i + 1 < count; ++i) {
        lpos += col[i].second;
        if (col[i].first == col[i + 1].first) continue;
        const std::size_t nl = i + 1, nr = count - nl;
        if (nl < params_.min_leaf || nr < params_.min_leaf) continue;
        const double score = (static_cast<double>(nl) * gini(static_cast<double>(lpos), static_cast<double>(nl)) +
                              static_cast<double>(nr) * gini(static_cast<double>(pos_total - lpos),
                                                            static_cast<double>(nr))) /
                             n;
        if (score < best_score) {
          best_score = score;
          best.feature = static_cast<std::int32_t>(f);
          best.threshold = col[i].first + (col[i + 1].first - col[i].first) / 2;
          // Midpoint can round onto the upper value for adjacent doubles.
          if (!(best.threshold < col[i + 1].first)) best.threshold = col[i].first;
        }
      }
    }
    return best;
  }

  static double gini(double pos, double n) {
    const double p = pos / n;
    return 2 * p * (1 - p);
  }

  const Samples& data_;
  TreeParams params_;
  Rng rng_;
  std::size_t mtry_ = 0;
  std::vector<TreeNode>* nodes_ = nullptr;
  std::vector<std::uint32_t> idx_;
};

TreeModel fit_tree(const Samples& data, const TreeParams& params, std::span<const std::uint32_t> sample) {
  if (data.rows() == 0) throw ValidationError("cannot fit a tree on zero rows");
  if (params.min_leaf == 0) throw ConfigError("min_leaf must be positive");
  std::vector<std::uint32_t> idx(sample.begin(), sample.end());
  if (idx.empty()) {
    idx.resize(data.rows());
    std::iota(idx.begin(), idx.end(), 0u);
  }
  for (auto r : idx)
    if (r >= data.rows()) throw ValidationError("sample index out of range");
  return TreeBuilder(data, params).build(std::move(idx));
}

}  // namespace gangnet
