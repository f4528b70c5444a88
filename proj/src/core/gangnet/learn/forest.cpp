#include "gangnet/learn/forest.hpp"

#include <cmath>
#include <numeric>

#include "gangnet/error.hpp"
#include "gangnet/parallel.hpp"
#include "gangnet/rng.hpp"

namespace gangnet {

double ForestModel::score(const double* row) const {
  double s = 0;
  for (const auto& t : trees_) s += t.predict(row);
  return s / static_cast<double>(trees_.size());
}

std::string ForestModel::serialize() const {
  std::string out = "forest " + std::to_string(trees_.size()) + ' ' + std::to_string(seed_) + ' ' +
                    std::to_string(mtry_) + '\n';
  for (const auto& t : trees_) out += "tree\n" + t.serialize();
  return out;
}

ForestModel fit_forest(const Samples& data, const ForestParams& params, unsigned threads) {
  if (data.rows() == 0) throw ValidationError("cannot fit a forest on zero rows");
  if (params.trees == 0) throw ConfigError("forest needs at least one tree");
  ForestModel f;
  f.seed_ = params.seed;
  f.mtry_ = params.features_per_split != 0
                ? params.features_per_split
                : static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(data.cols))));
  f.trees_.resize(params.trees);
  parallel_for(params.trees, threads, [&](std::size_t t) {
    const std::uint64_t s = mix_seed(params.seed, t);
    std::vector<std::uint32_t> sample;
    if (params.bootstrap) {
      Rng rng(mix_seed(s, 0));
      sample.resize(data.rows());
      for (auto& r : sample) r = static_cast<std::uint32_t>(rng.index(data.rows()));
    }
    TreeParams tp{params.max_depth, params.min_leaf, f.mtry_, mix_seed(s, 1)};
    f.trees_[t] = fit_tree(data, tp, sample);
  });
  return f;
}

}  // namespace gangnet
