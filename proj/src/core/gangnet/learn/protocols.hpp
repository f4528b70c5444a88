#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gangnet/domain.hpp"
#include "gangnet/learn/forest.hpp"
#include "gangnet/learn/metrics.hpp"

namespace gangnet {

enum class Classifier { rf, dt };

struct ClassifierParams {
  Classifier kind = Classifier::rf;
  ForestParams forest;  // dt uses max_depth and min_leaf only
  bool smote = true;
  std::size_t smote_k = 5;
  double smote_amount = 0;  // 0: balance the classes
};

// Fits on `train` (oversampling inside it when enabled) and scores `test`.
std::vector<double> fit_and_score(const Samples& train, const Samples& test, const ClassifierParams& params,
                                  std::uint64_t seed, unsigned threads, std::vector<std::string>* warnings = nullptr);

// Fold index per row. Each class is shuffled and dealt round-robin, so
// per-fold class counts differ by at most one. Throws when there are fewer
// positives than folds.
std::vector<std::uint32_t> stratified_folds(const std::vector<std::uint8_t>& labels, std::size_t k,
                                            std::uint64_t seed);

struct MonthAudit {
  std::string month;
  Date cutoff;
  std::optional<Date> latest_read;
  std::size_t reads = 0;
};

struct EvalReport {
  std::string protocol;
  std::vector<SliceMetrics> slices;
  std::vector<SliceMetrics> aggregate;  // pooled over slices, one per method
  std::map<std::string, std::uint64_t> seeds;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<std::string> warnings;
  std::map<std::string, std::vector<std::pair<double, double>>> roc;  // pooled, per method
  // Predicted-positive offender ids per slice and method. Not serialized.
  std::map<std::string, std::map<std::string, std::vector<std::string>>> predicted;
  std::vector<MonthAudit> audits;
};

struct KFoldOptions {
  std::size_t k = 10;
  ClassifierParams classifier;
  std::vector<std::string> compare;  // any of "thh", "allpos"
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

// Known-network protocol: one network over all records, own labels masked,
// label = any violent offense in the data.
EvalReport eval_kfold(const Dataset& data, const KFoldOptions& options);

enum class CandidatePool { all, recent };

struct TemporalOptions {
  int start_month = 18;  // months after the first month of data
  std::size_t inner_folds = 5;
  int frf_days = 200;
  CandidatePool pool = CandidatePool::all;
  ClassifierParams classifier;
  std::vector<std::string> compare;  // any of "pva", "thh"
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

// Monthly protocol: for each month boundary M, everything is rebuilt from
// records dated before M and scored against violence on or after M.
EvalReport eval_temporal(const Dataset& data, const TemporalOptions& options);

std::string report_json(const EvalReport& report);
// slice,method,precision,recall,f1,auc,tp,fp,fn
void write_prf_csv(std::ostream& out, const EvalReport& report);
// method,fpr,tpr
void write_roc_csv(std::ostream& out, const EvalReport& report);

}  // namespace gangnet
