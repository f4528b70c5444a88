#include "gangnet/learn/protocols.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <set>

#include "gangnet/baselines.hpp"
#include "gangnet/error.hpp"
#include "gangnet/features.hpp"
#include "gangnet/learn/smote.hpp"
#include "gangnet/rng.hpp"
#include "json.hpp"

namespace gangnet {

namespace {

std::string classifier_name(Classifier c) { return c == Classifier::rf ? "rf" : "dt"; }

Samples rows_of(const FeatureMatrix& fm, const std::vector<std::uint8_t>& labels,
                const std::vector<std::uint32_t>& rows) {
  Samples s;
  s.cols = fm.columns.size();
  for (auto r : rows)
    s.add(std::span<const double>(fm.values.data() + r * s.cols, s.cols), labels[r]);
  return s;
}

// Collects per-method (score, label) pairs across slices and emits slice rows.
struct Pool {
  std::vector<double> scores;
  std::vector<std::uint8_t> labels;
};

void add_slice(EvalReport& report, std::map<std::string, Pool>& pools, const std::string& id,
               const std::string& method, const std::vector<double>& scores, const std::vector<std::uint8_t>& labels,
               std::vector<std::string> predicted) {
  auto m = evaluate(scores, labels);
  m.id = id;
  m.method = method;
  report.slices.push_back(m);
  auto& p = pools[method];
  p.scores.insert(p.scores.end(), scores.begin(), scores.end());
  p.labels.insert(p.labels.end(), labels.begin(), labels.end());
  report.predicted[id][method] = std::move(predicted);
}

void finish(EvalReport& report, const std::map<std::string, Pool>& pools, const std::vector<std::string>& order) {
  for (const auto& method : order) {
    auto it = pools.find(method);
    if (it == pools.end()) continue;
    auto m = evaluate(it->second.scores, it->second.labels);
    m.id = "all";
    m.method = method;
    report.aggregate.push_back(m);
    report.roc[method] = roc_points(it->second.scores, it->second.labels);
  }
}

void classifier_params(EvalReport& r, const ClassifierParams& c) {
  r.params.emplace_back("classifier", classifier_name(c.kind));
  r.params.emplace_back("trees", std::to_string(c.forest.trees));
  r.params.emplace_back("features_per_split", std::to_string(c.forest.features_per_split));
  r.params.emplace_back("bootstrap", c.forest.bootstrap ? "true" : "false");
  r.params.emplace_back("max_depth", std::to_string(c.forest.max_depth));
  r.params.emplace_back("min_leaf", std::to_string(c.forest.min_leaf));
  r.params.emplace_back("smote", c.smote ? "true" : "false");
  r.params.emplace_back("smote_k", std::to_string(c.smote_k));
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", c.smote_amount);
  r.params.emplace_back("smote_amount", buf);
}

bool wants(const std::vector<std::string>& list, std::string_view name) {
  return std::find(list.begin(), list.end(), name) != list.end();
}

// Out-of-fold scores for every row of fm.
std::vector<double> oof_scores(const FeatureMatrix& fm, const std::vector<std::uint8_t>& labels, std::size_t k,
                               const ClassifierParams& params, std::uint64_t seed, unsigned threads,
                               std::vector<std::string>& warnings, std::vector<std::uint32_t>* fold_out = nullptr) {
  const auto folds = stratified_folds(labels, k, mix_seed(seed, 1));
  std::vector<double> scores(fm.rows(), 0.0);
  for (std::uint32_t f = 0; f < k; ++f) {
    std::vector<std::uint32_t> train, test;
    for (std::uint32_t r = 0; r < fm.rows(); ++r) (folds[r] == f ? test : train).push_back(r);
    const auto s = fit_and_score(rows_of(fm, labels, train), rows_of(fm, labels, test), params,
                                 mix_seed(seed, 100 + f), threads, &warnings);
    for (std::size_t i = 0; i < test.size(); ++i) scores[test[i]] = s[i];
  }
  if (fold_out) *fold_out = folds;
  return scores;
}

}  // namespace

std::vector<double> fit_and_score(const Samples& train, const Samples& test, const ClassifierParams& params,
                                  std::uint64_t seed, unsigned threads, std::vector<std::string>* warnings) {
  Samples data = train;
  if (params.smote) {
    std::vector<Row> minority;
    for (std::size_t i = 0; i < train.rows(); ++i)
      if (train.y[i]) minority.emplace_back(train.row(i), train.row(i) + train.cols);
    const std::size_t majority = train.rows() - minority.size();
    if (minority.size() > params.smote_k) {
      const auto extra = smote(minority, params.smote_k, smote_count(minority.size(), majority, params.smote_amount),
                               mix_seed(seed, 7));
      for (const auto& r : extra) data.add(r, 1);
    } else if (warnings) {
      warnings->push_back("oversampling skipped: " + std::to_string(minority.size()) +
                          " minority rows is not more than k=" + std::to_string(params.smote_k));
    }
  }
  std::vector<double> out(test.rows());
  if (params.kind == Classifier::dt) {
    TreeParams tp{params.forest.max_depth, params.forest.min_leaf, 0, mix_seed(seed, 3)};
    const auto tree = fit_tree(data, tp);
    for (std::size_t i = 0; i < test.rows(); ++i) out[i] = tree.predict(test.row(i));
  } else {
    ForestParams fp = params.forest;
    fp.seed = mix_seed(seed, 3);
    const auto forest = fit_forest(data, fp, threads);
    for (std::size_t i = 0; i < test.rows(); ++i) out[i] = forest.score(test.row(i));
  }
  return out;
}

std::vector<std::uint32_t> stratified_folds(const std::vector<std::uint8_t>& labels, std::size_t k,
                                            std::uint64_t seed) {
  if (k < 2) throw ConfigError("k-fold needs k >= 2");
  std::vector<std::uint32_t> pos, neg;
  for (std::uint32_t i = 0; i < labels.size(); ++i) (labels[i] ? pos : neg).push_back(i);
  if (pos.size() < k)
    throw ValidationError("stratified " + std::to_string(k) + "-fold needs at least " + std::to_string(k) +
                          " positives, found " + std::to_string(pos.size()));
  Rng rng(seed);
  rng.shuffle(pos);
  rng.shuffle(neg);
  std::vector<std::uint32_t> fold(labels.size(), 0);
  for (std::size_t i = 0; i < pos.size(); ++i) fold[pos[i]] = static_cast<std::uint32_t>(i % k);
  // Negatives continue the deal where positives stopped to even out totals.
  for (std::size_t i = 0; i < neg.size(); ++i) fold[neg[i]] = static_cast<std::uint32_t>((pos.size() + i) % k);
  return fold;
}

EvalReport eval_kfold(const Dataset& data, const KFoldOptions& options) {
  for (const auto& c : options.compare)
    if (c != "thh" && c != "allpos")
      throw ConfigError("k-fold comparison supports thh and allpos, not '" + c + "'");
  EvalReport report;
  report.protocol = "kfold";
  report.seeds["seed"] = options.seed;
  report.params.emplace_back("k", std::to_string(options.k));
  classifier_params(report, options.classifier);

  const auto g = build_network(data);
  FeatureConfig fc;
  fc.mask_own_labels = true;
  fc.seed = options.seed;
  fc.threads = options.threads;
  const auto fm = assemble(data, g, fc);
  const auto& labels = fm.labels;
  std::vector<std::uint32_t> folds;
  const auto scores = oof_scores(fm, labels, options.k, options.classifier, options.seed, options.threads,
                                 report.warnings, &folds);

  std::optional<Watchlist> thh_list;
  if (wants(options.compare, "thh")) {
    if (data.any_homicide_victim())
      thh_list = thh(g, data, true);
    else
      report.warnings.push_back("thh skipped: no homicide_victim flags in the data");
  }

  const std::string method = classifier_name(options.classifier.kind);
  std::map<std::string, Pool> pools;
  for (std::uint32_t f = 0; f < options.k; ++f) {
    std::vector<std::uint32_t> rows;
    for (std::uint32_t r = 0; r < fm.rows(); ++r)
      if (folds[r] == f) rows.push_back(r);
    std::vector<std::uint8_t> y;
    for (auto r : rows) y.push_back(labels[r]);
    const std::string id = "fold" + std::to_string(f);
    auto emit = [&](const std::string& name, auto&& score_of) {
      std::vector<double> s;
      std::vector<std::string> picked;
      for (auto r : rows) {
        s.push_back(score_of(r));
        if (s.back() >= 0.5) picked.push_back(fm.ids[r]);
      }
      add_slice(report, pools, id, name, s, y, std::move(picked));
    };
    emit(method, [&](std::uint32_t r) { return scores[r]; });
    if (thh_list) emit("thh", [&](std::uint32_t r) { return thh_list->contains(fm.ids[r]) ? 1.0 : 0.0; });
    if (wants(options.compare, "allpos")) emit("allpos", [](std::uint32_t) { return 1.0; });
  }
  finish(report, pools, {method, "thh", "allpos"});
  return report;
}

EvalReport eval_temporal(const Dataset& data, const TemporalOptions& options) {
  for (const auto& c : options.compare)
    if (c != "pva" && c != "thh") throw ConfigError("temporal comparison supports pva and thh, not '" + c + "'");
  if (options.start_month < 1) throw ConfigError("start-month must be at least 1");
  if (options.frf_days < 0) throw ConfigError("frf-days must be non-negative");
  EvalReport report;
  report.protocol = "temporal";
  report.seeds["seed"] = options.seed;
  report.params.emplace_back("start_month", std::to_string(options.start_month));
  report.params.emplace_back("inner_folds", std::to_string(options.inner_folds));
  report.params.emplace_back("frf_days", std::to_string(options.frf_days));
  report.params.emplace_back("pool", options.pool == CandidatePool::all ? "all" : "recent");
  classifier_params(report, options.classifier);

  const auto first = data.first_date(), last = data.last_date();
  if (!first) throw ValidationError("temporal evaluation needs a non-empty dataset");
  const int span = months_between(*first, *last) + 1;
  if (span < options.start_month + 1)
    throw ConfigError("data spans " + std::to_string(span) + " months; start-month " +
                      std::to_string(options.start_month) + " needs at least " +
                      std::to_string(options.start_month + 1));

  const std::string method = classifier_name(options.classifier.kind);
  const std::string filtered = method == "rf" ? "frf" : "f" + method;
  std::map<std::string, Pool> pools;
  const Date base = first->first_of_month();
  for (int m = options.start_month; m < span; ++m) {
    const Date cutoff = base.add_months(m);
    const std::string id = month_label(cutoff);
    const Dataset prefix = data.before(cutoff);
    if (prefix.record_count() == 0) {
      report.warnings.push_back(id + ": empty training prefix, month skipped");
      continue;
    }
    AccessAudit audit;
    prefix.attach_audit(&audit);
    const auto g = build_network(prefix);
    FeatureConfig fc;
    fc.mask_own_labels = true;
    fc.seed = mix_seed(options.seed, static_cast<std::uint64_t>(m));
    fc.threads = options.threads;
    const auto fm = assemble(prefix, g, fc);
    const std::size_t positives = static_cast<std::size_t>(std::count(fm.labels.begin(), fm.labels.end(), 1));
    if (positives < options.inner_folds || positives == fm.rows()) {
      report.warnings.push_back(id + ": " + std::to_string(positives) +
                                " violent offenders in the prefix network is too few to train, month skipped");
      prefix.attach_audit(nullptr);
      report.audits.push_back({id, cutoff, audit.latest(), audit.reads()});
      continue;
    }
    const auto node_scores = oof_scores(fm, fm.labels, options.inner_folds, options.classifier,
                                        mix_seed(options.seed, static_cast<std::uint64_t>(m)), options.threads,
                                        report.warnings);

    std::optional<Watchlist> pva_list, thh_list;
    if (wants(options.compare, "pva")) pva_list = pva(prefix, cutoff.add_days(-1));
    if (wants(options.compare, "thh")) {
      if (prefix.any_homicide_victim())
        thh_list = thh(g, prefix, false);
      else
        report.warnings.push_back(id + ": thh predicts nobody, no homicide victims before the cutoff");
    }

    // Candidate universe and per-candidate predictions, all from the prefix.
    const Date recent = cutoff.add_days(-options.frf_days);
    std::vector<std::string> ids;
    std::vector<double> rf, frf, pv, th;
    for (std::uint32_t o = 0; o < prefix.offender_count(); ++o) {
      const auto& h = prefix.history(o);
      const auto ev = h.events();
      const auto last = std::find_if(ev.rbegin(), ev.rend(), [](const HistoryEntry& e) { return e.crime.has_value(); });
      const bool is_recent = last != ev.rend() && last->date >= recent;
      if (options.pool == CandidatePool::recent && !is_recent) continue;
      const auto& oid = prefix.offender_id(o);
      ids.push_back(oid);
      const auto node = g.find(oid);
      const double s = node ? node_scores[*node] : 0.0;
      rf.push_back(s);
      frf.push_back(is_recent ? s : 0.0);
      pv.push_back(pva_list && pva_list->contains(oid) ? 1.0 : 0.0);
      th.push_back(thh_list && thh_list->contains(oid) ? 1.0 : 0.0);
    }
    prefix.attach_audit(nullptr);
    report.audits.push_back({id, cutoff, audit.latest(), audit.reads()});

    // Labels come from the suffix of the full data, outside the audited view.
    std::vector<std::uint8_t> y;
    for (const auto& oid : ids) {
      bool future = false;
      if (auto o = data.find_offender(oid))
        for (const auto& e : data.history(*o).events())
          if (e.date >= cutoff && e.violent()) future = true;
      y.push_back(future ? 1 : 0);
    }
    auto picked = [&](const std::vector<double>& s) {
      std::vector<std::string> out;
      for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i] >= 0.5) out.push_back(ids[i]);
      return out;
    };
    add_slice(report, pools, id, method, rf, y, picked(rf));
    add_slice(report, pools, id, filtered, frf, y, picked(frf));
    if (wants(options.compare, "pva")) add_slice(report, pools, id, "pva", pv, y, picked(pv));
    if (wants(options.compare, "thh")) add_slice(report, pools, id, "thh", th, y, picked(th));
  }
  finish(report, pools, {method, filtered, "pva", "thh"});
  return report;
}

namespace {

nlohmann::ordered_json slice_json(const SliceMetrics& m) {
  auto opt = [](const std::optional<double>& x) { return x ? nlohmann::ordered_json(*x) : nlohmann::ordered_json(); };
  nlohmann::ordered_json j;
  j["id"] = m.id;
  j["method"] = m.method;
  j["precision"] = opt(m.precision);
  j["recall"] = opt(m.recall);
  j["f1"] = m.f1;
  j["auc"] = opt(m.auc);
  j["tp"] = m.tp;
  j["fp"] = m.fp;
  j["fn"] = m.fn;
  return j;
}

std::string opt_csv(const std::optional<double>& x) { return x ? format_value(*x) : ""; }

}  // namespace

std::string report_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["protocol"] = report.protocol;
  j["slices"] = nlohmann::ordered_json::array();
  for (const auto& s : report.slices) j["slices"].push_back(slice_json(s));
  j["aggregate"] = nlohmann::ordered_json::array();
  for (const auto& s : report.aggregate) j["aggregate"].push_back(slice_json(s));
  j["seeds"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.seeds) j["seeds"][k] = v;
  j["params"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.params) j["params"][k] = v;
  j["warnings"] = report.warnings;
  if (!report.audits.empty()) {
    j["audits"] = nlohmann::ordered_json::array();
    for (const auto& a : report.audits)
      j["audits"].push_back({{"month", a.month},
                             {"cutoff", a.cutoff.to_string()},
                             {"latest_read", a.latest_read ? nlohmann::ordered_json(a.latest_read->to_string())
                                                           : nlohmann::ordered_json()},
                             {"reads", a.reads}});
  }
  return j.dump(2) + "\n";
}

void write_prf_csv(std::ostream& out, const EvalReport& report) {
  out << "slice,method,precision,recall,f1,auc,tp,fp,fn\n";
  for (const auto& s : report.slices)
    out << s.id << ',' << s.method << ',' << opt_csv(s.precision) << ',' << opt_csv(s.recall) << ','
        << format_value(s.f1) << ',' << opt_csv(s.auc) << ',' << s.tp << ',' << s.fp << ',' << s.fn << '\n';
}

void write_roc_csv(std::ostream& out, const EvalReport& report) {
  out << "method,fpr,tpr\n";
  for (const auto& a : report.aggregate) {
    auto it = report.roc.find(a.method);
    if (it == report.roc.end()) continue;
    for (const auto& [fpr, tpr] : it->second)
      out << a.method << ',' << format_value(fpr) << ',' << format_value(tpr) << '\n';
  }
}

}  // namespace gangnet
