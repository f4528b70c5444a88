#include "gangnet/gangnet.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gangnet/baselines.hpp"
#include "gangnet/error.hpp"
#include "gangnet/features.hpp"
#include "gangnet/graph.hpp"
#include "gangnet/learn/protocols.hpp"
#include "gangnet/synth.hpp"
#include "json.hpp"

using namespace gangnet;

struct gn_options {
  std::map<std::string, std::string> values;  // ordered, so echoes are stable
};
struct gn_dataset {
  Dataset data;
};
struct gn_network {
  CoOffenderNetwork graph;
};
struct gn_features {
  FeatureMatrix matrix;
};
struct gn_watchlist {
  Watchlist list;
};
struct gn_report {
  EvalReport report;
};

namespace {

thread_local std::string last_error;

class ArgumentError : public Error {
 public:
  explicit ArgumentError(const std::string& what) : Error(ErrorKind::runtime, what) {}
};

gn_status status_of(ErrorKind k) {
  switch (k) {
    case ErrorKind::parse: return GN_ERR_PARSE;
    case ErrorKind::validation: return GN_ERR_VALIDATION;
    case ErrorKind::config: return GN_ERR_CONFIG;
    case ErrorKind::io: return GN_ERR_IO;
    case ErrorKind::lookup: return GN_ERR_LOOKUP;
    case ErrorKind::runtime: return GN_ERR_RUNTIME;
  }
  return GN_ERR_RUNTIME;
}

template <class Fn>
gn_status guarded(Fn&& fn) {
  try {
    fn();
    return GN_OK;
  } catch (const ArgumentError& e) {
    last_error = e.what();
    return GN_ERR_ARGUMENT;
  } catch (const Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return GN_ERR_RUNTIME;
  } catch (const std::exception& e) {
    last_error = e.what();
    return GN_ERR_RUNTIME;
  }
}

void require(const void* p, const char* what) {
  if (!p) throw ArgumentError(std::string(what) + " is null");
}

char* dup_string(const std::string& s) {
  char* p = new char[s.size() + 1];
  s.copy(p, s.size());
  p[s.size()] = '\0';
  return p;
}

// Typed view of an options handle for one call. Keys outside `allowed` are
// rejected up front.
class OptionReader {
 public:
  OptionReader(const gn_options* o, std::set<std::string> allowed) {
    if (o) values_ = o->values;
    for (const auto& [k, v] : values_)
      if (!allowed.count(k)) throw ConfigError("unknown option '" + k + "'");
  }

  bool has(const std::string& k) const { return values_.count(k) != 0; }
  std::string str(const std::string& k, std::string def = {}) const {
    auto it = values_.find(k);
    return it == values_.end() ? def : it->second;
  }

  template <class T>
  T integer(const std::string& k, T def) const {
    auto it = values_.find(k);
    if (it == values_.end()) return def;
    const std::string& s = it->second;
    T v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
      throw ConfigError("option '" + k + "' expects an integer, got '" + s + "'");
    return v;
  }

  double real(const std::string& k, double def) const {
    auto it = values_.find(k);
    if (it == values_.end()) return def;
    const std::string& s = it->second;
    double v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v))
      throw ConfigError("option '" + k + "' expects a number, got '" + s + "'");
    return v;
  }

  bool boolean(const std::string& k, bool def) const {
    auto it = values_.find(k);
    if (it == values_.end()) return def;
    const std::string& s = it->second;
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ConfigError("option '" + k + "' expects true or false, got '" + s + "'");
  }

  Date date(const std::string& k) const {
    const auto d = Date::parse(str(k));
    if (!d) throw ConfigError("option '" + k + "' expects YYYY-MM-DD, got '" + str(k) + "'");
    return *d;
  }

  std::optional<DateRange> range(const std::string& k) const {
    if (!has(k)) return std::nullopt;
    const auto r = DateRange::parse(str(k));
    if (!r) throw ConfigError("option '" + k + "' expects FROM..TO, got '" + str(k) + "'");
    return r;
  }

  std::vector<std::string> list(const std::string& k) const {
    std::vector<std::string> out;
    if (!has(k)) return out;
    std::stringstream ss(str(k));
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) out.push_back(item);
    return out;
  }

  const std::map<std::string, std::string>& all() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

std::ofstream open_out(const char* path) {
  require(path, "path");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(std::string("cannot open '") + path + "' for writing");
  return out;
}

void finish(std::ofstream& out, const char* path) {
  out.flush();
  if (!out) throw IoError(std::string("write failed for '") + path + "'");
}

std::string read_file(const char* path) {
  require(path, "path");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(std::string("cannot open '") + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Dataset load(std::string_view text, const gn_options* o) {
  OptionReader r(o, {"range", "violent_codes"});
  ParseOptions po;
  po.range = r.range("range");
  for (const auto& c : r.list("violent_codes")) po.crimes.set(c, true);
  return Dataset(parse_records(text, po));
}

const std::set<std::string> kClassifierKeys = {"classifier", "trees",   "features_per_split", "bootstrap",
                                               "max_depth",  "min_leaf", "smote",              "smote_k",
                                               "smote_amount", "compare", "seed",              "threads"};

ClassifierParams classifier_params(const OptionReader& r) {
  ClassifierParams p;
  const std::string kind = r.str("classifier", "rf");
  if (kind == "rf") p.kind = Classifier::rf;
  else if (kind == "dt") p.kind = Classifier::dt;
  else throw ConfigError("classifier must be rf or dt, got '" + kind + "'");
  p.forest.trees = r.integer<std::size_t>("trees", p.forest.trees);
  if (p.forest.trees == 0) throw ConfigError("trees must be positive");
  p.forest.features_per_split = r.integer<std::size_t>("features_per_split", 0);
  p.forest.bootstrap = r.boolean("bootstrap", true);
  p.forest.max_depth = r.integer<std::size_t>("max_depth", 0);
  p.forest.min_leaf = r.integer<std::size_t>("min_leaf", 1);
  if (p.forest.min_leaf == 0) throw ConfigError("min_leaf must be positive");
  p.smote = r.boolean("smote", true);
  p.smote_k = r.integer<std::size_t>("smote_k", 5);
  p.smote_amount = r.real("smote_amount", 0);
  if (p.smote_amount < 0) throw ConfigError("smote_amount must be non-negative");
  return p;
}

// Options a report saw but no protocol field records.
void echo_options(EvalReport& rep, const OptionReader& r) {
  std::set<std::string> present;
  for (const auto& [k, v] : rep.params) present.insert(k);
  for (const auto& [k, v] : r.all())
    if (!present.count(k) && k != "seed") rep.params.emplace_back(k, v);
}

void check_compare(const std::vector<std::string>& compare, std::set<std::string> allowed, const char* protocol) {
  for (const auto& c : compare)
    if (!allowed.count(c)) throw ConfigError(std::string(protocol) + " cannot compare against '" + c + "'");
}

void fill(const SliceMetrics& m, gn_metrics* out) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  out->precision = m.precision.value_or(nan);
  out->recall = m.recall.value_or(nan);
  out->f1 = m.f1;
  out->auc = m.auc.value_or(nan);
  out->tp = m.tp;
  out->fp = m.fp;
  out->fn = m.fn;
  out->tn = m.tn;
}

}  // namespace

extern "C" {

const char* gn_version(void) { return "0.1.0"; }
const char* gn_last_error(void) { return last_error.c_str(); }

const char* gn_status_name(gn_status s) {
  switch (s) {
    case GN_OK: return "ok";
    case GN_ERR_ARGUMENT: return "argument error";
    case GN_ERR_CONFIG: return "config error";
    case GN_ERR_PARSE: return "parse error";
    case GN_ERR_VALIDATION: return "validation error";
    case GN_ERR_IO: return "io error";
    case GN_ERR_LOOKUP: return "lookup error";
    case GN_ERR_RUNTIME: return "runtime error";
  }
  return "unknown status";
}

void gn_string_free(char* s) { delete[] s; }

gn_options* gn_options_new(void) { return new (std::nothrow) gn_options(); }
void gn_options_free(gn_options* o) { delete o; }

gn_status gn_options_set(gn_options* o, const char* key, const char* value) {
  return guarded([&] {
    require(o, "options");
    require(key, "key");
    require(value, "value");
    if (!*key) throw ConfigError("empty option key");
    o->values[key] = value;
  });
}

size_t gn_options_size(const gn_options* o) { return o ? o->values.size() : 0; }

gn_status gn_dataset_load(const char* path, const gn_options* o, gn_dataset** out) {
  return guarded([&] {
    require(out, "out");
    const std::string text = read_file(path);
    *out = new gn_dataset{load(text, o)};
  });
}

gn_status gn_dataset_load_text(const char* csv, const gn_options* o, gn_dataset** out) {
  return guarded([&] {
    require(csv, "csv");
    require(out, "out");
    *out = new gn_dataset{load(csv, o)};
  });
}

gn_status gn_dataset_generate(const gn_options* o, gn_dataset** out) {
  return guarded([&] {
    require(out, "out");
    OptionReader r(o, {"offenders", "months", "gangs", "target_mean_degree", "violent_record_fraction",
                       "contagion_strength", "seasonality_amplitude", "seed", "start", "districts",
                       "beats_per_district", "gang_fraction", "violent_seed_fraction", "victim_fraction"});
    GeneratorConfig c;
    c.offenders = r.integer<std::size_t>("offenders", c.offenders);
    c.months = r.integer<int>("months", c.months);
    c.gangs = r.integer<std::size_t>("gangs", c.gangs);
    c.target_mean_degree = r.real("target_mean_degree", c.target_mean_degree);
    c.violent_record_fraction = r.real("violent_record_fraction", c.violent_record_fraction);
    c.contagion_strength = r.real("contagion_strength", c.contagion_strength);
    c.seasonality_amplitude = r.real("seasonality_amplitude", c.seasonality_amplitude);
    c.seed = r.integer<std::uint64_t>("seed", c.seed);
    if (r.has("start")) c.start = r.date("start");
    c.districts = r.integer<std::size_t>("districts", c.districts);
    c.beats_per_district = r.integer<std::size_t>("beats_per_district", c.beats_per_district);
    c.gang_fraction = r.real("gang_fraction", c.gang_fraction);
    c.violent_seed_fraction = r.real("violent_seed_fraction", c.violent_seed_fraction);
    c.victim_fraction = r.real("victim_fraction", c.victim_fraction);
    *out = new gn_dataset{Dataset(generate(c))};
  });
}

void gn_dataset_free(gn_dataset* d) { delete d; }
size_t gn_dataset_record_count(const gn_dataset* d) { return d ? d->data.record_count() : 0; }
size_t gn_dataset_offender_count(const gn_dataset* d) { return d ? d->data.offender_count() : 0; }
size_t gn_dataset_event_count(const gn_dataset* d) { return d ? d->data.event_count() : 0; }

gn_status gn_dataset_write(const gn_dataset* d, const char* path) {
  return guarded([&] {
    require(d, "dataset");
    auto out = open_out(path);
    write_records(out, d->data.records());
    finish(out, path);
  });
}

gn_status gn_dataset_stats_json(const gn_dataset* d, const gn_options* echo, char** out) {
  return guarded([&] {
    require(d, "dataset");
    require(out, "out");
    nlohmann::ordered_json j;
    j["stats"] = nlohmann::ordered_json::parse(stats_json(validate_stats(d->data.records())));
    j["config"] = nlohmann::ordered_json::object();
    if (echo)
      for (const auto& [k, v] : echo->values) j["config"][k] = v;
    *out = dup_string(j.dump(2) + "\n");
  });
}

gn_status gn_network_build(const gn_dataset* d, const gn_options* o, gn_network** out) {
  return guarded([&] {
    require(d, "dataset");
    require(out, "out");
    OptionReader r(o, {"window"});
    *out = new gn_network{build_network(d->data, r.range("window"))};
  });
}

void gn_network_free(gn_network* g) { delete g; }
size_t gn_network_node_count(const gn_network* g) { return g ? g->graph.node_count() : 0; }
size_t gn_network_edge_count(const gn_network* g) { return g ? g->graph.edge_count() : 0; }

const char* gn_network_node_id(const gn_network* g, size_t node) {
  if (!g || node >= g->graph.node_count()) return nullptr;
  return g->graph.id(static_cast<NodeId>(node)).c_str();
}

gn_status gn_network_write_edges(const gn_network* g, const char* path) {
  return guarded([&] {
    require(g, "network");
    auto out = open_out(path);
    write_edge_list(out, g->graph);
    finish(out, path);
  });
}

gn_status gn_features_compute(const gn_dataset* d, const gn_network* g, const gn_options* o, gn_features** out) {
  return guarded([&] {
    require(d, "dataset");
    require(g, "network");
    require(out, "out");
    OptionReader r(o, {"mask_own_labels", "per_crime", "columns", "seed", "threads"});
    FeatureConfig c;
    c.mask_own_labels = r.boolean("mask_own_labels", true);
    c.per_crime = r.boolean("per_crime", false);
    c.columns = r.list("columns");
    c.seed = r.integer<std::uint64_t>("seed", 0);
    c.threads = r.integer<unsigned>("threads", 1);
    *out = new gn_features{assemble(d->data, g->graph, c)};
  });
}

void gn_features_free(gn_features* f) { delete f; }
size_t gn_features_rows(const gn_features* f) { return f ? f->matrix.rows() : 0; }
size_t gn_features_cols(const gn_features* f) { return f ? f->matrix.columns.size() : 0; }

const char* gn_features_column(const gn_features* f, size_t col) {
  if (!f || col >= f->matrix.columns.size()) return nullptr;
  return f->matrix.columns[col].c_str();
}

const char* gn_features_row_id(const gn_features* f, size_t row) {
  if (!f || row >= f->matrix.rows()) return nullptr;
  return f->matrix.ids[row].c_str();
}

gn_status gn_features_value(const gn_features* f, size_t row, size_t col, double* out) {
  return guarded([&] {
    require(f, "features");
    require(out, "out");
    if (row >= f->matrix.rows() || col >= f->matrix.columns.size()) throw ArgumentError("cell out of range");
    *out = f->matrix.at(row, col);
  });
}

gn_status gn_features_label(const gn_features* f, size_t row, int* out) {
  return guarded([&] {
    require(f, "features");
    require(out, "out");
    if (row >= f->matrix.rows()) throw ArgumentError("row out of range");
    *out = f->matrix.labels[row];
  });
}

gn_status gn_features_write(const gn_features* f, const char* path) {
  return guarded([&] {
    require(f, "features");
    auto out = open_out(path);
    write_features_csv(out, f->matrix);
    finish(out, path);
  });
}

gn_status gn_baseline_pva(const gn_dataset* d, const gn_options* o, gn_watchlist** out) {
  return guarded([&] {
    require(d, "dataset");
    require(out, "out");
    OptionReader r(o, {"as_of", "delta_days"});
    Date as_of;
    if (r.has("as_of")) {
      as_of = r.date("as_of");
    } else {
      const auto last = d->data.last_date();
      if (!last) throw ValidationError("dataset is empty; pass as_of");
      as_of = *last;
    }
    std::optional<int> delta;
    if (r.has("delta_days")) {
      delta = r.integer<int>("delta_days", 0);
      if (*delta < 0) throw ConfigError("delta_days must be non-negative");
    }
    *out = new gn_watchlist{pva(d->data, as_of, delta)};
  });
}

gn_status gn_baseline_thh(const gn_dataset* d, const gn_network* g, const gn_options* o, gn_watchlist** out) {
  return guarded([&] {
    require(d, "dataset");
    require(g, "network");
    require(out, "out");
    OptionReader r(o, {"masked"});
    if (!d->data.any_homicide_victim())
      throw ValidationError("two-hop heuristic needs homicide_victim flags, and no record sets homicide_victim=1");
    *out = new gn_watchlist{thh(g->graph, d->data, r.boolean("masked", false))};
  });
}

void gn_watchlist_free(gn_watchlist* w) { delete w; }
size_t gn_watchlist_size(const gn_watchlist* w) { return w ? w->list.members.size() : 0; }

const char* gn_watchlist_member(const gn_watchlist* w, size_t i) {
  if (!w || i >= w->list.members.size()) return nullptr;
  return w->list.members[i].c_str();
}

int gn_watchlist_contains(const gn_watchlist* w, const char* id) {
  return w && id && w->list.contains(id) ? 1 : 0;
}

gn_status gn_watchlist_write(const gn_watchlist* w, const char* path) {
  return guarded([&] {
    require(w, "watchlist");
    auto out = open_out(path);
    out << write_watchlist(w->list);
    finish(out, path);
  });
}

gn_status gn_eval_kfold(const gn_dataset* d, const gn_options* o, gn_report** out) {
  return guarded([&] {
    require(d, "dataset");
    require(out, "out");
    auto keys = kClassifierKeys;
    keys.insert("k");
    OptionReader r(o, keys);
    KFoldOptions opt;
    opt.k = r.integer<std::size_t>("k", 10);
    if (opt.k < 2) throw ConfigError("k must be at least 2");
    opt.classifier = classifier_params(r);
    opt.compare = r.list("compare");
    check_compare(opt.compare, {"thh", "allpos"}, "kfold");
    opt.seed = r.integer<std::uint64_t>("seed", 0);
    opt.threads = r.integer<unsigned>("threads", 1);
    auto rep = eval_kfold(d->data, opt);
    echo_options(rep, r);
    *out = new gn_report{std::move(rep)};
  });
}

gn_status gn_eval_temporal(const gn_dataset* d, const gn_options* o, gn_report** out) {
  return guarded([&] {
    require(d, "dataset");
    require(out, "out");
    auto keys = kClassifierKeys;
    keys.insert({"start_month", "inner_folds", "frf_days", "pool"});
    OptionReader r(o, keys);
    TemporalOptions opt;
    opt.start_month = r.integer<int>("start_month", opt.start_month);
    if (opt.start_month < 1) throw ConfigError("start_month must be at least 1");
    opt.inner_folds = r.integer<std::size_t>("inner_folds", opt.inner_folds);
    if (opt.inner_folds < 2) throw ConfigError("inner_folds must be at least 2");
    opt.frf_days = r.integer<int>("frf_days", opt.frf_days);
    if (opt.frf_days < 0) throw ConfigError("frf_days must be non-negative");
    const std::string pool = r.str("pool", "all");
    if (pool == "all") opt.pool = CandidatePool::all;
    else if (pool == "recent") opt.pool = CandidatePool::recent;
    else throw ConfigError("pool must be all or recent, got '" + pool + "'");
    opt.classifier = classifier_params(r);
    opt.compare = r.list("compare");
    check_compare(opt.compare, {"pva", "thh"}, "temporal");
    opt.seed = r.integer<std::uint64_t>("seed", 0);
    opt.threads = r.integer<unsigned>("threads", 1);
    auto rep = eval_temporal(d->data, opt);
    echo_options(rep, r);
    *out = new gn_report{std::move(rep)};
  });
}

void gn_report_free(gn_report* r) { delete r; }

gn_status gn_report_annotate(gn_report* r, const char* key, const char* value) {
  return guarded([&] {
    require(r, "report");
    require(key, "key");
    require(value, "value");
    for (auto& [k, v] : r->report.params)
      if (k == key) {
        v = value;
        return;
      }
    r->report.params.emplace_back(key, value);
  });
}

size_t gn_report_slice_count(const gn_report* r) { return r ? r->report.slices.size() : 0; }

gn_status gn_report_slice(const gn_report* r, size_t i, const char** id, const char** method, gn_metrics* out) {
  return guarded([&] {
    require(r, "report");
    require(out, "out");
    if (i >= r->report.slices.size()) throw ArgumentError("slice out of range");
    const auto& s = r->report.slices[i];
    if (id) *id = s.id.c_str();
    if (method) *method = s.method.c_str();
    fill(s, out);
  });
}

gn_status gn_report_aggregate(const gn_report* r, const char* method, gn_metrics* out) {
  return guarded([&] {
    require(r, "report");
    require(method, "method");
    require(out, "out");
    for (const auto& a : r->report.aggregate)
      if (a.method == method) {
        fill(a, out);
        return;
      }
    throw LookupError(std::string("no aggregate row for method '") + method + "'");
  });
}

gn_status gn_report_json(const gn_report* r, char** out) {
  return guarded([&] {
    require(r, "report");
    require(out, "out");
    *out = dup_string(report_json(r->report));
  });
}

gn_status gn_report_write_json(const gn_report* r, const char* path) {
  return guarded([&] {
    require(r, "report");
    auto out = open_out(path);
    out << report_json(r->report);
    finish(out, path);
  });
}

gn_status gn_report_write_prf(const gn_report* r, const char* path) {
  return guarded([&] {
    require(r, "report");
    auto out = open_out(path);
    write_prf_csv(out, r->report);
    finish(out, path);
  });
}

gn_status gn_report_write_roc(const gn_report* r, const char* path) {
  return guarded([&] {
    require(r, "report");
    auto out = open_out(path);
    write_roc_csv(out, r->report);
    finish(out, path);
  });
}

gn_status gn_report_merge(const char* const* paths, size_t count, char** out) {
  return guarded([&] {
    require(out, "out");
    if (count == 0) throw ConfigError("nothing to merge");
    require(paths, "paths");
    nlohmann::ordered_json merged;
    merged["protocol"] = "merged";
    merged["sources"] = nlohmann::ordered_json::array();
    merged["slices"] = nlohmann::ordered_json::array();
    merged["aggregate"] = nlohmann::ordered_json::array();
    merged["reports"] = nlohmann::ordered_json::array();
    for (size_t i = 0; i < count; ++i) {
      require(paths[i], "path");
      nlohmann::ordered_json j;
      try {
        j = nlohmann::ordered_json::parse(read_file(paths[i]));
      } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(1, std::string(paths[i]) + ": " + e.what());
      }
      if (!j.is_object() || !j.contains("slices") || !j.contains("aggregate"))
        throw ValidationError(std::string(paths[i]) + " is not an evaluation report");
      merged["sources"].push_back(paths[i]);
      for (auto key : {"slices", "aggregate"})
        for (auto row : j[key]) {
          nlohmann::ordered_json tagged;
          tagged["source"] = paths[i];
          tagged["protocol"] = j.value("protocol", "");
          for (auto& [k, v] : row.items()) tagged[k] = v;
          merged[key].push_back(std::move(tagged));
        }
      nlohmann::ordered_json head;
      head["source"] = paths[i];
      for (auto key : {"protocol", "seeds", "params", "warnings"})
        if (j.contains(key)) head[key] = j[key];
      merged["reports"].push_back(std::move(head));
    }
    *out = dup_string(merged.dump(2) + "\n");
  });
}

}  // extern "C"
