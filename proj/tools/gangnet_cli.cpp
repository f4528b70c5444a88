// gangnet command-line front end. Everything goes through the C API.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gangnet/gangnet.h"

namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kUsage = 2, kData = 3, kRuntime = 4 };

int exit_code(gn_status s) {
  switch (s) {
    case GN_OK: return kOk;
    case GN_ERR_ARGUMENT:
    case GN_ERR_CONFIG: return kUsage;
    case GN_ERR_PARSE:
    case GN_ERR_VALIDATION: return kData;
    default: return kRuntime;
  }
}

struct Failure {
  gn_status status;
  std::string message;
};

void check(gn_status s) {
  if (s != GN_OK) throw Failure{s, gn_last_error()};
}

template <class T, void (*F)(T*)>
struct Deleter {
  void operator()(T* p) const { F(p); }
};
using Options = std::unique_ptr<gn_options, Deleter<gn_options, gn_options_free>>;
using DatasetPtr = std::unique_ptr<gn_dataset, Deleter<gn_dataset, gn_dataset_free>>;
using NetworkPtr = std::unique_ptr<gn_network, Deleter<gn_network, gn_network_free>>;
using FeaturesPtr = std::unique_ptr<gn_features, Deleter<gn_features, gn_features_free>>;
using WatchlistPtr = std::unique_ptr<gn_watchlist, Deleter<gn_watchlist, gn_watchlist_free>>;
using ReportPtr = std::unique_ptr<gn_report, Deleter<gn_report, gn_report_free>>;
using StringPtr = std::unique_ptr<char, Deleter<char, gn_string_free>>;

Options make_options() { return Options(gn_options_new()); }

// A subcommand's flags. Values are kept as text and handed to the library
// under the flag name with dashes turned into underscores.
struct Command {
  explicit Command(CLI::App* a) : app(a) {}

  CLI::App* app;
  std::map<std::string, std::string> text;
  std::map<std::string, bool> flags;
  std::map<std::string, CLI::Option*> opts;

  CLI::Option* option(const std::string& name, const std::string& help) {
    auto* o = app->add_option("--" + name, text[name], help);
    opts[name] = o;
    return o;
  }
  CLI::Option* flag(const std::string& name, const std::string& help, bool negatable = false) {
    std::string spec = "--" + name;
    if (negatable) spec += ",!--no-" + name;
    auto* o = app->add_flag(spec, flags[name], help);
    opts[name] = o;
    return o;
  }

  bool given(const std::string& name) const {
    auto it = opts.find(name);
    return it != opts.end() && it->second->count() > 0;
  }
  const std::string& value(const std::string& name) const { return text.at(name); }

  static std::string key(std::string name) {
    for (auto& c : name)
      if (c == '-') c = '_';
    return name;
  }

  // Forwards the listed flags that were given on the command line.
  void forward(gn_options* o, std::initializer_list<const char*> names) const {
    for (const char* n : names) {
      if (!given(n)) continue;
      auto f = flags.find(n);
      const std::string v = f != flags.end() ? (f->second ? "true" : "false") : text.at(n);
      check(gn_options_set(o, key(n).c_str(), v.c_str()));
    }
  }
};

struct Globals {
  std::string config;
  std::string seed = "0";
  std::string threads = "0";
};

void set(gn_options* o, const char* k, const std::string& v) { check(gn_options_set(o, k, v.c_str())); }

DatasetPtr load_dataset(const Command& c) {
  auto o = make_options();
  c.forward(o.get(), {"range", "violent-codes"});
  gn_dataset* d = nullptr;
  check(gn_dataset_load(c.value("input").c_str(), o.get(), &d));
  return DatasetPtr(d);
}

NetworkPtr build_network(const gn_dataset* d, const Command& c) {
  auto o = make_options();
  if (c.opts.count("window")) c.forward(o.get(), {"window"});
  gn_network* g = nullptr;
  check(gn_network_build(d, o.get(), &g));
  return NetworkPtr(g);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{GN_ERR_IO, "cannot open '" + path.string() + "' for writing"};
  out << text;
  out.flush();
  if (!out) throw Failure{GN_ERR_IO, "write failed for '" + path.string() + "'"};
}

fs::path out_dir(const Command& c) {
  fs::path dir = c.value("out-dir");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Failure{GN_ERR_IO, "cannot create '" + dir.string() + "': " + ec.message()};
  return dir;
}

int run_synth(const Command& c, const Globals& g) {
  auto o = make_options();
  c.forward(o.get(), {"offenders", "months", "gangs", "target-mean-degree", "violent-record-fraction",
                      "contagion-strength", "seasonality-amplitude", "start", "districts", "beats-per-district",
                      "gang-fraction", "violent-seed-fraction", "victim-fraction"});
  set(o.get(), "seed", g.seed);
  gn_dataset* raw = nullptr;
  check(gn_dataset_generate(o.get(), &raw));
  DatasetPtr d(raw);
  const auto dir = out_dir(c);
  check(gn_dataset_write(d.get(), (dir / "arrests.csv").string().c_str()));
  char* stats = nullptr;
  check(gn_dataset_stats_json(d.get(), o.get(), &stats));
  StringPtr hold(stats);
  write_text(dir / "stats.json", stats);
  std::cout << "synth: " << gn_dataset_record_count(d.get()) << " records, " << gn_dataset_offender_count(d.get())
            << " offenders -> " << dir.string() << "\n";
  return kOk;
}

int run_ingest(const Command& c) {
  auto d = load_dataset(c);
  std::cout << "ok: " << gn_dataset_record_count(d.get()) << " records, " << gn_dataset_offender_count(d.get())
            << " offenders, " << gn_dataset_event_count(d.get()) << " events\n";
  return kOk;
}

int run_graph_stats(const Command& c) {
  auto d = load_dataset(c);
  auto o = make_options();
  set(o.get(), "input", c.value("input"));
  char* stats = nullptr;
  check(gn_dataset_stats_json(d.get(), o.get(), &stats));
  StringPtr hold(stats);
  if (c.given("out")) write_text(c.value("out"), stats);
  else std::cout << stats;
  if (c.given("edges")) {
    auto net = build_network(d.get(), c);
    check(gn_network_write_edges(net.get(), c.value("edges").c_str()));
  }
  return kOk;
}

int run_features(const Command& c, const Globals& g) {
  auto d = load_dataset(c);
  auto net = build_network(d.get(), c);
  auto o = make_options();
  set(o.get(), "mask_own_labels", c.flags.at("mask-own-labels") ? "true" : "false");
  c.forward(o.get(), {"per-crime", "columns"});
  set(o.get(), "seed", g.seed);
  set(o.get(), "threads", g.threads);
  gn_features* raw = nullptr;
  check(gn_features_compute(d.get(), net.get(), o.get(), &raw));
  FeaturesPtr f(raw);
  check(gn_features_write(f.get(), c.value("out").c_str()));
  std::cout << "features: " << gn_features_rows(f.get()) << " rows x " << gn_features_cols(f.get())
            << " columns -> " << c.value("out") << "\n";
  return kOk;
}

int run_baseline(const Command& c, const std::string& method) {
  auto d = load_dataset(c);
  gn_watchlist* raw = nullptr;
  auto o = make_options();
  if (method == "pva") {
    c.forward(o.get(), {"as-of", "delta-days"});
    check(gn_baseline_pva(d.get(), o.get(), &raw));
  } else {
    auto net = build_network(d.get(), c);
    c.forward(o.get(), {"masked"});
    check(gn_baseline_thh(d.get(), net.get(), o.get(), &raw));
  }
  WatchlistPtr w(raw);
  if (c.given("out")) {
    check(gn_watchlist_write(w.get(), c.value("out").c_str()));
  } else {
    for (size_t i = 0; i < gn_watchlist_size(w.get()); ++i) std::cout << gn_watchlist_member(w.get(), i) << "\n";
  }
  std::cerr << method << ": " << gn_watchlist_size(w.get()) << " offenders\n";
  return kOk;
}

int run_eval(const Command& c, const Globals& g, const std::string& protocol) {
  auto d = load_dataset(c);
  auto o = make_options();
  c.forward(o.get(), {"classifier", "trees", "features-per-split", "max-depth", "min-leaf", "smote", "smote-k",
                      "smote-amount", "compare"});
  if (protocol == "kfold") {
    c.forward(o.get(), {"k"});
  } else {
    c.forward(o.get(), {"start-month", "inner-folds", "frf-days", "pool"});
  }
  set(o.get(), "seed", g.seed);
  set(o.get(), "threads", g.threads);
  gn_report* raw = nullptr;
  check(protocol == "kfold" ? gn_eval_kfold(d.get(), o.get(), &raw) : gn_eval_temporal(d.get(), o.get(), &raw));
  ReportPtr r(raw);
  check(gn_report_annotate(r.get(), "input", c.value("input").c_str()));
  const auto dir = out_dir(c);
  check(gn_report_write_json(r.get(), (dir / "report.json").string().c_str()));
  const char* prf = protocol == "kfold" ? "p_r_f_by_fold.csv" : "p_r_f_by_month.csv";
  check(gn_report_write_prf(r.get(), (dir / prf).string().c_str()));
  check(gn_report_write_roc(r.get(), (dir / "roc_points.csv").string().c_str()));
  for (const char* m : {"rf", "dt", "frf", "pva", "thh", "allpos"}) {
    gn_metrics a;
    if (gn_report_aggregate(r.get(), m, &a) != GN_OK) continue;
    std::printf("%-7s f1=%.4f precision=%.4f recall=%.4f auc=%.4f tp=%llu fp=%llu\n", m, a.f1, a.precision, a.recall,
                a.auc, static_cast<unsigned long long>(a.tp), static_cast<unsigned long long>(a.fp));
  }
  return kOk;
}

int run_report(const Command& c, const std::vector<std::string>& inputs) {
  std::vector<const char*> paths;
  for (const auto& p : inputs) paths.push_back(p.c_str());
  char* merged = nullptr;
  check(gn_report_merge(paths.data(), paths.size(), &merged));
  StringPtr hold(merged);
  if (c.given("out")) write_text(c.value("out"), merged);
  else std::cout << merged;
  return kOk;
}

// Flat key = value file; [section] lines and # comments are ignored.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Failure{GN_ERR_CONFIG, "cannot read config file '" + path + "'"};
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  std::size_t lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Failure{GN_ERR_CONFIG, path + ":" + std::to_string(lineno) + ": expected key = value"};
    std::string k = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
    if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front()) v = v.substr(1, v.size() - 2);
    for (auto& ch : k)
      if (ch == '_') ch = '-';
    if (k.empty()) throw Failure{GN_ERR_CONFIG, path + ":" + std::to_string(lineno) + ": empty key"};
    out.emplace_back(k, v);
  }
  return out;
}

bool on_command_line(const std::vector<std::string>& args, const std::string& name) {
  const std::string flag = "--" + name, neg = "--no-" + name;
  for (const auto& a : args)
    if (a == flag || a == neg || a.rfind(flag + "=", 0) == 0) return true;
  return false;
}

bool known_anywhere(const CLI::App* app, const std::string& name) {
  if (app->get_option_no_throw("--" + name)) return true;
  for (const auto* s : app->get_subcommands([](const CLI::App*) { return true; }))
    if (known_anywhere(s, name)) return true;
  return false;
}

// Appends config-file values for flags the command line left unset. Keys
// that belong to some other subcommand are skipped; keys no subcommand
// knows are an error.
std::vector<std::string> apply_config(CLI::App& app, std::vector<std::string> args) {
  std::optional<std::string> path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (!path) return args;
  std::vector<CLI::App*> chain{&app};
  for (const auto& a : args) {
    if (a.empty() || a[0] == '-') continue;
    if (auto* s = chain.back()->get_subcommand_no_throw(a)) chain.push_back(s);
  }
  for (const auto& [k, v] : read_config(*path)) {
    if (k == "config") continue;
    bool applies = false;
    for (auto* s : chain) applies = applies || s->get_option_no_throw("--" + k) != nullptr;
    if (!applies) {
      if (!known_anywhere(&app, k)) throw Failure{GN_ERR_CONFIG, "unknown config key '" + k + "'"};
      continue;
    }
    if (!on_command_line(args, k)) args.push_back("--" + k + "=" + v);
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Co-offender network toolkit for violent offender identification", "gangnet"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals globals;
  app.add_option("--config", globals.config, "key = value file; command-line flags take precedence");
  app.add_option("--seed", globals.seed, "Seed for every randomized step")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app.add_option("--threads", globals.threads, "Worker threads, 0 = all cores")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();

  auto input_opts = [](Command& c) {
    c.option("input", "arrests.csv")->required();
    c.option("range", "Declared date range FROM..TO; records outside it are rejected");
    c.option("violent-codes", "Extra crime codes to treat as violent, comma separated");
  };

  Command synth{app.add_subcommand("synth", "Generate a synthetic arrest dataset")};
  synth.option("offenders", "Number of offenders")->required();
  synth.option("months", "Months of data")->required();
  synth.option("gangs", "Number of gangs (default offenders / 50)");
  synth.option("target-mean-degree", "Mean degree of the co-offender network");
  synth.option("violent-record-fraction", "Expected fraction of violent rows");
  synth.option("contagion-strength", "Influence of violent co-offenders on violence");
  synth.option("seasonality-amplitude", "Relative amplitude of the yearly arrest cycle");
  synth.option("start", "First date YYYY-MM-DD");
  synth.option("districts", "Number of districts");
  synth.option("beats-per-district", "Beats per district");
  synth.option("gang-fraction", "Fraction of offenders with a gang");
  synth.option("violent-seed-fraction", "Fraction of offenders seeding violence");
  synth.option("victim-fraction", "Fraction of offenders flagged as homicide victims");
  synth.option("out-dir", "Output directory")->default_str(".");
  synth.text["out-dir"] = ".";

  Command ingest{app.add_subcommand("ingest", "Parse and validate arrests.csv")};
  input_opts(ingest);

  Command gstats{app.add_subcommand("graph-stats", "Network statistics as JSON")};
  input_opts(gstats);
  gstats.option("out", "stats.json path (default stdout)");
  gstats.option("edges", "Also write the edge list here");
  gstats.option("window", "Edge-list date window FROM..TO");

  Command feats{app.add_subcommand("features", "Compute the feature matrix")};
  input_opts(feats);
  feats.option("out", "features.csv path")->required();
  feats.flag("mask-own-labels", "Hide each offender's own violent labels from its row");
  feats.option("window", "Only events in FROM..TO create edges");
  feats.option("columns", "Comma-separated subset of columns");
  feats.flag("per-crime", "Add per-violent-code centrality columns");

  CLI::App* base = app.add_subcommand("baseline", "Heuristic watchlists");
  base->require_subcommand(1);
  Command pva{base->add_subcommand("pva", "Past violent activity")};
  input_opts(pva);
  pva.option("as-of", "Reference date YYYY-MM-DD (default: last date in the data)");
  pva.option("delta-days", "Only violence within this many days of as-of");
  pva.option("out", "Watchlist path (default stdout)");
  Command thh{base->add_subcommand("thh", "Two-hop heuristic")};
  input_opts(thh);
  thh.option("window", "Only events in FROM..TO create edges");
  thh.flag("masked", "Ignore each offender's own violent labels in the filter");
  thh.option("out", "Watchlist path (default stdout)");

  CLI::App* eval = app.add_subcommand("eval", "Evaluation protocols");
  eval->require_subcommand(1);
  auto eval_opts = [&](Command& c) {
    input_opts(c);
    c.option("out-dir", "Directory for report.json and plot CSVs")->default_str(".");
    c.text["out-dir"] = ".";
    c.option("classifier", "rf or dt")->check(CLI::IsMember({"rf", "dt"}));
    c.option("trees", "Forest size");
    c.option("features-per-split", "Features tried per split (0 = sqrt)");
    c.option("max-depth", "Tree depth limit (0 = none)");
    c.option("min-leaf", "Minimum rows per leaf");
    c.flag("smote", "Oversample the minority class during training", true);
    c.option("smote-k", "SMOTE neighbours");
    c.option("smote-amount", "SMOTE multiplier (0 = balance)");
    c.option("compare", "Baselines to add, comma separated");
  };
  Command kfold{eval->add_subcommand("kfold", "Known network, stratified k-fold")};
  eval_opts(kfold);
  kfold.option("k", "Folds");
  Command temporal{eval->add_subcommand("temporal", "Monthly splits over a growing network")};
  eval_opts(temporal);
  temporal.option("start-month", "First evaluated month, counted from the first month of data");
  temporal.option("inner-folds", "Folds for scoring inside the training prefix");
  temporal.option("frf-days", "Recent-arrest window for the filtered forest");
  temporal.option("pool", "Candidates: all or recent")->check(CLI::IsMember({"all", "recent"}));

  Command report{app.add_subcommand("report", "Merge report.json files")};
  std::vector<std::string> inputs;
  report.app->add_option("inputs", inputs, "report.json files")->required();
  report.option("out", "Merged report path (default stdout)");

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = apply_config(app, args);
    std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\nRun with --help for usage.\n";
    return kUsage;
  } catch (const Failure& f) {
    std::cerr << gn_status_name(f.status) << ": " << f.message << "\n";
    return exit_code(f.status);
  }

  try {
    if (*synth.app) return run_synth(synth, globals);
    if (*ingest.app) return run_ingest(ingest);
    if (*gstats.app) return run_graph_stats(gstats);
    if (*feats.app) return run_features(feats, globals);
    if (*pva.app) return run_baseline(pva, "pva");
    if (*thh.app) return run_baseline(thh, "thh");
    if (*kfold.app) return run_eval(kfold, globals, "kfold");
    if (*temporal.app) return run_eval(temporal, globals, "temporal");
    if (*report.app) return run_report(report, inputs);
  } catch (const Failure& f) {
    std::cerr << gn_status_name(f.status) << ": " << f.message << "\n";
    return exit_code(f.status);
  }
  return kUsage;
}
