#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "doctest.h"
#include "gangnet/gangnet.h"

namespace fs = std::filesystem;

namespace {

struct Opts {
  gn_options* o = gn_options_new();
  ~Opts() { gn_options_free(o); }
  Opts& set(const char* k, const char* v) {
    REQUIRE(gn_options_set(o, k, v) == GN_OK);
    return *this;
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const char* kVictimless =
    "arrest_id,offender_id,date,crime,violent,district,beat,gang,homicide_victim\n"
    "A1,O1,2012-01-02,robbery,1,D01,B0101,,0\n"
    "A1,O2,2012-01-02,theft,0,D01,B0101,,0\n";

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("gangnet_capi_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("status names and version") {
  CHECK(std::string(gn_status_name(GN_OK)) == "ok");
  CHECK(std::strlen(gn_version()) > 0);
  CHECK(std::string(gn_status_name(GN_ERR_CONFIG)) != std::string(gn_status_name(GN_ERR_PARSE)));
}

TEST_CASE("null arguments are rejected") {
  gn_dataset* d = nullptr;
  CHECK(gn_dataset_load(nullptr, nullptr, &d) == GN_ERR_ARGUMENT);
  CHECK(gn_dataset_load_text("x", nullptr, nullptr) == GN_ERR_ARGUMENT);
  CHECK(gn_options_set(nullptr, "a", "b") == GN_ERR_ARGUMENT);
  CHECK(gn_network_build(nullptr, nullptr, nullptr) == GN_ERR_ARGUMENT);
  CHECK(std::strlen(gn_last_error()) > 0);
  gn_dataset_free(nullptr);
  gn_network_free(nullptr);
  gn_report_free(nullptr);
}

TEST_CASE("errors map to status codes") {
  gn_dataset* d = nullptr;
  CHECK(gn_dataset_load_text("arrest_id,offender_id\n", nullptr, &d) == GN_ERR_PARSE);
  CHECK(d == nullptr);
  CHECK(gn_dataset_load("/nonexistent/arrests.csv", nullptr, &d) == GN_ERR_IO);
  {
    Opts o;
    o.set("offenders", "100").set("typo_key", "1");
    CHECK(gn_dataset_generate(o.o, &d) == GN_ERR_CONFIG);
    CHECK(std::string(gn_last_error()).find("typo_key") != std::string::npos);
  }
  {
    Opts o;
    o.set("offenders", "many");
    CHECK(gn_dataset_generate(o.o, &d) == GN_ERR_CONFIG);
  }
  const char* dup =
      "arrest_id,offender_id,date,crime,violent,district,beat,gang,homicide_victim\n"
      "A1,O1,2012-01-02,theft,0,D01,B0101,,0\n"
      "A1,O1,2012-01-02,theft,0,D01,B0101,,0\n";
  CHECK(gn_dataset_load_text(dup, nullptr, &d) == GN_ERR_VALIDATION);

  REQUIRE(gn_dataset_load_text(kVictimless, nullptr, &d) == GN_OK);
  gn_network* g = nullptr;
  REQUIRE(gn_network_build(d, nullptr, &g) == GN_OK);
  gn_watchlist* w = nullptr;
  CHECK(gn_baseline_thh(d, g, nullptr, &w) == GN_ERR_VALIDATION);
  CHECK(std::string(gn_last_error()).find("homicide_victim") != std::string::npos);
  CHECK(gn_network_node_id(g, 99) == nullptr);
  gn_features* f = nullptr;
  {
    Opts o;
    o.set("columns", "degree,nope");
    CHECK(gn_features_compute(d, g, o.o, &f) == GN_ERR_CONFIG);
  }
  REQUIRE(gn_features_compute(d, g, nullptr, &f) == GN_OK);
  double x = 0;
  CHECK(gn_features_value(f, 5, 0, &x) == GN_ERR_ARGUMENT);
  gn_features_free(f);
  gn_network_free(g);
  gn_dataset_free(d);
}

TEST_CASE("fixture through the C API matches the golden file") {
  gn_dataset* d = nullptr;
  REQUIRE(gn_dataset_load(GANGNET_TEST_DATA "/fixture_arrests.csv", nullptr, &d) == GN_OK);
  CHECK(gn_dataset_record_count(d) == 15);
  CHECK(gn_dataset_offender_count(d) == 7);
  CHECK(gn_dataset_event_count(d) == 8);
  gn_network* g = nullptr;
  REQUIRE(gn_network_build(d, nullptr, &g) == GN_OK);
  CHECK(gn_network_node_count(g) == 7);
  CHECK(std::string(gn_network_node_id(g, 0)) == "O1");
  const auto dir = scratch("fixture");
  for (bool masked : {false, true}) {
    Opts o;
    o.set("mask_own_labels", masked ? "true" : "false");
    gn_features* f = nullptr;
    REQUIRE(gn_features_compute(d, g, o.o, &f) == GN_OK);
    CHECK(gn_features_rows(f) == 7);
    CHECK(gn_features_cols(f) == 32);
    CHECK(std::string(gn_features_column(f, 0)) == "degree");
    int label = -1;
    REQUIRE(gn_features_label(f, 0, &label) == GN_OK);
    CHECK(label == 1);
    const auto out = dir / "features.csv";
    REQUIRE(gn_features_write(f, out.c_str()) == GN_OK);
    CHECK(slurp(out) == slurp(std::string(GANGNET_TEST_DATA) +
                              (masked ? "/fixture_features_masked.csv" : "/fixture_features.csv")));
    gn_features_free(f);
  }
  gn_watchlist* w = nullptr;
  REQUIRE(gn_baseline_thh(d, g, nullptr, &w) == GN_OK);
  CHECK(gn_watchlist_contains(w, "O5") == 0);  // violent neighbour of the victim
  for (std::size_t i = 0; i < gn_watchlist_size(w); ++i) CHECK(std::strlen(gn_watchlist_member(w, i)) > 0);
  gn_watchlist_free(w);
  {
    Opts o;
    o.set("as_of", "2012-12-31").set("delta_days", "200");
    REQUIRE(gn_baseline_pva(d, o.o, &w) == GN_OK);
    CHECK(gn_watchlist_size(w) == 1);  // only the August robbery is in the window
    CHECK(gn_watchlist_contains(w, "O6") == 1);
    gn_watchlist_free(w);
  }
  gn_network_free(g);
  gn_dataset_free(d);
}

TEST_CASE("generate, evaluate and report") {
  Opts gen;
  gen.set("offenders", "400").set("months", "14").set("seed", "3");
  gn_dataset* d = nullptr;
  REQUIRE(gn_dataset_generate(gen.o, &d) == GN_OK);
  char* stats = nullptr;
  REQUIRE(gn_dataset_stats_json(d, gen.o, &stats) == GN_OK);
  CHECK(std::string(stats).find("\"config\"") != std::string::npos);
  gn_string_free(stats);

  Opts ev;
  ev.set("k", "4").set("trees", "10").set("compare", "thh,allpos").set("seed", "1");
  gn_report* r = nullptr;
  REQUIRE(gn_eval_kfold(d, ev.o, &r) == GN_OK);
  CHECK(gn_report_slice_count(r) == 12);
  const char *id = nullptr, *method = nullptr;
  gn_metrics m{};
  REQUIRE(gn_report_slice(r, 0, &id, &method, &m) == GN_OK);
  CHECK(std::string(id) == "fold0");
  CHECK(gn_report_slice(r, 12, &id, &method, &m) == GN_ERR_ARGUMENT);
  REQUIRE(gn_report_aggregate(r, "allpos", &m) == GN_OK);
  CHECK(m.recall == 1.0);
  CHECK(gn_report_aggregate(r, "pva", &m) == GN_ERR_LOOKUP);
  REQUIRE(gn_report_annotate(r, "input", "synthetic") == GN_OK);
  char* j1 = nullptr;
  REQUIRE(gn_report_json(r, &j1) == GN_OK);
  CHECK(std::string(j1).find("\"input\"") != std::string::npos);

  gn_report* again = nullptr;
  REQUIRE(gn_eval_kfold(d, ev.o, &again) == GN_OK);
  REQUIRE(gn_report_annotate(again, "input", "synthetic") == GN_OK);
  char* j2 = nullptr;
  REQUIRE(gn_report_json(again, &j2) == GN_OK);
  CHECK(std::string(j1) == std::string(j2));
  gn_string_free(j1);
  gn_string_free(j2);

  const auto dir = scratch("report");
  const auto a = (dir / "a.json").string(), b = (dir / "b.json").string();
  REQUIRE(gn_report_write_json(r, a.c_str()) == GN_OK);
  REQUIRE(gn_report_write_prf(r, (dir / "prf.csv").c_str()) == GN_OK);
  REQUIRE(gn_report_write_roc(r, (dir / "roc.csv").c_str()) == GN_OK);
  CHECK(slurp(dir / "prf.csv").rfind("slice,method,precision,recall,f1,auc,tp,fp,fn\n", 0) == 0);
  CHECK(slurp(dir / "roc.csv").rfind("method,fpr,tpr\n", 0) == 0);
  gn_report_free(again);
  gn_report_free(r);

  Opts tv;
  tv.set("start_month", "10").set("inner_folds", "3").set("trees", "10").set("compare", "pva");
  REQUIRE(gn_eval_temporal(d, tv.o, &r) == GN_OK);
  CHECK(gn_report_slice_count(r) > 0);
  REQUIRE(gn_report_write_json(r, b.c_str()) == GN_OK);
  gn_report_free(r);
  Opts bad;
  bad.set("compare", "allpos");
  CHECK(gn_eval_temporal(d, bad.o, &r) == GN_ERR_CONFIG);

  const char* paths[] = {a.c_str(), b.c_str()};
  char* merged = nullptr;
  REQUIRE(gn_report_merge(paths, 2, &merged) == GN_OK);
  const std::string mj(merged);
  CHECK(mj.find("\"merged\"") != std::string::npos);
  CHECK(mj.find(b) != std::string::npos);
  gn_string_free(merged);
  const char* missing[] = {"/nonexistent/report.json"};
  CHECK(gn_report_merge(missing, 1, &merged) == GN_ERR_IO);
  gn_dataset_free(d);
}

TEST_CASE("options replace earlier values") {
  Opts o;
  o.set("seed", "1").set("seed", "2");
  CHECK(gn_options_size(o.o) == 1);
}
