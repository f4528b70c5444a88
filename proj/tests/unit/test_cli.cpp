#include <openssl/evp.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

const fs::path kDir = fs::temp_directory_path() / "gangnet_cli_test";

int run(const std::string& args) {
  const std::string cmd = std::string(GANGNET_CLI) + " " + args + " >" + (kDir / "stdout").string() + " 2>" +
                          (kDir / "stderr").string();
  const int rc = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(rc));
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string sha256(const fs::path& p) {
  const auto data = slurp(p);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  std::string hex;
  char buf[3];
  for (unsigned i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

struct Scratch {
  Scratch() {
    fs::remove_all(kDir);
    fs::create_directories(kDir);
  }
};

const std::string kFixture = GANGNET_TEST_DATA "/fixture_arrests.csv";

}  // namespace

TEST_CASE("cli: usage errors exit 2") {
  Scratch s;
  CHECK(run("") == 2);
  CHECK(run("synth --months 12") == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("features --input " + kFixture + " --out " + q(kDir / "f.csv") + " --columns bogus") == 2);
  CHECK(run("eval kfold --input " + kFixture + " --compare pva --out-dir " + q(kDir)) == 2);
  CHECK(run("--threads -3 graph-stats --input " + kFixture) == 2);
  CHECK(run("--help") == 0);
}

TEST_CASE("cli: data errors exit 3 and io errors exit 4") {
  Scratch s;
  std::ofstream(kDir / "bad.csv") << "arrest_id,offender_id,date,crime,violent,district,beat,gang,homicide_victim\n"
                                  << "A1,O1,2012-02-30,theft,0,D01,B0101,,0\n";
  CHECK(run("ingest --input " + q(kDir / "bad.csv")) == 3);
  CHECK(slurp(kDir / "stderr").find("row 2") != std::string::npos);
  std::ofstream(kDir / "victimless.csv")
      << "arrest_id,offender_id,date,crime,violent,district,beat,gang,homicide_victim\n"
      << "A1,O1,2012-01-02,robbery,1,D01,B0101,,0\n"
      << "A1,O2,2012-01-02,theft,0,D01,B0101,,0\n";
  CHECK(run("baseline thh --input " + q(kDir / "victimless.csv")) == 3);
  CHECK(slurp(kDir / "stderr").find("homicide_victim") != std::string::npos);
  CHECK(run("ingest --input /nonexistent/arrests.csv") == 4);
  CHECK(run("features --input " + kFixture + " --out /nonexistent/dir/f.csv") == 4);
}

TEST_CASE("cli: features reproduce the golden files") {
  Scratch s;
  REQUIRE(run("features --input " + kFixture + " --out " + q(kDir / "plain.csv")) == 0);
  CHECK(slurp(kDir / "plain.csv") == slurp(std::string(GANGNET_TEST_DATA) + "/fixture_features.csv"));
  REQUIRE(run("features --input " + kFixture + " --mask-own-labels --out " + q(kDir / "masked.csv")) == 0);
  CHECK(slurp(kDir / "masked.csv") == slurp(std::string(GANGNET_TEST_DATA) + "/fixture_features_masked.csv"));
  REQUIRE(run("features --input " + kFixture + " --window 2013-01-01.. --out " + q(kDir / "empty.csv")) == 0);
  const auto empty = slurp(kDir / "empty.csv");
  CHECK(std::count(empty.begin(), empty.end(), '\n') == 1);
}

TEST_CASE("cli: baselines") {
  Scratch s;
  REQUIRE(run("baseline thh --input " + kFixture) == 0);
  CHECK(slurp(kDir / "stdout") == "O4\n");
  REQUIRE(run("baseline pva --input " + kFixture + " --out " + q(kDir / "all.txt")) == 0);
  REQUIRE(run("baseline pva --input " + kFixture + " --delta-days 200 --out " + q(kDir / "recent.txt")) == 0);
  CHECK(slurp(kDir / "all.txt") == "O1\nO5\nO6\n");
  CHECK(slurp(kDir / "recent.txt") == "O5\nO6\n");  // window starts 2012-03-15
}

TEST_CASE("cli: synth, graph-stats and eval are deterministic") {
  Scratch s;
  const auto a = kDir / "a";
  const std::vector<std::string> files{"arrests.csv",       "stats.json",
                                       "graph.json",        "edges.csv",
                                       "kfold/report.json", "kfold/p_r_f_by_fold.csv",
                                       "kfold/roc_points.csv"};
  std::vector<std::string> first;
  for (int pass = 0; pass < 2; ++pass) {
    REQUIRE(run("--seed 5 synth --offenders 300 --months 14 --out-dir " + q(a)) == 0);
    REQUIRE(run("graph-stats --input " + q(a / "arrests.csv") + " --out " + q(a / "graph.json") + " --edges " +
                q(a / "edges.csv")) == 0);
    REQUIRE(run("--seed 7 eval kfold --input " + q(a / "arrests.csv") +
                " --k 4 --trees 10 --compare thh,allpos --out-dir " + q(a / "kfold")) == 0);
    for (std::size_t i = 0; i < files.size(); ++i) {
      const auto h = sha256(a / files[i]);
      if (pass == 0) {
        first.push_back(h);
      } else {
        INFO(files[i]);
        CHECK(h == first[i]);
      }
    }
  }
  REQUIRE(run("--seed 6 synth --offenders 300 --months 14 --out-dir " + q(kDir / "c")) == 0);
  CHECK(sha256(a / "arrests.csv") != sha256(kDir / "c" / "arrests.csv"));
  CHECK(slurp(a / "kfold/report.json").find("\"input\"") != std::string::npos);

  REQUIRE(run("eval temporal --input " + q(a / "arrests.csv") +
              " --start-month 10 --inner-folds 3 --trees 10 --compare pva,thh --out-dir " + q(kDir / "t")) == 0);
  CHECK(fs::exists(kDir / "t" / "p_r_f_by_month.csv"));
  REQUIRE(run("report " + q(a / "kfold/report.json") + " " + q(kDir / "t/report.json") + " --out " +
              q(kDir / "merged.json")) == 0);
  CHECK(slurp(kDir / "merged.json").find("\"merged\"") != std::string::npos);
}

TEST_CASE("cli: config file with flag precedence") {
  Scratch s;
  std::ofstream(kDir / "run.ini") << "# generator\n[synth]\noffenders = 200\nmonths = \"12\"\nseed = 4\n";
  REQUIRE(run("--config " + q(kDir / "run.ini") + " synth --out-dir " + q(kDir / "x")) == 0);
  REQUIRE(run("--seed 4 synth --offenders 200 --months 12 --out-dir " + q(kDir / "y")) == 0);
  CHECK(sha256(kDir / "x/arrests.csv") == sha256(kDir / "y/arrests.csv"));
  REQUIRE(run("--config " + q(kDir / "run.ini") + " synth --offenders 250 --out-dir " + q(kDir / "z")) == 0);
  CHECK(slurp(kDir / "z/stats.json").find("\"offenders\": 250") != std::string::npos);
  std::ofstream(kDir / "typo.ini") << "offendrs = 200\n";
  CHECK(run("--config " + q(kDir / "typo.ini") + " synth --offenders 10 --months 2 --out-dir " + q(kDir / "w")) == 2);
  CHECK(run("--config " + q(kDir / "missing.ini") + " synth --offenders 10 --months 2") == 2);
}
