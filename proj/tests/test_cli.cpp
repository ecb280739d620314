#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
};

CliResult run(const std::string& args) {
  std::string cmd = "MVPROJ_COLOR=0 '" + std::string(MVPROJ_CLI) + "' " + args + " 2>&1";
  CliResult r;
  std::FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const std::string& name) { return "'" + oracle::data(name) + "'"; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch() {
  fs::path d = fs::temp_directory_path() / "mvproj-cli-test";
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST(Cli, ChainOrbit) {
  CliResult r = run("chain orbit 3/13");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("multipliers = (4)"), std::string::npos) << r.out;
  EXPECT_EQ(run("chain orbit 2/4").code, 1);
  EXPECT_EQ(run("chain orbit banana").code, 2);
}

TEST(Cli, EtaBuild) {
  CliResult r = run("eta build 3 13");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("gamma = (4*x1)'"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("lambda = (13*x1 /\\ 13*(12*x1)')'"), std::string::npos) << r.out;
  EXPECT_EQ(run("eta build 3 12").code, 2);
}

TEST(Cli, CheckProjective) {
  CliResult id = run("check-projective " + data("identity-pair.json"));
  EXPECT_EQ(id.code, 0);
  EXPECT_NE(id.out.find("projective: true"), std::string::npos) << id.out;
  CliResult dbl = run("check-projective " + data("doubling-pair.json"));
  EXPECT_EQ(dbl.code, 1);
  EXPECT_NE(dbl.out.find("(1/4, 0)"), std::string::npos) << dbl.out;
  EXPECT_EQ(run("check-projective " + data("no-such.json")).code, 2);
}

TEST(Cli, JsonEverywhere) {
  for (const std::string& args : std::vector<std::string>{"chain orbit 3/13", "eta build 3 13 --compile", "fn eval " + data("tent.json") + " at 1/4", "fn validate " + data("tent.json"),
        "archimedean " + data("tent.json"), "extremals " + data("diag-f.json") + " " + data("diag-g.json"),
        "iso " + data("iso-f.json") + " " + data("iso-g.json") + " " + data("iso-f1.json") + " " + data("iso-g1.json"),
        "equalizer " + data("identity-pair.json"), "check-projective " + data("doubling-pair.json"),
        "build case-ii -a 1 -b 2 -c 1 -d 2", "oracle grid " + data("identity-pair.json") + " -D 3"}) {
    CliResult r = run(args + " --json");
    EXPECT_LE(r.code, 1) << args;
    EXPECT_NO_THROW((void)mvproj::json::parse(r.out)) << args << "\n" << r.out;
  }
}

TEST(Cli, CaseIIJson) {
  CliResult r = run("build case-ii -a 2 -b 7 -c 3 -d 8 --json");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\"x_S\": \"18/31\""), std::string::npos) << r.out;
  EXPECT_EQ(run("build case-ii -a 3 -b 2 -c 1 -d 1").code, 2);
}

TEST(Cli, IsoAndExtremals) {
  std::string base = data("iso-f.json") + " " + data("iso-g.json") + " " + data("iso-f1.json") + " ";
  CliResult yes = run("iso " + base + data("iso-g1.json"));
  EXPECT_EQ(yes.code, 0);
  EXPECT_NE(yes.out.find("isomorphic (by range equality)"), std::string::npos);
  CliResult no = run("iso " + base + data("iso-g1-perturbed.json"));
  EXPECT_EQ(no.code, 1);
  EXPECT_NE(no.out.find("ranges differ"), std::string::npos);
  CliResult ext = run("extremals " + data("diag-f.json") + " " + data("diag-g.json"));
  EXPECT_EQ(ext.code, 0);
  EXPECT_NE(ext.out.find("(1/2, 1/2)"), std::string::npos) << ext.out;
}

TEST(Cli, OracleGrid) {
  CliResult r = run("oracle grid " + data("doubling-pair.json") + " -D 4");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("(1/4, 0)"), std::string::npos) << r.out;
  EXPECT_EQ(run("oracle grid " + data("identity-pair.json") + " -D 7").code, 0);
}

TEST(Cli, BuildOutReloads) {
  fs::path d = scratch();
  fs::path out = d / "pair.json";
  for (const std::string& args : std::vector<std::string>{"build case-i --spec " + data("zigzag-spec.json"), "build case-ii -a 2 -b 7 -c 3 -d 8",
                                  "build case-iii --fan " + data("fan-single.json")}) {
    CliResult r = run(args + " --out '" + out.string() + "'");
    ASSERT_EQ(r.code, 0) << args << "\n" << r.out;
    CliResult again = run("check-projective '" + out.string() + "'");
    EXPECT_EQ(again.code, 0) << args;
    mvproj::SubstitutionPair p = mvproj::pair_from_json(mvproj::read_json_file(out.string()));
    EXPECT_TRUE(mvproj::validate(p).empty());
  }
}

TEST(Cli, FnCommands) {
  CliResult e = run("fn eval " + data("tent.json") + " at 1/4");
  EXPECT_EQ(e.code, 0);
  EXPECT_NE(e.out.find("1/2"), std::string::npos) << e.out;
  EXPECT_EQ(run("fn validate " + data("tent.json")).code, 0);
  EXPECT_EQ(run("archimedean " + data("tent.json")).code, 1);
}

TEST(Cli, SvgOutputsAreStable) {
  fs::path d = scratch();
  for (const std::string& args : std::vector<std::string>{"eta build 3 13 --svg", "check-projective " + data("doubling-pair.json") + " --svg",
                                  "build case-ii -a 2 -b 7 -c 3 -d 8 --svg"}) {
    fs::path a = d / "a.svg", b = d / "b.svg";
    run(args + " '" + a.string() + "'");
    run(args + " '" + b.string() + "'");
    std::string sa = slurp(a);
    EXPECT_FALSE(sa.empty()) << args;
    EXPECT_EQ(sa, slurp(b)) << args;
    EXPECT_EQ(sa.rfind("<svg", 0) == 0 || sa.find("<svg") != std::string::npos, true);
  }
}
