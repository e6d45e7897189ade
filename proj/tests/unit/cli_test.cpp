#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "doctest.h"
#include "lift_document.hpp"
#include "random_systems.hpp"
#include "slin/lift.hpp"
#include "test_data.hpp"

using namespace slin;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result slin_run(std::vector<std::string> args) {
  ::setenv("SLIN_COLOR", "0", 1);
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class ScratchDir {
 public:
  ScratchDir() {
    static int counter = 0;
    dir_ = fs::temp_directory_path() / ("slin_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(dir_);
  }
  ~ScratchDir() { fs::remove_all(dir_); }
  std::string file(const std::string& name, const std::string& contents) const {
    const auto p = dir_ / name;
    std::ofstream(p) << contents;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

 private:
  fs::path dir_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kData = SLIN_TEST_DATA_DIR;

}  // namespace

TEST_CASE("check") {
  ScratchDir tmp;
  auto r = slin_run({"check", kData + "/example1.sys"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out.find("PASS") != std::string::npos);
  CHECK(r.out.find("gamma(1,2) = -1") != std::string::npos);
  CHECK(r.out.find("gamma(2,1) = 1") != std::string::npos);
  CHECK(r.out.find("gamma(5,5) = -1") != std::string::npos);
  CHECK(r.out.find("\x1b[") == std::string::npos);

  r = slin_run({"check", kData + "/square.sys"});
  CHECK(r.code == cli::kExitNegative);
  CHECK(r.out.find("FAIL") != std::string::npos);
  CHECK(r.out.find("gamma(1,1) = 2*x") != std::string::npos);

  r = slin_run({"check", tmp.path("does_not_exist.sys")});
  CHECK(r.code == cli::kExitUsage);
  CHECK(r.err.find("cannot read") != std::string::npos);

  r = slin_run({"check", tmp.file("bad.sys", "vars: x\nx' = 1/x\n")});
  CHECK(r.code == cli::kExitUsage);
  CHECK(r.err.find("2:7") != std::string::npos);

  const std::string dot = tmp.path("g.dot");
  r = slin_run({"check", kData + "/example1.sys", "--dot", dot});
  CHECK(r.code == cli::kExitOk);
  const std::string dot_text = slurp(dot);
  CHECK(dot_text.find("digraph") != std::string::npos);
  CHECK(dot_text.find("u_1") != std::string::npos);

  CHECK(slin_run({}).code == cli::kExitUsage);
  CHECK(slin_run({"frobnicate"}).code == cli::kExitUsage);
  CHECK(slin_run({"--help"}).code == cli::kExitOk);
}

TEST_CASE("lift and verify round trip") {
  ScratchDir tmp;
  for (const char* name : {"motivating.sys", "example1.sys", "affine.sys", "harmonic.sys"}) {
    const std::string out = tmp.path(std::string(name) + ".json");
    auto r = slin_run({"lift", kData + "/" + name, "-o", out});
    REQUIRE(r.code == cli::kExitOk);
    CHECK(r.out.find("symbolic verification: PASS") != std::string::npos);
    r = slin_run({"verify", kData + "/" + name, out});
    CHECK(r.code == cli::kExitOk);
    CHECK(r.out.find("PASS") != std::string::npos);
  }

  auto r = slin_run({"lift", kData + "/motivating.sys"});
  CHECK(r.out.find("n=2 m=1 dimension=3") != std::string::npos);
  CHECK(r.out.find("x' = -x + p1") != std::string::npos);
  CHECK(r.out.find("y' = -y") != std::string::npos);
  CHECK(r.out.find("p1' = -2*p1") != std::string::npos);
  CHECK(r.out.find("p1 = y^2") != std::string::npos);

  r = slin_run({"lift", kData + "/affine.sys"});
  CHECK(r.out.find("m=0") != std::string::npos);

  r = slin_run({"lift", kData + "/square.sys"});
  CHECK(r.code == cli::kExitNegative);
}

TEST_CASE("verify rejects corrupted and mismatched lifts") {
  ScratchDir tmp;
  const std::string lift = tmp.path("m.json");
  REQUIRE(slin_run({"lift", kData + "/motivating.sys", "-o", lift}).code == cli::kExitOk);

  auto j = nlohmann::json::parse(slurp(lift));
  j["A"][2][2] = "-1";
  const std::string bad = tmp.file("bad.json", j.dump());
  auto r = slin_run({"verify", kData + "/motivating.sys", bad});
  CHECK(r.code == cli::kExitNegative);
  CHECK(r.out.find("row 3") != std::string::npos);
  CHECK(r.out.find("-y^2") != std::string::npos);

  r = slin_run({"verify", kData + "/example1.sys", lift});
  CHECK(r.code == cli::kExitUsage);
  CHECK(r.err.find("dimension mismatch") != std::string::npos);

  r = slin_run({"verify", kData + "/motivating.sys", tmp.file("junk.json", "{not json")});
  CHECK(r.code == cli::kExitUsage);
  j = nlohmann::json::parse(slurp(lift));
  j.erase("D");
  r = slin_run({"verify", kData + "/motivating.sys", tmp.file("nod.json", j.dump())});
  CHECK(r.code == cli::kExitUsage);
  j = nlohmann::json::parse(slurp(lift));
  j["A"][0][0] = -1.0;
  r = slin_run({"verify", kData + "/motivating.sys", tmp.file("float.json", j.dump())});
  CHECK(r.code == cli::kExitUsage);

  r = slin_run({"verify", kData + "/example1.sys", kData + "/example1_reference_lift.json"});
  CHECK(r.code == cli::kExitOk);
}

TEST_CASE("simulate") {
  ScratchDir tmp;
  const std::string lift = tmp.path("m.json");
  REQUIRE(slin_run({"lift", kData + "/motivating.sys", "-o", lift}).code == cli::kExitOk);
  const std::string csv = tmp.path("traj.csv");
  auto r = slin_run({"simulate", kData + "/motivating.sys", "--lift", lift, "--x0", "1,1", "--t", "2", "-o", csv});
  REQUIRE(r.code == cli::kExitOk);
  const auto pos = r.out.find("max projection error: ");
  REQUIRE(pos != std::string::npos);
  CHECK(std::stod(r.out.substr(pos + 22)) <= 1e-6);
  const std::string text = slurp(csv);
  CHECK(text.rfind("t,x,y\n0,1,1\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 2002);

  r = slin_run({"simulate", kData + "/motivating.sys", "--x0", "1,1", "--t", "0"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out == "t,x,y\n0,1,1\n");

  r = slin_run({"simulate", kData + "/square.sys", "--x0", "1", "--t", "2"});
  CHECK(r.code == cli::kExitDiverged);
  CHECK(r.err.find("diverged") != std::string::npos);

  CHECK(slin_run({"simulate", kData + "/motivating.sys", "--x0", "1"}).code == cli::kExitUsage);
  CHECK(slin_run({"simulate", kData + "/motivating.sys", "--x0", "1,abc"}).code == cli::kExitUsage);
  CHECK(slin_run({"simulate", kData + "/motivating.sys", "--x0", "1,1", "--step", "0"}).code == cli::kExitUsage);
}

TEST_CASE("xumama") {
  auto r = slin_run({"xumama", kData + "/motivating.sys", "--max-n", "5"});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out == "N=2, alpha=[-2, -3]\n");
  r = slin_run({"xumama", kData + "/harmonic.sys"});
  CHECK(r.out == "N=2, alpha=[-1, 0]\n");
  r = slin_run({"xumama", kData + "/square.sys", "--max-n", "10"});
  CHECK(r.code == cli::kExitNegative);
  CHECK(r.out.find("NOT FOUND") != std::string::npos);
}

TEST_CASE("property: lift documents round-trip exactly") {
  testing::Rng rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    const auto sys = testing::random_layered_system(rng, 4);
    const auto sl = superlinearize(sys);
    const auto doc = cli::make_lift_document(sl, *sys.vars);
    const std::string text = cli::render_lift_document(doc);
    const auto back = cli::parse_lift_document_text(text);
    CHECK(back == doc);
    CHECK(cli::render_lift_document(back) == text);
    const auto sl2 = cli::to_superlinearization(back, sys.vars);
    CHECK(sl2.a == sl.a);
    CHECK(sl2.d == sl.d);
    REQUIRE(sl2.observables.size() == sl.observables.size());
    for (std::size_t k = 0; k < sl.observables.size(); ++k) {
      CHECK(sl2.observables[k].expansion == sl.observables[k].expansion);
      CHECK(sl2.observables[k].definition == sl.observables[k].definition);
    }
  }
}
