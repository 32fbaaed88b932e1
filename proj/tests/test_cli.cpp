#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new fs::path(fs::temp_directory_path() / ("dqdc_test_" + std::to_string(::getpid())));
    fs::create_directories(*dir_);
    const char* prebuilt = std::getenv("DQD_TEST_LIBRARY");
    if (prebuilt && fs::exists(prebuilt)) {
      fs::copy_file(prebuilt, path("lib.json"));
    } else {
      ASSERT_EQ(run("build-library --out " + path("lib.json")).code, 0);
    }
  }
  static void TearDownTestSuite() {
    fs::remove_all(*dir_);
    delete dir_;
  }

  static std::string path(const std::string& name) { return (*dir_ / name).string(); }

  static Result run(const std::string& args) {
    const std::string cmd = std::string(DQDC_PATH) + " " + args + " 2>/dev/null";
    Result r;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int status = ::pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
  }

  static std::string slurp(const std::string& file) {
    std::ifstream in(file);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  static void write(const std::string& file, const std::string& text) { std::ofstream(file) << text; }

  static fs::path* dir_;
};

fs::path* Cli::dir_ = nullptr;

}  // namespace

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run("--help").code, 0);
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);
  EXPECT_EQ(run("compile-gate").code, 1);
  EXPECT_EQ(run("run " + path("missing.json")).code, 1);
  EXPECT_EQ(run("demo").code, 1);
}

TEST_F(Cli, CompileGate) {
  const auto r = run("--json compile-gate H --out " + path("h.json") + " --history " + path("hist.json"));
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j.at("name"), "H");
  EXPECT_LE(j.at("epsilon").get<double>(), 1e-5);
  const auto lib = json::parse(slurp(path("h.json")));
  EXPECT_EQ(lib.at("gates").size(), 1u);
  EXPECT_EQ(json::parse(slurp(path("hist.json"))).at("rounds_used"), j.at("rounds"));
  // A second gate is added to the same file.
  ASSERT_EQ(run("compile-gate X --out " + path("h.json")).code, 0);
  EXPECT_EQ(json::parse(slurp(path("h.json"))).at("gates").size(), 2u);
}

TEST_F(Cli, CompileGateFailures) {
  EXPECT_EQ(run("compile-gate SWAP").code, 2);
  const auto r = run("--json compile-gate Y --max-rounds 2");
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(json::parse(r.out).at("report").at("rounds_used"), 2);
}

TEST_F(Cli, DeterministicTrainingHistory) {
  ASSERT_EQ(run("--seed 7 compile-gate T --history " + path("t1.json")).code, 0);
  ASSERT_EQ(run("--seed 7 compile-gate T --history " + path("t2.json")).code, 0);
  EXPECT_EQ(slurp(path("t1.json")), slurp(path("t2.json")));
  ASSERT_EQ(run("--seed 8 compile-gate T --history " + path("t3.json")).code, 0);
  EXPECT_NE(slurp(path("t1.json")), slurp(path("t3.json")));
}

TEST_F(Cli, ConfigFileOverrides) {
  write(path("cfg.toml"), "seed = 5\n");
  const auto r = run("--config " + path("cfg.toml") + " --json compile-gate Z");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(json::parse(r.out).at("seed"), 5);
}

TEST_F(Cli, CompileVerifyRun) {
  write(path("bell.json"), R"([{"gate": "H", "qubits": [0]}, {"gate": "CX", "qubits": [0, 1]}])");
  ASSERT_EQ(run("compile-circuit " + path("bell.json") + " --lib " + path("lib.json") + " --out " +
                path("bell_sched.json"))
                .code,
            0);
  EXPECT_EQ(run("verify " + path("bell_sched.json")).code, 0);
  const auto r = run("--json run " + path("bell_sched.json"));
  ASSERT_EQ(r.code, 0);
  const auto dist = json::parse(r.out).at("distribution");
  EXPECT_NEAR(dist.at("00").get<double>(), 0.5, 1e-3);
  EXPECT_NEAR(dist.at("11").get<double>(), 0.5, 1e-3);
  EXPECT_EQ(run("run " + path("bell_sched.json") + " --init 0").code, 2);
}

TEST_F(Cli, VerifyRejectsCorruptedSchedule) {
  write(path("c.json"), R"([{"gate": "X", "qubits": [1]}])");
  ASSERT_EQ(run("compile-circuit " + path("c.json") + " --lib " + path("lib.json") + " --out " +
                path("c_sched.json"))
                .code,
            0);
  auto s = json::parse(slurp(path("c_sched.json")));
  s["segments"][0]["duration"] = s["segments"][0]["duration"].get<double>() + 0.5;
  write(path("bad.json"), s.dump());
  const auto r = run("--json verify " + path("bad.json"));
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(json::parse(r.out).at("ok").get<bool>());
  EXPECT_EQ(run("run " + path("bad.json")).code, 2);
}

TEST_F(Cli, RunIdleScheduleToCsv) {
  write(path("idle.json"), R"({"n_qubits": 2, "segments": [{"duration": 6.283185307179586, "pulses": [null, null]}]})");
  ASSERT_EQ(run("run " + path("idle.json") + " --csv " + path("idle.csv")).code, 0);
  std::ifstream in(path("idle.csv"));
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  EXPECT_EQ(header, "basis,probability");
  ASSERT_EQ(first.substr(0, 3), "00,");
  EXPECT_NEAR(std::stod(first.substr(3)), 1.0, 1e-10);
}

TEST_F(Cli, MalformedInputs) {
  write(path("nn.json"), R"([{"gate": "CZ", "qubits": [0, 2]}])");
  EXPECT_EQ(run("compile-circuit " + path("nn.json") + " --lib " + path("lib.json")).code, 2);
  write(path("garbage.json"), "{not json");
  EXPECT_EQ(run("verify " + path("garbage.json")).code, 2);
  EXPECT_EQ(run("demo grover --lib " + path("garbage.json")).code, 2);
}

TEST_F(Cli, GroverDemo) {
  const auto r = run("--json demo grover --lib " + path("lib.json"));
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_GE(j.at("distribution").at("11").get<double>(), 0.99);
  EXPECT_EQ(j.at("top_outcome"), "11");
}

TEST_F(Cli, MaxCutDemoDeterministic) {
  const std::string base = "demo maxcut --lib " + path("lib.json") + " --lr 0.1 --csv ";
  const auto a = run("--json " + base + path("m1.csv"));
  ASSERT_EQ(a.code, 0);
  ASSERT_EQ(run("--json " + base + path("m2.csv")).code, 0);
  EXPECT_EQ(slurp(path("m1.csv")), slurp(path("m2.csv")));
  EXPECT_EQ(json::parse(a.out).at("final_cut"), 3.0);
  EXPECT_EQ(slurp(path("m1.csv")).substr(0, 15), "round,loss,cut\n");
}
