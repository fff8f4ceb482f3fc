#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace {

namespace fs = std::filesystem;

struct Run {
  int status = -1;
  std::string output;  // stdout and stderr together
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string command = env + " \"" PVALPRIOR_CLI_PATH "\" " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("pvalprior_cli_" + std::string(info->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, AdviseQuiteLow) {
  const auto r = run("advise --prior quite-low");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.output.find("Fisher / p-value / not required"), std::string::npos) << r.output;
}

TEST_F(CliTest, AdviseJson) {
  const auto r = run("advise --prior not-given --urgency no --json");
  ASSERT_EQ(r.status, 0);
  const auto j = nlohmann::json::parse(r.output);
  ASSERT_EQ(j.size(), 2u);
  EXPECT_EQ(j[0]["philosophy"], "bayesian-objective");
  EXPECT_EQ(j[1]["philosophy"], "suspend");
}

TEST_F(CliTest, AdviseTable) {
  const auto r = run("advise --table");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.output.find("Neyman-Pearson"), std::string::npos) << r.output;
}

TEST_F(CliTest, HelpOnEverySubcommand) {
  const std::vector<std::pair<std::string, std::vector<std::string>>> flags{
      {"simulate", {"--recipe", "--genes", "--reps", "--groups", "--delta-factor", "--source-offset-sd",
                    "--threshold", "--bins", "--lambda", "--alpha", "--seed", "--threads", "--out",
                    "--config"}},
      {"test", {"--input", "--design", "--control", "--treatment", "--out"}},
      {"diagnose", {"--pvalues", "--bins", "--lambda", "--out"}},
      {"concord", {"--pvalues1", "--pvalues2", "--delta1", "--delta2", "--threshold", "--model"}},
      {"adjust", {"--pvalues", "--alpha", "--threshold"}},
      {"advise", {"--prior", "--urgency", "--json"}},
  };
  for (const auto& [sub, names] : flags) {
    const auto r = run(sub + " --help");
    EXPECT_EQ(r.status, 0) << sub;
    for (const auto& f : names) EXPECT_NE(r.output.find(f), std::string::npos) << sub << " " << f;
  }
  EXPECT_EQ(run("--help").status, 0);
}

TEST_F(CliTest, ArgumentErrorsExitTwo) {
  for (const char* args : {"", "advise", "advise --prior sometimes", "simulate --recipe nope",
                           "simulate --genes x", "frobnicate", "diagnose"}) {
    const auto r = run(args);
    EXPECT_EQ(r.status, 2) << args << "\n" << r.output;
    EXPECT_NE(r.output.find("Usage"), std::string::npos) << args << "\n" << r.output;
  }
}

TEST_F(CliTest, DataErrorsExitOne) {
  std::ofstream(path("bad.csv")) << "gene_id,s1,s2\ng1,1,2,3\n";
  std::ofstream(path("design.csv")) << "sample_id,group\ns1,A\ns2,B\n";
  const auto r = run("test --input " + path("bad.csv") + " --design " + path("design.csv") +
                     " --control A --treatment B --out " + path("out"));
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.output.find("row 2"), std::string::npos) << r.output;
  EXPECT_EQ(r.output.find("terminate"), std::string::npos);

  const auto odd = run("simulate --recipe split-1c --reps 5 --genes 10 --out " + path("odd"));
  EXPECT_EQ(odd.status, 1) << odd.output;
}

TEST_F(CliTest, SimulateIsDeterministic) {
  const std::string args = "simulate --recipe null-uniform --genes 2000 --reps 3 --seed 7 --out ";
  ASSERT_EQ(run(args + path("a") + " --threads 1").status, 0);
  const auto r = run(args + path("b") + " --threads 3");
  ASSERT_EQ(r.status, 0);
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(path("a"))) {
    const auto name = entry.path().filename();
    EXPECT_EQ(slurp(entry.path()), slurp(fs::path(path("b")) / name)) << name;
    EXPECT_NE(r.output.find(name.string()), std::string::npos);
    ++files;
  }
  EXPECT_GE(files, 6u);
}

TEST_F(CliTest, ConfigFileAndOverride) {
  std::ofstream(path("cfg.json")) << R"({"recipe": "effect-inject", "genes": 300, "seed": 5,
                                          "delta_factor": 0.9, "out": ")" << path("cfg_out") << "\"}";
  ASSERT_EQ(run("simulate --config " + path("cfg.json")).status, 0);
  auto cfg = nlohmann::json::parse(slurp(path("cfg_out/config.json")));
  EXPECT_EQ(cfg["genes"], 300);
  EXPECT_EQ(cfg["delta_factor"], 0.9);
  EXPECT_EQ(cfg["recipe"], "effect-inject");

  ASSERT_EQ(run("simulate --config " + path("cfg.json") + " --genes 200 --out " + path("flag_out")).status, 0);
  cfg = nlohmann::json::parse(slurp(path("flag_out/config.json")));
  EXPECT_EQ(cfg["genes"], 200);
  EXPECT_EQ(cfg["seed"], 5);

  std::ofstream(path("bad.json")) << R"({"gnomes": 3})";
  EXPECT_EQ(run("simulate --config " + path("bad.json")).status, 2);
}

TEST_F(CliTest, OutputDirectoryFromEnvironment) {
  const auto r = run("simulate --genes 150 --seed 2", "PVALPRIOR_OUT=" + path("env"));
  ASSERT_EQ(r.status, 0) << r.output;
  EXPECT_TRUE(fs::exists(path("env/pvalues.csv")));
}

TEST_F(CliTest, TestDiagnoseAdjustPipeline) {
  ASSERT_EQ(run("simulate --recipe effect-inject --genes 3000 --seed 3 --out " + path("sim")).status, 0);
  const auto t = run("test --input " + path("sim/matrix.csv") + " --design " + path("sim/design.csv") +
                     " --control G1 --treatment G2 --out " + path("t"));
  ASSERT_EQ(t.status, 0) << t.output;
  EXPECT_EQ(slurp(path("t/pvalues.csv")), slurp(path("sim/pvalues.csv")));

  const auto d = run("diagnose --pvalues " + path("t/pvalues.csv") + " --input " + path("sim/matrix.csv") +
                     " --design " + path("sim/design.csv") + " --control G1 --treatment G2 --out " +
                     path("d"));
  ASSERT_EQ(d.status, 0) << d.output;
  const auto diag = nlohmann::json::parse(slurp(path("d/diagnostics.json")));
  const auto sim_diag = nlohmann::json::parse(slurp(path("sim/diagnostics.json")));
  // The CSV keeps 10 significant digits, so only the KS distance may move.
  for (const char* key : {"count", "chi_square", "skew", "pi0", "signal", "noise", "uniform"}) {
    EXPECT_EQ(diag[key], sim_diag[key]) << key;
  }
  EXPECT_NEAR(diag["ks"].get<double>(), sim_diag["ks"].get<double>(), 1e-9);

  const auto a = run("adjust --pvalues " + path("t/pvalues.csv") + " --out " + path("adj"));
  ASSERT_EQ(a.status, 0) << a.output;
  const auto adj = nlohmann::json::parse(slurp(path("adj/adjust.json")));
  EXPECT_LE(adj["bonferroni_count"].get<int>(), adj["raw_count"].get<int>());
}

TEST_F(CliTest, ConcordOnSharedPattern) {
  ASSERT_EQ(run("simulate --recipe concordance-pair --genes 4000 --delta-factor 1.5 --seed 9 --out " +
                path("pair"))
                .status,
            0);
  const auto r = run("concord --pvalues1 " + path("pair/pvalues_1.csv") + " --pvalues2 " +
                     path("pair/pvalues_2.csv") + " --delta1 " + path("pair/delta_z_1.csv") +
                     " --delta2 " + path("pair/delta_z_2.csv") + " --out " + path("conc"));
  ASSERT_EQ(r.status, 0) << r.output;
  const auto j = nlohmann::json::parse(slurp(path("conc/concordance.json")));
  EXPECT_TRUE(j.contains("coincidence_p"));
  EXPECT_TRUE(j.contains("rho_p"));
  EXPECT_TRUE(j.contains("rho_dz_all"));
  EXPECT_GT(j["rho_p"].get<double>(), 0.2);
  EXPECT_EQ(j, nlohmann::json::parse(slurp(path("pair/concordance.json"))));
}

TEST_F(CliTest, ConcordOnRawCounts) {
  const auto r = run("concord --counts 22626,230,308,13 --out " + path("c"));
  ASSERT_EQ(r.status, 0) << r.output;
  const auto j = nlohmann::json::parse(slurp(path("c/coincidence.json")));
  EXPECT_GE(j["p_value"].get<double>(), 2.4e-5);
  EXPECT_LE(j["p_value"].get<double>(), 2.6e-5);
  EXPECT_EQ(run("concord --counts 10,2,3,4 --out " + path("c")).status, 1);
  EXPECT_EQ(run("concord --counts 10,2 --out " + path("c")).status, 2);
}

TEST_F(CliTest, EveryRecipeRuns) {
  for (const char* recipe : {"null-uniform", "effect-inject", "regroup-1b", "split-1c",
                             "concordance-pair", "adjust-compare"}) {
    const auto r = run(std::string("simulate --genes 1200 --seed 4 --recipe ") + recipe + " --out " +
                       path(recipe));
    EXPECT_EQ(r.status, 0) << recipe << "\n" << r.output;
    EXPECT_TRUE(fs::exists(path(recipe) + "/config.json")) << recipe;
  }
}

TEST_F(CliTest, MomentsFromInputMatrix) {
  {
    std::ofstream m(path("m.csv"));
    m << "gene_id,a1,a2,a3,b1\n";
    m << "flat,5,5,5,0\n";
    for (int g = 0; g < 120; ++g) m << "x" << g << ",1,2,3,100\n";
  }
  std::ofstream(path("d.csv")) << "sample_id,group\na1,A\na2,A\na3,A\n";
  const auto r = run("simulate --input " + path("m.csv") + " --design " + path("d.csv") +
                     " --source-group A --out " + path("mm"));
  ASSERT_EQ(r.status, 0) << r.output;
  const auto matrix = slurp(path("mm/matrix.csv"));
  EXPECT_NE(matrix.find("\nflat,5,5,5,5,5,5\n"), std::string::npos);
  EXPECT_EQ(nlohmann::json::parse(slurp(path("mm/config.json")))["genes"], 121);

  const auto small = run("simulate --genes 50 --out " + path("small"));
  EXPECT_EQ(small.status, 1);
}

}  // namespace
