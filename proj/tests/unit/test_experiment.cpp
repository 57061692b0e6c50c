#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"

using namespace cqc;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("cqc_unit_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(CQC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

void write_json(const fs::path& p, const json& j) { std::ofstream(p) << j.dump(2); }

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

const std::string kData = CQC_DATA_DIR;

}  // namespace

TEST(ExperimentSchema, PublishedCopyMatchesEmbedded) {
  const auto published = read_json(fs::path(CQC_DATA_DIR).parent_path() / "docs" / "experiment.schema.json");
  EXPECT_EQ(published, experiment_schema());
}

TEST(ExperimentSchema, DefaultsWhenEmpty) {
  const auto c = experiment_from_json(json::object());
  EXPECT_EQ(c.seed, 1u);
  EXPECT_EQ(c.factor.z, 35);
  EXPECT_EQ(c.factor.modes, 3);
  EXPECT_DOUBLE_EQ(c.factor.lambda, 0.1);
  EXPECT_EQ(c.chain.n, (std::vector<int>{2, 3, 4, 5, 6}));
  EXPECT_FALSE(c.cooling.cycle_duration.has_value());
}

TEST(ExperimentSchema, RejectsBadDocuments) {
  EXPECT_THROW(experiment_from_json({{"bogus", 1}}), ValidationError);
  EXPECT_THROW(experiment_from_json({{"factor", {{"z", 64}}}}), ValidationError);
  EXPECT_THROW(experiment_from_json({{"factor", {{"alpha0", {2}}}}}), ValidationError);
  EXPECT_THROW(experiment_from_json({{"factor", {{"color", "red"}}}}), ValidationError);
  EXPECT_THROW(experiment_from_json({{"grover", {{"N", {15}}}}}), ValidationError);
  EXPECT_THROW(experiment_from_json({{"chain", {{"n", json::array()}}}}), ValidationError);
  EXPECT_THROW(experiment_from_json({{"chain", {{"lambda", 0.0}}}}), ValidationError);
  EXPECT_THROW(experiment_from_json({{"seed", "7"}}), ValidationError);
  EXPECT_THROW(experiment_from_json({{"seed", 1.5}}), ValidationError);
  EXPECT_THROW(experiment_from_json({{"experiment", "annealing"}}), ValidationError);
  EXPECT_NO_THROW(experiment_from_json({{"experiment", "factor"}, {"seed", 18446744073709551615ull}, {"factor", {{"z", 63}}}}));
}

TEST(ExperimentSchema, SemanticChecks) {
  auto c = experiment_from_json({{"experiment", "chain"}, {"chain", {{"profile", "triangle"}, {"n", {2, 3}}}}});
  EXPECT_THROW(validate_semantics(c), ValidationError);
  c = experiment_from_json({{"experiment", "grover"}, {"grover", {{"N", {3}}, {"n0", {8}}}}});
  EXPECT_THROW(validate_semantics(c), ValidationError);
  c = experiment_from_json({{"experiment", "circuit"}});
  EXPECT_THROW(validate_semantics(c), ValidationError);
  c = experiment_from_json({{"experiment", "chain"}, {"chain", {{"profile", "triangle"}, {"n", {2, 4}}}}});
  EXPECT_NO_THROW(validate_semantics(c));
}

TEST(ExperimentSchema, ResolvedEchoRoundTrips) {
  auto c = experiment_from_json({{"experiment", "factor"}, {"seed", 9}, {"factor", {{"alpha0", {0}}}}, {"cooling", {{"max_cycles", 7}}}});
  const json j = to_json(c);
  const auto back = experiment_from_json(j);
  EXPECT_EQ(to_json(back), j);
  EXPECT_EQ(back.cooling.max_cycles, 7);
  EXPECT_EQ(back.factor.alpha0, std::vector<int>{0});
}

TEST(Cli, ValidationFailuresExitWithTwo) {
  const auto out = scratch("invalid");
  const std::string o = " --out " + out.string();
  EXPECT_EQ(run_cli("chain --profile triangle --n 3" + o), 2);
  EXPECT_EQ(run_cli("factor --z 64" + o), 2);
  EXPECT_EQ(run_cli("grover --N 15" + o), 2);
  EXPECT_EQ(run_cli("grover --N 3 --n0 8" + o), 2);
  EXPECT_EQ(run_cli("chain --no-such-flag" + o), 2);
  EXPECT_EQ(run_cli("circuit --file " + kData + "/circuits/non_unitary.json" + o), 2);
  EXPECT_EQ(run_cli("circuit --file /nonexistent/circuit.json" + o), 2);
  EXPECT_EQ(run_cli("chain --config /nonexistent/config.json" + o), 2);
  const auto cfg = out / "bad.json";
  write_json(cfg, {{"chain", {{"profile", "flat"}, {"nn", {2}}}}});
  EXPECT_EQ(run_cli("chain --config " + cfg.string() + o), 2);
  EXPECT_EQ(run_cli(""), 2);
}

TEST(Cli, RuntimeFailureExitsWithThree) {
  // A Krylov budget far too small for the requested evolution.
  const auto out = scratch("runtime");
  const auto cfg = out / "cfg.json";
  write_json(cfg, {{"engine", {{"method", "krylov"}, {"max_subspace", 2}, {"tolerance", 1e-300}}}});
  EXPECT_EQ(run_cli("grover --N 4 --samples 1 --cycles 1 --config " + cfg.string() + " --out " + (out / "o").string()), 3);
}

TEST(Cli, ChainWritesCurvesAndMetric) {
  const auto out = scratch("chain");
  ASSERT_EQ(run_cli("chain --profile flat --n 2,3,4,5,6 --lambda 0.1 --out " + out.string()), 0);
  for (int n = 2; n <= 6; ++n) {
    const auto f = out / ("chain_flat_n" + std::to_string(n) + ".csv");
    ASSERT_TRUE(fs::exists(f)) << f;
    EXPECT_EQ(first_line(f), "tau,population");
  }
  const auto s = read_json(out / "summary.json");
  EXPECT_EQ(s["config"]["chain"]["n"], json({2, 3, 4, 5, 6}));
  EXPECT_LE(s["results"]["collapse_metric"].get<double>(), 0.1);
  EXPECT_EQ(s["results"]["curves"].size(), 5u);
}

TEST(Cli, FloatsUseSeventeenSignificantDigits) {
  const auto out = scratch("digits");
  ASSERT_EQ(run_cli("chain --n 2 --points 3 --tau-max 1 --out " + out.string()), 0);
  std::ifstream in(out / "chain_flat_n2.csv");
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 2), "0,");
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 4), "0.5,");
  // sin^2(pi/4) is not exactly representable; 17 digits are printed
  const auto value = line.substr(4);
  std::size_t digits = 0;
  for (char ch : value) digits += std::isdigit(static_cast<unsigned char>(ch)) ? 1 : 0;
  EXPECT_GE(digits, 17u) << value;
}

TEST(Cli, FlagsOverrideConfigAndSummaryReruns) {
  const auto dir = scratch("rerun");
  const auto cfg = dir / "cfg.json";
  write_json(cfg, {{"seed", 5}, {"grover", {{"N", {4}}, {"n0", {1, 2}}, {"lambda", 0.01}, {"samples", 6}, {"max_cycles", 3}}}});
  ASSERT_EQ(run_cli("grover --config " + cfg.string() + " --seed 11 --out " + (dir / "a").string()), 0);
  const auto s = read_json(dir / "a" / "summary.json");
  EXPECT_EQ(s["seed"], 11);
  EXPECT_EQ(s["config"]["seed"], 11);
  EXPECT_EQ(s["config"]["grover"]["samples"], 6);

  ASSERT_EQ(run_cli("grover --config " + (dir / "a" / "summary.json").string() + " --threads 3 --out " + (dir / "b").string()), 0);
  for (const auto& f : s["files"]) {
    const auto name = f.get<std::string>();
    EXPECT_EQ(slurp(dir / "a" / name), slurp(dir / "b" / name)) << name;
  }
}

TEST(Cli, FactorTrajectoryColumns) {
  // no cavities: a cheap run that still exercises the whole output path
  const auto out = scratch("factor");
  ASSERT_EQ(run_cli("factor --z 35 --alpha0 1 --modes 0 --samples 3 --cycles 4 --keep-trajectories 2 --seed 7 --out " + out.string()), 0);
  EXPECT_EQ(first_line(out / "factor_alpha1_trajectory_000.csv"), "cycle,detected_mask,post_energy,ground_population");
  EXPECT_TRUE(fs::exists(out / "factor_alpha1_trajectory_001.csv"));
  EXPECT_FALSE(fs::exists(out / "factor_alpha1_trajectory_002.csv"));
  EXPECT_EQ(first_line(out / "factor_alpha1_ensemble.csv"),
            "cycle,mean_energy,min_energy,q25_energy,median_energy,q75_energy,max_energy,mean_ground_population,ground_fraction,"
            "detection_rate");
  const auto s = read_json(out / "summary.json");
  EXPECT_EQ(s["results"]["runs"][0]["ground_states"], json({762, 986}));
}

TEST(Cli, IdentityCircuitPreservesProgramState) {
  const auto out = scratch("identity");
  ASSERT_EQ(run_cli("circuit --file " + kData + "/circuits/identity.json --lambda 0.02 --samples 3 --seed 4 --out " + out.string()), 0);
  const auto r = read_json(out / "summary.json")["results"];
  EXPECT_EQ(r["completed"], 3);
  EXPECT_GE(r["mean_fidelity"].get<double>(), 0.999);
}

TEST(Cli, ShortCircuitReachesHighFidelity) {
  const auto out = scratch("xht");
  ASSERT_EQ(run_cli("circuit --file " + kData + "/circuits/x_h_t.json --lambda 0.02 --samples 5 --seed 2 --out " + out.string()), 0);
  const auto s = read_json(out / "summary.json");
  EXPECT_EQ(s["results"]["completed"], 5);
  EXPECT_GE(s["results"]["mean_fidelity"].get<double>(), 0.98);
  // the parsed circuit is embedded, so the summary alone reruns the experiment
  EXPECT_EQ(s["config"]["circuit"]["program"]["gates"].size(), 3u);
  EXPECT_EQ(first_line(out / "circuit_clock.csv"), "sample,cycle,clock,p_clock_0,p_clock_1,p_clock_2,p_clock_3");
}

TEST(Cli, SweepOverChainCoupling) {
  const auto out = scratch("sweep");
  ASSERT_EQ(run_cli("sweep --target chain --n 2,4 --lambdas 0.05,0.1 --out " + out.string()), 0);
  const auto s = read_json(out / "summary.json");
  EXPECT_EQ(s["results"]["points"].size(), 2u);
  EXPECT_EQ(first_line(out / "sweep_chain.csv"), "lambda,n,predicted_rate,first_peak_tau,first_peak_population,collapse_metric");
}
