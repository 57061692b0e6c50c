// cqc: experiment runner for the cooling simulator.
//
//   cqc chain   --profile flat --n 2,3,4,5,6 --lambda 0.1
//   cqc grover  --N 4,6,8,10 --n0 1
//   cqc factor  --z 35 --alpha0 1 --samples 200 --seed 7
//   cqc circuit --file data/circuits/bell.json
//   cqc sweep   --target chain --lambdas 0.05,0.1,0.2
//
// Exit status: 0 success, 2 invalid input, 3 failure while running.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "cqc/cqc.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cqc;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Minimal CSV writer: header first, then rows of pre-formatted cells.
class Csv {
 public:
  Csv(const fs::path& path, const std::vector<std::string>& header) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot write " + path.string());
    row(header);
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

template <class T>
std::string cell(T v) {
  if constexpr (std::is_floating_point_v<T>) {
    return fmt(v);
  } else {
    return std::to_string(v);
  }
}

struct Outputs {
  fs::path dir;
  json files = json::array();

  fs::path file(const std::string& name) {
    files.push_back(name);
    return dir / name;
  }
};

// ---- chain ----

json population_near(const PopulationCurve& c, double tau) {
  if (c.tau.empty() || tau > c.tau.back() + 1e-12) return nullptr;
  std::size_t best = 0;
  for (std::size_t i = 1; i < c.tau.size(); ++i) {
    if (std::abs(c.tau[i] - tau) < std::abs(c.tau[best] - tau)) best = i;
  }
  return c.population[best];
}

json curve_family(const ExperimentConfig& c, double lambda, Outputs* out, const std::string& prefix) {
  const auto profile = parse_chain_profile(c.chain.profile);
  std::vector<PopulationCurve> curves;
  json per_n = json::array();
  for (int n : c.chain.n) {
    const ChainProblem p{n, profile};
    const auto rate = predicted_rate(p, lambda);
    auto curve = simulate_chain_curve(p, lambda, static_cast<std::size_t>(c.chain.points), c.chain.tau_max);
    const auto peak = first_peak(curve);
    per_n.push_back({{"n", n},
                     {"predicted_rate", rate.omega},
                     {"out_of_regime", rate.out_of_regime},
                     {"first_peak_tau", peak.tau},
                     {"first_peak_population", peak.value},
                     {"population_at_tau_1", population_near(curve, 1.0)}});
    if (out) {
      Csv csv(out->file(prefix + "_n" + std::to_string(n) + ".csv"), {"tau", "population"});
      for (std::size_t i = 0; i < curve.tau.size(); ++i) csv.row({fmt(curve.tau[i]), fmt(curve.population[i])});
    }
    curves.push_back(std::move(curve));
  }
  json r{{"lambda", lambda}, {"profile", c.chain.profile}, {"curves", per_n}};
  r["collapse_metric"] = curves.size() >= 2 ? json(collapse_metric(curves)) : json(nullptr);
  return r;
}

json run_chain(const ExperimentConfig& c, Outputs& out) {
  return curve_family(c, c.chain.lambda, &out, "chain_" + c.chain.profile);
}

// ---- grover ----

json grover_point(const ExperimentConfig& c, int n, int n0, double lambda, bool cool, std::size_t index) {
  const auto problem = evenly_marked(n, static_cast<std::size_t>(n0));
  const auto engine = to_engine(c.engine);
  const auto t = measure_grover_transfer(problem, lambda, engine);
  const auto rate = grover_rate(n, static_cast<std::size_t>(n0), lambda);
  json r{{"N", n},
         {"n0", n0},
         {"lambda", lambda},
         {"rate_exact", rate.exact},
         {"rate_approx", rate.asymptotic},
         {"predicted_time", t.predicted_time},
         {"measured_time", t.measured_time},
         {"relative_error", (t.measured_time - t.predicted_time) / t.predicted_time},
         {"detection_probability", t.detection_probability},
         {"uniform_success_probability", t.uniform_success_probability}};
  if (!cool) return r;

  // Cooling runs from the uniform superposition at the predicted duration.
  SimulatorOptions opt;
  opt.engine = engine;
  opt.threads = static_cast<std::size_t>(c.threads);
  const CoolingSimulator sim(grover_encode(problem).model(lambda), t.predicted_time, opt);
  CoolingConfig cfg;
  cfg.cycle_duration = t.predicted_time;
  cfg.max_cycles = c.grover.max_cycles;
  cfg.quiet_cycles_to_stop = c.cooling.quiet_cycles_to_stop;
  cfg.initial = InitialStateKind::uniform;
  cfg.seed = trajectory_seed(c.seed, index);
  const auto e = run_ensemble(sim, cfg, static_cast<std::size_t>(c.grover.samples), static_cast<std::size_t>(c.threads));
  double first_sum = 0.0, first_cycle_hits = 0.0, solved = 0.0, detected_any = 0.0;
  for (const auto& tr : e.trajectories) {
    if (const auto f = tr.first_detection()) {
      detected_any += 1.0;
      first_sum += static_cast<double>(*f + 1);
      if (*f == 0) first_cycle_hits += 1.0;
    }
    if (tr.cycles.back().ground_population >= 0.9) solved += 1.0;
  }
  const double s = static_cast<double>(e.trajectories.size());
  r["samples"] = e.trajectories.size();
  r["first_cycle_detection_rate"] = first_cycle_hits / s;
  r["mean_first_detection_cycle"] = detected_any > 0 ? json(first_sum / detected_any) : json(nullptr);
  r["success_fraction"] = solved / s;
  return r;
}

json run_grover(const ExperimentConfig& c, Outputs& out) {
  json points = json::array();
  Csv transfer(out.file("grover_transfer.csv"), {"N", "n0", "lambda", "rate_exact", "rate_approx", "predicted_time", "measured_time",
                                                 "relative_error", "detection_probability"});
  Csv cooling(out.file("grover_cooling.csv"),
              {"N", "n0", "samples", "cycle_duration", "first_cycle_detection_rate", "mean_first_detection_cycle", "success_fraction"});
  std::size_t index = 0;
  for (int n : c.grover.N) {
    for (int n0 : c.grover.n0) {
      const json p = grover_point(c, n, n0, c.grover.lambda, true, index++);
      transfer.row({cell(n), cell(n0), fmt(c.grover.lambda), fmt(p["rate_exact"]), fmt(p["rate_approx"]), fmt(p["predicted_time"]),
                    fmt(p["measured_time"]), fmt(p["relative_error"]), fmt(p["detection_probability"])});
      cooling.row({cell(n), cell(n0), cell(p["samples"].get<std::size_t>()), fmt(p["predicted_time"]), fmt(p["first_cycle_detection_rate"]),
                   p["mean_first_detection_cycle"].is_null() ? std::string("nan") : fmt(p["mean_first_detection_cycle"]),
                   fmt(p["success_fraction"])});
      points.push_back(p);
    }
  }
  // successive transfer-time ratios per n0
  json ratios = json::array();
  for (int n0 : c.grover.n0) {
    const json* prev = nullptr;
    for (const auto& p : points) {
      if (p["n0"] != n0) continue;
      if (prev) {
        const int dn = p["N"].get<int>() - (*prev)["N"].get<int>();
        ratios.push_back({{"n0", n0},
                          {"from_N", (*prev)["N"]},
                          {"to_N", p["N"]},
                          {"measured_ratio", p["measured_time"].get<double>() / (*prev)["measured_time"].get<double>()},
                          {"ideal_ratio", std::pow(2.0, dn / 2.0)}});
      }
      prev = &p;
    }
  }
  return {{"points", points}, {"transfer_time_ratios", ratios}};
}

// ---- factor ----

void write_ensemble_csv(const fs::path& path, const EnsembleStats& s) {
  Csv csv(path, {"cycle", "mean_energy", "min_energy", "q25_energy", "median_energy", "q75_energy", "max_energy",
                 "mean_ground_population", "ground_fraction", "detection_rate"});
  for (std::size_t k = 0; k < s.per_cycle.size(); ++k) {
    const auto& x = s.per_cycle[k];
    csv.row({cell(k + 1), fmt(x.mean_energy), fmt(x.min_energy), fmt(x.q25_energy), fmt(x.median_energy), fmt(x.q75_energy),
             fmt(x.max_energy), fmt(x.mean_ground_population), fmt(x.ground_fraction), fmt(x.detection_rate)});
  }
}

void write_trajectory_csv(const fs::path& path, const Trajectory& t) {
  Csv csv(path, {"cycle", "detected_mask", "post_energy", "ground_population"});
  for (std::size_t k = 0; k < t.cycles.size(); ++k) {
    const auto& x = t.cycles[k];
    csv.row({cell(k + 1), cell(x.detected), fmt(x.post_energy), fmt(x.ground_population)});
  }
}

json run_factor(const ExperimentConfig& c, Outputs& out) {
  json runs = json::array();
  for (int alpha0 : c.factor.alpha0) {
    const auto spec = factoring_model_encoding({static_cast<unsigned>(c.factor.z)}, alpha0, c.factor.modes).model(c.factor.lambda);
    CoolingConfig cfg = to_cooling(c);
    const double duration = cfg.duration_for(c.factor.lambda);
    cfg.cycle_duration = duration;
    SimulatorOptions opt;
    opt.engine = to_engine(c.engine);
    opt.threads = static_cast<std::size_t>(c.threads);
    const CoolingSimulator sim(spec, duration, opt);
    const auto e = run_ensemble(sim, cfg, static_cast<std::size_t>(c.factor.samples), static_cast<std::size_t>(c.threads));
    const std::string tag = "factor_alpha" + std::to_string(alpha0);
    write_ensemble_csv(out.file(tag + "_ensemble.csv"), e.stats);
    const std::size_t keep = std::min<std::size_t>(static_cast<std::size_t>(c.factor.keep_trajectories), e.trajectories.size());
    json seeds = json::array();
    for (std::size_t i = 0; i < keep; ++i) {
      char name[64];
      std::snprintf(name, sizeof name, "_trajectory_%03zu.csv", i);
      write_trajectory_csv(out.file(tag + name), e.trajectories[i]);
      seeds.push_back(e.trajectories[i].seed);
    }
    std::size_t reached = 0;
    for (const auto& t : e.trajectories) {
      for (const auto& x : t.cycles) {
        if (x.ground_population >= e.stats.ground_threshold) {
          ++reached;
          break;
        }
      }
    }
    const auto& last = e.stats.per_cycle.back();
    runs.push_back({{"alpha0", alpha0},
                    {"cycle_duration", duration},
                    {"ground_states", sim.ground_states()},
                    {"samples", e.trajectories.size()},
                    {"kept_trajectory_seeds", seeds},
                    {"final_mean_energy", last.mean_energy},
                    {"final_ground_fraction", last.ground_fraction},
                    {"reached_ground_fraction", static_cast<double>(reached) / static_cast<double>(e.trajectories.size())}});
  }
  return {{"runs", runs}};
}

// ---- circuit ----

json run_circuit(const ExperimentConfig& c, Outputs& out) {
  const CompiledCircuit circuit = circuit_from_json(c.circuit.program);
  if (c.circuit.program_state >= circuit.program_dim()) throw ValidationError("circuit.program_state out of range");
  CoolingConfig cfg = to_cooling(c);
  const double duration = cfg.duration_for(c.circuit.lambda);
  SimulatorOptions opt;
  opt.engine = to_engine(c.engine);
  opt.threads = static_cast<std::size_t>(c.threads);
  const CoolingSimulator sim(circuit_encode(circuit).model(c.circuit.lambda), duration, opt);
  Eigen::VectorXcd phi0 = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(circuit.program_dim()));
  phi0(static_cast<Eigen::Index>(c.circuit.program_state)) = 1.0;

  std::vector<std::string> header{"sample", "cycle", "clock"};
  for (std::size_t t = 0; t <= circuit.steps(); ++t) header.push_back("p_clock_" + std::to_string(t));
  Csv clock(out.file("circuit_clock.csv"), header);
  Csv runs(out.file("circuit_runs.csv"),
           {"sample", "seed", "cycles", "detections", "heating_events", "max_regression", "completed", "fidelity"});
  double fidelity_sum = 0.0, cycles_sum = 0.0;
  std::size_t completed = 0, heating = 0, max_regression = 0;
  for (int i = 0; i < c.circuit.samples; ++i) {
    const auto seed = trajectory_seed(c.seed, static_cast<std::uint64_t>(i));
    const CircuitRun r = run_circuit_cooling(sim, circuit, phi0, seed, static_cast<std::size_t>(c.cooling.max_cycles));
    for (std::size_t k = 0; k < r.cycles; ++k) {
      std::vector<std::string> row{cell(i), cell(k + 1), cell(r.clock_trace[k])};
      for (double p : r.clock_marginals[k]) row.push_back(fmt(p));
      clock.row(row);
    }
    runs.row({cell(i), cell(seed), cell(r.cycles), cell(r.detections), cell(r.heating_events), cell(r.max_regression),
              cell(static_cast<int>(r.completed)), fmt(r.fidelity)});
    if (r.completed) {
      ++completed;
      fidelity_sum += r.fidelity;
      cycles_sum += static_cast<double>(r.cycles);
    }
    heating += r.heating_events;
    max_regression = std::max(max_regression, r.max_regression);
  }
  return {{"steps", circuit.steps()},
          {"qubits", circuit.num_qubits},
          {"cycle_duration", duration},
          {"completed", completed},
          {"mean_fidelity", completed ? json(fidelity_sum / static_cast<double>(completed)) : json(nullptr)},
          {"mean_cycles", completed ? json(cycles_sum / static_cast<double>(completed)) : json(nullptr)},
          {"heating_events", heating},
          {"max_regression", max_regression}};
}

// ---- sweep ----

json run_sweep(const ExperimentConfig& c, Outputs& out) {
  json points = json::array();
  if (c.sweep.target == "chain") {
    Csv csv(out.file("sweep_chain.csv"), {"lambda", "n", "predicted_rate", "first_peak_tau", "first_peak_population", "collapse_metric"});
    for (double l : c.sweep.lambdas) {
      const json fam = curve_family(c, l, nullptr, "");
      for (const auto& p : fam["curves"]) {
        csv.row({fmt(l), cell(p["n"].get<int>()), fmt(p["predicted_rate"]), fmt(p["first_peak_tau"]), fmt(p["first_peak_population"]),
                 fam["collapse_metric"].is_null() ? std::string("nan") : fmt(fam["collapse_metric"])});
      }
      points.push_back(fam);
    }
  } else {
    Csv csv(out.file("sweep_grover.csv"), {"lambda", "N", "n0", "predicted_time", "measured_time", "relative_error", "detection_probability"});
    for (double l : c.sweep.lambdas) {
      for (int n : c.grover.N) {
        for (int n0 : c.grover.n0) {
          const json p = grover_point(c, n, n0, l, false, 0);
          csv.row({fmt(l), cell(n), cell(n0), fmt(p["predicted_time"]), fmt(p["measured_time"]), fmt(p["relative_error"]),
                   fmt(p["detection_probability"])});
          points.push_back(p);
        }
      }
    }
  }
  return {{"target", c.sweep.target}, {"points", points}};
}

// ---- driver ----

struct Flags {
  std::optional<std::string> config, out, engine;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<double> tolerance;
  // chain
  std::optional<std::string> profile;
  std::vector<int> n;
  std::optional<double> chain_lambda;
  std::optional<int> points;
  std::optional<double> tau_max;
  // grover
  std::vector<int> grover_n, n0;
  std::optional<double> grover_lambda;
  std::optional<int> grover_samples, grover_cycles;
  // factor
  std::optional<int> z, modes, factor_samples, keep;
  std::vector<int> alpha0;
  std::optional<double> factor_lambda;
  // cooling
  std::optional<double> duration;
  std::optional<int> cycles, quiet;
  std::optional<std::string> initial;
  std::optional<std::size_t> z0;
  // circuit
  std::optional<std::string> file;
  std::optional<double> circuit_lambda;
  std::optional<std::size_t> program_state;
  std::optional<int> circuit_samples;
  // sweep
  std::optional<std::string> target;
  std::vector<double> lambdas;
};

template <class T>
void put(json& j, const char* section, const char* key, const std::optional<T>& v) {
  if (v) j[section][key] = *v;
}
template <class T>
void put(json& j, const char* section, const char* key, const std::vector<T>& v) {
  if (!v.empty()) j[section][key] = v;
}

json merge_flags(json j, const std::string& kind, const Flags& f) {
  if (!j.is_object()) throw ValidationError("config: top level must be an object");
  j["experiment"] = kind;
  if (f.seed) j["seed"] = *f.seed;
  if (f.threads) j["threads"] = *f.threads;
  if (f.out) j["out"] = *f.out;
  put(j, "engine", "method", f.engine);
  put(j, "engine", "tolerance", f.tolerance);
  put(j, "chain", "profile", f.profile);
  put(j, "chain", "n", f.n);
  put(j, "chain", "lambda", f.chain_lambda);
  put(j, "chain", "points", f.points);
  put(j, "chain", "tau_max", f.tau_max);
  put(j, "grover", "N", f.grover_n);
  put(j, "grover", "n0", f.n0);
  put(j, "grover", "lambda", f.grover_lambda);
  put(j, "grover", "samples", f.grover_samples);
  put(j, "grover", "max_cycles", f.grover_cycles);
  put(j, "factor", "z", f.z);
  put(j, "factor", "alpha0", f.alpha0);
  put(j, "factor", "modes", f.modes);
  put(j, "factor", "lambda", f.factor_lambda);
  put(j, "factor", "samples", f.factor_samples);
  put(j, "factor", "keep_trajectories", f.keep);
  put(j, "cooling", "cycle_duration", f.duration);
  put(j, "cooling", "max_cycles", f.cycles);
  put(j, "cooling", "quiet_cycles_to_stop", f.quiet);
  put(j, "cooling", "initial_state", f.initial);
  put(j, "cooling", "z0", f.z0);
  put(j, "circuit", "lambda", f.circuit_lambda);
  put(j, "circuit", "program_state", f.program_state);
  put(j, "circuit", "samples", f.circuit_samples);
  if (f.file) {
    j["circuit"]["file"] = *f.file;
    j["circuit"]["program"] = nullptr;  // a flag-given file replaces any embedded program
  }
  put(j, "sweep", "target", f.target);
  put(j, "sweep", "lambdas", f.lambdas);
  return j;
}

int execute(const std::string& kind, const Flags& f) {
  ExperimentConfig cfg;
  try {
    json doc = f.config ? read_config_document(*f.config) : json::object();
    cfg = experiment_from_json(merge_flags(std::move(doc), kind, f));
    if (kind == "circuit" && cfg.circuit.program.is_null() && cfg.circuit.file) {
      cfg.circuit.program = to_json(load_circuit_file(*cfg.circuit.file));
    }
    if (kind == "circuit" && !cfg.circuit.program.is_null()) cfg.circuit.program = to_json(circuit_from_json(cfg.circuit.program));
    validate_semantics(cfg);
    to_cooling(cfg).validate();
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    Outputs out;
    out.dir = cfg.out;
    fs::create_directories(out.dir);
    json results;
    if (kind == "chain") results = run_chain(cfg, out);
    else if (kind == "grover") results = run_grover(cfg, out);
    else if (kind == "factor") results = run_factor(cfg, out);
    else if (kind == "circuit") results = run_circuit(cfg, out);
    else results = run_sweep(cfg, out);

    const json summary{{"summary_version", 1},
                       {"experiment", kind},
                       {"seed", cfg.seed},
                       {"config", to_json(cfg)},
                       {"results", results},
                       {"files", out.files}};
    std::ofstream s(out.dir / "summary.json", std::ios::binary);
    s << summary.dump(2) << '\n';
    if (!s) throw std::runtime_error("cannot write summary.json");
    std::cout << "wrote " << (out.dir / "summary.json").string() << '\n';
    return 0;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "runtime failure: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cooling-based quantum computation simulator"};
  app.require_subcommand(1);
  Flags f;

  auto common = [&](CLI::App* s) {
    s->add_option("--config", f.config, "JSON config file or a previous summary.json");
    s->add_option("--out", f.out, "Output directory");
    s->add_option("--seed", f.seed, "Master seed (u64)");
    s->add_option("--threads", f.threads, "Worker threads");
    s->add_option("--engine", f.engine, "Evolution engine: automatic, exact, krylov");
    s->add_option("--tolerance", f.tolerance, "Krylov error target");
  };
  auto cooling = [&](CLI::App* s) {
    s->add_option("--duration", f.duration, "Cycle duration (default pi/(2 lambda))");
    s->add_option("--cycles", f.cycles, "Maximum cooling cycles");
    s->add_option("--quiet-stop", f.quiet, "Stop after this many photon-free cycles (0 = never)");
  };

  auto* chain = app.add_subcommand("chain", "High-order transition curves on nearest-neighbour chains");
  common(chain);
  chain->add_option("--profile", f.profile, "flat or triangle");
  chain->add_option("--n", f.n, "Chain lengths")->delimiter(',');
  chain->add_option("--lambda", f.chain_lambda, "Coupling");
  chain->add_option("--points", f.points, "Grid points per curve");
  chain->add_option("--tau-max", f.tau_max, "End of the rescaled time grid");

  auto* grover = app.add_subcommand("grover", "Unstructured search transfer times and cooling");
  common(grover);
  grover->add_option("--N", f.grover_n, "Qubit counts (<= 14)")->delimiter(',');
  grover->add_option("--n0", f.n0, "Marked-state counts")->delimiter(',');
  grover->add_option("--lambda", f.grover_lambda, "Coupling");
  grover->add_option("--samples", f.grover_samples, "Cooling trajectories per point");
  grover->add_option("--cycles", f.grover_cycles, "Cooling cycles per trajectory");
  grover->add_option("--quiet-stop", f.quiet, "Stop after this many photon-free cycles (0 = never)");

  auto* factor = app.add_subcommand("factor", "Integer factoring ensembles");
  common(factor);
  cooling(factor);
  factor->add_option("--z", f.z, "Integer to factor (< 64)");
  factor->add_option("--alpha0", f.alpha0, "alpha0 settings (0 and/or 1)")->delimiter(',');
  factor->add_option("--modes", f.modes, "Cavity modes M");
  factor->add_option("--lambda", f.factor_lambda, "Coupling");
  factor->add_option("--samples", f.factor_samples, "Trajectories per alpha0");
  factor->add_option("--keep-trajectories", f.keep, "Individual trajectories written as CSV");
  factor->add_option("--initial", f.initial, "basis, uniform or random_basis");
  factor->add_option("--z0", f.z0, "Initial assignment for --initial basis");

  auto* circuit = app.add_subcommand("circuit", "Cool a circuit history state through its clock");
  common(circuit);
  cooling(circuit);
  circuit->add_option("--file", f.file, "Circuit JSON file");
  circuit->add_option("--lambda", f.circuit_lambda, "Coupling");
  circuit->add_option("--program-state", f.program_state, "Initial program basis state");
  circuit->add_option("--samples", f.circuit_samples, "Independent cooling runs");

  auto* sweep = app.add_subcommand("sweep", "Coupling sweep of chain or Grover predictions");
  common(sweep);
  sweep->add_option("--target", f.target, "chain or grover");
  sweep->add_option("--lambdas", f.lambdas, "Coupling values")->delimiter(',');
  sweep->add_option("--profile", f.profile, "Chain profile");
  sweep->add_option("--n", f.n, "Chain lengths")->delimiter(',');
  sweep->add_option("--N", f.grover_n, "Qubit counts")->delimiter(',');
  sweep->add_option("--n0", f.n0, "Marked-state counts")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }
  for (auto* s : {chain, grover, factor, circuit, sweep}) {
    if (s->parsed()) return execute(s->get_name(), f);
  }
  return kExitValidation;
}
