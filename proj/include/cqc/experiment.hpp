#pragma once

// Experiment configuration for the command-line runner: a JSON document
// validated against kExperimentSchema (also shipped as
// docs/experiment.schema.json), merged over defaults, and echoed back in
// resolved form in every run summary.

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cqc/analysis.hpp"
#include "cqc/problems/chain.hpp"
#include "cqc/problems/circuit.hpp"
#include "cqc/protocol.hpp"

namespace cqc {

struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline const char* const kExperimentSchema = R"json({
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "title": "cqc experiment",
  "type": "object",
  "additionalProperties": false,
  "properties": {
    "experiment": {"enum": ["chain", "grover", "factor", "circuit", "sweep"]},
    "seed": {"type": "integer", "minimum": 0},
    "threads": {"type": "integer", "minimum": 1, "maximum": 256},
    "out": {"type": "string"},
    "engine": {
      "type": "object",
      "additionalProperties": false,
      "properties": {
        "method": {"enum": ["automatic", "exact", "krylov"]},
        "tolerance": {"type": "number", "exclusiveMinimum": 0, "maximum": 0.01},
        "max_subspace": {"type": "integer", "minimum": 2, "maximum": 500}
      }
    },
    "cooling": {
      "type": "object",
      "additionalProperties": false,
      "properties": {
        "cycle_duration": {"type": ["number", "null"], "exclusiveMinimum": 0},
        "max_cycles": {"type": "integer", "minimum": 1},
        "quiet_cycles_to_stop": {"type": "integer", "minimum": 0},
        "initial_state": {"enum": ["basis", "uniform", "random_basis"]},
        "z0": {"type": "integer", "minimum": 0}
      }
    },
    "chain": {
      "type": "object",
      "additionalProperties": false,
      "properties": {
        "profile": {"enum": ["flat", "triangle"]},
        "n": {"type": "array", "minItems": 1, "items": {"type": "integer", "minimum": 2, "maximum": 64}},
        "lambda": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "points": {"type": "integer", "minimum": 2, "maximum": 100000},
        "tau_max": {"type": "number", "exclusiveMinimum": 0}
      }
    },
    "grover": {
      "type": "object",
      "additionalProperties": false,
      "properties": {
        "N": {"type": "array", "minItems": 1, "items": {"type": "integer", "minimum": 1, "maximum": 14}},
        "n0": {"type": "array", "minItems": 1, "items": {"type": "integer", "minimum": 1}},
        "lambda": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "samples": {"type": "integer", "minimum": 1},
        "max_cycles": {"type": "integer", "minimum": 1}
      }
    },
    "factor": {
      "type": "object",
      "additionalProperties": false,
      "properties": {
        "z": {"type": "integer", "minimum": 0, "maximum": 63},
        "alpha0": {"type": "array", "minItems": 1, "items": {"enum": [0, 1]}},
        "modes": {"type": "integer", "minimum": 0, "maximum": 8},
        "lambda": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "samples": {"type": "integer", "minimum": 1},
        "keep_trajectories": {"type": "integer", "minimum": 0}
      }
    },
    "circuit": {
      "type": "object",
      "additionalProperties": false,
      "properties": {
        "file": {"type": ["string", "null"]},
        "program": {"type": ["object", "array", "null"]},
        "lambda": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "program_state": {"type": "integer", "minimum": 0},
        "samples": {"type": "integer", "minimum": 1}
      }
    },
    "sweep": {
      "type": "object",
      "additionalProperties": false,
      "properties": {
        "target": {"enum": ["chain", "grover"]},
        "lambdas": {"type": "array", "minItems": 1, "items": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1}}
      }
    }
  }
})json";

namespace detail {

inline bool json_has_type(const nlohmann::json& v, const std::string& t) {
  if (t == "object") return v.is_object();
  if (t == "array") return v.is_array();
  if (t == "string") return v.is_string();
  if (t == "boolean") return v.is_boolean();
  if (t == "null") return v.is_null();
  if (t == "integer") return v.is_number_integer() || (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>());
  if (t == "number") return v.is_number();
  throw std::logic_error("schema uses unsupported type '" + t + "'");
}

// Subset of JSON Schema used by kExperimentSchema: type, enum, minimum,
// maximum, exclusiveMinimum, exclusiveMaximum, properties,
// additionalProperties (false), required, items, minItems.
inline void validate_node(const nlohmann::json& v, const nlohmann::json& s, const std::string& path) {
  auto fail = [&](const std::string& what) { throw ValidationError(path + ": " + what); };
  if (s.contains("type")) {
    const auto& t = s.at("type");
    bool ok = false;
    if (t.is_array()) {
      for (const auto& x : t) ok = ok || json_has_type(v, x.get<std::string>());
    } else {
      ok = json_has_type(v, t.get<std::string>());
    }
    if (!ok) fail("expected type " + t.dump());
  }
  if (v.is_null()) return;
  if (s.contains("enum")) {
    bool ok = false;
    for (const auto& e : s.at("enum")) ok = ok || e == v;
    if (!ok) fail("value " + v.dump() + " not in " + s.at("enum").dump());
  }
  if (v.is_number()) {
    const double x = v.get<double>();
    if (s.contains("minimum") && x < s.at("minimum").get<double>()) fail("must be >= " + s.at("minimum").dump());
    if (s.contains("maximum") && x > s.at("maximum").get<double>()) fail("must be <= " + s.at("maximum").dump());
    if (s.contains("exclusiveMinimum") && !(x > s.at("exclusiveMinimum").get<double>())) fail("must be > " + s.at("exclusiveMinimum").dump());
    if (s.contains("exclusiveMaximum") && !(x < s.at("exclusiveMaximum").get<double>())) fail("must be < " + s.at("exclusiveMaximum").dump());
  }
  if (v.is_object()) {
    const auto props = s.value("properties", nlohmann::json::object());
    for (const auto& [k, child] : v.items()) {
      if (props.contains(k)) {
        validate_node(child, props.at(k), path + "." + k);
      } else if (s.contains("additionalProperties") && s.at("additionalProperties") == false) {
        fail("unknown key '" + k + "'");
      }
    }
    if (s.contains("required")) {
      for (const auto& r : s.at("required")) {
        if (!v.contains(r.get<std::string>())) fail("missing key '" + r.get<std::string>() + "'");
      }
    }
  }
  if (v.is_array()) {
    if (s.contains("minItems") && v.size() < s.at("minItems").get<std::size_t>()) fail("needs at least " + s.at("minItems").dump() + " items");
    if (s.contains("items")) {
      for (std::size_t i = 0; i < v.size(); ++i) validate_node(v[i], s.at("items"), path + "[" + std::to_string(i) + "]");
    }
  }
}

}  // namespace detail

inline const nlohmann::json& experiment_schema() {
  static const nlohmann::json s = nlohmann::json::parse(kExperimentSchema);
  return s;
}

inline void validate_experiment_json(const nlohmann::json& j) { detail::validate_node(j, experiment_schema(), "config"); }

struct EngineSection {
  std::string method = "automatic";
  double tolerance = 1e-10;
  int max_subspace = 40;
};

struct CoolingSection {
  std::optional<double> cycle_duration;
  int max_cycles = 300;
  int quiet_cycles_to_stop = 0;
  std::string initial_state = "random_basis";
  std::size_t z0 = 0;
};

struct ChainSection {
  std::string profile = "flat";
  std::vector<int> n = {2, 3, 4, 5, 6};
  double lambda = 0.1;
  int points = static_cast<int>(kDefaultCurvePoints);
  double tau_max = kDefaultTauMax;
};

struct GroverSection {
  std::vector<int> N = {4, 6, 8, 10};
  std::vector<int> n0 = {1};
  double lambda = 0.002;
  int samples = 100;
  int max_cycles = 5;
};

struct FactorSection {
  int z = 35;
  std::vector<int> alpha0 = {1, 0};
  int modes = 3;
  double lambda = 0.1;
  int samples = 200;
  int keep_trajectories = 10;
};

struct CircuitSection {
  std::optional<std::string> file;
  nlohmann::json program;  // circuit in file format; null until loaded
  double lambda = 0.02;
  std::size_t program_state = 0;
  int samples = 20;
};

struct SweepSection {
  std::string target = "chain";
  std::vector<double> lambdas = {0.05, 0.1, 0.15, 0.2};
};

struct ExperimentConfig {
  std::string experiment;
  std::uint64_t seed = 1;
  int threads = 1;
  std::string out = "out";
  EngineSection engine;
  CoolingSection cooling;
  ChainSection chain;
  GroverSection grover;
  FactorSection factor;
  CircuitSection circuit;
  SweepSection sweep;
};

inline EvolutionEngine to_engine(const EngineSection& e) {
  EvolutionEngine out;
  out.method = e.method == "exact" ? EvolutionMethod::exact : e.method == "krylov" ? EvolutionMethod::krylov : EvolutionMethod::automatic;
  out.tolerance = e.tolerance;
  out.max_subspace = static_cast<std::size_t>(e.max_subspace);
  return out;
}

inline CoolingConfig to_cooling(const ExperimentConfig& c) {
  CoolingConfig out;
  out.cycle_duration = c.cooling.cycle_duration;
  out.max_cycles = c.cooling.max_cycles;
  out.quiet_cycles_to_stop = c.cooling.quiet_cycles_to_stop;
  out.seed = c.seed;
  out.initial = parse_initial_state(c.cooling.initial_state);
  out.z0 = c.cooling.z0;
  return out;
}

namespace detail {

template <class T>
void read_if(const nlohmann::json& j, const char* key, T& into) {
  if (j.contains(key) && !j.at(key).is_null()) into = j.at(key).get<T>();
}

}  // namespace detail

/// Schema check, then defaults overlaid with the document's values.
inline ExperimentConfig experiment_from_json(const nlohmann::json& j) {
  validate_experiment_json(j);
  ExperimentConfig c;
  using detail::read_if;
  read_if(j, "experiment", c.experiment);
  read_if(j, "seed", c.seed);
  read_if(j, "threads", c.threads);
  read_if(j, "out", c.out);
  if (j.contains("engine")) {
    const auto& e = j.at("engine");
    read_if(e, "method", c.engine.method);
    read_if(e, "tolerance", c.engine.tolerance);
    read_if(e, "max_subspace", c.engine.max_subspace);
  }
  if (j.contains("cooling")) {
    const auto& e = j.at("cooling");
    if (e.contains("cycle_duration") && !e.at("cycle_duration").is_null()) c.cooling.cycle_duration = e.at("cycle_duration").get<double>();
    read_if(e, "max_cycles", c.cooling.max_cycles);
    read_if(e, "quiet_cycles_to_stop", c.cooling.quiet_cycles_to_stop);
    read_if(e, "initial_state", c.cooling.initial_state);
    read_if(e, "z0", c.cooling.z0);
  }
  if (j.contains("chain")) {
    const auto& e = j.at("chain");
    read_if(e, "profile", c.chain.profile);
    read_if(e, "n", c.chain.n);
    read_if(e, "lambda", c.chain.lambda);
    read_if(e, "points", c.chain.points);
    read_if(e, "tau_max", c.chain.tau_max);
  }
  if (j.contains("grover")) {
    const auto& e = j.at("grover");
    read_if(e, "N", c.grover.N);
    read_if(e, "n0", c.grover.n0);
    read_if(e, "lambda", c.grover.lambda);
    read_if(e, "samples", c.grover.samples);
    read_if(e, "max_cycles", c.grover.max_cycles);
  }
  if (j.contains("factor")) {
    const auto& e = j.at("factor");
    read_if(e, "z", c.factor.z);
    read_if(e, "alpha0", c.factor.alpha0);
    read_if(e, "modes", c.factor.modes);
    read_if(e, "lambda", c.factor.lambda);
    read_if(e, "samples", c.factor.samples);
    read_if(e, "keep_trajectories", c.factor.keep_trajectories);
  }
  if (j.contains("circuit")) {
    const auto& e = j.at("circuit");
    if (e.contains("file") && !e.at("file").is_null()) c.circuit.file = e.at("file").get<std::string>();
    if (e.contains("program")) c.circuit.program = e.at("program");
    read_if(e, "lambda", c.circuit.lambda);
    read_if(e, "program_state", c.circuit.program_state);
    read_if(e, "samples", c.circuit.samples);
  }
  if (j.contains("sweep")) {
    const auto& e = j.at("sweep");
    read_if(e, "target", c.sweep.target);
    read_if(e, "lambdas", c.sweep.lambdas);
  }
  return c;
}

/// Checks that need more than the schema (parity, ranges tied to other fields).
inline void validate_semantics(const ExperimentConfig& c) {
  if (c.experiment.empty()) throw ValidationError("config: experiment kind missing");
  auto check_chain = [&] {
    const auto profile = parse_chain_profile(c.chain.profile);
    for (int n : c.chain.n) {
      try {
        ChainProblem{n, profile}.validate();
      } catch (const std::invalid_argument& e) {
        throw ValidationError("chain n=" + std::to_string(n) + ": " + e.what());
      }
    }
  };
  auto check_grover = [&] {
    for (int n : c.grover.N) {
      for (int k : c.grover.n0) {
        if (static_cast<std::uint64_t>(k) >= (std::uint64_t{1} << n)) {
          throw ValidationError("grover: n0=" + std::to_string(k) + " leaves no unmarked state for N=" + std::to_string(n));
        }
      }
    }
  };
  if (c.experiment == "chain") check_chain();
  if (c.experiment == "grover") check_grover();
  if (c.experiment == "sweep") {
    if (c.sweep.target == "chain") check_chain();
    else check_grover();
  }
  if (c.experiment == "factor") {
    if (c.cooling.initial_state == "basis" && c.cooling.z0 >= 1024) throw ValidationError("cooling.z0 out of range for the factoring register");
  }
  if (c.experiment == "circuit" && c.circuit.program.is_null()) throw ValidationError("circuit: no circuit given (file or program)");
}

inline nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["experiment"] = c.experiment;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["out"] = c.out;
  j["engine"] = {{"method", c.engine.method}, {"tolerance", c.engine.tolerance}, {"max_subspace", c.engine.max_subspace}};
  const bool cools = c.experiment == "factor" || c.experiment == "grover" || c.experiment == "circuit";
  if (cools) {
    j["cooling"] = {{"cycle_duration", c.cooling.cycle_duration ? nlohmann::json(*c.cooling.cycle_duration) : nlohmann::json(nullptr)},
                    {"max_cycles", c.cooling.max_cycles},
                    {"quiet_cycles_to_stop", c.cooling.quiet_cycles_to_stop},
                    {"initial_state", c.cooling.initial_state},
                    {"z0", c.cooling.z0}};
  }
  const bool sweep_chain = c.experiment == "sweep" && c.sweep.target == "chain";
  const bool sweep_grover = c.experiment == "sweep" && c.sweep.target == "grover";
  if (c.experiment == "chain" || sweep_chain) {
    j["chain"] = {{"profile", c.chain.profile}, {"n", c.chain.n}, {"lambda", c.chain.lambda}, {"points", c.chain.points}, {"tau_max", c.chain.tau_max}};
  }
  if (c.experiment == "grover" || sweep_grover) {
    j["grover"] = {{"N", c.grover.N}, {"n0", c.grover.n0}, {"lambda", c.grover.lambda}, {"samples", c.grover.samples}, {"max_cycles", c.grover.max_cycles}};
  }
  if (c.experiment == "factor") {
    j["factor"] = {{"z", c.factor.z}, {"alpha0", c.factor.alpha0}, {"modes", c.factor.modes}, {"lambda", c.factor.lambda},
                   {"samples", c.factor.samples}, {"keep_trajectories", c.factor.keep_trajectories}};
  }
  if (c.experiment == "circuit") {
    j["circuit"] = {{"file", c.circuit.file ? nlohmann::json(*c.circuit.file) : nlohmann::json(nullptr)},
                    {"program", c.circuit.program},
                    {"lambda", c.circuit.lambda},
                    {"program_state", c.circuit.program_state},
                    {"samples", c.circuit.samples}};
  }
  if (c.experiment == "sweep") j["sweep"] = {{"target", c.sweep.target}, {"lambdas", c.sweep.lambdas}};
  return j;
}

/// Reads a config file. A run summary is accepted too: its "config" member
/// is the resolved configuration of that run.
inline nlohmann::json read_config_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  if (j.is_object() && j.contains("summary_version") && j.contains("config")) return j.at("config");
  return j;
}

}  // namespace cqc
