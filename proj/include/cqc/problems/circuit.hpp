#pragma once

#include <Eigen/Dense>
#include <json.hpp>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "cqc/problems/encoding.hpp"
#include "cqc/random.hpp"

namespace cqc {

struct CircuitError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Program register convention: qubit q is bit q of the basis index.
enum class GateKind { identity, x, hadamard, t_phase, cnot, matrix };

inline std::string to_string(GateKind k) {
  switch (k) {
    case GateKind::identity: return "I";
    case GateKind::x: return "X";
    case GateKind::hadamard: return "H";
    case GateKind::t_phase: return "T";
    case GateKind::cnot: return "CNOT";
    case GateKind::matrix: return "U";
  }
  return "?";
}

struct Gate {
  GateKind kind = GateKind::identity;
  std::vector<int> targets;  // CNOT: {control, target}; U: local bit j acts on targets[j]
  Eigen::MatrixXcd matrix;   // only for GateKind::matrix
};

struct CompiledCircuit {
  int num_qubits = 1;
  std::vector<Gate> gates;  // U_1 ... U_T, one gate per time step

  std::size_t steps() const { return gates.size(); }
  std::size_t program_dim() const { return std::size_t{1} << num_qubits; }
};

inline Eigen::Matrix2cd single_qubit_matrix(GateKind k) {
  Eigen::Matrix2cd m;
  switch (k) {
    case GateKind::identity: m << 1, 0, 0, 1; break;
    case GateKind::x: m << 0, 1, 1, 0; break;
    case GateKind::hadamard: {
      const double r = 1.0 / std::sqrt(2.0);
      m << r, r, r, -r;
      break;
    }
    case GateKind::t_phase: m << 1, 0, 0, std::polar(1.0, std::numbers::pi / 4); break;
    default: throw CircuitError("not a single-qubit gate");
  }
  return m;
}

/// Full-register unitary of one gate.
inline Eigen::MatrixXcd gate_unitary(const Gate& g, int num_qubits) {
  const auto n = static_cast<Eigen::Index>(std::size_t{1} << num_qubits);
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(n, n);
  auto bit = [](Eigen::Index i, int q) { return static_cast<Eigen::Index>((i >> q) & 1); };

  if (g.kind == GateKind::cnot) {
    const int c = g.targets.at(0), t = g.targets.at(1);
    for (Eigen::Index i = 0; i < n; ++i) u(bit(i, c) ? (i ^ (Eigen::Index{1} << t)) : i, i) = 1.0;
    return u;
  }
  Eigen::MatrixXcd local = g.kind == GateKind::matrix ? g.matrix : Eigen::MatrixXcd(single_qubit_matrix(g.kind));
  const auto k = g.targets.size();
  Eigen::Index mask = 0;
  for (int q : g.targets) mask |= Eigen::Index{1} << q;
  auto local_index = [&](Eigen::Index i) {
    Eigen::Index l = 0;
    for (std::size_t j = 0; j < k; ++j) l |= bit(i, g.targets[j]) << j;
    return l;
  };
  for (Eigen::Index out = 0; out < n; ++out) {
    for (Eigen::Index in = 0; in < n; ++in) {
      if ((out & ~mask) != (in & ~mask)) continue;
      u(out, in) = local(local_index(out), local_index(in));
    }
  }
  return u;
}

inline void validate(const CompiledCircuit& c) {
  if (c.num_qubits < 1 || c.num_qubits > 10) throw CircuitError("program register must have 1..10 qubits");
  if (c.gates.empty()) throw CircuitError("circuit must have at least one step (T >= 1)");
  for (std::size_t s = 0; s < c.gates.size(); ++s) {
    const auto& g = c.gates[s];
    const std::string where = "step " + std::to_string(s + 1) + ": ";
    std::size_t want = 1;
    if (g.kind == GateKind::cnot) want = 2;
    if (g.kind == GateKind::matrix) {
      if (g.targets.empty()) throw CircuitError(where + "matrix gate needs targets");
      want = g.targets.size();
      const auto d = static_cast<Eigen::Index>(std::size_t{1} << want);
      if (g.matrix.rows() != d || g.matrix.cols() != d) throw CircuitError(where + "matrix shape does not match targets");
      const double err = (g.matrix.adjoint() * g.matrix - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff();
      if (!(err <= 1e-12)) throw CircuitError(where + "gate is not unitary");
    }
    if (g.targets.size() != want) throw CircuitError(where + "wrong number of targets for " + to_string(g.kind));
    for (std::size_t i = 0; i < g.targets.size(); ++i) {
      if (g.targets[i] < 0 || g.targets[i] >= c.num_qubits) throw CircuitError(where + "target out of range");
      for (std::size_t j = 0; j < i; ++j) {
        if (g.targets[i] == g.targets[j]) throw CircuitError(where + "repeated target");
      }
    }
  }
}

/// |phi_t> = U_t ... U_1 |phi_0> for t = 0..T.
inline std::vector<Eigen::VectorXcd> simulate_circuit(const CompiledCircuit& c, const Eigen::VectorXcd& phi0) {
  validate(c);
  if (phi0.size() != static_cast<Eigen::Index>(c.program_dim())) throw DimensionMismatch(c.program_dim(), static_cast<std::size_t>(phi0.size()));
  std::vector<Eigen::VectorXcd> out{phi0};
  for (const auto& g : c.gates) out.push_back(gate_unitary(g, c.num_qubits) * out.back());
  return out;
}

/// System register = clock (x) program, clock major: index t * 2^n + p.
inline std::size_t circuit_system_index(const CompiledCircuit& c, std::size_t clock, std::size_t program) {
  return clock * c.program_dim() + program;
}

/// H_P = -sum_t t |t><t| on the clock, H_T = sum_t (U_{t+1} (x) |t+1><t| + h.c.);
/// one cavity at omega = Delta, alpha0 = 0.
inline ProblemEncoding circuit_encode(const CompiledCircuit& c) {
  validate(c);
  const std::size_t np = c.program_dim();
  const std::size_t levels = c.steps() + 1;
  std::vector<std::int64_t> e(levels * np);
  for (std::size_t t = 0; t < levels; ++t) {
    for (std::size_t p = 0; p < np; ++p) e[circuit_system_index(c, t, p)] = -static_cast<std::int64_t>(t);
  }
  std::vector<Triplet> trip;
  for (std::size_t t = 0; t + 1 < levels; ++t) {
    const Eigen::MatrixXcd u = gate_unitary(c.gates[t], c.num_qubits);
    for (std::size_t out = 0; out < np; ++out) {
      for (std::size_t in = 0; in < np; ++in) {
        const complex v = u(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(in));
        if (v == complex{}) continue;
        trip.push_back({circuit_system_index(c, t + 1, out), circuit_system_index(c, t, in), v});
        trip.push_back({circuit_system_index(c, t, in), circuit_system_index(c, t + 1, out), std::conj(v)});
      }
    }
  }
  auto ht = SparseHermitian::from_triplets(levels * np, std::move(trip));
  return {ProblemHamiltonian::general(std::move(e)), TransitionTerm::from_matrix(TransitionKind::clock_ladder, std::move(ht)),
          CavityBank{{1.0}}, 0};
}

/// Uniformly random gates from {X, H, T, CNOT} (CNOT only when n >= 2).
inline CompiledCircuit random_circuit(int num_qubits, std::size_t steps, Rng& rng) {
  CompiledCircuit c{num_qubits, {}};
  const std::size_t kinds = num_qubits >= 2 ? 4 : 3;
  for (std::size_t s = 0; s < steps; ++s) {
    const std::size_t k = uniform_index(rng, kinds);
    Gate g;
    if (k == 3) {
      g.kind = GateKind::cnot;
      const int control = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(num_qubits)));
      int target = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(num_qubits - 1)));
      if (target >= control) ++target;
      g.targets = {control, target};
    } else {
      g.kind = k == 0 ? GateKind::x : (k == 1 ? GateKind::hadamard : GateKind::t_phase);
      g.targets = {static_cast<int>(uniform_index(rng, static_cast<std::size_t>(num_qubits)))};
    }
    c.gates.push_back(std::move(g));
  }
  validate(c);
  return c;
}

// Circuit files: a JSON list of {"gate": "X"|"H"|"T"|"CNOT"|"I"|"U", "targets": [...]}
// entries, or an object {"qubits": n, "gates": [...]}. "U" entries carry
// "matrix": [[[re, im], ...], ...] (row major) and must be unitary.
namespace detail {

inline CompiledCircuit parse_circuit(const nlohmann::json& j) {
  const nlohmann::json* gates = &j;
  int qubits = 0;
  if (j.is_object()) {
    if (!j.contains("gates")) throw CircuitError("circuit object needs a 'gates' list");
    gates = &j.at("gates");
    if (j.contains("qubits")) qubits = j.at("qubits").get<int>();
  }
  if (!gates->is_array()) throw CircuitError("circuit must be a JSON list of gates");
  CompiledCircuit c;
  int max_target = -1;
  for (const auto& e : *gates) {
    if (!e.is_object() || !e.contains("gate") || !e.contains("targets")) throw CircuitError("gate entries need 'gate' and 'targets'");
    Gate g;
    const auto name = e.at("gate").get<std::string>();
    if (name == "I") g.kind = GateKind::identity;
    else if (name == "X") g.kind = GateKind::x;
    else if (name == "H") g.kind = GateKind::hadamard;
    else if (name == "T") g.kind = GateKind::t_phase;
    else if (name == "CNOT") g.kind = GateKind::cnot;
    else if (name == "U") g.kind = GateKind::matrix;
    else throw CircuitError("unknown gate '" + name + "'");
    if (!e.at("targets").is_array()) throw CircuitError("'targets' must be a list");
    g.targets = e.at("targets").get<std::vector<int>>();
    for (int q : g.targets) max_target = std::max(max_target, q);
    if (g.kind == GateKind::matrix) {
      const auto& rows = e.at("matrix");
      if (!rows.is_array() || rows.empty()) throw CircuitError("'matrix' must be a non-empty list of rows");
      const auto d = static_cast<Eigen::Index>(rows.size());
      g.matrix.resize(d, d);
      for (Eigen::Index r = 0; r < d; ++r) {
        const auto& row = rows[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != d) throw CircuitError("matrix must be square");
        for (Eigen::Index col = 0; col < d; ++col) {
          const auto& v = row[static_cast<std::size_t>(col)];
          g.matrix(r, col) = v.is_array() ? complex{v.at(0).get<double>(), v.at(1).get<double>()} : complex{v.get<double>(), 0.0};
        }
      }
    }
    c.gates.push_back(std::move(g));
  }
  c.num_qubits = qubits > 0 ? qubits : std::max(1, max_target + 1);
  validate(c);
  return c;
}

}  // namespace detail

inline CompiledCircuit circuit_from_json(const nlohmann::json& j) {
  try {
    return detail::parse_circuit(j);
  } catch (const nlohmann::json::exception& e) {
    throw CircuitError("malformed circuit: " + std::string(e.what()));
  }
}

inline nlohmann::json to_json(const CompiledCircuit& c) {
  nlohmann::json gates = nlohmann::json::array();
  for (const auto& g : c.gates) {
    nlohmann::json e{{"gate", to_string(g.kind)}, {"targets", g.targets}};
    if (g.kind == GateKind::matrix) {
      nlohmann::json rows = nlohmann::json::array();
      for (Eigen::Index r = 0; r < g.matrix.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index col = 0; col < g.matrix.cols(); ++col) row.push_back({g.matrix(r, col).real(), g.matrix(r, col).imag()});
        rows.push_back(std::move(row));
      }
      e["matrix"] = std::move(rows);
    }
    gates.push_back(std::move(e));
  }
  return {{"qubits", c.num_qubits}, {"gates", std::move(gates)}};
}

inline CompiledCircuit load_circuit_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CircuitError("cannot open circuit file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw CircuitError("malformed circuit file: " + std::string(e.what()));
  }
  return circuit_from_json(j);
}

}  // namespace cqc
