#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cqc/problems/circuit.hpp"
#include "cqc/protocol.hpp"

namespace cqc {

/// Clock marginal P(t) = sum_p |<t, p, 0|psi>|^2 of a zero-photon-sector state.
inline std::vector<double> clock_marginal(const CoolingSimulator& sim, const CompiledCircuit& c, const StateVector& psi) {
  std::vector<double> p(c.steps() + 1, 0.0);
  for (std::size_t t = 0; t <= c.steps(); ++t) {
    for (std::size_t q = 0; q < c.program_dim(); ++q) p[t] += psi.probability(sim.indexer().index(circuit_system_index(c, t, q), 0));
  }
  return p;
}

inline std::size_t most_likely_clock(const std::vector<double>& marginal) {
  std::size_t best = 0;
  for (std::size_t t = 1; t < marginal.size(); ++t) {
    if (marginal[t] > marginal[best]) best = t;
  }
  return best;
}

struct CircuitRun {
  std::uint64_t seed = 0;
  std::size_t cycles = 0;          // cycles until the clock first reached T (or max_cycles)
  std::size_t detections = 0;      // photons seen up to that point
  std::size_t heating_events = 0;  // detections after which the clock moved backwards
  std::size_t max_regression = 0;  // largest backwards clock move, in steps
  bool completed = false;
  double fidelity = 0.0;           // program register at clock T vs direct circuit output
  std::vector<std::size_t> clock_trace;              // most likely clock after each cycle
  std::vector<std::vector<double>> clock_marginals;  // after each cycle
};

/// Cools the history state |phi_0>|0>_clock until the clock register sits at
/// T, recording detections and any backwards clock moves.
inline CircuitRun run_circuit_cooling(const CoolingSimulator& sim, const CompiledCircuit& c, const Eigen::VectorXcd& phi0,
                                      std::uint64_t seed, std::size_t max_cycles) {
  if (phi0.size() != static_cast<Eigen::Index>(c.program_dim())) throw DimensionMismatch(c.program_dim(), static_cast<std::size_t>(phi0.size()));
  if (sim.spec().system_dim() != (c.steps() + 1) * c.program_dim()) throw std::invalid_argument("simulator does not match the circuit");
  const auto& idx = sim.indexer();
  const Eigen::VectorXcd target = simulate_circuit(c, phi0).back();

  Amplitudes a(sim.dim(), complex{0.0, 0.0});
  for (std::size_t q = 0; q < c.program_dim(); ++q) a[idx.index(circuit_system_index(c, 0, q), 0)] = phi0(static_cast<Eigen::Index>(q));
  StateVector psi = StateVector::from_amplitudes(std::move(a));

  CircuitRun run;
  run.seed = seed;
  Rng rng(seed);
  std::size_t clock = 0;
  for (std::size_t k = 0; k < max_cycles; ++k) {
    const CycleOutcome out = sim.run_cycle(psi, rng);
    auto marginal = clock_marginal(sim, c, psi);
    const std::size_t now = most_likely_clock(marginal);
    run.clock_trace.push_back(now);
    run.clock_marginals.push_back(std::move(marginal));
    ++run.cycles;
    if (out.detected != 0) {
      ++run.detections;
      if (now < clock) {
        ++run.heating_events;
        run.max_regression = std::max(run.max_regression, clock - now);
      }
    }
    clock = now;
    if (clock == c.steps()) {
      run.completed = true;
      Eigen::VectorXcd prog(static_cast<Eigen::Index>(c.program_dim()));
      for (std::size_t q = 0; q < c.program_dim(); ++q) prog(static_cast<Eigen::Index>(q)) = psi[idx.index(circuit_system_index(c, clock, q), 0)];
      const double n = prog.squaredNorm();
      run.fidelity = n > 0.0 ? std::norm(target.dot(prog)) / (n * target.squaredNorm()) : 0.0;
      break;
    }
  }
  return run;
}

}  // namespace cqc
