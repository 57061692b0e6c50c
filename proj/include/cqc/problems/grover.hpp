#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "cqc/problems/encoding.hpp"

namespace cqc {

/// Unstructured search: f(z) = 0 exactly on the marked set.
struct GroverProblem {
  int num_qubits = 1;
  std::vector<std::size_t> marked;

  std::size_t space() const { return std::size_t{1} << num_qubits; }
  std::size_t solutions() const { return marked.size(); }

  void validate() const {
    if (num_qubits < 1 || num_qubits > 30) throw std::invalid_argument("qubit count out of range");
    if (marked.empty()) throw std::invalid_argument("marked set must be non-empty");
    if (marked.size() >= space()) throw std::invalid_argument("marked set must be a strict subset of the search space");
    auto sorted = marked;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw std::invalid_argument("duplicate marked state");
    if (sorted.back() >= space()) throw std::out_of_range("marked state out of range");
  }
};

/// n0 marked states spread evenly over the search space.
inline GroverProblem evenly_marked(int num_qubits, std::size_t n0) {
  GroverProblem p{num_qubits, {}};
  const std::size_t stride = std::max<std::size_t>(1, p.space() / std::max<std::size_t>(n0, 1));
  for (std::size_t k = 0; k < n0; ++k) p.marked.push_back((k * stride + stride / 2) % p.space());
  p.validate();
  return p;
}

/// E(z) = 0 on marked states, 1 elsewhere; H_T = |+...+><+...+|; one cavity
/// mode at omega = Delta, alpha0 = 0.
inline ProblemEncoding grover_encode(const GroverProblem& p) {
  p.validate();
  std::vector<std::int64_t> e(p.space(), 1);
  for (auto z : p.marked) e[z] = 0;
  return {ProblemHamiltonian::costs(std::move(e)), TransitionTerm::grover_projector(p.num_qubits), CavityBank{{1.0}}, 0};
}

}  // namespace cqc
