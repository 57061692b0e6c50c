#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cqc/problems/encoding.hpp"

namespace cqc {

enum class ChainProfile { flat, triangle };

inline std::string to_string(ChainProfile p) { return p == ChainProfile::flat ? "flat" : "triangle"; }

inline ChainProfile parse_chain_profile(const std::string& s) {
  if (s == "flat") return ChainProfile::flat;
  if (s == "triangle") return ChainProfile::triangle;
  throw std::invalid_argument("unknown chain profile '" + s + "'");
}

/// Path z_0 - z_1 - ... - z_n of nearest-neighbour hops.
struct ChainProblem {
  int n = 2;
  ChainProfile profile = ChainProfile::flat;

  void validate() const {
    if (n < 2) throw std::invalid_argument("chain length must be at least 2");
    if (profile == ChainProfile::triangle && n % 2 != 0) throw std::invalid_argument("triangle profile requires even n");
  }
};

/// flat: 0, 1, ..., 1, 0.  triangle: E(z_j) = min(j, n - j).
inline std::vector<std::int64_t> chain_energies(const ChainProblem& p) {
  p.validate();
  std::vector<std::int64_t> e(static_cast<std::size_t>(p.n) + 1);
  for (int j = 0; j <= p.n; ++j) {
    if (p.profile == ChainProfile::flat) {
      e[static_cast<std::size_t>(j)] = (j == 0 || j == p.n) ? 0 : 1;
    } else {
      e[static_cast<std::size_t>(j)] = std::min(j, p.n - j);
    }
  }
  return e;
}

inline TransitionTerm chain_transition(int n) {
  std::vector<Triplet> t;
  for (std::size_t j = 0; j < static_cast<std::size_t>(n); ++j) {
    t.push_back({j, j + 1, 1.0});
    t.push_back({j + 1, j, 1.0});
  }
  return TransitionTerm::from_matrix(TransitionKind::chain_adjacency,
                                     SparseHermitian::from_triplets(static_cast<std::size_t>(n) + 1, std::move(t)));
}

/// Tridiagonal (n+1)-level Hamiltonian: diagonal E(z_j), off-diagonal lambda.
inline SparseHermitian chain_encode(const ChainProblem& p, double lambda) {
  const auto e = chain_energies(p);
  std::vector<Triplet> t;
  for (std::size_t j = 0; j < e.size(); ++j) {
    t.push_back({j, j, static_cast<double>(e[j])});
    if (j + 1 < e.size()) {
      t.push_back({j, j + 1, lambda});
      t.push_back({j + 1, j, lambda});
    }
  }
  return SparseHermitian::from_triplets(e.size(), std::move(t));
}

}  // namespace cqc
