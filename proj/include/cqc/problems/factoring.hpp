#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cqc/problems/encoding.hpp"

namespace cqc {

// 3-bit x 3-bit long multiplication with four carry bits on a 10-qubit
// register laid out (most significant first) as x2 x1 x0 y2 y1 y0 c3 c2 c1 c0.
inline constexpr int kFactoringQubits = 10;

struct FactoringAssignment {
  unsigned x = 0;       // 3 bits
  unsigned y = 0;       // 3 bits
  unsigned carries = 0; // c3 c2 c1 c0

  static FactoringAssignment unpack(std::size_t z) {
    return {static_cast<unsigned>((z >> 7) & 7u), static_cast<unsigned>((z >> 4) & 7u), static_cast<unsigned>(z & 15u)};
  }
  std::size_t pack() const { return (std::size_t{x & 7u} << 7) | (std::size_t{y & 7u} << 4) | (carries & 15u); }
};

struct FactoringProblem {
  unsigned target = 35;

  void validate() const {
    if (target >= 64) throw std::out_of_range("factoring target must fit in 6 bits");
  }
};

/// Which of the five column equations the assignment violates (bit k set for
/// equation k+1):
///   (1) x0 y0                     = z0
///   (2) x1 y0 + x0 y1             = 2 c0 + z1
///   (3) x2 y0 + x1 y1 + x0 y2 + c0 = 4 c2 + 2 c1 + z2
///   (4) x2 y1 + x1 y2 + c1        = 2 c3 + z3
///   (5) x2 y2 + c2 + c3           = 2 z5 + z4
inline unsigned factoring_violations(unsigned target, std::size_t z) {
  const auto a = FactoringAssignment::unpack(z);
  auto bit = [](unsigned v, int i) { return static_cast<int>((v >> i) & 1u); };
  const int x0 = bit(a.x, 0), x1 = bit(a.x, 1), x2 = bit(a.x, 2);
  const int y0 = bit(a.y, 0), y1 = bit(a.y, 1), y2 = bit(a.y, 2);
  const int c0 = bit(a.carries, 0), c1 = bit(a.carries, 1), c2 = bit(a.carries, 2), c3 = bit(a.carries, 3);
  const int z0 = bit(target, 0), z1 = bit(target, 1), z2 = bit(target, 2), z3 = bit(target, 3), z4 = bit(target, 4),
            z5 = bit(target, 5);

  unsigned v = 0;
  if (x0 * y0 != z0) v |= 1u << 0;
  if (x1 * y0 + x0 * y1 != 2 * c0 + z1) v |= 1u << 1;
  if (x2 * y0 + x1 * y1 + x0 * y2 + c0 != 4 * c2 + 2 * c1 + z2) v |= 1u << 2;
  if (x2 * y1 + x1 * y2 + c1 != 2 * c3 + z3) v |= 1u << 3;
  if (x2 * y2 + c2 + c3 != 2 * z5 + z4) v |= 1u << 4;
  return v;
}

inline ProblemHamiltonian factoring_encode(const FactoringProblem& p) {
  p.validate();
  std::vector<std::int64_t> e(std::size_t{1} << kFactoringQubits);
  for (std::size_t z = 0; z < e.size(); ++z) e[z] = std::popcount(factoring_violations(p.target, z));
  return ProblemHamiltonian::costs(std::move(e));
}

/// Factoring cost with H_T = sum_i X_i and M harmonic cavities omega_m = m Delta.
inline ProblemEncoding factoring_model_encoding(const FactoringProblem& p, int alpha0, int modes = 3) {
  if (modes < 0) throw std::invalid_argument("mode count must be non-negative");
  return {factoring_encode(p), TransitionTerm::sum_of_x(kFactoringQubits), CavityBank::harmonic(modes), alpha0};
}

}  // namespace cqc
