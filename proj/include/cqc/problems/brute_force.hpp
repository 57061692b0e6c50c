#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cqc/model.hpp"

namespace cqc {

struct GroundSet {
  std::int64_t min_energy = 0;
  std::vector<std::size_t> minimizers;
};

inline constexpr std::size_t kBruteForceCap = std::size_t{1} << 24;

/// Exhaustive minimum of E over every basis state.
inline GroundSet brute_force_ground(const ProblemHamiltonian& p, std::size_t cap = kBruteForceCap) {
  if (p.dim() > cap) throw std::length_error("brute-force enumeration exceeds the size cap");
  GroundSet g;
  g.min_energy = p.energy(0);
  for (std::size_t z = 0; z < p.dim(); ++z) {
    const auto e = p.energy(z);
    if (e < g.min_energy) {
      g.min_energy = e;
      g.minimizers.clear();
    }
    if (e == g.min_energy) g.minimizers.push_back(z);
  }
  return g;
}

}  // namespace cqc
