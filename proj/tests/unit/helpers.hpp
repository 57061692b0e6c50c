#pragma once

#include <cqc/cqc.hpp>

#include <random>
#include <vector>

namespace cqc::test {

// Random sparse Hermitian matrix with roughly `per_row` off-diagonal entries per row.
inline SparseHermitian random_hermitian(std::size_t dim, std::size_t per_row, std::uint64_t seed, bool real = false) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<std::size_t> pick(0, dim - 1);
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < dim; ++i) {
    t.push_back({i, i, g(rng)});
    for (std::size_t k = 0; k < per_row; ++k) {
      const std::size_t j = pick(rng);
      if (j == i) continue;
      const complex v{g(rng), real ? 0.0 : g(rng)};
      t.push_back({i, j, v});
      t.push_back({j, i, std::conj(v)});
    }
  }
  return SparseHermitian::from_triplets(dim, std::move(t));
}

inline StateVector random_state(std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Amplitudes a(dim);
  for (auto& x : a) x = {g(rng), g(rng)};
  return StateVector::from_amplitudes(std::move(a));
}

inline double distance(std::span<const complex> a, std::span<const complex> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::norm(a[i] - b[i]);
  return std::sqrt(d);
}

inline EvolutionEngine krylov_engine(double tol = 1e-10) {
  EvolutionEngine e;
  e.method = EvolutionMethod::krylov;
  e.tolerance = tol;
  return e;
}

inline EvolutionEngine exact_engine() {
  EvolutionEngine e;
  e.method = EvolutionMethod::exact;
  return e;
}

}  // namespace cqc::test
