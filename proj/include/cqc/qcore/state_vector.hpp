#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cqc {

using complex = std::complex<double>;

/// Raw (not necessarily normalized) amplitude buffer, e.g. the result of H|psi>.
using Amplitudes = std::vector<complex>;

struct DimensionMismatch : std::invalid_argument {
  DimensionMismatch(std::size_t expected, std::size_t got)
      : std::invalid_argument("dimension mismatch: expected " + std::to_string(expected) +
                              ", got " + std::to_string(got)) {}
};

inline void require_same_dim(std::size_t expected, std::size_t got) {
  if (expected != got) throw DimensionMismatch(expected, got);
}

inline double squared_norm(std::span<const complex> v) {
  double s = 0.0;
  for (const auto& a : v) s += std::norm(a);
  return s;
}

inline complex inner_product(std::span<const complex> a, std::span<const complex> b) {
  require_same_dim(a.size(), b.size());
  complex s{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

// Normalized complex amplitude vector. Every constructor and mutating member
// leaves sum |a_i|^2 == 1.
class StateVector {
 public:
  static constexpr double kNormTolerance = 1e-10;

  static StateVector basis(std::size_t dim, std::size_t index) {
    if (dim == 0) throw std::invalid_argument("state dimension must be positive");
    if (index >= dim) throw std::out_of_range("basis index out of range");
    Amplitudes a(dim, complex{0.0, 0.0});
    a[index] = 1.0;
    return StateVector(std::move(a), Unchecked{});
  }

  static StateVector uniform(std::size_t dim) {
    if (dim == 0) throw std::invalid_argument("state dimension must be positive");
    const double v = 1.0 / std::sqrt(static_cast<double>(dim));
    return StateVector(Amplitudes(dim, complex{v, 0.0}), Unchecked{});
  }

  // Normalizes the given amplitudes; rejects zero or non-finite vectors.
  static StateVector from_amplitudes(Amplitudes a) {
    if (a.empty()) throw std::invalid_argument("state dimension must be positive");
    const double n2 = squared_norm(a);
    if (!std::isfinite(n2)) throw std::domain_error("non-finite amplitudes");
    if (n2 <= 0.0) throw std::domain_error("cannot normalize a zero vector");
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& x : a) x *= inv;
    return StateVector(std::move(a), Unchecked{});
  }

  std::size_t dim() const { return amp_.size(); }
  const complex& operator[](std::size_t i) const { return amp_[i]; }
  std::span<const complex> amplitudes() const { return amp_; }
  const Amplitudes& data() const { return amp_; }

  double probability(std::size_t i) const { return std::norm(amp_.at(i)); }
  double norm() const { return std::sqrt(squared_norm(amp_)); }

  complex overlap(const StateVector& other) const { return inner_product(amp_, other.amp_); }
  double fidelity(const StateVector& other) const { return std::norm(overlap(other)); }

 private:
  struct Unchecked {};
  StateVector(Amplitudes a, Unchecked) : amp_(std::move(a)) {}

  Amplitudes amp_;
};

}  // namespace cqc
