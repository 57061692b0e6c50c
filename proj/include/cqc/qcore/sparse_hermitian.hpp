#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "cqc/qcore/state_vector.hpp"

namespace cqc {

struct Triplet {
  std::size_t row;
  std::size_t col;
  complex value;
};

/// Hermitian operator in compressed sparse row layout. Entries are in units
/// of the problem energy scale. Instances are immutable once built and the
/// stored pattern is exactly Hermitian: entry(j, i) == conj(entry(i, j)) bit
/// for bit.
class SparseHermitian {
 public:
  static constexpr double kDropTolerance = 1e-14;
  static constexpr double kHermiticityTolerance = 1e-12;

  SparseHermitian() = default;

  /// Sums duplicate triplets, drops entries with |v| <= drop_tolerance and
  /// symmetrizes. Throws if the input is not Hermitian to within
  /// kHermiticityTolerance (relative to the largest entry).
  static SparseHermitian from_triplets(std::size_t dim, std::vector<Triplet> triplets,
                                       double drop_tolerance = kDropTolerance) {
    if (dim == 0) throw std::invalid_argument("operator dimension must be positive");
    for (const auto& t : triplets) {
      if (t.row >= dim || t.col >= dim) throw std::out_of_range("triplet index out of range");
    }
    auto merged = merge(std::move(triplets));

    double scale = 0.0;
    for (const auto& t : merged) scale = std::max(scale, std::abs(t.value));

    // A^dagger as triplets, then average with A.
    std::vector<Triplet> both;
    both.reserve(2 * merged.size());
    for (const auto& t : merged) {
      both.push_back({t.row, t.col, 0.5 * t.value});
      both.push_back({t.col, t.row, 0.5 * std::conj(t.value)});
    }
    auto sym = merge(std::move(both));

    // Compare against the unsymmetrized entries to detect non-Hermitian input.
    {
      std::size_t k = 0;
      for (const auto& s : sym) {
        while (k < merged.size() && key(merged[k]) < key(s)) ++k;
        const complex original =
            (k < merged.size() && key(merged[k]) == key(s)) ? merged[k].value : complex{};
        if (std::abs(original - s.value) > kHermiticityTolerance * std::max(1.0, scale)) {
          throw std::invalid_argument("operator is not Hermitian");
        }
      }
    }

    SparseHermitian h;
    h.dim_ = dim;
    h.row_offsets_.assign(dim + 1, 0);
    for (const auto& t : sym) {
      if (std::abs(t.value) <= drop_tolerance) continue;
      ++h.row_offsets_[t.row + 1];
      h.cols_.push_back(t.col);
      h.values_.push_back(t.value);
    }
    for (std::size_t i = 0; i < dim; ++i) h.row_offsets_[i + 1] += h.row_offsets_[i];
    return h;
  }

  static SparseHermitian diagonal(std::span<const double> d) {
    std::vector<Triplet> t;
    t.reserve(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) t.push_back({i, i, d[i]});
    return from_triplets(d.size(), std::move(t));
  }

  static SparseHermitian identity(std::size_t dim) {
    return diagonal(std::vector<double>(dim, 1.0));
  }

  std::size_t dim() const { return dim_; }
  std::size_t nnz() const { return values_.size(); }
  std::span<const std::size_t> row_offsets() const { return row_offsets_; }
  std::span<const std::size_t> col_indices() const { return cols_; }
  std::span<const complex> values() const { return values_; }

  complex entry(std::size_t i, std::size_t j) const {
    if (i >= dim_ || j >= dim_) throw std::out_of_range("entry index out of range");
    const auto first = cols_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i]);
    const auto last = cols_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i + 1]);
    const auto it = std::lower_bound(first, last, j);
    if (it == last || *it != j) return {};
    return values_[static_cast<std::size_t>(it - cols_.begin())];
  }

  std::size_t row_nnz(std::size_t i) const { return row_offsets_[i + 1] - row_offsets_[i]; }

  /// y = H x, exactly as stored.
  void apply_into(std::span<const complex> x, std::span<complex> y) const {
    require_same_dim(dim_, x.size());
    require_same_dim(dim_, y.size());
    for (std::size_t i = 0; i < dim_; ++i) {
      complex acc{0.0, 0.0};
      for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) acc += values_[k] * x[cols_[k]];
      y[i] = acc;
    }
  }

  Amplitudes apply(std::span<const complex> x) const {
    Amplitudes y(dim_);
    apply_into(x, y);
    return y;
  }

  /// Structural check: every stored (i, j) has a stored (j, i) equal to its conjugate.
  bool is_hermitian() const {
    for (std::size_t i = 0; i < dim_; ++i) {
      for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
        if (entry(cols_[k], i) != std::conj(values_[k])) return false;
      }
    }
    return true;
  }

  /// Max absolute row sum; an upper bound on the spectral radius.
  double norm_bound() const {
    double best = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
      double s = 0.0;
      for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) s += std::abs(values_[k]);
      best = std::max(best, s);
    }
    return best;
  }

  bool is_real() const {
    return std::all_of(values_.begin(), values_.end(), [](const complex& v) { return v.imag() == 0.0; });
  }

  std::vector<Triplet> triplets() const {
    std::vector<Triplet> out;
    out.reserve(nnz());
    for (std::size_t i = 0; i < dim_; ++i) {
      for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) out.push_back({i, cols_[k], values_[k]});
    }
    return out;
  }

 private:
  static std::uint64_t key(const Triplet& t) { return (static_cast<std::uint64_t>(t.row) << 32) | t.col; }

  static std::vector<Triplet> merge(std::vector<Triplet> t) {
    std::sort(t.begin(), t.end(), [](const Triplet& a, const Triplet& b) {
      return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    std::vector<Triplet> out;
    out.reserve(t.size());
    for (const auto& x : t) {
      if (!out.empty() && out.back().row == x.row && out.back().col == x.col) {
        out.back().value += x.value;
      } else {
        out.push_back(x);
      }
    }
    return out;
  }

  std::size_t dim_ = 0;
  std::vector<std::size_t> row_offsets_{0};
  std::vector<std::size_t> cols_;
  std::vector<complex> values_;
};

inline Amplitudes apply(const SparseHermitian& op, const StateVector& psi) {
  require_same_dim(op.dim(), psi.dim());
  return op.apply(psi.amplitudes());
}

/// <psi|op|psi>. The imaginary residue must not exceed 1e-10; a larger one
/// means the operator is not Hermitian.
inline double expectation(const SparseHermitian& op, const StateVector& psi) {
  const Amplitudes h = apply(op, psi);
  const complex v = inner_product(psi.amplitudes(), h);
  if (std::abs(v.imag()) > 1e-10) throw std::logic_error("expectation has an imaginary part; operator not Hermitian");
  return v.real();
}

}  // namespace cqc
