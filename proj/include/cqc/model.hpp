#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cqc/qcore/sparse_hermitian.hpp"
#include "cqc/qcore/state_vector.hpp"

namespace cqc {

/// Diagonal problem Hamiltonian H_P = sum_z E(z)|z><z| with integer energies
/// in units of Delta. Combinatorial encoders produce non-negative costs; the
/// clock register of the circuit construction uses non-positive ones.
class ProblemHamiltonian {
 public:
  ProblemHamiltonian() = default;

  /// Cost function over an arbitrary system register; E(z) >= 0 required.
  static ProblemHamiltonian costs(std::vector<std::int64_t> energy) {
    if (std::any_of(energy.begin(), energy.end(), [](std::int64_t e) { return e < 0; })) {
      throw std::invalid_argument("cost energies must be non-negative");
    }
    return general(std::move(energy));
  }

  /// Any integer spectrum (used by the clock construction).
  static ProblemHamiltonian general(std::vector<std::int64_t> energy) {
    if (energy.empty()) throw std::invalid_argument("problem Hamiltonian must have at least one level");
    ProblemHamiltonian p;
    p.energy_ = std::move(energy);
    return p;
  }

  std::size_t dim() const { return energy_.size(); }
  std::int64_t energy(std::size_t z) const { return energy_.at(z); }
  std::span<const std::int64_t> energies() const { return energy_; }

  /// Number of qubits if dim is a power of two, otherwise nullopt.
  std::optional<int> num_qubits() const {
    if (!std::has_single_bit(energy_.size())) return std::nullopt;
    return std::countr_zero(energy_.size());
  }

  std::int64_t min_energy() const { return *std::min_element(energy_.begin(), energy_.end()); }
  std::int64_t max_energy() const { return *std::max_element(energy_.begin(), energy_.end()); }

  SparseHermitian to_sparse() const {
    std::vector<double> d(energy_.begin(), energy_.end());
    return SparseHermitian::diagonal(d);
  }

 private:
  std::vector<std::int64_t> energy_;
};

enum class TransitionKind { sum_of_x, grover_projector, clock_ladder, chain_adjacency, custom };

inline std::string to_string(TransitionKind k) {
  switch (k) {
    case TransitionKind::sum_of_x: return "sum_of_x";
    case TransitionKind::grover_projector: return "grover_projector";
    case TransitionKind::clock_ladder: return "clock_ladder";
    case TransitionKind::chain_adjacency: return "chain_adjacency";
    case TransitionKind::custom: return "custom";
  }
  return "unknown";
}

/// Off-diagonal generator H_T on the system register. The Hamming-1 and
/// projector kinds are applied matrix-free; the others carry an explicit
/// sparse matrix.
class TransitionTerm {
 public:
  /// sum_i X_i on N qubits: <z'|H_T|z> = 1 iff z and z' differ in one bit.
  static TransitionTerm sum_of_x(int num_qubits) {
    check_qubits(num_qubits);
    TransitionTerm t;
    t.kind_ = TransitionKind::sum_of_x;
    t.num_qubits_ = num_qubits;
    t.dim_ = std::size_t{1} << num_qubits;
    return t;
  }

  /// tensor_i (I_i + X_i)/2 = |+...+><+...+|, every entry equal to 2^-N.
  static TransitionTerm grover_projector(int num_qubits) {
    check_qubits(num_qubits);
    TransitionTerm t;
    t.kind_ = TransitionKind::grover_projector;
    t.num_qubits_ = num_qubits;
    t.dim_ = std::size_t{1} << num_qubits;
    return t;
  }

  static TransitionTerm from_matrix(TransitionKind kind, SparseHermitian m) {
    if (kind == TransitionKind::sum_of_x || kind == TransitionKind::grover_projector) {
      throw std::invalid_argument("use the dedicated factory for this transition kind");
    }
    TransitionTerm t;
    t.kind_ = kind;
    t.dim_ = m.dim();
    t.matrix_ = std::move(m);
    return t;
  }

  TransitionKind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }

  void apply_into(std::span<const complex> x, std::span<complex> y) const {
    require_same_dim(dim_, x.size());
    require_same_dim(dim_, y.size());
    switch (kind_) {
      case TransitionKind::sum_of_x:
        for (std::size_t z = 0; z < dim_; ++z) {
          complex acc{0.0, 0.0};
          for (int i = 0; i < num_qubits_; ++i) acc += x[z ^ (std::size_t{1} << i)];
          y[z] = acc;
        }
        break;
      case TransitionKind::grover_projector: {
        complex s{0.0, 0.0};
        for (const auto& a : x) s += a;
        const complex v = s / static_cast<double>(dim_);
        std::fill(y.begin(), y.end(), v);
        break;
      }
      default:
        matrix_->apply_into(x, y);
    }
  }

  /// Number of stored entries if materialized.
  std::size_t nnz() const {
    switch (kind_) {
      case TransitionKind::sum_of_x: return dim_ * static_cast<std::size_t>(num_qubits_);
      case TransitionKind::grover_projector: return dim_ * dim_;
      default: return matrix_->nnz();
    }
  }

  SparseHermitian to_sparse() const {
    if (matrix_) return *matrix_;
    std::vector<Triplet> t;
    t.reserve(nnz());
    if (kind_ == TransitionKind::sum_of_x) {
      for (std::size_t z = 0; z < dim_; ++z) {
        for (int i = 0; i < num_qubits_; ++i) t.push_back({z ^ (std::size_t{1} << i), z, 1.0});
      }
    } else {
      const double v = 1.0 / static_cast<double>(dim_);
      for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) t.push_back({i, j, v});
      }
    }
    return SparseHermitian::from_triplets(dim_, std::move(t));
  }

 private:
  static void check_qubits(int n) {
    if (n < 1 || n > 30) throw std::invalid_argument("qubit count out of range");
  }

  TransitionKind kind_ = TransitionKind::custom;
  int num_qubits_ = 0;
  std::size_t dim_ = 0;
  std::optional<SparseHermitian> matrix_;
};

/// Truncated cavity modes (at most one photon each), modelled as qubits.
struct CavityBank {
  std::vector<double> omega;  // omega_m in units of Delta, m = 1..M

  static CavityBank harmonic(int modes) {
    CavityBank c;
    for (int m = 1; m <= modes; ++m) c.omega.push_back(static_cast<double>(m));
    return c;
  }

  std::size_t modes() const { return omega.size(); }
  std::size_t register_dim() const { return std::size_t{1} << omega.size(); }

  /// Bit of mode m (1-based) in the cavity occupation word. Mode 1 is the
  /// most significant bit so (z, b_1, ..., b_M) orders lexicographically.
  std::size_t mode_bit(std::size_t m) const { return std::size_t{1} << (omega.size() - m); }

  /// sum_m omega_m b_m for occupation word b.
  double photon_energy(std::size_t b) const {
    double e = 0.0;
    for (std::size_t m = 1; m <= omega.size(); ++m) {
      if (b & mode_bit(m)) e += omega[m - 1];
    }
    return e;
  }
};

struct CoolingModelSpec {
  ProblemHamiltonian problem;
  TransitionTerm transition;
  CavityBank cavities;
  double lambda = 0.1;
  int alpha0 = 0;

  std::size_t system_dim() const { return problem.dim(); }
  std::size_t dim() const { return problem.dim() * cavities.register_dim(); }

  void validate() const {
    if (transition.dim() != problem.dim()) throw DimensionMismatch(problem.dim(), transition.dim());
    if (!(lambda >= 0.0 && lambda < 1.0)) throw std::invalid_argument("lambda must lie in [0, 1) (units of Delta)");
    if (alpha0 != 0 && alpha0 != 1) throw std::invalid_argument("alpha0 must be 0 or 1");
    if (cavities.modes() > 16) throw std::invalid_argument("at most 16 cavity modes are supported");
    for (double w : cavities.omega) {
      if (!(w > 0.0)) throw std::invalid_argument("cavity frequencies must be positive");
    }
  }
};

/// Bijection (z, b) <-> z * 2^M + b between system/cavity labels and the
/// composite basis (system major, cavity minor).
class BasisIndexer {
 public:
  BasisIndexer(std::size_t system_dim, std::size_t modes) : system_dim_(system_dim), modes_(modes) {
    if (system_dim == 0) throw std::invalid_argument("system dimension must be positive");
    if (modes > 16) throw std::invalid_argument("too many cavity modes");
  }
  explicit BasisIndexer(const CoolingModelSpec& spec) : BasisIndexer(spec.system_dim(), spec.cavities.modes()) {}

  std::size_t system_dim() const { return system_dim_; }
  std::size_t cavity_dim() const { return std::size_t{1} << modes_; }
  std::size_t modes() const { return modes_; }
  std::size_t dim() const { return system_dim_ << modes_; }

  std::size_t index(std::size_t z, std::size_t b) const {
    if (z >= system_dim_ || b >= cavity_dim()) throw std::out_of_range("basis label out of range");
    return (z << modes_) | b;
  }

  std::pair<std::size_t, std::size_t> labels(std::size_t i) const {
    if (i >= dim()) throw std::out_of_range("basis index out of range");
    return {i >> modes_, i & (cavity_dim() - 1)};
  }

 private:
  std::size_t system_dim_;
  std::size_t modes_;
};

/// Matrix-free action of the full cooling Hamiltonian
///   H = H_P + sum_m omega_m n_m + lambda H_T (x) [alpha0 I + sum_m (c_m + c_m^dag)]
/// with each mode truncated to one photon.
class CoolingOperator {
 public:
  explicit CoolingOperator(CoolingModelSpec spec) : spec_(std::move(spec)), indexer_(spec_) {
    spec_.validate();
    const std::size_t nc = indexer_.cavity_dim();
    diag_.resize(indexer_.dim());
    for (std::size_t z = 0; z < spec_.system_dim(); ++z) {
      for (std::size_t b = 0; b < nc; ++b) {
        diag_[indexer_.index(z, b)] = static_cast<double>(spec_.problem.energy(z)) + spec_.cavities.photon_energy(b);
      }
    }
  }

  const CoolingModelSpec& spec() const { return spec_; }
  const BasisIndexer& indexer() const { return indexer_; }
  std::size_t dim() const { return indexer_.dim(); }

  void apply_into(std::span<const complex> x, std::span<complex> y) const {
    require_same_dim(dim(), x.size());
    require_same_dim(dim(), y.size());
    for (std::size_t i = 0; i < diag_.size(); ++i) y[i] = diag_[i] * x[i];
    if (spec_.lambda == 0.0) return;

    const std::size_t ns = spec_.system_dim();
    const std::size_t nc = indexer_.cavity_dim();
    const std::size_t modes = indexer_.modes();
    Amplitudes src(ns), out(ns);
    for (std::size_t b = 0; b < nc; ++b) {
      // src(z) = alpha0 x(z, b) + sum_m x(z, b ^ bit_m)
      for (std::size_t z = 0; z < ns; ++z) {
        const std::size_t base = z << modes;
        complex s = spec_.alpha0 != 0 ? x[base | b] : complex{0.0, 0.0};
        for (std::size_t m = 0; m < modes; ++m) s += x[base | (b ^ (std::size_t{1} << m))];
        src[z] = s;
      }
      spec_.transition.apply_into(src, out);
      for (std::size_t z = 0; z < ns; ++z) y[(z << modes) | b] += spec_.lambda * out[z];
    }
  }

 private:
  CoolingModelSpec spec_;
  BasisIndexer indexer_;
  std::vector<double> diag_;
};

inline constexpr std::size_t kDefaultDimensionCap = std::size_t{1} << 24;

/// Materialize the cooling Hamiltonian as a sparse matrix in the canonical
/// (z, b) lexicographic basis.
inline SparseHermitian assemble(const CoolingModelSpec& spec, std::size_t dimension_cap = kDefaultDimensionCap) {
  spec.validate();
  const BasisIndexer idx(spec);
  if (spec.system_dim() > dimension_cap || idx.dim() > dimension_cap) {
    throw std::length_error("assembled dimension " + std::to_string(idx.dim()) + " exceeds cap " +
                            std::to_string(dimension_cap));
  }
  const std::size_t nc = idx.cavity_dim();
  const std::size_t modes = idx.modes();
  const std::size_t coupling_terms = (spec.alpha0 != 0 ? 1 : 0) + modes;
  std::vector<Triplet> t;
  t.reserve(idx.dim() + (spec.lambda != 0.0 ? spec.transition.nnz() * nc * coupling_terms : 0));

  for (std::size_t z = 0; z < spec.system_dim(); ++z) {
    for (std::size_t b = 0; b < nc; ++b) {
      const std::size_t i = idx.index(z, b);
      t.push_back({i, i, static_cast<double>(spec.problem.energy(z)) + spec.cavities.photon_energy(b)});
    }
  }
  if (spec.lambda != 0.0) {
    const SparseHermitian ht = spec.transition.to_sparse();
    for (const auto& e : ht.triplets()) {
      const complex v = spec.lambda * e.value;
      for (std::size_t b = 0; b < nc; ++b) {
        if (spec.alpha0 != 0) t.push_back({idx.index(e.row, b), idx.index(e.col, b), v});
        for (std::size_t m = 0; m < modes; ++m) t.push_back({idx.index(e.row, b ^ (std::size_t{1} << m)), idx.index(e.col, b), v});
      }
    }
  }
  return SparseHermitian::from_triplets(idx.dim(), std::move(t));
}

/// Frobenius norm of the commutator [a, b]; used as a positivity check.
inline double commutator_norm(const SparseHermitian& a, const SparseHermitian& b) {
  require_same_dim(a.dim(), b.dim());
  const std::size_t n = a.dim();
  std::vector<complex> acc(n);
  std::vector<char> used(n, 0);
  std::vector<std::size_t> touched;
  double sum = 0.0;

  auto accumulate = [&](const SparseHermitian& left, const SparseHermitian& right, std::size_t i, double sign) {
    const auto lr = left.row_offsets();
    const auto lc = left.col_indices();
    const auto lv = left.values();
    const auto rr = right.row_offsets();
    const auto rc = right.col_indices();
    const auto rv = right.values();
    for (std::size_t k = lr[i]; k < lr[i + 1]; ++k) {
      const std::size_t mid = lc[k];
      for (std::size_t q = rr[mid]; q < rr[mid + 1]; ++q) {
        const std::size_t j = rc[q];
        if (!used[j]) {
          used[j] = 1;
          touched.push_back(j);
        }
        acc[j] += sign * lv[k] * rv[q];
      }
    }
  };

  for (std::size_t i = 0; i < n; ++i) {
    accumulate(a, b, i, 1.0);
    accumulate(b, a, i, -1.0);
    for (std::size_t j : touched) {
      sum += std::norm(acc[j]);
      acc[j] = {};
      used[j] = 0;
    }
    touched.clear();
  }
  return std::sqrt(sum);
}

/// H_P (x) I_cavity on the composite space.
inline SparseHermitian problem_operator(const CoolingModelSpec& spec) {
  const BasisIndexer idx(spec);
  std::vector<double> d(idx.dim());
  for (std::size_t i = 0; i < idx.dim(); ++i) d[i] = static_cast<double>(spec.problem.energy(idx.labels(i).first));
  return SparseHermitian::diagonal(d);
}

}  // namespace cqc
