#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cqc/qcore/sparse_hermitian.hpp"
#include "cqc/qcore/state_vector.hpp"

namespace cqc {

struct EvolutionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class EvolutionMethod { automatic, exact, krylov };

/// How exp(-iHt)|psi> is computed. `automatic` picks dense exact
/// diagonalization up to exact_max_dim and Krylov above it.
struct EvolutionEngine {
  EvolutionMethod method = EvolutionMethod::automatic;
  double tolerance = 1e-10;         // target 2-norm error of the evolved state
  std::size_t max_subspace = 40;    // Krylov basis size per restart
  std::size_t exact_max_dim = 2048;
  std::size_t max_restarts = 1'000'000;

  EvolutionMethod resolve(std::size_t dim) const {
    if (method != EvolutionMethod::automatic) return method;
    return dim <= exact_max_dim ? EvolutionMethod::exact : EvolutionMethod::krylov;
  }
};

/// Anything that can act as a Hermitian matrix on an amplitude buffer.
template <class Op>
concept HermitianOperator = requires(const Op& op, std::span<const complex> x, std::span<complex> y) {
  { op.dim() } -> std::convertible_to<std::size_t>;
  op.apply_into(x, y);
};

inline Eigen::MatrixXcd to_dense(const SparseHermitian& h) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(h.dim()), static_cast<Eigen::Index>(h.dim()));
  const auto rows = h.row_offsets();
  const auto cols = h.col_indices();
  const auto vals = h.values();
  for (std::size_t i = 0; i < h.dim(); ++i) {
    for (std::size_t k = rows[i]; k < rows[i + 1]; ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(cols[k])) = vals[k];
    }
  }
  return m;
}

namespace detail {

inline void check_finite(std::span<const complex> v) {
  for (const auto& a : v) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) throw EvolutionError("NaN or Inf encountered during evolution");
  }
}

inline void check_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("evolution time must be finite and non-negative");
}

}  // namespace detail

/// Dense eigendecomposition H = V diag(e) V^dagger, reusable for any t.
class ExactPropagator {
 public:
  explicit ExactPropagator(const SparseHermitian& h) : dim_(h.dim()) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(to_dense(h));
    if (solver.info() != Eigen::Success) throw EvolutionError("eigendecomposition failed");
    energies_ = solver.eigenvalues();
    vectors_ = solver.eigenvectors();
  }

  std::size_t dim() const { return dim_; }
  const Eigen::VectorXd& eigenvalues() const { return energies_; }
  const Eigen::MatrixXcd& eigenvectors() const { return vectors_; }

  Amplitudes evolve_raw(std::span<const complex> psi, double t) const {
    detail::check_time(t);
    require_same_dim(dim_, psi.size());
    const Eigen::Map<const Eigen::VectorXcd> x(psi.data(), static_cast<Eigen::Index>(psi.size()));
    Eigen::VectorXcd c = vectors_.adjoint() * x;
    for (Eigen::Index k = 0; k < c.size(); ++k) c(k) *= std::polar(1.0, -energies_(k) * t);
    const Eigen::VectorXcd y = vectors_ * c;
    Amplitudes out(y.data(), y.data() + y.size());
    detail::check_finite(out);
    return out;
  }

  StateVector evolve(const StateVector& psi, double t) const {
    return StateVector::from_amplitudes(evolve_raw(psi.amplitudes(), t));
  }

  /// Dense U(t) = exp(-iHt).
  Eigen::MatrixXcd unitary(double t) const {
    detail::check_time(t);
    Eigen::VectorXcd phases(energies_.size());
    for (Eigen::Index k = 0; k < phases.size(); ++k) phases(k) = std::polar(1.0, -energies_(k) * t);
    return vectors_ * phases.asDiagonal() * vectors_.adjoint();
  }

 private:
  std::size_t dim_;
  Eigen::VectorXd energies_;
  Eigen::MatrixXcd vectors_;
};

/// Lanczos propagation with adaptive step subdivision. Each restart builds an
/// orthonormal Krylov basis (fully reorthogonalized) from the current vector,
/// then advances by the largest step whose a-posteriori error estimate
///   beta_m * |[exp(-i T tau) e_1]_m|
/// stays below tolerance * tau / t. An exactly invariant subspace (Lanczos
/// breakdown) propagates the remaining time in one step.
template <HermitianOperator Op>
Amplitudes krylov_evolve_raw(const Op& op, std::span<const complex> psi, double t, const EvolutionEngine& engine) {
  detail::check_time(t);
  const std::size_t n = op.dim();
  require_same_dim(n, psi.size());
  Amplitudes out(psi.begin(), psi.end());
  if (t == 0.0) return out;

  const auto nn = static_cast<Eigen::Index>(n);
  const auto m_max = static_cast<Eigen::Index>(std::max<std::size_t>(2, std::min(engine.max_subspace, n)));
  Eigen::Map<Eigen::VectorXcd> v(out.data(), nn);
  Eigen::MatrixXcd basis(nn, m_max + 1);
  Eigen::VectorXcd w(nn);
  Eigen::VectorXcd overlaps(m_max);
  std::vector<double> alpha(static_cast<std::size_t>(m_max)), beta(static_cast<std::size_t>(m_max));

  double remaining = t;
  std::size_t restarts = 0;
  while (remaining > 0.0) {
    if (++restarts > engine.max_restarts) throw EvolutionError("Krylov evolution did not converge");
    const double beta0 = v.norm();
    if (!std::isfinite(beta0)) throw EvolutionError("NaN or Inf encountered during evolution");
    if (beta0 == 0.0) return out;
    basis.col(0) = v / beta0;

    Eigen::Index m = 0;
    bool invariant = false;
    double scale = 0.0;
    for (Eigen::Index j = 0; j < m_max; ++j) {
      op.apply_into(std::span<const complex>(basis.col(j).data(), n), std::span<complex>(w.data(), n));
      // Classical Gram-Schmidt against the whole basis; second pass only on
      // heavy cancellation (DGKS).
      auto prev = basis.leftCols(j + 1);
      const double before = w.norm();
      overlaps.head(j + 1).noalias() = prev.adjoint() * w;
      const double a = overlaps(j).real();
      w.noalias() -= prev * overlaps.head(j + 1);
      double b = w.norm();
      if (b < 0.7071 * before) {
        overlaps.head(j + 1).noalias() = prev.adjoint() * w;
        w.noalias() -= prev * overlaps.head(j + 1);
        b = w.norm();
      }
      alpha[static_cast<std::size_t>(j)] = a;
      beta[static_cast<std::size_t>(j)] = b;
      scale = std::max({scale, std::abs(a), b});
      m = j + 1;
      if (b <= 1e-12 * std::max(1.0, scale)) {
        invariant = true;
        break;
      }
      basis.col(j + 1) = w / b;
    }
    if (!invariant && m == nn) invariant = true;

    Eigen::VectorXd diag(m);
    Eigen::VectorXd sub(m > 0 ? m - 1 : 0);
    for (Eigen::Index j = 0; j < m; ++j) diag(j) = alpha[static_cast<std::size_t>(j)];
    for (Eigen::Index j = 0; j + 1 < m; ++j) sub(j) = beta[static_cast<std::size_t>(j)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (tri.info() != Eigen::Success) throw EvolutionError("tridiagonal eigensolver failed");
    const Eigen::MatrixXcd q = tri.eigenvectors().cast<complex>();
    const Eigen::VectorXd& e = tri.eigenvalues();

    auto small_propagate = [&](double tau) {
      Eigen::VectorXcd c(m);
      for (Eigen::Index k = 0; k < m; ++k) c(k) = q(0, k) * std::polar(1.0, -e(k) * tau);
      return Eigen::VectorXcd(q * c);
    };

    double tau = remaining;
    Eigen::VectorXcd y = small_propagate(tau);
    if (!invariant) {
      const double beta_m = beta[static_cast<std::size_t>(m - 1)];
      auto estimate = [&](const Eigen::VectorXcd& yy) { return beta0 * beta_m * std::abs(yy(m - 1)); };
      while (estimate(y) > engine.tolerance * tau / t) {
        tau *= 0.5;
        if (tau < t * 1e-14) throw EvolutionError("Krylov evolution did not converge within the subspace limit");
        y = small_propagate(tau);
      }
    }

    v.noalias() = beta0 * (basis.leftCols(m) * y);
    detail::check_finite(out);
    remaining = invariant ? 0.0 : remaining - tau;
    if (remaining < t * 1e-15) remaining = 0.0;
  }
  return out;
}

template <HermitianOperator Op>
StateVector krylov_evolve(const Op& op, const StateVector& psi, double t, const EvolutionEngine& engine = {}) {
  return StateVector::from_amplitudes(krylov_evolve_raw(op, psi.amplitudes(), t, engine));
}

/// exp(-iHt)|psi>, normalized. Time is in units of 1/Delta.
inline StateVector evolve(const SparseHermitian& h, const StateVector& psi, double t, const EvolutionEngine& engine = {}) {
  require_same_dim(h.dim(), psi.dim());
  detail::check_time(t);
  if (t == 0.0) return psi;
  if (engine.resolve(h.dim()) == EvolutionMethod::exact) return ExactPropagator(h).evolve(psi, t);
  return krylov_evolve(h, psi, t, engine);
}

}  // namespace cqc
