#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cqc/model.hpp"
#include "cqc/problems/chain.hpp"
#include "cqc/problems/grover.hpp"
#include "cqc/qcore/evolution.hpp"

namespace cqc {

// Perturbative rate predictions. Energies and rates are in units of Delta.

struct RatePrediction {
  int n = 0;
  ChainProfile profile = ChainProfile::flat;
  double omega = 0.0;
  bool out_of_regime = false;  // lambda not small compared to Delta
};

inline constexpr double kPerturbativeLambdaLimit = 0.5;

/// Flat barrier of height Delta: Omega_n = Delta (lambda/Delta)^n.
inline RatePrediction omega_flat(int n, double lambda) {
  if (n < 2) throw std::invalid_argument("flat chain order must be at least 2");
  if (!(lambda > 0.0 && lambda <= 1.0)) throw std::invalid_argument("lambda must lie in (0, 1]");
  return {n, ChainProfile::flat, std::pow(lambda, n), lambda >= kPerturbativeLambdaLimit};
}

/// Triangle barrier: Omega_n = Delta (prod_{k=1}^{n/2-1} lambda/(k Delta))^2 * lambda/((n/2) Delta).
inline RatePrediction omega_triangle(int n, double lambda) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("triangle chain order must be even and at least 2");
  if (!(lambda > 0.0 && lambda <= 1.0)) throw std::invalid_argument("lambda must lie in (0, 1]");
  const int half = n / 2;
  double prod = 1.0;
  for (int k = 1; k <= half - 1; ++k) prod *= lambda / k;
  return {n, ChainProfile::triangle, prod * prod * lambda / half, lambda >= kPerturbativeLambdaLimit};
}

inline RatePrediction predicted_rate(const ChainProblem& p, double lambda) {
  p.validate();
  return p.profile == ChainProfile::flat ? omega_flat(p.n, lambda) : omega_triangle(p.n, lambda);
}

struct GroverRate {
  double exact = 0.0;         // lambda sqrt(n0 (2^N - n0)) / 2^N
  double asymptotic = 0.0;  // lambda sqrt(n0) 2^{-N/2}
};

/// Coupling <phi_0| lambda H_T |phi_1> between the marked and unmarked
/// uniform superpositions.
inline GroverRate grover_rate(int num_qubits, std::size_t n0, double lambda) {
  if (num_qubits < 1 || num_qubits > 62) throw std::invalid_argument("qubit count out of range");
  const double space = std::ldexp(1.0, num_qubits);
  if (n0 < 1 || static_cast<double>(n0) >= space) throw std::invalid_argument("n0 must satisfy 1 <= n0 < 2^N");
  const double k = static_cast<double>(n0);
  return {lambda * std::sqrt(k * (space - k)) / space, lambda * std::sqrt(k) / std::sqrt(space)};
}

struct PopulationCurve {
  int n = 0;
  double omega = 0.0;              // rate used for the rescaling tau = t omega / pi
  std::vector<double> tau;
  std::vector<double> population;  // |<z_n|psi(t)>|^2
};

inline constexpr std::size_t kDefaultCurvePoints = 241;
inline constexpr double kDefaultTauMax = 1.2;

/// Population of the far end of the chain starting from |z_0>, on a uniform
/// rescaled grid. `omega` overrides the perturbative prediction.
inline PopulationCurve simulate_chain_curve(const ChainProblem& p, double lambda, std::size_t points = kDefaultCurvePoints,
                                            double tau_max = kDefaultTauMax, std::optional<double> omega = std::nullopt) {
  if (points < 2) throw std::invalid_argument("curve needs at least two points");
  if (!(tau_max > 0.0)) throw std::invalid_argument("tau_max must be positive");
  PopulationCurve c;
  c.n = p.n;
  c.omega = omega ? *omega : predicted_rate(p, lambda).omega;
  if (!(c.omega > 0.0)) throw std::invalid_argument("rescaling rate must be positive");
  const ExactPropagator prop(chain_encode(p, lambda));
  const auto start = StateVector::basis(prop.dim(), 0);
  const std::size_t last = prop.dim() - 1;
  for (std::size_t i = 0; i < points; ++i) {
    const double tau = tau_max * static_cast<double>(i) / static_cast<double>(points - 1);
    const double t = tau * std::numbers::pi / c.omega;
    const Amplitudes psi = prop.evolve_raw(start.amplitudes(), t);
    c.tau.push_back(tau);
    c.population.push_back(std::norm(psi[last]));
  }
  return c;
}

/// max over tau of (max - min) across curves on a common grid.
inline double collapse_metric(const std::vector<PopulationCurve>& curves) {
  if (curves.size() < 2) throw std::invalid_argument("collapse metric needs at least two curves");
  const auto& grid = curves.front().tau;
  for (const auto& c : curves) {
    if (c.tau.size() != grid.size() || c.population.size() != grid.size()) throw std::invalid_argument("curve grids differ");
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (std::abs(c.tau[i] - grid[i]) > 1e-12) throw std::invalid_argument("curve grids differ");
    }
  }
  double spread = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double lo = curves.front().population[i], hi = lo;
    for (const auto& c : curves) {
      lo = std::min(lo, c.population[i]);
      hi = std::max(hi, c.population[i]);
    }
    spread = std::max(spread, hi - lo);
  }
  return spread;
}

struct Peak {
  std::size_t index = 0;
  double tau = 0.0;
  double value = 0.0;
};

/// Maximum of the first lobe, the first contiguous stretch at or above half
/// of the global maximum. Fast off-resonant wiggles on the slow oscillation
/// create spurious local maxima; taking the lobe's argmax ignores them.
inline Peak first_peak(const PopulationCurve& c) {
  const auto& p = c.population;
  if (p.empty()) throw std::invalid_argument("empty curve");
  const double half = 0.5 * *std::max_element(p.begin(), p.end());
  std::size_t i = 0;
  while (i < p.size() && p[i] < half) ++i;
  std::size_t best = i;
  for (; i < p.size() && p[i] >= half; ++i) {
    if (p[i] > p[best]) best = i;
  }
  return {best, c.tau[best], p[best]};
}

/// Highest population over tau <= tau_limit.
inline double peak_population_until(const PopulationCurve& c, double tau_limit) {
  double best = 0.0;
  for (std::size_t i = 0; i < c.tau.size() && c.tau[i] <= tau_limit + 1e-12; ++i) best = std::max(best, c.population[i]);
  return best;
}

/// A lambda-type tunnel-out channel: from `source` (energy E_s) through n
/// single-bit hops to `destination` with E_s = E_d + omega_m, where the
/// barrier seen from both ends matches:
///   E(z_1) - E(z_0) = E(z_{n-1}) - E(z_n) + omega_m,
/// with z_0 = destination, z_n = source, z_1 and z_{n-1} their path neighbours.
struct LambdaChannel {
  std::size_t source = 0;
  std::size_t destination = 0;
  std::size_t mode = 0;       // 1-based
  int distance = 0;           // Hamming distance n
  std::size_t near_destination = 0;  // z_1
  std::size_t near_source = 0;       // z_{n-1}
};

struct LambdaScanOptions {
  int max_distance = 3;
  std::optional<double> tolerance;   // default lambda
  bool local_minima_only = true;     // sources restricted to excited local minima
};

/// Diagnostic enumeration of lambda-type channels on a Hamming-connected
/// qubit problem. Channels need photon-preserving hops, so the report is
/// empty when alpha0 = 0 or there are no cavity modes.
inline std::vector<LambdaChannel> lambda_transition_scan(const CoolingModelSpec& spec, const LambdaScanOptions& opt = {}) {
  spec.validate();
  std::vector<LambdaChannel> out;
  if (spec.alpha0 == 0 || spec.cavities.modes() == 0) return out;
  const auto qubits = spec.problem.num_qubits();
  if (!qubits) throw std::invalid_argument("lambda scan needs a qubit problem register");
  const double tol = opt.tolerance.value_or(spec.lambda);
  const std::size_t dim = spec.problem.dim();
  auto E = [&](std::size_t z) { return static_cast<double>(spec.problem.energy(z)); };
  const auto ground = spec.problem.min_energy();

  auto is_excited_local_min = [&](std::size_t z) {
    if (spec.problem.energy(z) == ground) return false;
    for (int i = 0; i < *qubits; ++i) {
      if (spec.problem.energy(z ^ (std::size_t{1} << i)) < spec.problem.energy(z)) return false;
    }
    return true;
  };

  for (std::size_t s = 0; s < dim; ++s) {
    if (opt.local_minima_only && !is_excited_local_min(s)) continue;
    for (std::size_t d = 0; d < dim; ++d) {
      const std::size_t diff = s ^ d;
      const int n = std::popcount(diff);
      if (n < 2 || n > opt.max_distance) continue;
      for (std::size_t m = 1; m <= spec.cavities.modes(); ++m) {
        const double w = spec.cavities.omega[m - 1];
        if (std::abs(E(s) - E(d) - w) > tol) continue;
        bool found = false;
        for (int i = 0; i < *qubits && !found; ++i) {
          if (!(diff >> i & 1u)) continue;
          for (int j = 0; j < *qubits && !found; ++j) {
            if (j == i || !(diff >> j & 1u)) continue;
            const std::size_t z1 = d ^ (std::size_t{1} << i);
            const std::size_t zn1 = s ^ (std::size_t{1} << j);
            if (std::abs((E(z1) - E(d)) - (E(zn1) - E(s) + w)) <= tol) {
              out.push_back({s, d, m, n, z1, zn1});
              found = true;
            }
          }
        }
      }
    }
  }
  return out;
}

/// Measured first transfer of the Grover Rabi oscillation
/// |phi_1>|0> -> |phi_0>|1>.
struct GroverTransfer {
  double predicted_time = 0.0;           // pi / (2 exact rate)
  double measured_time = 0.0;            // first maximum of the photon probability
  double detection_probability = 0.0;    // from |phi_1>|0> at predicted_time
  double uniform_detection_probability = 0.0;  // from the uniform superposition at predicted_time
  double uniform_success_probability = 0.0;    // marked-state weight after one cycle from uniform
};

/// Probability of a cavity photon after evolving `start` for time t.
template <HermitianOperator Op>
double photon_probability(const Op& op, const BasisIndexer& idx, const StateVector& start, double t, const EvolutionEngine& engine) {
  const Amplitudes psi = krylov_evolve_raw(op, start.amplitudes(), t, engine);
  double p = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) {
    if (idx.labels(i).second != 0) p += std::norm(psi[i]);
  }
  return p;
}

inline GroverTransfer measure_grover_transfer(const GroverProblem& problem, double lambda, EvolutionEngine engine = {}) {
  engine.method = EvolutionMethod::krylov;
  const CoolingOperator op(grover_encode(problem).model(lambda));
  const auto& idx = op.indexer();
  const double rate = grover_rate(problem.num_qubits, problem.solutions(), lambda).exact;

  std::vector<char> marked(problem.space(), 0);
  for (auto z : problem.marked) marked[z] = 1;
  Amplitudes a(op.dim(), complex{0.0, 0.0});
  for (std::size_t z = 0; z < problem.space(); ++z) {
    if (!marked[z]) a[idx.index(z, 0)] = 1.0;
  }
  const auto unmarked = StateVector::from_amplitudes(std::move(a));

  GroverTransfer r;
  r.predicted_time = std::numbers::pi / (2.0 * rate);
  auto p = [&](double t) { return photon_probability(op, idx, unmarked, t, engine); };

  // Coarse scan for the first local maximum, then golden-section refinement.
  const std::size_t steps = 400;
  const double t_end = 1.6 * r.predicted_time;
  const double h = t_end / static_cast<double>(steps);
  double prev = p(0.0), cur = p(h);
  std::size_t k = 1;
  while (k < steps) {
    const double next = p(h * static_cast<double>(k + 1));
    if (next < cur && cur >= prev) break;
    prev = cur;
    cur = next;
    ++k;
  }
  double lo = h * static_cast<double>(k - 1), hi = h * static_cast<double>(k + 1);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = p(x1), f2 = p(x2);
  for (int it = 0; it < 80 && hi - lo > 1e-9 * r.predicted_time; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = p(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = p(x1);
    }
  }
  r.measured_time = 0.5 * (lo + hi);
  r.detection_probability = p(r.predicted_time);

  Amplitudes u(op.dim(), complex{0.0, 0.0});
  for (std::size_t z = 0; z < problem.space(); ++z) u[idx.index(z, 0)] = 1.0;
  const auto uniform = StateVector::from_amplitudes(std::move(u));
  const Amplitudes evolved = krylov_evolve_raw(op, uniform.amplitudes(), r.predicted_time, engine);
  for (std::size_t i = 0; i < evolved.size(); ++i) {
    const auto [z, b] = idx.labels(i);
    if (b != 0) r.uniform_detection_probability += std::norm(evolved[i]);
    if (marked[z]) r.uniform_success_probability += std::norm(evolved[i]);
  }
  return r;
}

}  // namespace cqc
