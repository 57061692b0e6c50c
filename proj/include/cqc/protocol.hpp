#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "cqc/model.hpp"
#include "cqc/problems/brute_force.hpp"
#include "cqc/qcore/evolution.hpp"
#include "cqc/random.hpp"

namespace cqc {

enum class InitialStateKind { basis, uniform, random_basis };

inline std::string to_string(InitialStateKind k) {
  switch (k) {
    case InitialStateKind::basis: return "basis";
    case InitialStateKind::uniform: return "uniform";
    case InitialStateKind::random_basis: return "random_basis";
  }
  return "?";
}

inline InitialStateKind parse_initial_state(const std::string& s) {
  if (s == "basis") return InitialStateKind::basis;
  if (s == "uniform") return InitialStateKind::uniform;
  if (s == "random_basis") return InitialStateKind::random_basis;
  throw std::invalid_argument("unknown initial state '" + s + "'");
}

struct CoolingConfig {
  std::optional<double> cycle_duration;  // default pi / (2 lambda)
  int max_cycles = 100;
  int quiet_cycles_to_stop = 0;          // 0 disables the stopping rule
  std::uint64_t seed = 1;
  InitialStateKind initial = InitialStateKind::random_basis;
  std::size_t z0 = 0;                    // for InitialStateKind::basis

  double duration_for(double lambda) const {
    if (cycle_duration) return *cycle_duration;
    if (!(lambda > 0.0)) throw std::invalid_argument("cycle duration must be given explicitly when lambda = 0");
    return std::numbers::pi / (2.0 * lambda);
  }

  void validate() const {
    if (cycle_duration && !(*cycle_duration > 0.0 && std::isfinite(*cycle_duration))) {
      throw std::invalid_argument("cycle duration must be positive");
    }
    if (max_cycles < 1) throw std::invalid_argument("max_cycles must be at least 1");
    if (quiet_cycles_to_stop < 0) throw std::invalid_argument("quiet_cycles_to_stop must be non-negative");
  }
};

struct CycleOutcome {
  std::uint32_t detected = 0;     // cavity occupation word, mode 1 = most significant bit
  double post_energy = 0.0;       // <H_P> after measurement and reset, units of Delta
  double ground_population = 0.0; // weight on the ground manifold
};

enum class TerminalStatus { max_cycles, quiet_stop };

inline std::string to_string(TerminalStatus s) { return s == TerminalStatus::max_cycles ? "max_cycles" : "quiet_stop"; }

struct Trajectory {
  std::uint64_t seed = 0;
  std::size_t initial_system_state = 0;  // meaningful for basis starts
  std::vector<CycleOutcome> cycles;
  TerminalStatus status = TerminalStatus::max_cycles;

  /// 0-based index of the first cycle with a detection, if any.
  std::optional<std::size_t> first_detection() const {
    for (std::size_t k = 0; k < cycles.size(); ++k) {
      if (cycles[k].detected != 0) return k;
    }
    return std::nullopt;
  }
};

enum class PropagationMode { automatic, on_the_fly, sector_cache };

struct SimulatorOptions {
  EvolutionEngine engine;
  PropagationMode propagation = PropagationMode::automatic;
  std::size_t threads = 1;                       // used while building the sector cache
  std::size_t sector_cache_max_entries = std::size_t{1} << 24;
  std::optional<std::vector<std::size_t>> ground_states;  // default: brute-force minimizers of E
};

/// Result of projecting the evolved state onto one cavity occupation pattern.
struct Measurement {
  std::uint32_t pattern = 0;
  std::vector<double> probabilities;  // per cavity pattern
  StateVector state;                  // reset into the zero-photon sector
};

/// Projective measurement of the whole cavity register followed by reset.
/// `evolved` is a full composite-space vector of unit norm.
inline Measurement measure_and_reset(std::span<const complex> evolved, const BasisIndexer& idx, Rng& rng) {
  require_same_dim(idx.dim(), evolved.size());
  const std::size_t nc = idx.cavity_dim();
  std::vector<double> p(nc, 0.0);
  for (std::size_t i = 0; i < evolved.size(); ++i) p[i & (nc - 1)] += std::norm(evolved[i]);
  double total = 0.0;
  for (double x : p) total += x;
  if (!std::isfinite(total) || std::abs(total - 1.0) > 1e-8) {
    throw std::runtime_error("cavity measurement probabilities sum to " + std::to_string(total));
  }
  const double u = uniform01(rng) * total;
  std::uint32_t pattern = 0;
  double acc = 0.0;
  for (std::size_t b = 0; b < nc; ++b) {
    acc += p[b];
    if (p[b] > 0.0) pattern = static_cast<std::uint32_t>(b);
    if (u < acc && p[b] > 0.0) break;
  }
  Amplitudes reset(idx.dim(), complex{0.0, 0.0});
  for (std::size_t z = 0; z < idx.system_dim(); ++z) reset[idx.index(z, 0)] = evolved[idx.index(z, pattern)];
  return {pattern, std::move(p), StateVector::from_amplitudes(std::move(reset))};
}

/// The cooling cycle engine for one model and one cycle duration. The
/// assembled operator and any cached propagator are immutable after
/// construction; all members are safe to call concurrently.
class CoolingSimulator {
 public:
  CoolingSimulator(CoolingModelSpec spec, double cycle_duration, SimulatorOptions options = {})
      : op_(std::make_shared<const CoolingOperator>(std::move(spec))),
        duration_(cycle_duration),
        options_(std::move(options)) {
    if (!(duration_ > 0.0) || !std::isfinite(duration_)) throw std::invalid_argument("cycle duration must be positive");
    const auto& s = op_->spec();
    energy_.resize(s.system_dim());
    for (std::size_t z = 0; z < s.system_dim(); ++z) energy_[z] = static_cast<double>(s.problem.energy(z));
    ground_ = options_.ground_states ? *options_.ground_states : brute_force_ground(s.problem).minimizers;
    for (auto z : ground_) {
      if (z >= s.system_dim()) throw std::out_of_range("ground state label out of range");
    }

    mode_ = options_.propagation;
    if (mode_ == PropagationMode::automatic) {
      mode_ = dim() * s.system_dim() <= options_.sector_cache_max_entries ? PropagationMode::sector_cache
                                                                           : PropagationMode::on_the_fly;
    }
    if (mode_ == PropagationMode::sector_cache) build_sector_cache();
  }

  const CoolingModelSpec& spec() const { return op_->spec(); }
  const CoolingOperator& op() const { return *op_; }
  const BasisIndexer& indexer() const { return op_->indexer(); }
  std::size_t dim() const { return op_->dim(); }
  double cycle_duration() const { return duration_; }
  PropagationMode propagation() const { return mode_; }
  const std::vector<std::size_t>& ground_states() const { return ground_; }
  std::span<const double> system_energies() const { return energy_; }

  StateVector initial_state(const CoolingConfig& cfg, Rng& rng, std::size_t* chosen = nullptr) const {
    const auto& idx = indexer();
    std::size_t z = cfg.z0;
    switch (cfg.initial) {
      case InitialStateKind::uniform: {
        Amplitudes a(dim(), complex{0.0, 0.0});
        for (std::size_t s = 0; s < idx.system_dim(); ++s) a[idx.index(s, 0)] = 1.0;
        if (chosen) *chosen = 0;
        return StateVector::from_amplitudes(std::move(a));
      }
      case InitialStateKind::random_basis: z = uniform_index(rng, idx.system_dim()); break;
      case InitialStateKind::basis:
        if (z >= idx.system_dim()) throw std::out_of_range("initial basis state out of range");
        break;
    }
    if (chosen) *chosen = z;
    return StateVector::basis(dim(), idx.index(z, 0));
  }

  /// exp(-iH duration)|psi> for psi in the zero-photon sector.
  Amplitudes propagate(const StateVector& psi) const {
    require_same_dim(dim(), psi.dim());
    if (mode_ == PropagationMode::sector_cache) {
      const auto& idx = indexer();
      Eigen::VectorXcd s(static_cast<Eigen::Index>(idx.system_dim()));
      for (std::size_t z = 0; z < idx.system_dim(); ++z) s(static_cast<Eigen::Index>(z)) = psi[idx.index(z, 0)];
      const Eigen::VectorXcd y = sector_ * s;
      return Amplitudes(y.data(), y.data() + y.size());
    }
    return krylov_evolve_raw(*op_, psi.amplitudes(), duration_, options_.engine);
  }

  /// One cycle: evolve, measure all cavities, reset them. `psi` must lie in
  /// the zero-photon sector and is replaced by the post-reset state.
  CycleOutcome run_cycle(StateVector& psi, Rng& rng) const {
    require_same_dim(dim(), psi.dim());
    const std::size_t nc = indexer().cavity_dim();
    for (std::size_t i = 0; i < psi.dim(); ++i) {
      if ((i & (nc - 1)) != 0 && psi[i] != complex{}) throw std::invalid_argument("cycle input must lie in the zero-photon sector");
    }
    const Amplitudes evolved = propagate(psi);
    Measurement m = measure_and_reset(evolved, indexer(), rng);
    psi = std::move(m.state);
    return observe(psi, m.pattern);
  }

  CycleOutcome observe(const StateVector& psi, std::uint32_t pattern) const {
    const auto& idx = indexer();
    CycleOutcome out;
    out.detected = pattern;
    for (std::size_t z = 0; z < idx.system_dim(); ++z) out.post_energy += energy_[z] * psi.probability(idx.index(z, 0));
    for (auto z : ground_) out.ground_population += psi.probability(idx.index(z, 0));
    out.ground_population = std::clamp(out.ground_population, 0.0, 1.0);
    return out;
  }

  Trajectory run_trajectory(const CoolingConfig& cfg) const {
    cfg.validate();
    if (cfg.cycle_duration && *cfg.cycle_duration != duration_) {
      throw std::invalid_argument("config cycle duration differs from the simulator's");
    }
    Rng rng(cfg.seed);
    Trajectory tr;
    tr.seed = cfg.seed;
    StateVector psi = initial_state(cfg, rng, &tr.initial_system_state);
    int quiet = 0;
    for (int k = 0; k < cfg.max_cycles; ++k) {
      const CycleOutcome c = run_cycle(psi, rng);
      tr.cycles.push_back(c);
      quiet = c.detected == 0 ? quiet + 1 : 0;
      if (cfg.quiet_cycles_to_stop > 0 && quiet >= cfg.quiet_cycles_to_stop) {
        tr.status = TerminalStatus::quiet_stop;
        return tr;
      }
    }
    tr.status = TerminalStatus::max_cycles;
    return tr;
  }

 private:
  void build_sector_cache() {
    const auto& idx = indexer();
    const auto n = static_cast<Eigen::Index>(dim());
    const auto ns = static_cast<Eigen::Index>(idx.system_dim());
    sector_.resize(n, ns);
    if (options_.engine.resolve(dim()) == EvolutionMethod::exact) {
      const ExactPropagator exact(assemble(spec()));
      const Eigen::MatrixXcd& v = exact.eigenvectors();
      Eigen::MatrixXcd rows(ns, n);  // rows of V for zero-photon basis states
      for (Eigen::Index z = 0; z < ns; ++z) rows.row(z) = v.row(static_cast<Eigen::Index>(idx.index(static_cast<std::size_t>(z), 0)));
      Eigen::VectorXcd phases(n);
      for (Eigen::Index k = 0; k < n; ++k) phases(k) = std::polar(1.0, -exact.eigenvalues()(k) * duration_);
      sector_.noalias() = v * phases.asDiagonal() * rows.adjoint();
      return;
    }
    std::atomic<Eigen::Index> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
      try {
        for (Eigen::Index z = next++; z < ns; z = next++) {
          Amplitudes e(dim(), complex{0.0, 0.0});
          e[idx.index(static_cast<std::size_t>(z), 0)] = 1.0;
          const Amplitudes col = krylov_evolve_raw(*op_, e, duration_, options_.engine);
          sector_.col(z) = Eigen::Map<const Eigen::VectorXcd>(col.data(), n);
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = ns;
      }
    };
    run_workers(options_.threads, worker);
    if (failure) std::rethrow_exception(failure);
  }

  template <class F>
  static void run_workers(std::size_t threads, F& worker) {
    threads = std::max<std::size_t>(1, threads);
    if (threads == 1) {
      worker();
      return;
    }
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::shared_ptr<const CoolingOperator> op_;
  double duration_;
  SimulatorOptions options_;
  PropagationMode mode_ = PropagationMode::on_the_fly;
  std::vector<double> energy_;
  std::vector<std::size_t> ground_;
  Eigen::MatrixXcd sector_;  // columns exp(-iHt)|z, 0>
};

/// Per-cycle aggregate over an ensemble. Trajectories that stopped early
/// contribute their last recorded outcome to later cycles.
struct CycleStats {
  double mean_energy = 0.0;
  double min_energy = 0.0;
  double q25_energy = 0.0;
  double median_energy = 0.0;
  double q75_energy = 0.0;
  double max_energy = 0.0;
  double mean_ground_population = 0.0;
  double ground_fraction = 0.0;   // share of trajectories with ground_population >= threshold
  double detection_rate = 0.0;    // share of trajectories detecting a photon in this cycle
};

struct EnsembleStats {
  std::size_t samples = 0;
  double ground_threshold = 0.9;
  std::vector<CycleStats> per_cycle;
};

struct EnsembleResult {
  std::vector<Trajectory> trajectories;
  EnsembleStats stats;
};

/// Linear-interpolation quantile of sorted data.
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty data");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline EnsembleStats aggregate(const std::vector<Trajectory>& trajectories, double ground_threshold = 0.9) {
  EnsembleStats st;
  st.samples = trajectories.size();
  st.ground_threshold = ground_threshold;
  std::size_t cycles = 0;
  for (const auto& t : trajectories) cycles = std::max(cycles, t.cycles.size());
  std::vector<double> e;
  for (std::size_t k = 0; k < cycles; ++k) {
    e.clear();
    CycleStats c;
    for (const auto& t : trajectories) {
      if (t.cycles.empty()) continue;
      const bool live = k < t.cycles.size();
      const CycleOutcome& o = live ? t.cycles[k] : t.cycles.back();
      e.push_back(o.post_energy);
      c.mean_ground_population += o.ground_population;
      if (o.ground_population >= ground_threshold) c.ground_fraction += 1.0;
      if (live && o.detected != 0) c.detection_rate += 1.0;
    }
    const auto n = static_cast<double>(e.size());
    if (e.empty()) continue;
    for (double x : e) c.mean_energy += x;
    c.mean_energy /= n;
    c.mean_ground_population /= n;
    c.ground_fraction /= n;
    c.detection_rate /= n;
    std::sort(e.begin(), e.end());
    c.min_energy = e.front();
    c.max_energy = e.back();
    c.q25_energy = quantile_sorted(e, 0.25);
    c.median_energy = quantile_sorted(e, 0.5);
    c.q75_energy = quantile_sorted(e, 0.75);
    st.per_cycle.push_back(c);
  }
  return st;
}

/// Runs `samples` trajectories with seeds trajectory_seed(cfg.seed, i).
/// Results are identical for any thread count.
inline EnsembleResult run_ensemble(const CoolingSimulator& sim, const CoolingConfig& cfg, std::size_t samples,
                                   std::size_t threads = 1, double ground_threshold = 0.9) {
  cfg.validate();
  if (samples < 1) throw std::invalid_argument("ensemble needs at least one sample");
  EnsembleResult r;
  r.trajectories.resize(samples);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (std::size_t i = next++; i < samples; i = next++) {
        CoolingConfig c = cfg;
        c.seed = trajectory_seed(cfg.seed, i);
        r.trajectories[i] = sim.run_trajectory(c);
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = samples;
    }
  };
  threads = std::max<std::size_t>(1, std::min(threads, samples));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  r.stats = aggregate(r.trajectories, ground_threshold);
  return r;
}

}  // namespace cqc
