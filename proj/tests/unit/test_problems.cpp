#include <gtest/gtest.h>

#include <array>
#include <fstream>
#include <set>

#include "helpers.hpp"
#include "oracles/factoring_oracle.hpp"

using namespace cqc;

namespace {

using oracle::oracle_energy;
using oracle::representable;

}  // namespace

TEST(Grover, IndicatorEnergies) {
  auto e = grover_encode(GroverProblem{2, {3}});
  const std::vector<std::int64_t> want = {1, 1, 1, 0};
  EXPECT_TRUE(std::equal(want.begin(), want.end(), e.problem.energies().begin()));
  EXPECT_EQ(e.cavities.omega, std::vector<double>{1.0});
  EXPECT_EQ(e.alpha0, 0);
  EXPECT_EQ(e.transition.kind(), TransitionKind::grover_projector);
}

TEST(Grover, Validation) {
  EXPECT_THROW(grover_encode(GroverProblem{3, {}}), std::invalid_argument);
  EXPECT_THROW(grover_encode(GroverProblem{1, {0, 1}}), std::invalid_argument);
  EXPECT_THROW(grover_encode(GroverProblem{2, {4}}), std::out_of_range);
  EXPECT_THROW(grover_encode(GroverProblem{2, {1, 1}}), std::invalid_argument);
  EXPECT_THROW(evenly_marked(3, 8), std::invalid_argument);
  const auto p = evenly_marked(6, 4);
  EXPECT_EQ(std::set<std::size_t>(p.marked.begin(), p.marked.end()).size(), 4u);
}

TEST(BruteForce, GroverSingleMarked) {
  const auto g = brute_force_ground(grover_encode(GroverProblem{3, {5}}).problem);
  EXPECT_EQ(g.min_energy, 0);
  EXPECT_EQ(g.minimizers, std::vector<std::size_t>{5});
  EXPECT_THROW(brute_force_ground(ProblemHamiltonian::costs(std::vector<std::int64_t>(64, 1)), 32), std::length_error);
}

TEST(Factoring, MatchesTableOracleForEveryTarget) {
  for (unsigned target = 1; target < 64; ++target) {
    const auto p = factoring_encode({target});
    ASSERT_EQ(p.dim(), 1024u);
    for (std::size_t z = 0; z < 1024; ++z) {
      ASSERT_EQ(p.energy(z), oracle_energy(target, z)) << target << " " << z;
      ASSERT_GE(p.energy(z), 0);
      ASSERT_LE(p.energy(z), 5);
    }
  }
}

TEST(Factoring, ZeroEnergyMeansProduct) {
  for (unsigned target = 1; target < 64; ++target) {
    const auto p = factoring_encode({target});
    const auto g = brute_force_ground(p);
    EXPECT_EQ(g.min_energy == 0, representable(target)) << target;
    if (g.min_energy != 0) continue;
    for (auto z : g.minimizers) {
      const auto a = FactoringAssignment::unpack(z);
      EXPECT_EQ(a.x * a.y, target);
    }
    // every factor pair appears exactly once (carries are forced)
    std::size_t pairs = 0;
    for (unsigned a = 0; a < 8; ++a) {
      for (unsigned b = 0; b < 8; ++b) pairs += a * b == target;
    }
    EXPECT_EQ(g.minimizers.size(), pairs) << target;
  }
}

TEST(Factoring, SwapSymmetry) {
  // swapping x and y with the carries re-derived leaves the minimum unchanged
  for (unsigned target = 1; target < 64; ++target) {
    const auto p = factoring_encode({target});
    for (unsigned x = 0; x < 8; ++x) {
      for (unsigned y = 0; y < 8; ++y) {
        std::int64_t best_xy = 99, best_yx = 99;
        for (unsigned c = 0; c < 16; ++c) {
          best_xy = std::min(best_xy, p.energy(FactoringAssignment{x, y, c}.pack()));
          best_yx = std::min(best_yx, p.energy(FactoringAssignment{y, x, c}.pack()));
        }
        ASSERT_EQ(best_xy, best_yx);
      }
    }
  }
}

TEST(Factoring, GroundFixtureFor35) {
  const auto g = brute_force_ground(factoring_encode({35}));
  EXPECT_EQ(g.min_energy, 0);
  // x=5, y=7, c = 0b1010 and the swap, as 10-bit strings x2x1x0 y2y1y0 c3c2c1c0
  EXPECT_EQ(g.minimizers, (std::vector<std::size_t>{0b1011111010, 0b1111011010}));
  EXPECT_EQ(FactoringAssignment::unpack(0b1011111010).x, 5u);
  EXPECT_EQ(FactoringAssignment::unpack(0b1011111010).y, 7u);
}

TEST(Factoring, GroundFixtureFor36) {
  // only 6 x 6 fits in three bits
  const auto g = brute_force_ground(factoring_encode({36}));
  EXPECT_EQ(g.min_energy, 0);
  ASSERT_EQ(g.minimizers.size(), 1u);
  const auto a = FactoringAssignment::unpack(g.minimizers[0]);
  EXPECT_EQ(a.x, 6u);
  EXPECT_EQ(a.y, 6u);
}

TEST(Factoring, AllZerosAssignment) {
  // 35 = 100011: columns 1, 2 and 5 need a one on the right-hand side
  EXPECT_EQ(factoring_encode({35}).energy(0), 3);
  EXPECT_EQ(factoring_violations(35, 0), 0b10011u);
}

TEST(Factoring, RangeAndPacking) {
  EXPECT_THROW(factoring_encode({64}), std::out_of_range);
  for (std::size_t z = 0; z < 1024; ++z) ASSERT_EQ(FactoringAssignment::unpack(z).pack(), z);
}

TEST(Chain, Profiles) {
  auto flat = chain_encode({2, ChainProfile::flat}, 0.1);
  EXPECT_EQ(flat.dim(), 3u);
  EXPECT_EQ(flat.entry(1, 1).real(), 1.0);
  EXPECT_EQ(flat.entry(0, 1).real(), 0.1);
  EXPECT_EQ(flat.entry(0, 2).real(), 0.0);
  EXPECT_EQ(chain_energies({4, ChainProfile::triangle}), (std::vector<std::int64_t>{0, 1, 2, 1, 0}));
  EXPECT_EQ(chain_energies({5, ChainProfile::flat}), (std::vector<std::int64_t>{0, 1, 1, 1, 1, 0}));
  EXPECT_THROW(chain_encode({3, ChainProfile::triangle}, 0.1), std::invalid_argument);
  EXPECT_THROW(chain_encode({1, ChainProfile::flat}, 0.1), std::invalid_argument);
  EXPECT_THROW(parse_chain_profile("ramp"), std::invalid_argument);
}

TEST(Circuit, ClockSpectrum) {
  CompiledCircuit c{1, {Gate{GateKind::x, {0}, {}}, Gate{GateKind::hadamard, {0}, {}}}};
  const auto enc = circuit_encode(c);
  std::set<std::int64_t> levels(enc.problem.energies().begin(), enc.problem.energies().end());
  EXPECT_EQ(levels, (std::set<std::int64_t>{-2, -1, 0}));
  EXPECT_EQ(enc.cavities.omega, std::vector<double>{1.0});
  EXPECT_EQ(enc.alpha0, 0);
}

TEST(Circuit, HistoryCouplingIsLambdaForEveryStep) {
  Rng rng(17);
  const double lambda = 0.02;
  for (int trial = 0; trial < 5; ++trial) {
    const auto c = random_circuit(2, 5, rng);
    const auto spec = circuit_encode(c).model(lambda);
    const auto h = assemble(spec);
    const BasisIndexer idx(spec);
    Eigen::VectorXcd phi0 = Eigen::VectorXcd::Zero(4);
    phi0(static_cast<Eigen::Index>(trial % 4)) = 1.0;
    const auto hist = simulate_circuit(c, phi0);
    for (std::size_t t = 0; t < c.steps(); ++t) {
      Amplitudes from(h.dim(), complex{}), to(h.dim(), complex{});
      for (std::size_t p = 0; p < 4; ++p) {
        from[idx.index(circuit_system_index(c, t, p), 0)] = hist[t](static_cast<Eigen::Index>(p));
        to[idx.index(circuit_system_index(c, t + 1, p), 1)] = hist[t + 1](static_cast<Eigen::Index>(p));
      }
      const complex m = inner_product(to, h.apply(from));
      EXPECT_NEAR(m.real(), lambda, 1e-14);
      EXPECT_NEAR(m.imag(), 0.0, 1e-14);
    }
  }
}

TEST(Circuit, GateUnitariesAndSimulation) {
  CompiledCircuit c{2, {Gate{GateKind::hadamard, {0}, {}}, Gate{GateKind::cnot, {0, 1}, {}}}};
  Eigen::VectorXcd phi0 = Eigen::VectorXcd::Zero(4);
  phi0(0) = 1.0;
  const auto out = simulate_circuit(c, phi0).back();
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(out(0) - r), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(out(3) - r), 0.0, 1e-15);
  const auto t = single_qubit_matrix(GateKind::t_phase);
  EXPECT_NEAR(std::arg(t(1, 1)), std::numbers::pi / 4, 1e-15);
}

TEST(Circuit, Validation) {
  EXPECT_THROW(circuit_encode(CompiledCircuit{1, {}}), CircuitError);
  EXPECT_THROW(validate(CompiledCircuit{1, {Gate{GateKind::cnot, {0, 0}, {}}}}), CircuitError);
  EXPECT_THROW(validate(CompiledCircuit{2, {Gate{GateKind::x, {2}, {}}}}), CircuitError);
  EXPECT_THROW(validate(CompiledCircuit{11, {Gate{GateKind::x, {0}, {}}}}), CircuitError);
  Gate bad{GateKind::matrix, {0}, Eigen::MatrixXcd::Identity(2, 2)};
  bad.matrix(0, 0) = 1.1;
  EXPECT_THROW(validate(CompiledCircuit{1, {bad}}), CircuitError);
}

TEST(Circuit, JsonFormat) {
  const auto c = circuit_from_json(nlohmann::json::parse(R"([{"gate":"H","targets":[0]},{"gate":"CNOT","targets":[0,1]}])"));
  EXPECT_EQ(c.num_qubits, 2);
  EXPECT_EQ(c.steps(), 2u);
  const auto again = circuit_from_json(to_json(c));
  EXPECT_EQ(again.gates[1].targets, (std::vector<int>{0, 1}));
  EXPECT_THROW(circuit_from_json(nlohmann::json::parse(R"([{"gate":"Q","targets":[0]}])")), CircuitError);
  EXPECT_THROW(circuit_from_json(nlohmann::json::parse(R"([{"gate":"X"}])")), CircuitError);
  EXPECT_THROW(circuit_from_json(nlohmann::json::parse(R"([{"gate":"X","targets":"0"}])")), CircuitError);
  EXPECT_THROW(circuit_from_json(nlohmann::json::parse(R"([{"gate":"U","targets":[0],"matrix":[[1,0],[0,2]]}])")), CircuitError);
  EXPECT_THROW(circuit_from_json(nlohmann::json::parse(R"([{"gate":"U","targets":[0],"matrix":[[[1,0],"a"],[0,1]]}])")), CircuitError);
}

TEST(Circuit, SampleFilesLoad) {
  for (const char* name : {"bell.json", "identity.json", "x_h_t.json"}) {
    EXPECT_NO_THROW(load_circuit_file(std::string(CQC_DATA_DIR) + "/circuits/" + name)) << name;
  }
  EXPECT_THROW(load_circuit_file(std::string(CQC_DATA_DIR) + "/circuits/non_unitary.json"), CircuitError);
  EXPECT_THROW(load_circuit_file("/nonexistent/file.json"), CircuitError);
}

TEST(Circuit, LeakageOutOfHistorySubspaceIsSmall) {
  Rng rng(3);
  const auto c = random_circuit(2, 4, rng);
  const auto spec = circuit_encode(c).model(0.02);
  const BasisIndexer idx(spec);
  const ExactPropagator prop(assemble(spec));
  Eigen::VectorXcd phi0 = Eigen::VectorXcd::Zero(4);
  phi0(1) = 1.0;
  const auto hist = simulate_circuit(c, phi0);
  Amplitudes start(idx.dim(), complex{});
  for (std::size_t p = 0; p < 4; ++p) start[idx.index(circuit_system_index(c, 0, p), 0)] = hist[0](static_cast<Eigen::Index>(p));
  for (double t : {10.0, 40.0, 78.5, 200.0}) {
    const Amplitudes psi = prop.evolve_raw(start, t);
    double inside = 0.0;
    for (std::size_t clock = 0; clock <= c.steps(); ++clock) {
      for (std::size_t b = 0; b < 2; ++b) {
        complex ov{};
        for (std::size_t p = 0; p < 4; ++p) {
          ov += std::conj(hist[clock](static_cast<Eigen::Index>(p))) * psi[idx.index(circuit_system_index(c, clock, p), b)];
        }
        inside += std::norm(ov);
      }
    }
    EXPECT_GT(inside, 1.0 - 1e-6) << t;
  }
}
