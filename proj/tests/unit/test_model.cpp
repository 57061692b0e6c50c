#include <gtest/gtest.h>

#include <bit>

#include "helpers.hpp"

using namespace cqc;

namespace {

CoolingModelSpec two_level_spec(double lambda, int alpha0) {
  auto x = SparseHermitian::from_triplets(2, {{0, 1, 1.0}, {1, 0, 1.0}});
  return {ProblemHamiltonian::costs({0, 1}), TransitionTerm::from_matrix(TransitionKind::custom, x), CavityBank{{1.0}}, lambda, alpha0};
}

}  // namespace

TEST(Model, NonInteractingDiagonal) {
  const auto h = assemble(two_level_spec(0.0, 0));
  ASSERT_EQ(h.dim(), 4u);
  EXPECT_EQ(h.nnz(), 3u);  // (0,0) is an explicit zero and gets dropped
  const double want[] = {0, 1, 1, 2};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(h.entry(i, i).real(), want[i]);
}

TEST(Model, CostsRejectNegativeEnergy) {
  EXPECT_THROW(ProblemHamiltonian::costs({0, -1}), std::invalid_argument);
  EXPECT_NO_THROW(ProblemHamiltonian::general({0, -1}));
}

TEST(Model, SpecValidation) {
  auto s = two_level_spec(0.1, 0);
  s.lambda = 1.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = two_level_spec(0.1, 2);
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = two_level_spec(0.1, 0);
  s.cavities.omega = {0.0};
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = two_level_spec(0.1, 0);
  s.transition = TransitionTerm::sum_of_x(2);
  EXPECT_THROW(s.validate(), DimensionMismatch);
}

TEST(Model, DimensionCap) {
  auto spec = factoring_model_encoding({35}, 1).model(0.1);
  EXPECT_THROW(assemble(spec, 4096), std::length_error);
}

TEST(BasisIndexer, CornersAndRoundTrip) {
  for (std::size_t n = 0; n <= 6; ++n) {
    for (std::size_t m = 0; m + n <= 10 && m <= 4; ++m) {
      BasisIndexer idx(std::size_t{1} << n, m);
      EXPECT_EQ(idx.index(0, 0), 0u);
      EXPECT_EQ(idx.index(idx.system_dim() - 1, idx.cavity_dim() - 1), (std::size_t{1} << (n + m)) - 1);
      for (std::size_t i = 0; i < idx.dim(); ++i) {
        const auto [z, b] = idx.labels(i);
        ASSERT_EQ(idx.index(z, b), i);
      }
    }
  }
  BasisIndexer idx(4, 2);
  EXPECT_THROW(idx.index(4, 0), std::out_of_range);
  EXPECT_THROW(idx.index(0, 4), std::out_of_range);
  EXPECT_THROW(idx.labels(16), std::out_of_range);
}

TEST(CavityBank, ModeOneIsMostSignificant) {
  auto c = CavityBank::harmonic(3);
  EXPECT_EQ(c.mode_bit(1), 4u);
  EXPECT_EQ(c.mode_bit(3), 1u);
  EXPECT_DOUBLE_EQ(c.photon_energy(0b100), 1.0);
  EXPECT_DOUBLE_EQ(c.photon_energy(0b011), 5.0);
}

TEST(Model, GroverBlockIsScaledProjectorTimesFlip) {
  // Hand-built 4x4 projector onto |++>, every entry 1/4.
  const double lambda = 0.07;
  auto spec = grover_encode(GroverProblem{2, {3}}).model(lambda);
  auto h = assemble(spec);
  const BasisIndexer idx(spec);
  for (std::size_t z = 0; z < 4; ++z) {
    for (std::size_t zp = 0; zp < 4; ++zp) {
      EXPECT_NEAR(h.entry(idx.index(zp, 1), idx.index(z, 0)).real(), lambda / 4.0, 1e-15);
      if (z != zp) EXPECT_EQ(h.entry(idx.index(zp, 0), idx.index(z, 0)), complex{});
    }
  }
  // marked-unmarked uniform overlap gives the closed-form coupling
  StateVector phi0 = StateVector::basis(h.dim(), idx.index(3, 1));
  Amplitudes a(h.dim(), complex{});
  for (std::size_t z = 0; z < 3; ++z) a[idx.index(z, 0)] = 1.0;
  const auto phi1 = StateVector::from_amplitudes(a);
  const Amplitudes hphi1 = apply(h, phi1);
  EXPECT_NEAR(std::abs(inner_product(phi0.amplitudes(), hphi1)), lambda * std::sqrt(3.0) / 4.0, 1e-15);
}

TEST(Model, FactoringStructure) {
  for (int alpha0 : {0, 1}) {
    auto spec = factoring_model_encoding({35}, alpha0).model(0.1);
    auto h = assemble(spec);
    ASSERT_EQ(h.dim(), 8192u);
    EXPECT_TRUE(h.is_hermitian());
    const BasisIndexer idx(spec);
    const std::size_t partners = 10 * (static_cast<std::size_t>(alpha0) + 3);
    std::size_t off = 0;
    for (std::size_t i = 0; i < h.dim(); ++i) {
      const auto rows = h.row_offsets();
      const auto cols = h.col_indices();
      std::size_t row_off = 0;
      for (std::size_t k = rows[i]; k < rows[i + 1]; ++k) {
        const std::size_t j = cols[k];
        if (j == i) continue;
        ++row_off;
        const auto [z, b] = idx.labels(i);
        const auto [zj, bj] = idx.labels(j);
        ASSERT_EQ(std::popcount(z ^ zj), 1);
        const int flips = std::popcount(b ^ bj);
        ASSERT_TRUE(flips == 1 || (alpha0 == 1 && flips == 0));
        ASSERT_NEAR(h.entry(i, j).real(), 0.1, 1e-15);
      }
      ASSERT_EQ(row_off, partners);
      off += row_off;
    }
    EXPECT_EQ(off, 8192u * partners);
  }
}

TEST(Model, ZeroPhotonSectorEqualsHpPlusLambdaHt) {
  const double lambda = 0.1;
  auto spec = factoring_model_encoding({21}, 1).model(lambda);
  auto h = assemble(spec);
  const BasisIndexer idx(spec);
  const auto hp = spec.problem;
  for (std::size_t z = 0; z < 1024; ++z) {
    ASSERT_EQ(h.entry(idx.index(z, 0), idx.index(z, 0)).real(), static_cast<double>(hp.energy(z)));
    for (std::size_t zp = 0; zp < 1024; ++zp) {
      if (zp == z) continue;
      const double want = std::popcount(z ^ zp) == 1 ? lambda : 0.0;
      ASSERT_EQ(h.entry(idx.index(zp, 0), idx.index(z, 0)).real(), want);
    }
  }
}

TEST(Model, SumOfXHammingOne) {
  auto ht = TransitionTerm::sum_of_x(6).to_sparse();
  for (std::size_t a = 0; a < 64; ++a) {
    for (std::size_t b = 0; b < 64; ++b) {
      ASSERT_EQ(ht.entry(a, b).real(), std::popcount(a ^ b) == 1 ? 1.0 : 0.0);
    }
  }
}

TEST(Model, MatrixFreeMatchesAssembled) {
  std::vector<CoolingModelSpec> specs = {
      grover_encode(evenly_marked(5, 3)).model(0.05),
      factoring_model_encoding({15}, 1, 2).model(0.1),
      factoring_model_encoding({35}, 0).model(0.1),
      two_level_spec(0.3, 1),
  };
  Rng rng(5);
  specs.push_back(circuit_encode(random_circuit(2, 4, rng)).model(0.02));
  for (const auto& spec : specs) {
    const CoolingOperator op(spec);
    const auto h = assemble(spec);
    const auto psi = test::random_state(h.dim(), 3);
    Amplitudes y(h.dim());
    op.apply_into(psi.amplitudes(), y);
    EXPECT_LT(test::distance(y, h.apply(psi.amplitudes())), 1e-12);
  }
}

TEST(Model, CommutatorNorm) {
  auto x = SparseHermitian::from_triplets(2, {{0, 1, 1.0}, {1, 0, 1.0}});
  auto hp = ProblemHamiltonian::costs({0, 1}).to_sparse();
  EXPECT_NEAR(commutator_norm(hp, x), std::sqrt(2.0), 1e-15);  // [Z-like, X] has two unit entries
  EXPECT_EQ(commutator_norm(x, x), 0.0);
  auto fp = factoring_encode({35}).to_sparse();
  EXPECT_GT(commutator_norm(fp, TransitionTerm::sum_of_x(10).to_sparse()), 1.0);
  auto gp = grover_encode(GroverProblem{3, {5}});
  EXPECT_GT(commutator_norm(gp.problem.to_sparse(), gp.transition.to_sparse()), 0.0);
  auto chain = ChainProblem{4, ChainProfile::flat};
  auto ce = chain_energies(chain);
  EXPECT_GT(commutator_norm(ProblemHamiltonian::costs(ce).to_sparse(), chain_transition(4).to_sparse()), 0.0);
}

TEST(Model, GroverTransitionIsProjector) {
  for (int n = 1; n <= 6; ++n) {
    const Eigen::MatrixXcd p = to_dense(TransitionTerm::grover_projector(n).to_sparse());
    EXPECT_LT((p * p - p).cwiseAbs().maxCoeff(), 1e-12);
  }
}
