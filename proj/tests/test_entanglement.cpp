#include <gtest/gtest.h>

#include "support.hpp"

namespace qtomo {
namespace {

const DensityMatrix kBell = DensityMatrix::from_pure(bell_state(0));
const DensityMatrix kMixed = DensityMatrix::maximally_mixed();
const DensityMatrix kProduct = DensityMatrix::from_pure(tensor(Vector2c(1, 0), Vector2c(1, 1) / std::sqrt(2.0)));

TEST(Fidelity, Basics) {
  Rng rng(2);
  for (int i = 0; i < 20; ++i) {
    const DensityMatrix r = test::random_state(rng, 1 + i % 4);
    EXPECT_NEAR(fidelity(r, r), 1.0, 1e-9);
  }
  EXPECT_NEAR(fidelity(kBell, bell_state(std::numbers::pi)), 0.0, 1e-12);
}

TEST(Fidelity, PublishedMatrix) {
  const DensityMatrix rho = test::published_state();
  EXPECT_NEAR(fidelity(rho, bell_state(0)), test::oracle::kFidelityPublished, 1e-6);
  // The overlap is ½(ρ22 + ρ33 − 2 Re ρ23), far from 0.978 for any phase.
  for (double phi = 0; phi < 2 * std::numbers::pi; phi += 0.01) EXPECT_LT(fidelity(rho, bell_state(phi)), 0.93);
}

TEST(Entropy, VonNeumann) {
  EXPECT_NEAR(von_neumann_entropy(kBell), 0.0, 1e-12);
  EXPECT_NEAR(von_neumann_entropy(kMixed), 2.0, 1e-12);
  EXPECT_NEAR(von_neumann_entropy(test::published_state()), 0.353, 0.005);
}

TEST(Entropy, Linear) {
  EXPECT_NEAR(linear_entropy(kBell), 0.0, 1e-12);
  EXPECT_NEAR(linear_entropy(kMixed), 1.0, 1e-12);
  EXPECT_NEAR(linear_entropy(test::published_state()), 0.167, 0.005);
}

TEST(Concurrence, Examples) {
  for (double phi : {0.0, 1.0, 3.0}) EXPECT_NEAR(concurrence(DensityMatrix::from_pure(bell_state(phi))).value, 1.0, 1e-9);
  EXPECT_NEAR(concurrence(kMixed).value, 0.0, 1e-12);
  const Concurrence c = concurrence(test::published_state());
  EXPECT_NEAR(c.value, 0.876, 0.005);
  EXPECT_NEAR(c.r[0], 0.93, 5e-3);
  EXPECT_NEAR(c.r[1], 0.054, 5e-3);
  EXPECT_NEAR(c.r[2], 0.0, 5e-3);
  EXPECT_NEAR(c.r[3], 0.0, 5e-3);
}

TEST(TangleEof, Examples) {
  const auto t = tangle_and_eof(0.876);
  EXPECT_NEAR(t.tangle, 0.767, 0.01);
  EXPECT_NEAR(t.eof, 0.825, 0.01);
  EXPECT_NEAR(tangle_and_eof(1).tangle, 1, 1e-15);
  EXPECT_NEAR(tangle_and_eof(1).eof, 1, 1e-15);
  EXPECT_NEAR(tangle_and_eof(0).tangle, 0, 1e-15);
  EXPECT_NEAR(tangle_and_eof(0).eof, 0, 1e-15);
}

TEST(Renyi2, Examples) {
  EXPECT_NEAR(renyi2_subsystem(kBell, Subsystem::A), std::log(2.0), 1e-12);
  EXPECT_NEAR(renyi2_subsystem(kProduct, Subsystem::A), 0.0, 1e-12);
  const DensityMatrix rho = test::published_state();
  EXPECT_NEAR(renyi2_subsystem(rho, Subsystem::B), 0.684, 0.01);
  EXPECT_NEAR(renyi2_subsystem(rho, Subsystem::A), test::oracle::kRenyi2TrueA, 1e-6);
}

TEST(LogNegativity, Examples) {
  EXPECT_NEAR(log_negativity(kBell), 1.0, 1e-12);
  EXPECT_NEAR(log_negativity(kProduct), 0.0, 1e-12);
  EXPECT_NEAR(log_negativity(test::published_state()), 0.898, 0.01);
}

TEST(EntanglementProperties, LocalUnitaryInvariance) {
  Rng rng(21);
  for (int i = 0; i < 300; ++i) {
    const DensityMatrix rho = test::random_state(rng, 1 + i % 4);
    const DensityMatrix rot = test::local_rotate(rho, test::random_unitary2(rng), test::random_unitary2(rng));
    EXPECT_NEAR(von_neumann_entropy(rho), von_neumann_entropy(rot), 1e-8);
    EXPECT_NEAR(linear_entropy(rho), linear_entropy(rot), 1e-8);
    EXPECT_NEAR(concurrence(rho).value, concurrence(rot).value, 1e-8);
    EXPECT_NEAR(log_negativity(rho), log_negativity(rot), 1e-8);
    EXPECT_NEAR(renyi2_subsystem(rho, Subsystem::A), renyi2_subsystem(rot, Subsystem::A), 1e-8);
    EXPECT_NEAR(renyi2_subsystem(rho, Subsystem::B), renyi2_subsystem(rot, Subsystem::B), 1e-8);
  }
}

TEST(EntanglementProperties, FidelitySymmetry) {
  Rng rng(22);
  for (int i = 0; i < 300; ++i) {
    const DensityMatrix a = test::random_state(rng, 1 + i % 4), b = test::random_state(rng, 1 + (i / 4) % 4);
    EXPECT_NEAR(fidelity(a, b), fidelity(b, a), 1e-9);
  }
}

TEST(EntanglementProperties, PureStateEntropyOfEntanglement) {
  Rng rng(23);
  for (int i = 0; i < 300; ++i) {
    const DensityMatrix psi = test::random_state(rng, 1);
    const double c = concurrence(psi).value;
    EXPECT_NEAR(von_neumann_entropy(partial_trace(psi, Subsystem::A)), tangle_and_eof(c).eof, 1e-9);
    EXPECT_DOUBLE_EQ(tangle_and_eof(c).tangle, c * c);
  }
}

TEST(EntanglementProperties, PptConsistency) {
  Rng rng(24);
  int entangled = 0;
  for (int i = 0; i < 1000; ++i) {
    const DensityMatrix rho = test::random_state(rng, 1 + i % 4);
    const bool ppt = eig_hermitian<4>(partial_transpose(rho, Subsystem::A)).values(3) >= -1e-9;
    EXPECT_EQ(log_negativity(rho) == 0.0, ppt);
    entangled += !ppt;
  }
  EXPECT_GT(entangled, 100);  // both branches exercised
  EXPECT_LT(entangled, 1000);
}

}  // namespace
}  // namespace qtomo
