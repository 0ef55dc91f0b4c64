#include <gtest/gtest.h>

#include "support.hpp"

namespace qtomo {
namespace {

TEST(Idler, Examples) {
  EXPECT_EQ(solve_idler(405, 810), 810.0);
  EXPECT_NEAR(solve_idler(405, 700), test::oracle::kIdler405_700, 1e-9);  // 961.017 nm
  const double far = solve_idler(405, 405.000001);
  EXPECT_TRUE(std::isfinite(far));
  EXPECT_GT(far, 1e10);
  try {
    solve_idler(405, 405);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonPhysical);
  }
}

TEST(Idler, EnergyConservation) {
  EXPECT_TRUE(energy_conserved(405, 810, 810));
  EXPECT_FALSE(energy_conserved(405, 800, 810));
}

TEST(Ktp, IndicesAreSane) {
  const KtpDispersion ktp;
  EXPECT_NEAR(ktp.index(CrystalAxis::y, 0.81, 25), 1.757, 5e-3);
  EXPECT_NEAR(ktp.index(CrystalAxis::z, 0.81, 25), 1.843, 5e-3);
  EXPECT_GT(ktp.index(CrystalAxis::y, 0.405, 25), ktp.index(CrystalAxis::y, 0.81, 25));
  EXPECT_GT(ktp.index(CrystalAxis::z, 0.81, 60), ktp.index(CrystalAxis::z, 0.81, 25));
  EXPECT_DOUBLE_EQ(ktp.expansion(25), 1.0);
}

TEST(Ktp, OutOfRange) {
  const KtpDispersion ktp;
  try {
    ktp.index(CrystalAxis::y, 3.0, 25);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::WavelengthOutOfModelRange);
  }
  CrystalSpec c;
  c.lambda_p_nm = 200;
  c.lambda_s_nm = c.lambda_i_nm = 400;
  EXPECT_THROW(qpm_mismatch(c, ktp), Error);
}

TEST(Qpm, OrderZeroIsBareMismatch) {
  const KtpDispersion ktp;
  CrystalSpec c;
  c.qpm_order = 0;
  const double lp = 0.405, ls = 0.81;
  const double dk = 2 * std::numbers::pi *
                    (ktp.index(CrystalAxis::y, lp, 30) / lp - ktp.index(CrystalAxis::y, ls, 30) / ls -
                     ktp.index(CrystalAxis::z, ls, 30) / ls);
  EXPECT_EQ(qpm_mismatch(c, ktp), dk);
}

TEST(Qpm, PolingTermWithConstantIndex) {
  const ConstantIndexModel flat(1.8, 1.8);
  CrystalSpec c;
  // Δk = 2π·n·(1/λp − 2/λs) vanishes at degeneracy, leaving −2π/Λ.
  EXPECT_NEAR(qpm_mismatch(c, flat), -2 * std::numbers::pi / c.poling_period_um, 1e-12);
}

TEST(Qpm, UniqueRootInOperatingWindow) {
  const KtpDispersion ktp;
  const CrystalSpec c;
  const QpmScan s = find_qpm_temperature(c, ktp, 20, 40);
  EXPECT_EQ(s.sign_changes, 1);
  EXPECT_TRUE(s.monotone);
  ASSERT_TRUE(s.root_c.has_value());
  EXPECT_NEAR(qpm_mismatch(c, ktp, *s.root_c), 0.0, 1e-9);
  EXPECT_NEAR(*s.root_c, 27.27, 0.05);  // model-dependent
}

TEST(Qpm, ModelFactory) {
  EXPECT_EQ(make_dispersion_model("ktp")->id(), KtpDispersion().id());
  EXPECT_THROW(make_dispersion_model("bbo"), Error);
}

}  // namespace
}  // namespace qtomo
