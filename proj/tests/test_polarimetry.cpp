#include <gtest/gtest.h>

#include "support.hpp"

namespace qtomo {
namespace {

bool same(const ProjectionState& p, Vector2c v) { return same_projector(p.vector(), v.normalized(), 1e-12); }

TEST(ProjectionState, BasisSettings) {
  EXPECT_TRUE(same(projection_state({45, 0}), Vector2c(1, 0)));
  EXPECT_TRUE(same(projection_state({0, 0}), Vector2c(0, 1)));
  EXPECT_TRUE(same(projection_state({22.5, 0}), Vector2c(1, -kI)));
}

TEST(ProjectionState, DiagonalSettingGivesAntidiagonalAmplitudes) {
  // (22.5, 45) is labeled D in the measurement table but the formula gives H − V.
  EXPECT_TRUE(same(projection_state({22.5, 45}), Vector2c(1, -1)));
  EXPECT_TRUE(same(labeled_state('D'), Vector2c(1, 1)));
}

TEST(TwoQubitProjector, Basis) {
  Vector4c hh = Vector4c::Zero(), vh = Vector4c::Zero();
  hh(0) = 1;
  vh(2) = 1;
  EXPECT_TRUE(same_projector(two_qubit_projector(WaveplateSetting{45, 0}, WaveplateSetting{45, 0}).state, hh));
  EXPECT_TRUE(same_projector(two_qubit_projector(WaveplateSetting{0, 0}, WaveplateSetting{45, 0}).state, vh));
}

TEST(StandardSettings, Rows) {
  const auto& s = standard_16_settings();
  ASSERT_EQ(s.size(), 16u);
  EXPECT_EQ(s[0].nu, 1);
  EXPECT_EQ(s[0].label, "HH");
  EXPECT_DOUBLE_EQ(s[0].a.h_deg, 45);
  EXPECT_DOUBLE_EQ(s[0].b.h_deg, 45);
  EXPECT_EQ(s[9].label, "DD");
  EXPECT_DOUBLE_EQ(s[9].a.h_deg, 22.5);
  EXPECT_DOUBLE_EQ(s[9].a.q_deg, 45);
  EXPECT_DOUBLE_EQ(s[9].b.q_deg, 45);
  EXPECT_EQ(s[15].label, "RL");
  EXPECT_DOUBLE_EQ(s[15].a.q_deg, 0);
  EXPECT_DOUBLE_EQ(s[15].b.q_deg, 90);
  for (const auto& x : s)
    for (auto frame : {ProjectorFrame::waveplate, ProjectorFrame::label})
      EXPECT_NEAR(standard_projector(x, frame).state.norm(), 1.0, 1e-12);
}

TEST(StandardSettings, TomographicallyComplete) {
  for (auto frame : {ProjectorFrame::waveplate, ProjectorFrame::label}) {
    std::vector<TwoQubitProjector> p;
    for (const auto& s : standard_16_settings()) p.push_back(standard_projector(s, frame));
    Eigen::FullPivLU<Eigen::MatrixXd> lu(projector_gram(p));
    lu.setThreshold(1e-10);
    EXPECT_EQ(lu.rank(), 16);
  }
}

TEST(BellState, Overlaps) {
  EXPECT_NEAR(std::abs(bell_state(0).dot(bell_state(std::numbers::pi))), 0.0, 1e-15);
  for (double phi : {0.0, 0.3, 2.0}) EXPECT_NEAR(std::norm(bell_state(phi)(0)), 0.0, 1e-30);
  const auto rl = standard_projector(standard_16_settings()[15], ProjectorFrame::waveplate);
  EXPECT_NEAR(std::norm(rl.state.dot(bell_state(0))), 0.5, 1e-12);
}

TEST(AngleConversion, PolarizerIsTwiceHwp) {
  EXPECT_DOUBLE_EQ(hwp_to_polarizer_deg(11.25), 22.5);
  EXPECT_DOUBLE_EQ(polarizer_to_hwp_deg(45), 22.5);
  // With the quarter-wave plate along the rotated polarization (q = 2h) the
  // projection is linear, orthogonal to a polarizer at 2h.
  for (double h : {0.0, 10.0, 22.5, 33.0})
    EXPECT_TRUE(same(projection_state({h, 2 * h}), polarizer_state(hwp_to_polarizer_deg(h) + 90.0).vector()));
}

TEST(ProjectionProperties, NormAndQuarterWavePeriod) {
  Rng rng(5);
  for (int i = 0; i < 10000; ++i) {
    const double h = test::uniform(rng, -360, 360), q = test::uniform(rng, -360, 360);
    const ProjectionState p = projection_amplitudes(h, q);
    ASSERT_NEAR(p.norm(), 1.0, 1e-12);
    ASSERT_LT((p.projector() - projection_amplitudes(h, q + 180).projector()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

}  // namespace
}  // namespace qtomo
