#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "hpw/linemax.hpp"
#include "oracles.hpp"

using hpw::LineStatus;

TEST(LineMax, ReciprocalAtUnitHeight) {
  const auto r = hpw::line_max(hpw::parse("1/(z+i)", "z"), 1.0);
  EXPECT_NEAR(r.value, 0.5, 1e-12);
  ASSERT_TRUE(r.argmax_x.has_value());
  EXPECT_NEAR(*r.argmax_x, 0.0, 1e-8);
  EXPECT_EQ(r.status, LineStatus::Converged);
}

TEST(LineMax, ConstantModulusLine) {
  const auto r = hpw::line_max(hpw::parse("exp(2*i*z)", "z"), 0.5);
  EXPECT_NEAR(r.value, std::exp(-1.0), 1e-12);
  EXPECT_EQ(r.status, LineStatus::NonDecaying);
}

TEST(LineMax, ZeroFunction) {
  const auto r = hpw::line_max(hpw::parse("0", "z"), 1.0);
  EXPECT_EQ(r.value, 0.0);
}

TEST(LineMax, NonUnimodalLine) {
  // Two bumps at x = -3 and x = 5; the taller one is at 5.
  const auto f = hpw::parse("1/(z-5+i) + 0.5/(z+3+i)", "z");
  const oracle::Fn g = [](oracle::C z) { return 1.0 / (z - 5.0 + oracle::I) + 0.5 / (z + 3.0 + oracle::I); };
  const auto r = hpw::line_max(f, 0.2);
  const double brute = oracle::brute_line_max(g, 0.2);
  EXPECT_NEAR(r.value, brute, 1e-6 * brute);
  ASSERT_TRUE(r.argmax_x.has_value());
  EXPECT_NEAR(*r.argmax_x, 5.0, 0.1);
}

TEST(LineMax, EvenSymmetry) {
  const auto f = hpw::parse("1/(z+i)", "z");
  for (double y : {0.01, 0.3, 2.0, 50.0}) {
    const auto r = hpw::line_max(f, y);
    ASSERT_TRUE(r.argmax_x.has_value());
    EXPECT_NEAR(*r.argmax_x, 0.0, 1e-8) << "y=" << y;
  }
}

class LineOracle : public ::testing::TestWithParam<std::size_t> {};

TEST_P(LineOracle, BruteForceAgreement) {
  const auto fx = oracle::fixtures()[GetParam()];
  const auto f = hpw::parse(fx.text, "z");
  for (double y : {0.5, 1.0, 2.0}) {
    const double brute = oracle::brute_line_max(fx.f, y);
    const auto r = hpw::line_max(f, y);
    EXPECT_NEAR(r.value, brute, 1e-6 * brute) << fx.text << " y=" << y;
    EXPECT_NEAR(r.value, fx.mf(y), 1e-9 * fx.mf(y)) << fx.text << " y=" << y;
  }
}

TEST_P(LineOracle, DenserScanNeverLower) {
  const auto f = hpw::parse(oracle::fixtures()[GetParam()].text, "z");
  hpw::LineMaxOptions dense;
  dense.scan_points = 2049;
  for (double y : {0.1, 0.5, 1.0, 3.0, 10.0}) {
    const double coarse = hpw::line_max(f, y).value;
    const double fine = hpw::line_max(f, y, dense).value;
    EXPECT_GE(fine, coarse - 1e-9);
  }
}

TEST_P(LineOracle, LogConvexOnGeometricGrid) {
  const auto f = hpw::parse(oracle::fixtures()[GetParam()].text, "z");
  const auto grid = hpw::geometric_grid(1.0 / 16.0, 16.0, 64);
  const auto curve = hpw::mf_curve(f, grid);
  const auto rep = hpw::check_log_convexity(curve, 1e-6);
  EXPECT_TRUE(rep.passed) << "worst defect " << rep.worst_defect << " at " << rep.worst_at;
}

INSTANTIATE_TEST_SUITE_P(Fixtures, LineOracle, ::testing::Values(0u, 1u, 2u, 3u));

TEST(MfCurve, ClosedFormDecayingQuotient) {
  const std::vector<double> grid{1.0, 2.0, 4.0};
  const auto c = hpw::mf_curve(hpw::parse("exp(2*i*z)/(z+i)", "z"), grid);
  EXPECT_NEAR(c.v(0), -2.0 - std::log(2.0), 1e-12);
  EXPECT_NEAR(c.v(1), -4.0 - std::log(3.0), 1e-12);
  EXPECT_NEAR(c.v(2), -8.0 - std::log(5.0), 1e-12);
}

TEST(MfCurve, LinearLogCurve) {
  const std::vector<double> grid{1.0, 2.0};
  const auto c = hpw::mf_curve(hpw::parse("exp(2*i*z)", "z"), grid);
  EXPECT_NEAR(c.v(0), -2.0, 1e-12);
  EXPECT_NEAR(c.v(1), -4.0, 1e-12);
}

TEST(MfCurve, FarBeyondDoubleRange) {
  const std::vector<double> grid{512.0, 1024.0};
  const auto c = hpw::mf_curve(hpw::parse("exp(2*i*z)/(z+i)", "z"), grid);
  EXPECT_NEAR(c.v(1), -2048.0 - std::log(1025.0), 1e-9);
}

TEST(MfCurve, ZeroFunctionRaises) {
  const std::vector<double> grid{1.0, 2.0};
  EXPECT_THROW(hpw::mf_curve(hpw::parse("0", "z"), grid), hpw::ZeroLineError);
}

TEST(Convexity, LinearCurveHasNoDefect) {
  const auto c = hpw::mf_curve(hpw::parse("exp(2*i*z)", "z"), hpw::geometric_grid(0.25, 8.0, 20));
  const auto rep = hpw::check_log_convexity(c);
  EXPECT_TRUE(rep.passed);
  EXPECT_LE(rep.worst_defect, 1e-12);
}

TEST(Convexity, ConcaveSpikeFails) {
  const hpw::SampledCurve c({1.0, 2.0, 3.0}, {0.0, 1.0, 0.0});
  const auto rep = hpw::check_log_convexity(c);
  EXPECT_FALSE(rep.passed);
  EXPECT_DOUBLE_EQ(rep.worst_defect, 1.0);
  EXPECT_DOUBLE_EQ(rep.worst_at, 2.0);
}

TEST(Minorant, LinearCurve) {
  const auto c = hpw::mf_curve(hpw::parse("exp(2*i*z)", "z"), hpw::geometric_grid(0.25, 8.0, 20));
  const auto m = hpw::affine_minorant_of_curve(c);
  EXPECT_NEAR(m.a, -2.03, 1e-9);
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_LE(m.a * c.t(i) + m.b, c.v(i) + 1e-12);
}

TEST(Minorant, FlatCurve) {
  const hpw::SampledCurve c({0.5, 1.0, 2.0}, {0.0, 0.0, 0.0});
  const auto m = hpw::affine_minorant_of_curve(c);
  EXPECT_NEAR(m.a, -0.01, 1e-15);
  EXPECT_NEAR(m.b, 0.005, 1e-15);
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_LE(m.a * c.t(i) + m.b, 0.0);
}

TEST(Minorant, DecayingQuotientSlopeBelowMinusTwo) {
  const auto c = hpw::mf_curve(hpw::parse("exp(2*i*z)/(z+i)", "z"), hpw::geometric_grid(1.0 / 16.0, 16.0, 64));
  const auto m = hpw::affine_minorant_of_curve(c);
  EXPECT_LE(m.a, -2.0);
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_LE(m.a * c.t(i) + m.b, c.v(i) + 1e-12);
}

TEST(Minorant, ConcaveCurveRejected) {
  const hpw::SampledCurve c({1.0, 2.0, 3.0}, {0.0, 1.0, 0.0});
  EXPECT_THROW(hpw::affine_minorant_of_curve(c), hpw::MinorantVerificationError);
}
