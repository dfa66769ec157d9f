#include <gtest/gtest.h>

#include <cmath>

#include "hpw/halfnorm.hpp"
#include "oracles.hpp"

using hpw::Complex;
using hpw::Membership;
using hpw::NormStatus;

namespace {

hpw::Weight weight(const char* src) { return hpw::make_weight(hpw::parse(src, "t")); }
hpw::Expr fz(const char* src) { return hpw::parse(src, "z"); }

const oracle::Weight kIdentity = [](double t) { return t; };

}  // namespace

TEST(KBox, Contains) {
  const hpw::KBox box(2.0);
  EXPECT_TRUE(box.contains({0.0, 1.0}));
  EXPECT_TRUE(box.contains({2.0, 0.5}));
  EXPECT_FALSE(box.contains({0.0, 0.49}));
  EXPECT_FALSE(box.contains({2.01, 1.0}));
  EXPECT_THROW(hpw::KBox(0.5), std::invalid_argument);
}

TEST(WeightedNorm, DiskIdentityImage) {
  const auto ne = hpw::weighted_norm(fz("4/(1-i*z)^2"), weight("t"));
  EXPECT_NEAR(ne.value, 1.0, 1e-9);
  ASSERT_TRUE(ne.argmax);
  EXPECT_NEAR(ne.argmax->real(), 0.0, 1e-6);
  EXPECT_NEAR(ne.argmax->imag(), 1.0, 1e-4);
  EXPECT_EQ(ne.status, NormStatus::AttainedInterior);
}

TEST(WeightedNorm, SupremumAtInfinity) {
  const auto ne = hpw::weighted_norm(fz("1/(z+i)"), weight("t"));
  EXPECT_NEAR(ne.value, 1.0, 1e-5);
  EXPECT_LE(ne.value, 1.0);
  EXPECT_EQ(ne.status, NormStatus::ApproachedAtBoundary);
}

TEST(WeightedNorm, ZeroFunction) {
  for (const char* p : {"t", "1", "exp(t^2)"}) EXPECT_EQ(hpw::weighted_norm(fz("0"), weight(p)).value, 0.0);
}

TEST(WeightedNorm, DominatesRandomPoints) {
  const hpw::Weight w = weight("t");
  oracle::Gen gen(11);
  for (const auto& fx : oracle::fixtures()) {
    const auto f = fz(fx.text.c_str());
    const double norm = hpw::weighted_norm(f, w).value;
    for (int k = 0; k < 1000; ++k) {
      const Complex z = gen.halfplane(std::ldexp(1.0, -20), std::ldexp(1.0, 20), 50.0);
      const double pf = z.imag() * std::abs(fx.f(z));
      EXPECT_GE(norm, pf - 1e-9) << fx.text << " at " << z;
    }
  }
}

TEST(WeightedNorm, MatchesBruteForce) {
  const auto fx = oracle::fixtures()[2];
  const double brute = oracle::brute_weighted_sup(fx.f, kIdentity, 1e-3, 1e3);
  const double ne = hpw::weighted_norm(fz(fx.text.c_str()), weight("t")).value;
  EXPECT_GE(ne, brute - 1e-12);
  EXPECT_NEAR(ne, brute, 1e-6 * brute);
}

TEST(Tail, DecayingQuotientAtTwo) {
  // Lower strip: y e^{-2y}/(1+y) peaks inside the strip at y = (sqrt(3)-1)/2.
  // Upper and side values frozen from the dense scan.
  const auto fx = oracle::fixtures()[2];
  const auto brute = oracle::brute_tail(fx.f, kIdentity, 2.0);
  const double y0 = (std::sqrt(3.0) - 1.0) / 2.0;
  const double closed = y0 * std::exp(-2.0 * y0) / (1.0 + y0);
  EXPECT_NEAR(brute.lower, closed, 1e-6);
  EXPECT_NEAR(closed, 0.12886258119, 1e-10);

  const auto r = hpw::tail_regions(fz(fx.text.c_str()), weight("t"), hpw::KBox(2.0));
  EXPECT_NEAR(r.lower, 0.12886258119, 1e-9);
  EXPECT_NEAR(r.upper, 0.0122104259, 1e-9);
  EXPECT_NEAR(r.side, 0.0735758882, 1e-9);
  // The scans are lower bounds; the refined regional sups sit just above.
  for (const auto [impl, scan] : {std::pair{r.lower, brute.lower}, {r.upper, brute.upper}, {r.side, brute.side}}) {
    EXPECT_GE(impl, scan - 1e-12);
    EXPECT_LE(impl - scan, 1e-5 * scan);
  }
  EXPECT_NEAR(r.total(), hpw::tail_sup_outside_box(fz(fx.text.c_str()), weight("t"), hpw::KBox(2.0)), 0.0);
}

TEST(Tail, ReciprocalAtTen) {
  const double v = hpw::tail_sup_outside_box(fz("1/(z+i)"), weight("t"), hpw::KBox(10.0));
  EXPECT_GE(v, 10.0 / 11.0);
  const auto brute = oracle::brute_tail([](oracle::C z) { return 1.0 / (z + oracle::I); }, kIdentity, 10.0);
  // The oracle's strip reaches y = 1e10, the checker's stops at 2^20 c.
  EXPECT_NEAR(v, brute.total(), 1e-6);
}

TEST(Tail, ZeroFunction) { EXPECT_EQ(hpw::tail_sup_outside_box(fz("0"), weight("t"), hpw::KBox(3.0)), 0.0); }

TEST(Tail, NonIncreasingInC) {
  const auto f = fz("4/(1-i*z)^2");
  const auto w = weight("t");
  double prev = 1e300;
  for (double c = 1.0; c <= 4096.0; c *= 2.0) {
    const double v = hpw::tail_sup_outside_box(f, w, hpw::KBox(c));
    EXPECT_LE(v, prev + 1e-12) << "c=" << c;
    prev = v;
  }
}

TEST(Membership, DecayingQuotientIsIn) {
  const auto m = hpw::is_in_small_space(fz("exp(2*i*z)/(z+i)"), weight("t"));
  EXPECT_EQ(m.in_small_space, Membership::Yes);
  EXPECT_LT(m.tail.back().second, 1e-6);
  for (std::size_t i = 1; i < m.tail.size(); ++i) EXPECT_LE(m.tail[i].second, m.tail[i - 1].second);
}

TEST(Membership, ReciprocalIsOut) {
  const auto m = hpw::is_in_small_space(fz("1/(z+i)"), weight("t"));
  EXPECT_EQ(m.in_small_space, Membership::No);
  EXPECT_NEAR(m.tail.back().second, 1.0, 1e-4);
}

TEST(Membership, ConstantWeightExponential) {
  const auto m = hpw::is_in_small_space(fz("exp(2*i*z)"), weight("1"));
  EXPECT_EQ(m.in_small_space, Membership::No);
  EXPECT_GT(m.tail.back().second, 0.999);
}

TEST(DecayThreshold, Reciprocal) {
  const double X = hpw::horizontal_decay_threshold(fz("1/(z+i)"), 1.0, 2.0, 0.01);
  EXPECT_NEAR(X, std::sqrt(10000.0 - 4.0), 1e-6);
}

TEST(DecayThreshold, AlreadyBelow) {
  const double X = hpw::horizontal_decay_threshold(fz("exp(2*i*z)"), 1.0, 2.0, 1.0);
  EXPECT_EQ(X, hpw::DecayOptions{}.x_start);
}

TEST(DecayThreshold, NoDecay) {
  EXPECT_THROW(hpw::horizontal_decay_threshold(fz("exp(2*i*z)"), 1.0, 2.0, 1e-9), hpw::DecayNotFoundError);
}
