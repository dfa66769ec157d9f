#include <gtest/gtest.h>

#include <cmath>

#include "hpw/bloch.hpp"
#include "oracles.hpp"

using hpw::Complex;
using hpw::DiskFunction;
using hpw::Membership;

namespace {

DiskFunction disk(const char* src) { return DiskFunction::from_function(hpw::parse(src, "w")); }

std::string power(int n) { return "w^" + std::to_string(n); }

}  // namespace

TEST(Cayley, ToDisk) {
  EXPECT_LT(std::abs(hpw::cayley_to_disk({0.0, 1.0})), 1e-16);
  EXPECT_LT(std::abs(hpw::cayley_to_disk({0.0, 0.0}) - 1.0), 1e-16);
  EXPECT_LT(std::abs(hpw::cayley_to_disk({0.0, 2.0}) + 1.0 / 3.0), 1e-16);
}

TEST(Cayley, ToHalfPlane) {
  EXPECT_LT(std::abs(hpw::cayley_to_halfplane(0.0) - Complex{0.0, 1.0}), 1e-16);
  EXPECT_LT(std::abs(hpw::cayley_to_halfplane(-1.0 / 3.0) - Complex{0.0, 2.0}), 1e-15);
  EXPECT_THROW(hpw::cayley_to_halfplane(-1.0), std::domain_error);
}

TEST(Cayley, RoundTrip) {
  oracle::Gen gen(21);
  for (int k = 0; k < 1000; ++k) {
    const Complex z = gen.halfplane(1e-3, 1e3, 10.0);
    const Complex back = hpw::cayley_to_halfplane(hpw::cayley_to_disk(z));
    EXPECT_LE(std::abs(back - z), 1e-12 * std::max(1.0, std::abs(z))) << z;
  }
}

TEST(GTransform, Identity) {
  const auto g = hpw::g_transform(disk("w"));
  const Complex z{0.3, 0.8};
  EXPECT_LT(std::abs(hpw::eval_complex(g, z) - 4.0 / ((1.0 - oracle::I * z) * (1.0 - oracle::I * z))), 1e-14);
}

TEST(GTransform, ConstantGivesZero) {
  const auto g = hpw::g_transform(disk("3+2*i"));
  EXPECT_EQ(hpw::eval_complex(g, {0.3, 0.8}), (Complex{0.0, 0.0}));
}

TEST(GTransform, Square) {
  const auto g = hpw::g_transform(disk("w^2"));
  const Complex z{0.0, 1.0};
  const Complex expect = 8.0 * (1.0 + oracle::I * z) / std::pow(1.0 - oracle::I * z, 3);
  EXPECT_LT(std::abs(hpw::eval_complex(g, z) - expect), 1e-15);
  const Complex z2{0.7, 0.2};
  EXPECT_LT(std::abs(hpw::eval_complex(g, z2) - 8.0 * (1.0 + oracle::I * z2) / std::pow(1.0 - oracle::I * z2, 3)),
            1e-13);
}

TEST(GTransform, PointwiseIdentity) {
  oracle::Gen gen(22);
  for (int n = 1; n <= 6; ++n) {
    const auto df = disk(power(n).c_str());
    const auto g = hpw::g_transform(df);
    for (int k = 0; k < 100; ++k) {
      const Complex z = gen.halfplane(1e-2, 1e2, 10.0);
      const Complex w = hpw::cayley_to_disk(z);
      const double lhs = z.imag() * std::abs(hpw::eval_complex(g, z));
      const double rhs = (1.0 - std::norm(w)) * std::abs(hpw::eval_complex(df.derivative(), w));
      EXPECT_LE(std::abs(lhs - rhs), 1e-10 * rhs) << "n=" << n << " z=" << z;
    }
  }
}

TEST(BlochSeminorm, Examples) {
  EXPECT_NEAR(hpw::bloch_seminorm(disk("w")), 1.0, 1e-9);
  EXPECT_EQ(hpw::bloch_seminorm(disk("5")), 0.0);
  EXPECT_NEAR(hpw::bloch_seminorm(disk("w^2")), 4.0 * std::sqrt(3.0) / 9.0, 1e-9);
}

TEST(BlochSeminorm, DenseGridOracle) {
  for (int n = 1; n <= 6; ++n) {
    const double closed = oracle::bloch_power(n);
    const double brute =
        oracle::brute_bloch([n](oracle::C w) { return static_cast<double>(n) * std::pow(w, n - 1); }, 2000, 16);
    EXPECT_NEAR(brute, closed, 1e-5) << n;
    EXPECT_NEAR(hpw::bloch_seminorm(disk(power(n).c_str())), closed, 1e-9) << n;
  }
}

TEST(CompareNorms, PowerFamily) {
  for (int n = 1; n <= 6; ++n) {
    const auto cmp = hpw::compare_norms(disk(power(n).c_str()));
    EXPECT_TRUE(cmp.passed) << n;
    EXPECT_LE(cmp.gap, 1e-4) << n;
    EXPECT_NEAR(cmp.half_plane, oracle::bloch_power(n), 1e-6) << n;
  }
}

TEST(CompareNorms, Constant) {
  const auto cmp = hpw::compare_norms(disk("2"));
  EXPECT_EQ(cmp.bloch, 0.0);
  EXPECT_EQ(cmp.half_plane, 0.0);
  EXPECT_TRUE(cmp.passed);
}

TEST(CompareNorms, DerivativeOnlyFunction) {
  const auto df = DiskFunction::from_derivative(hpw::parse("1/(1-w)", "w"));
  EXPECT_FALSE(df.function());
  const auto cmp = hpw::compare_norms(df);
  EXPECT_LE(cmp.gap, 1e-4);
  EXPECT_NEAR(cmp.bloch, 2.0, 1e-5);
}

TEST(DiskFunction, WrongVariable) { EXPECT_THROW(DiskFunction::from_function(hpw::parse("z", "z")), std::invalid_argument); }

TEST(LittleBloch, Identity) {
  const auto r = hpw::little_bloch_check(disk("w"));
  EXPECT_EQ(r.disk_side, Membership::Yes);
  EXPECT_EQ(r.half_plane.in_small_space, Membership::Yes);
  EXPECT_TRUE(r.agree);
}

TEST(LittleBloch, Constant) {
  const auto r = hpw::little_bloch_check(disk("1"));
  EXPECT_EQ(r.disk_side, Membership::Yes);
  EXPECT_TRUE(r.agree);
}

TEST(LittleBloch, LogarithmicFunctionIsNotLittleBloch) {
  const auto r = hpw::little_bloch_check(DiskFunction::from_derivative(hpw::parse("1/(1-w)", "w")));
  EXPECT_EQ(r.disk_side, Membership::No);
  EXPECT_EQ(r.half_plane.in_small_space, Membership::No);
  EXPECT_TRUE(r.agree);
  EXPECT_NEAR(r.ring_max.back().second, 2.0, 1e-6);
}
