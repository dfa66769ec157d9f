#ifndef HPW_THEOREMS_HPP
#define HPW_THEOREMS_HPP

/// \file
/// Witness functions for the nontriviality theorems and a desk-scale check
/// of the asymptotic theorem: for f in lambda(p) with a finite liminf slope
/// a of ln Mf(t)/t, ln Mf(t) - a*t -> -inf.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hpw/curve.hpp"
#include "hpw/expr.hpp"
#include "hpw/halfnorm.hpp"
#include "hpw/linemax.hpp"
#include "hpw/weights.hpp"

namespace hpw {

/// e^{-iaz+b}; |f(x+iy)| = e^{ay+b}, so ||f|| <= 1 whenever a*t+b <= -ln p(t).
inline Expr witness_big(double a, double b) {
  const Expr z = make_var("z");
  return make_exp(Complex{0.0, -a} * z + Complex{b, 0.0});
}

enum class SmallWitnessForm {
  Corrected,  // e^{-i(a-1)z}/(z+i)
  Literal,    // e^{i(a+1)z}/(z+i), kept for comparison runs
};

/// Nonzero member of lambda(p) built from the slope a of an affine witness.
/// The corrected form satisfies p(t)|f| <= e^{-b} e^{-t}/|z+i| on Im z = t.
inline Expr witness_small(double a, SmallWitnessForm form = SmallWitnessForm::Corrected) {
  const Expr z = make_var("z");
  const Complex k = form == SmallWitnessForm::Corrected ? Complex{0.0, -(a - 1.0)} : Complex{0.0, a + 1.0};
  return make_exp(k * z) / (z + Complex{0.0, 1.0});
}

/// F(z) = e^{iaz} f(z), so that ln MF(t) = ln Mf(t) - a*t.
inline Expr build_F(const Expr& f, double a) {
  const Expr z = make_var(f.variable());
  return make_exp(Complex{0.0, a} * z) * f;
}

struct SlopeOptions {
  std::size_t window = 12;
  double slope_cap = 1e6;
};

struct SlopeEstimate {
  double a_hat = 0.0;        // +inf when ln Mf(t)/t grows without bound
  double running_min = 0.0;  // min of value/t over the window
  bool unbounded = false;
  bool extrapolated = false;
};

/// liminf_{t->inf} ln Mf(t)/t from the tail of a convex curve.
///
/// The running minimum of value/t over the last `window` points is biased
/// low by the sublinear part of ln Mf (for e^{2iz}/(z+i) by ln(1+t)/t).
/// For a convex curve the chord slopes increase to the same limit, so the
/// estimate fits slope(t) = a + beta/t to the tail chords and takes a; it
/// falls back to the running minimum when the tail chords are not
/// increasing.
inline SlopeEstimate estimate_liminf_slope(const SampledCurve& c, const SlopeOptions& opts = {}) {
  const std::size_t n = c.size();
  const std::size_t w = std::min(opts.window, n);
  if (w < 3) throw std::invalid_argument("estimate_liminf_slope: need at least 3 tail points");
  const std::size_t first = n - w;

  SlopeEstimate out;
  out.running_min = std::numeric_limits<double>::infinity();
  bool ratio_increasing = true;
  for (std::size_t i = first; i < n; ++i) {
    const double r = c.v(i) / c.t(i);
    out.running_min = std::min(out.running_min, r);
    if (i > first) ratio_increasing = ratio_increasing && r > c.v(i - 1) / c.t(i - 1);
  }
  if (c.v(n - 1) / c.t(n - 1) > opts.slope_cap && ratio_increasing) {
    out.unbounded = true;
    out.a_hat = std::numeric_limits<double>::infinity();
    return out;
  }

  std::vector<double> u, s;
  for (std::size_t i = first + 1; i < n; ++i) {
    u.push_back(2.0 / (c.t(i) + c.t(i - 1)));
    s.push_back((c.v(i) - c.v(i - 1)) / (c.t(i) - c.t(i - 1)));
  }
  bool chords_increasing = true;
  for (std::size_t k = 1; k < s.size(); ++k) {
    chords_increasing = chords_increasing && s[k] >= s[k - 1] - 1e-9 * (1.0 + std::abs(s[k - 1]));
  }
  if (!chords_increasing) {
    out.a_hat = out.running_min;
    return out;
  }
  // Least squares for s = a + beta*u.
  const double m = static_cast<double>(s.size());
  double su = 0, ss = 0, suu = 0, sus = 0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    su += u[k];
    ss += s[k];
    suu += u[k] * u[k];
    sus += u[k] * s[k];
  }
  const double mean_u = su / m;
  const double mean_s = ss / m;
  const double var_u = suu / m - mean_u * mean_u;
  const double beta = var_u > 0.0 ? (sus / m - mean_u * mean_s) / var_u : 0.0;
  const double a = mean_s - beta * mean_u;
  // Chord slopes of a convex curve never exceed the limit slope.
  out.a_hat = std::max(a, s.back());
  out.extrapolated = true;
  return out;
}

class HypothesisNotMetError : public std::runtime_error {
 public:
  HypothesisNotMetError(const std::string& what, std::optional<MembershipReport> membership = std::nullopt)
      : std::runtime_error(what), membership_(std::move(membership)) {}
  const std::optional<MembershipReport>& membership() const { return membership_; }

 private:
  std::optional<MembershipReport> membership_;
};

struct Theorem3Options {
  double t_min = 0.25;
  double t_max = 1024.0;
  int per_octave = 24;
  std::size_t monotone_tail = 16;
  double monotone_slack = 1e-9;
  double d_floor = -20.0;
  double trend_min_slope = 0.1;  // required decrease of D per unit ln t over the last decade
  SlopeOptions slope{};
  LineMaxOptions line{};
  std::vector<double> schedule = default_schedule();
  MembershipOptions membership{};
};

struct Theorem3Report {
  double a_hat = 0.0;
  SlopeEstimate slope;
  SampledCurve log_mf;
  SampledCurve d_curve;  // ln Mf(t) - a_hat t
  bool tail_monotone = false;
  bool diverges_to_minus_inf = false;
  bool hypothesis_met = false;
  double minorant_slope = 0.0;
  double log_trend_slope = 0.0;  // slope of D against ln t over the last decade
  MembershipReport membership;
};

namespace detail {

inline std::vector<double> theorem3_grid(const Theorem3Options& opts) {
  return octave_grid(std::log2(opts.t_min), std::log2(opts.t_max), opts.per_octave);
}

}  // namespace detail

/// Asymptotic check on a geometric grid [1/4, 2^10]. Requires membership
/// f in lambda(p) (HypothesisNotMetError otherwise); ZeroLineError for f = 0.
inline Theorem3Report theorem3_check(const Expr& f, const Weight& w, const Theorem3Options& opts = {}) {
  Theorem3Report rep;
  rep.membership = is_in_small_space(f, w, opts.schedule, opts.membership);
  if (rep.membership.in_small_space != Membership::Yes) {
    throw HypothesisNotMetError(std::string("hypothesis not met: membership in lambda(p) is ") +
                                    to_string(rep.membership.in_small_space),
                                rep.membership);
  }
  const std::vector<double> grid = detail::theorem3_grid(opts);
  rep.log_mf = mf_curve(f, grid, opts.line);
  rep.slope = estimate_liminf_slope(rep.log_mf, opts.slope);
  if (rep.slope.unbounded) {
    throw HypothesisNotMetError("hypothesis not met: ln Mf(t)/t grows without bound");
  }
  rep.a_hat = rep.slope.a_hat;

  std::vector<double> d(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) d[i] = rep.log_mf.v(i) - rep.a_hat * grid[i];
  rep.d_curve = SampledCurve(grid, d, "ln Mf - a t");

  const std::size_t n = d.size();
  const std::size_t k = std::min(opts.monotone_tail, n);
  rep.tail_monotone = true;
  for (std::size_t i = n - k + 1; i < n; ++i) {
    rep.tail_monotone = rep.tail_monotone && d[i] <= d[i - 1] + opts.monotone_slack;
  }

  // Over the last decade: D non-increasing and falling linearly in ln t.
  std::vector<double> lt, dv;
  for (std::size_t i = 0; i < n; ++i) {
    if (grid[i] >= opts.t_max / 10.0) {
      lt.push_back(std::log(grid[i]));
      dv.push_back(d[i]);
    }
  }
  bool decade_monotone = lt.size() >= 2;
  for (std::size_t i = 1; i < dv.size(); ++i) decade_monotone = decade_monotone && dv[i] <= dv[i - 1] + opts.monotone_slack;
  if (lt.size() >= 2) {
    double ml = 0, md = 0;
    for (std::size_t i = 0; i < lt.size(); ++i) {
      ml += lt[i];
      md += dv[i];
    }
    ml /= static_cast<double>(lt.size());
    md /= static_cast<double>(lt.size());
    double num = 0, den = 0;
    for (std::size_t i = 0; i < lt.size(); ++i) {
      num += (lt[i] - ml) * (dv[i] - md);
      den += (lt[i] - ml) * (lt[i] - ml);
    }
    rep.log_trend_slope = den > 0.0 ? num / den : 0.0;
  }
  const bool sustained = decade_monotone && rep.log_trend_slope <= -opts.trend_min_slope;
  rep.diverges_to_minus_inf = rep.tail_monotone && (d.back() < opts.d_floor || sustained);

  try {
    rep.minorant_slope = affine_minorant_of_curve(rep.log_mf).a;
    rep.hypothesis_met = std::isfinite(rep.a_hat) && rep.a_hat >= rep.minorant_slope - 1e-6;
  } catch (const MinorantVerificationError&) {
    rep.minorant_slope = std::numeric_limits<double>::quiet_NaN();
    rep.hypothesis_met = false;
  }
  return rep;
}

struct PropertyCheck {
  std::string name;
  bool passed = false;
  double defect = 0.0;  // worst-case numeric evidence for the check
  std::string detail;
};

struct FPropertyReport {
  double a_hat = 0.0;
  double A = 0.0;  // sup_{Im z >= 1} |F| on the grid
  std::array<PropertyCheck, 6> checks;
  std::vector<double> identity_grid;
  SampledCurve log_mF;

  bool all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.passed; });
  }
};

struct FPropertyOptions {
  Theorem3Options theorem3{};
  std::size_t identity_points = 16;
  double identity_tol = 1e-9;
  double convexity_tol = 1e-6;
  double slope_tol = 0.05;
  double monotone_slack = 1e-9;
  double decay_y_lo = 1.0;
  double decay_y_hi = 4.0;
  double decay_threshold = 1e-3;
};

/// Evaluates the six listed properties of F(z) = e^{i a z} f(z) with a the
/// estimated liminf slope. Needs f in lambda(p) (HypothesisNotMetError).
inline FPropertyReport verify_F_properties(const Expr& f, const Weight& w, const FPropertyOptions& opts = {}) {
  const Theorem3Report t3 = theorem3_check(f, w, opts.theorem3);
  FPropertyReport rep;
  rep.a_hat = t3.a_hat;
  const Expr F = build_F(f, rep.a_hat);
  const std::vector<double> grid = t3.log_mf.grid();
  const LineMaxOptions& line = opts.theorem3.line;

  // (1) modulus identity on a 16-point grid, F evaluated independently.
  {
    rep.identity_grid = geometric_grid(opts.theorem3.t_min, opts.theorem3.t_max, opts.identity_points);
    const SampledCurve lf = mf_curve(f, rep.identity_grid, line);
    const SampledCurve lF = mf_curve(F, rep.identity_grid, line, "ln MF");
    double worst = 0.0;
    for (std::size_t i = 0; i < lf.size(); ++i) {
      worst = std::max(worst, std::abs(lF.v(i) - (lf.v(i) - rep.a_hat * lf.t(i))));
    }
    rep.checks[0] = {"ln MF = ln Mf - a t", worst <= opts.identity_tol, worst, "max abs deviation on 16 points"};
  }

  rep.log_mF = mf_curve(F, grid, line, "ln MF");
  const SampledCurve& c = rep.log_mF;
  const std::size_t n = c.size();

  // (2) convexity.
  {
    const ConvexityReport conv = check_log_convexity(c, opts.convexity_tol);
    rep.checks[1] = {"ln MF convex", conv.passed, conv.worst_defect,
                     "worst chord defect at t = " + std::to_string(conv.worst_at)};
  }
  // (3) liminf ln MF(t)/t = 0.
  {
    const std::size_t wdw = std::min(opts.theorem3.slope.window, n);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = n - wdw; i < n; ++i) best = std::min(best, std::abs(c.v(i) / c.t(i)));
    rep.checks[2] = {"liminf ln MF(t)/t = 0", best <= opts.slope_tol, best, "min |ln MF(t)/t| over the tail"};
  }
  // (4) ln MF non-increasing.
  {
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < n; ++i) worst = std::max(worst, c.v(i) - c.v(i - 1));
    rep.checks[3] = {"ln MF decreasing", worst <= opts.monotone_slack, worst, "largest increase between grid points"};
  }
  // (5) bounded above on [1/2, inf) by its value at 1/2; A finite and > 0.
  {
    double at_half = std::numeric_limits<double>::quiet_NaN();
    double top = -std::numeric_limits<double>::infinity();
    double top_from_one = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      if (c.t(i) == 0.5) at_half = c.v(i);
      if (c.t(i) >= 0.5) top = std::max(top, c.v(i));
      if (c.t(i) >= 1.0) top_from_one = std::max(top_from_one, c.v(i));
    }
    if (std::isnan(at_half)) at_half = line_max(F, 0.5, line).log_value;
    rep.A = std::exp(top_from_one);
    const bool ok = std::isfinite(at_half) && top <= at_half + opts.monotone_slack && std::isfinite(rep.A) && rep.A > 0.0;
    rep.checks[4] = {"ln MF bounded above on [1/2, inf)", ok, top - at_half, "max over [1/2, t_max] minus ln MF(1/2)"};
  }
  // (6) uniform x-decay on the band [1, 4].
  try {
    const double X = horizontal_decay_threshold(F, opts.decay_y_lo, opts.decay_y_hi, opts.decay_threshold);
    rep.checks[5] = {"F -> 0 as |x| -> inf uniformly on bands", true, X, "decay threshold X"};
  } catch (const DecayNotFoundError& e) {
    rep.checks[5] = {"F -> 0 as |x| -> inf uniformly on bands", false, std::numeric_limits<double>::infinity(), e.what()};
  }
  return rep;
}

}  // namespace hpw

#endif  // HPW_THEOREMS_HPP
