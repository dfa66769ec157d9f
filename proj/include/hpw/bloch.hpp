#ifndef HPW_BLOCH_HPP
#define HPW_BLOCH_HPP

/// \file
/// Disk Bloch spaces B, B0 against Lambda(t), lambda(t) on the upper half
/// plane through the Cayley map w = (1+iz)/(1-iz) and
/// g_f(z) = 4 f'(w) / (1-iz)^2.
///
/// Pointwise, (Im z)|g_f(z)| = (1-|w|^2)|f'(w)|, so the Bloch seminorm of f
/// and the weighted norm of g_f with p(t) = t are the same supremum.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hpw/expr.hpp"
#include "hpw/golden.hpp"
#include "hpw/halfnorm.hpp"
#include "hpw/parallel.hpp"
#include "hpw/scaled.hpp"
#include "hpw/weights.hpp"

namespace hpw {

/// Holomorphic function on the unit disk, in the variable w, with its
/// derivative. May be given by its derivative alone when f itself is not
/// expressible (f' = 1/(1-w) has f = -log(1-w)).
class DiskFunction {
 public:
  static DiskFunction from_function(const Expr& f) {
    check_variable(f);
    return DiskFunction(f, differentiate(f));
  }
  static DiskFunction from_derivative(const Expr& df) {
    check_variable(df);
    return DiskFunction(std::nullopt, df);
  }

  const std::optional<Expr>& function() const { return f_; }
  const Expr& derivative() const { return df_; }

 private:
  DiskFunction(std::optional<Expr> f, Expr df) : f_(std::move(f)), df_(std::move(df)) {}
  static void check_variable(const Expr& e) {
    if (e.variable() != "w") throw std::invalid_argument("disk functions are expressions in w");
  }

  std::optional<Expr> f_;
  Expr df_;
};

inline Complex cayley_to_disk(Complex z) {
  const Complex iz = Complex{0.0, 1.0} * z;
  return (1.0 + iz) / (1.0 - iz);
}

inline Complex cayley_to_halfplane(Complex w) {
  if (std::abs(1.0 + w) < kPoleThreshold) throw std::domain_error("cayley_to_halfplane: w = -1 has no image");
  return Complex{0.0, 1.0} * (1.0 - w) / (1.0 + w);
}

/// g_f(z) = 4 f'((1+iz)/(1-iz)) / (1-iz)^2 as an expression in z.
inline Expr g_transform(const DiskFunction& df) {
  const Expr z = make_var("z");
  const Expr iz = Complex{0.0, 1.0} * z;
  const Expr w = (Complex{1.0, 0.0} + iz) / (Complex{1.0, 0.0} - iz);
  const Expr fprime = substitute(df.derivative(), w);
  return Complex{4.0, 0.0} * fprime / make_pow(Complex{1.0, 0.0} - iz, 2);
}

struct DiskGridOptions {
  std::size_t radii = 128;
  std::size_t angles = 256;
  double min_gap = 1e-6;  // smallest 1 - r
  int refine_rounds = 4;
};

struct DiskSup {
  double value = 0.0;
  double log_value = -std::numeric_limits<double>::infinity();
  Complex argmax{};
};

namespace detail {

// ln((1-r^2)|f'(r e^{i theta})|) with 1 - r = gap.
inline double bloch_log_density(const Expr& dfx, double gap, double theta) {
  const double r = 1.0 - gap;
  const double l = log_abs(dfx, std::polar(r, theta));
  if (l == -std::numeric_limits<double>::infinity()) return l;
  return std::log(gap * (2.0 - gap)) + l;
}

}  // namespace detail

/// sup_{|w|<1} (1-|w|^2)|f'(w)| over a polar grid whose radii crowd
/// geometrically towards the circle (1-r from 1 down to 1e-6), then
/// coordinate-wise golden refinement around the best cell.
inline DiskSup bloch_seminorm_detail(const DiskFunction& df, const DiskGridOptions& opts = {}) {
  const Expr& d = df.derivative();
  const std::vector<double> gaps = [&] {
    std::vector<double> g = geometric_grid(opts.min_gap, 1.0, opts.radii);
    std::reverse(g.begin(), g.end());  // 1 (centre) ... min_gap (edge)
    return g;
  }();
  const double dtheta = 2.0 * std::numbers::pi / static_cast<double>(opts.angles);
  struct Cell {
    double v = -std::numeric_limits<double>::infinity();
    std::size_t ir = 0, ia = 0;
  };
  std::vector<Cell> per_ring(gaps.size());
  parallel_for(gaps.size(), [&](std::size_t i) {
    Cell best;
    for (std::size_t k = 0; k < opts.angles; ++k) {
      const double v = detail::bloch_log_density(d, gaps[i], dtheta * static_cast<double>(k));
      if (v > best.v) best = {v, i, k};
    }
    per_ring[i] = best;
  });
  Cell best;
  for (const auto& c : per_ring) {
    if (c.v > best.v) best = c;
  }
  DiskSup out;
  if (best.v == -std::numeric_limits<double>::infinity()) return out;

  double lg = std::log(gaps[best.ir]);
  double th = dtheta * static_cast<double>(best.ia);
  const double lg_lo = std::log(gaps[std::min(best.ir + 1, gaps.size() - 1)]);
  const double lg_hi = std::log(gaps[best.ir > 0 ? best.ir - 1 : 0]);
  const double th_lo = th - dtheta;
  const double th_hi = th + dtheta;
  double val = best.v;
  for (int round = 0; round < opts.refine_rounds; ++round) {
    if (lg_hi > lg_lo) {
      const ScalarMax m = golden_maximize([&](double u) { return detail::bloch_log_density(d, std::exp(u), th); },
                                          lg_lo, lg_hi, [](double) { return 1e-11; });
      if (m.value > val) {
        val = m.value;
        lg = m.x;
      }
    }
    const ScalarMax m = golden_maximize([&](double u) { return detail::bloch_log_density(d, std::exp(lg), u); },
                                        th_lo, th_hi, [](double) { return 1e-11; });
    if (m.value > val) {
      val = m.value;
      th = m.x;
    }
  }
  out.log_value = val;
  out.value = std::exp(val);
  out.argmax = std::polar(1.0 - std::exp(lg), th);
  return out;
}

inline double bloch_seminorm(const DiskFunction& df, const DiskGridOptions& opts = {}) {
  return bloch_seminorm_detail(df, opts).value;
}

/// The identity weight p(t) = t.
inline Weight identity_weight() { return make_weight(parse("t", "t")); }

struct NormComparison {
  double bloch = 0.0;
  double half_plane = 0.0;
  double gap = 0.0;  // relative
  bool passed = false;
  Complex disk_argmax{};
  std::optional<Complex> half_plane_argmax;
};

/// Bloch seminorm of f against ||g_f|| with p(t) = t; passes when the
/// relative gap is at most `tol`.
inline NormComparison compare_norms(const DiskFunction& df, double tol = 1e-4, const DiskGridOptions& disk = {},
                                    const NormOptions& norm = {}) {
  NormComparison out;
  const DiskSup ds = bloch_seminorm_detail(df, disk);
  const Weight w = identity_weight();
  const NormEstimate ne = weighted_norm(g_transform(df), w, norm);
  out.bloch = ds.value;
  out.disk_argmax = ds.argmax;
  out.half_plane = ne.value;
  out.half_plane_argmax = ne.argmax;
  const double scale = std::max(std::abs(out.bloch), std::abs(out.half_plane));
  out.gap = scale > 0.0 ? std::abs(out.bloch - out.half_plane) / scale : 0.0;
  out.passed = out.gap <= tol;
  return out;
}

struct LittleBlochOptions {
  int first_ring = 1;
  int last_ring = 30;  // 1 - r = 2^-k
  std::size_t angles = 256;
  double eps = 1e-6;
  double stable_floor = 1e-3;
  double stable_rel_change = 1e-4;
  std::vector<double> schedule = default_schedule();
  MembershipOptions membership{};
};

struct LittleBlochReport {
  Membership disk_side = Membership::Inconclusive;
  std::vector<std::pair<double, double>> ring_max;  // (1 - r, max over angles)
  MembershipReport half_plane;
  bool agree = false;
};

/// Two independent B0 assessments: ring maxima of (1-|w|^2)|f'(w)| as
/// |w| -> 1 (max over angles is the sampled uniformity in arg w), and
/// lambda(t) membership of g_f.
inline LittleBlochReport little_bloch_check(const DiskFunction& df, const LittleBlochOptions& opts = {}) {
  LittleBlochReport rep;
  const Expr& d = df.derivative();
  const double dtheta = 2.0 * std::numbers::pi / static_cast<double>(opts.angles);
  const std::size_t rings = static_cast<std::size_t>(opts.last_ring - opts.first_ring + 1);
  std::vector<double> ring_log(rings, -std::numeric_limits<double>::infinity());
  parallel_for(rings, [&](std::size_t i) {
    const double gap = std::exp2(-(opts.first_ring + static_cast<int>(i)));
    for (std::size_t k = 0; k < opts.angles; ++k) {
      ring_log[i] = std::max(ring_log[i], detail::bloch_log_density(d, gap, dtheta * static_cast<double>(k)));
    }
  });
  for (std::size_t i = 0; i < rings; ++i) {
    rep.ring_max.emplace_back(std::exp2(-(opts.first_ring + static_cast<int>(i))), std::exp(ring_log[i]));
  }
  const std::size_t n = rep.ring_max.size();
  const double last = rep.ring_max[n - 1].second;
  const double prev = rep.ring_max[n - 2].second;
  bool decreasing = true;
  for (std::size_t i = n - 3; i < n; ++i) {
    decreasing = decreasing && (rep.ring_max[i].second == 0.0 || rep.ring_max[i].second < rep.ring_max[i - 1].second);
  }
  if (last < opts.eps && decreasing) {
    rep.disk_side = Membership::Yes;
  } else if (last > opts.stable_floor && prev > 0.0 && std::abs(last - prev) / prev < opts.stable_rel_change) {
    rep.disk_side = Membership::No;
  } else {
    rep.disk_side = Membership::Inconclusive;
  }
  rep.half_plane = is_in_small_space(g_transform(df), identity_weight(), opts.schedule, opts.membership);
  rep.agree = rep.disk_side != Membership::Inconclusive && rep.disk_side == rep.half_plane.in_small_space;
  return rep;
}

}  // namespace hpw

#endif  // HPW_BLOCH_HPP
