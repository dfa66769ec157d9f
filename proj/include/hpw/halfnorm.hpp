#ifndef HPW_HALFNORM_HPP
#define HPW_HALFNORM_HPP

/// \file
/// Weighted sup-norm ||f|| = sup_{Im z > 0} p(Im z)|f(z)| and the
/// lambda(p) membership test through suprema outside the boxes
/// K_c = {1/c <= Im z <= c, |Re z| <= c}.
///
/// Everything is computed in log space: p(y) Mf(y) may be a product of an
/// overflowing and an underflowing factor.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstring>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hpw/curve.hpp"
#include "hpw/expr.hpp"
#include "hpw/golden.hpp"
#include "hpw/linemax.hpp"
#include "hpw/parallel.hpp"
#include "hpw/scaled.hpp"
#include "hpw/weights.hpp"

namespace hpw {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

class KBox {
 public:
  explicit KBox(double c) : c_(c) {
    if (!(c >= 1.0) || !std::isfinite(c)) throw std::invalid_argument("KBox: c must be >= 1");
  }
  double c() const { return c_; }
  bool contains(Complex z) const {
    return z.imag() >= 1.0 / c_ && z.imag() <= c_ && std::abs(z.real()) <= c_;
  }

 private:
  double c_;
};

enum class NormStatus { AttainedInterior, ApproachedAtBoundary, Truncated };

inline const char* to_string(NormStatus s) {
  switch (s) {
    case NormStatus::AttainedInterior: return "attained-interior";
    case NormStatus::ApproachedAtBoundary: return "approached-at-boundary";
    case NormStatus::Truncated: return "truncated";
  }
  return "";
}

struct NormOptions {
  double y_lo_exp = -20.0;
  double y_hi_exp = 20.0;
  int per_octave = 6;
  int edge_trend = 5;
  double log_y_tol = 1e-9;
  LineMaxOptions line{};
};

struct NormEstimate {
  double value = 0.0;
  double log_value = kNegInf;
  std::optional<Complex> argmax;
  double y_min = 0.0;
  double y_max = 0.0;
  std::size_t y_points = 0;
  NormStatus status = NormStatus::AttainedInterior;
};

/// ln(p(y) * Mf(y)) memoized by y; shared across threads.
class WeightedLineCache {
 public:
  WeightedLineCache(const Expr& f, const Weight& w, LineMaxOptions opts) : f_(f), w_(w), opts_(opts) {}

  struct Entry {
    double log_value;
    std::optional<double> argmax_x;
    LineStatus status;
  };

  Entry get(double y) {
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = memo_.find(y);
      if (it != memo_.end()) return it->second;
    }
    const LineMaxResult lm = line_max(f_, y, opts_);
    Entry e{lm.log_value == kNegInf ? kNegInf : w_.log_p(y) + lm.log_value, lm.argmax_x, lm.status};
    std::lock_guard<std::mutex> lock(mu_);
    memo_.emplace(y, e);
    return e;
  }

  const Expr& f() const { return f_; }
  const Weight& weight() const { return w_; }

 private:
  const Expr& f_;
  const Weight& w_;
  LineMaxOptions opts_;
  std::mutex mu_;
  std::map<double, Entry> memo_;
};

namespace detail {

struct StripSup {
  double log_value = kNegInf;
  double y = 0.0;
  std::optional<double> x;
  std::size_t index = 0;
  std::vector<double> series;  // ln(p Mf) per grid point
  LineStatus status = LineStatus::Converged;
};

// Max of ln(p(y) Mf(y)) over the y grid, then golden refinement in ln y
// between the neighbours of an interior maximum.
inline StripSup strip_sup(WeightedLineCache& cache, const std::vector<double>& ys, double log_y_tol) {
  StripSup s;
  s.series.resize(ys.size());
  std::vector<WeightedLineCache::Entry> entries(ys.size());
  parallel_for(ys.size(), [&](std::size_t i) { entries[i] = cache.get(ys[i]); });
  for (std::size_t i = 0; i < ys.size(); ++i) {
    s.series[i] = entries[i].log_value;
    if (entries[i].log_value > s.log_value) {
      s.log_value = entries[i].log_value;
      s.index = i;
    }
  }
  if (s.log_value == kNegInf) return s;
  s.y = ys[s.index];
  s.x = entries[s.index].argmax_x;
  s.status = entries[s.index].status;
  if (s.index > 0 && s.index + 1 < ys.size()) {
    const ScalarMax m = golden_maximize([&](double u) { return cache.get(std::exp(u)).log_value; },
                                        std::log(ys[s.index - 1]), std::log(ys[s.index + 1]),
                                        [log_y_tol](double) { return log_y_tol; });
    if (m.value > s.log_value) {
      s.log_value = m.value;
      s.y = std::exp(m.x);
      const auto e = cache.get(s.y);
      s.x = e.argmax_x;
      s.status = e.status;
    }
  }
  return s;
}

}  // namespace detail

/// ||f|| over a geometric y grid (default 241 points on [2^-20, 2^20]) with
/// golden refinement in y. When the best grid point is an edge and the last
/// few values rise towards it, the supremum is only approached there.
inline NormEstimate weighted_norm(const Expr& f, const Weight& w, const NormOptions& opts = {}) {
  const std::vector<double> ys = octave_grid(opts.y_lo_exp, opts.y_hi_exp, opts.per_octave);
  WeightedLineCache cache(f, w, opts.line);
  const detail::StripSup s = detail::strip_sup(cache, ys, opts.log_y_tol);

  NormEstimate out;
  out.y_min = ys.front();
  out.y_max = ys.back();
  out.y_points = ys.size();
  if (s.log_value == kNegInf) return out;
  out.log_value = s.log_value;
  out.value = std::exp(s.log_value);
  out.argmax = Complex{s.x.value_or(0.0), s.y};

  const std::size_t n = ys.size();
  const auto k = static_cast<std::size_t>(std::max(opts.edge_trend, 1));
  if (s.index == 0 || s.index + 1 == n) {
    bool rising = n > k;
    for (std::size_t j = 0; j + 1 < k && rising; ++j) {
      if (s.index == 0) rising = s.series[j] > s.series[j + 1];
      else rising = s.series[n - 1 - j] > s.series[n - 2 - j];
    }
    out.status = rising ? NormStatus::ApproachedAtBoundary : NormStatus::Truncated;
  } else {
    out.status = NormStatus::AttainedInterior;
  }
  if (s.status == LineStatus::TruncatedAtCap) out.status = NormStatus::Truncated;
  return out;
}

struct TailOptions {
  double strip_octaves = 20.0;  // strips reach 2^-20/c below and 2^20*c above the box
  int strip_per_octave = 6;
  double x_cap = 1073741824.0;  // side-band sweep limit, 2^30
  int side_x_per_octave = 8;
  std::size_t side_y_linear = 64;
  int side_y_per_octave = 4;
  int side_refine_rounds = 3;
  double log_y_tol = 1e-9;
  LineMaxOptions line{};
};

struct RegionalSup {
  double lower = 0.0;  // 0 < y < 1/c
  double upper = 0.0;  // y > c
  double side = 0.0;   // 1/c <= y <= c, |x| > c
  double log_lower = kNegInf;
  double log_upper = kNegInf;
  double log_side = kNegInf;
  Complex side_argmax{};

  double total() const { return std::max({lower, upper, side}); }
  double log_total() const { return std::max({log_lower, log_upper, log_side}); }
};

namespace detail {

inline std::vector<double> log_spaced(double lo, double hi, int per_octave) {
  const double octaves = std::log2(hi / lo);
  const auto n = static_cast<std::size_t>(std::max(2.0, std::ceil(octaves * per_octave) + 1.0));
  return geometric_grid(lo, hi, n);
}

inline void side_band_sup(const Expr& f, const Weight& w, double c, const TailOptions& opts, RegionalSup& out) {
  if (c >= opts.x_cap) return;
  std::vector<double> ys;
  const double ylo = 1.0 / c;
  const double yhi = c;
  if (yhi > ylo) {
    for (std::size_t j = 0; j < opts.side_y_linear; ++j) {
      ys.push_back(ylo + (yhi - ylo) * static_cast<double>(j) / static_cast<double>(opts.side_y_linear - 1));
    }
    const std::vector<double> geo = log_spaced(ylo, yhi, opts.side_y_per_octave);
    ys.insert(ys.end(), geo.begin(), geo.end());
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  } else {
    ys.push_back(1.0);
  }
  const std::vector<double> xs = log_spaced(c, opts.x_cap, opts.side_x_per_octave);

  std::vector<double> logp(ys.size());
  for (std::size_t j = 0; j < ys.size(); ++j) logp[j] = w.log_p(ys[j]);

  struct Best {
    double v = kNegInf;
    std::size_t ix = 0, iy = 0;
    double sign = 1.0;
  };
  std::vector<Best> row_best(ys.size());
  parallel_for(ys.size(), [&](std::size_t j) {
    Best b;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      for (double sign : {1.0, -1.0}) {
        const double v = logp[j] + log_abs(f, Complex{sign * xs[i], ys[j]});
        if (v > b.v) b = {v, i, j, sign};
      }
    }
    row_best[j] = b;
  });
  Best best;
  for (const auto& b : row_best) {
    if (b.v > best.v) best = b;
  }
  if (best.v == kNegInf) return;

  // Coordinate-wise golden refinement inside the neighbouring cells.
  const double sign = best.sign;
  double lx = std::log(xs[best.ix]);
  double y = ys[best.iy];
  const double lx_lo = std::log(xs[best.ix > 0 ? best.ix - 1 : 0]);
  const double lx_hi = std::log(xs[std::min(best.ix + 1, xs.size() - 1)]);
  const double y_lo = ys[best.iy > 0 ? best.iy - 1 : 0];
  const double y_hi = ys[std::min(best.iy + 1, ys.size() - 1)];
  double val = best.v;
  auto h = [&](double lxx, double yy) { return w.log_p(yy) + log_abs(f, Complex{sign * std::exp(lxx), yy}); };
  for (int round = 0; round < opts.side_refine_rounds; ++round) {
    if (lx_hi > lx_lo) {
      const ScalarMax mx = golden_maximize([&](double u) { return h(u, y); }, lx_lo, lx_hi,
                                           [](double) { return 1e-10; });
      if (mx.value > val) {
        val = mx.value;
        lx = mx.x;
      }
    }
    if (y_hi > y_lo) {
      const ScalarMax my = golden_maximize([&](double u) { return h(lx, u); }, y_lo, y_hi,
                                           [](double u) { return 1e-10 * (1.0 + u); });
      if (my.value > val) {
        val = my.value;
        y = my.x;
      }
    }
  }
  out.log_side = val;
  out.side = std::exp(val);
  out.side_argmax = Complex{sign * std::exp(lx), y};
}

inline RegionalSup regional_sups(WeightedLineCache& cache, const KBox& box, const TailOptions& opts) {
  const double c = box.c();
  const double lc = std::log2(c);
  RegionalSup r;
  // Lattice grids 2^{k/per_octave} relative to log2 c, so that neighbouring
  // c = 2^j share most of their lines through the cache.
  const StripSup lower =
      strip_sup(cache, octave_grid(-lc - opts.strip_octaves, -lc, opts.strip_per_octave), opts.log_y_tol);
  const StripSup upper =
      strip_sup(cache, octave_grid(lc, lc + opts.strip_octaves, opts.strip_per_octave), opts.log_y_tol);
  r.log_lower = lower.log_value;
  r.log_upper = upper.log_value;
  r.lower = std::exp(lower.log_value);
  r.upper = std::exp(upper.log_value);
  side_band_sup(cache.f(), cache.weight(), c, opts, r);
  return r;
}

}  // namespace detail

/// The three regional suprema of p(Im z)|f(z)| over D \ K_c.
inline RegionalSup tail_regions(const Expr& f, const Weight& w, const KBox& box, const TailOptions& opts = {}) {
  WeightedLineCache cache(f, w, opts.line);
  return detail::regional_sups(cache, box, opts);
}

/// sup over D \ K_c of p(Im z)|f(z)|: the largest of the lower strip,
/// upper strip and side-band suprema.
inline double tail_sup_outside_box(const Expr& f, const Weight& w, const KBox& box, const TailOptions& opts = {}) {
  return tail_regions(f, w, box, opts).total();
}

enum class Membership { Yes, No, Inconclusive };

inline const char* to_string(Membership m) {
  switch (m) {
    case Membership::Yes: return "yes";
    case Membership::No: return "no";
    case Membership::Inconclusive: return "inconclusive";
  }
  return "";
}

struct MembershipOptions {
  double eps_member = 1e-6;
  double stable_floor = 1e-3;
  double stable_rel_change = 1e-4;
  double decay_ratio = 0.9;
  TailOptions tail{};
};

struct MembershipReport {
  Membership in_small_space = Membership::Inconclusive;
  std::vector<std::pair<double, double>> tail;  // (c, sup outside K_c)
  std::string diagnostics;
};

/// c = 2, 4, ..., 2^24.
inline std::vector<double> default_schedule() {
  std::vector<double> s;
  for (int k = 1; k <= 24; ++k) s.push_back(std::exp2(k));
  return s;
}

/// lambda(p) membership from the tail table c -> sup_{D \ K_c} p|f|.
/// Yes: the last entry is below eps_member and the last three ratios show
/// geometric decay. No: the table settles above stable_floor. The finite
/// schedule can only ever support "yes up to eps_member".
inline MembershipReport is_in_small_space(const Expr& f, const Weight& w,
                                          const std::vector<double>& schedule = default_schedule(),
                                          const MembershipOptions& opts = {}) {
  if (schedule.size() < 4) throw std::invalid_argument("is_in_small_space: schedule needs at least 4 entries");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (!(schedule[i] >= 1.0) || (i > 0 && !(schedule[i] > schedule[i - 1]))) {
      throw std::invalid_argument("is_in_small_space: schedule must be increasing and >= 1");
    }
  }
  WeightedLineCache cache(f, w, opts.tail.line);
  MembershipReport rep;
  std::vector<double> tail(schedule.size());
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    tail[i] = detail::regional_sups(cache, KBox(schedule[i]), opts.tail).total();
  }
  // D \ K_c shrinks as c grows, so the exact table is non-increasing; a later
  // (larger-region-excluded) value above an earlier one means the earlier
  // sampling missed it.
  for (std::size_t i = tail.size() - 1; i-- > 0;) tail[i] = std::max(tail[i], tail[i + 1]);
  for (std::size_t i = 0; i < schedule.size(); ++i) rep.tail.emplace_back(schedule[i], tail[i]);

  const std::size_t n = tail.size();
  bool geometric = true;
  for (std::size_t i = n - 3; i < n; ++i) {
    geometric = geometric && (tail[i] == 0.0 || tail[i] <= opts.decay_ratio * tail[i - 1]);
  }
  const double last = tail[n - 1];
  const double rel_change = tail[n - 2] > 0.0 ? std::abs(last - tail[n - 2]) / tail[n - 2] : 0.0;
  if (last < opts.eps_member && geometric) {
    rep.in_small_space = Membership::Yes;
    rep.diagnostics = "tail below " + std::to_string(opts.eps_member) + " with geometric decay (yes up to eps_member)";
  } else if (last > opts.stable_floor && rel_change < opts.stable_rel_change) {
    rep.in_small_space = Membership::No;
    rep.diagnostics = "tail stabilizes at " + std::to_string(last);
  } else {
    rep.in_small_space = Membership::Inconclusive;
    rep.diagnostics = "tail neither vanishes nor stabilizes (last " + std::to_string(last) + ")";
  }
  return rep;
}

class DecayNotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DecayOptions {
  double x_start = 1.0;
  double x_cap = 1073741824.0;
  std::size_t y_points = 64;
  int x_per_octave = 8;
  int bisection_steps = 40;
};

namespace detail {

inline double sampled_log_sup_beyond(const Expr& f, double X, double y_lo, double y_hi, const DecayOptions& opts) {
  const std::vector<double> xs = X < opts.x_cap ? log_spaced(X, opts.x_cap, opts.x_per_octave) : std::vector<double>{X};
  std::vector<double> row(opts.y_points, kNegInf);
  parallel_for(opts.y_points, [&](std::size_t j) {
    const double y = y_lo + (y_hi - y_lo) * static_cast<double>(j) / static_cast<double>(opts.y_points - 1);
    for (double x : xs) {
      row[j] = std::max({row[j], log_abs(f, Complex{x, y}), log_abs(f, Complex{-x, y})});
    }
  });
  return *std::max_element(row.begin(), row.end());
}

}  // namespace detail

/// Smallest X (doubling from x_start, then bisection inside the last
/// doubling step) with sup |f(x+iy)| <= threshold over |x| >= X and
/// y in [y_lo, y_hi]. Throws DecayNotFoundError when X passes x_cap.
inline double horizontal_decay_threshold(const Expr& f, double y_lo, double y_hi, double threshold,
                                         const DecayOptions& opts = {}) {
  if (!(y_lo > 0.0) || !(y_hi > y_lo)) throw std::invalid_argument("horizontal_decay_threshold: need 0 < y_lo < y_hi");
  if (!(threshold > 0.0)) throw std::invalid_argument("horizontal_decay_threshold: threshold must be positive");
  const double log_thr = std::log(threshold);
  auto ok = [&](double X) { return detail::sampled_log_sup_beyond(f, X, y_lo, y_hi, opts) <= log_thr; };
  double X = opts.x_start;
  while (!ok(X)) {
    X *= 2.0;
    if (X > opts.x_cap) {
      throw DecayNotFoundError("no x-decay below " + std::to_string(threshold) + " up to x_cap");
    }
  }
  if (X == opts.x_start) return X;
  double lo = X / 2.0;
  double hi = X;
  for (int i = 0; i < opts.bisection_steps; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (ok(mid)) hi = mid;
    else lo = mid;
  }
  return hi;
}

}  // namespace hpw

#endif  // HPW_HALFNORM_HPP
