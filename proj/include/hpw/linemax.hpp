#ifndef HPW_LINEMAX_HPP
#define HPW_LINEMAX_HPP

/// \file
/// Line maxima Mf(y) = sup_x |f(x+iy)| over horizontal lines, the curve
/// ln Mf on a grid, and the checks that go with it: log-convexity and an
/// affine minorant of a convex curve.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hpw/curve.hpp"
#include "hpw/expr.hpp"
#include "hpw/golden.hpp"
#include "hpw/parallel.hpp"
#include "hpw/scaled.hpp"

namespace hpw {

enum class LineStatus { Converged, NonDecaying, TruncatedAtCap };

inline const char* to_string(LineStatus s) {
  switch (s) {
    case LineStatus::Converged: return "converged";
    case LineStatus::NonDecaying: return "non-decaying";
    case LineStatus::TruncatedAtCap: return "truncated-at-cap";
  }
  return "";
}

struct LineMaxOptions {
  std::size_t scan_points = 1025;  // odd, (n-1)/2 even
  double initial_half_width = 8.0;
  double decay_factor = 1e-6;
  double x_cap = 1073741824.0;  // 2^30
  std::size_t refine_peaks = 5;
  int non_decaying_doublings = 10;
  double non_decaying_ratio = 0.99;
  double x_tol = 1e-10;
};

struct LineMaxResult {
  double y = 0.0;
  double value = 0.0;  // Mf(y); underflows to 0 when log_value < -745
  double log_value = -std::numeric_limits<double>::infinity();
  std::optional<double> argmax_x;
  LineStatus status = LineStatus::Converged;
};

/// Raised by mf_curve when a line maximum is exactly zero, which only
/// happens for the zero function.
class ZeroLineError : public std::runtime_error {
 public:
  explicit ZeroLineError(double y)
      : std::runtime_error("line maximum is zero at y = " + std::to_string(y) + " (f vanishes identically)"), y_(y) {}
  double y() const { return y_; }

 private:
  double y_;
};

namespace detail {

struct PeakCandidate {
  double x;
  double log_value;
  double spacing;
};

// Top-k local maxima of a scan, ties broken towards smaller |x| then x.
inline void collect_peaks(const std::vector<double>& xs, const std::vector<double>& vals, double spacing,
                          std::size_t k, std::vector<PeakCandidate>& out) {
  std::vector<PeakCandidate> local;
  const std::size_t n = vals.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (vals[i] == -std::numeric_limits<double>::infinity()) continue;
    const bool left_ok = i == 0 || vals[i] >= vals[i - 1];
    const bool right_ok = i + 1 == n || vals[i] >= vals[i + 1];
    if (left_ok && right_ok) local.push_back({xs[i], vals[i], spacing});
  }
  auto better = [](const PeakCandidate& a, const PeakCandidate& b) {
    if (a.log_value != b.log_value) return a.log_value > b.log_value;
    if (std::abs(a.x) != std::abs(b.x)) return std::abs(a.x) < std::abs(b.x);
    return a.x < b.x;
  };
  const std::size_t keep = std::min(k, local.size());
  std::partial_sort(local.begin(), local.begin() + static_cast<std::ptrdiff_t>(keep), local.end(), better);
  out.insert(out.end(), local.begin(), local.begin() + static_cast<std::ptrdiff_t>(keep));
}

}  // namespace detail

/// Mf(y) by an adaptive symmetric scan: the window [-X, X] doubles from 8
/// until both edge samples fall to decay_factor times the peak, the window
/// passes x_cap, or (after 10 doublings) the edges stay within 1% of the
/// peak, which marks a line whose modulus does not decay. Every doubling
/// reuses the inner half of the previous scan. The best few local maxima
/// are then polished by golden-section search.
inline LineMaxResult line_max(const Expr& f, double y, const LineMaxOptions& opts = {}) {
  if (!(y > 0.0)) throw std::invalid_argument("line_max: y must be positive");
  const std::size_t n = opts.scan_points;
  if (n < 5 || n % 2 == 0 || ((n - 1) / 2) % 2 != 0) {
    throw std::invalid_argument("line_max: scan_points must be odd with an even half-width");
  }
  const long half = static_cast<long>((n - 1) / 2);
  auto g = [&](double x) { return log_abs(f, Complex{x, y}); };

  const double log_decay = std::log(opts.decay_factor);
  const double log_ratio = std::log(opts.non_decaying_ratio);
  double X = opts.initial_half_width;
  std::vector<double> xs(n), vals(n), prev;
  std::vector<detail::PeakCandidate> candidates;
  double peak = -std::numeric_limits<double>::infinity();
  LineStatus status = LineStatus::TruncatedAtCap;

  for (int doublings = 0; X <= opts.x_cap; ++doublings, X *= 2.0) {
    const double h = X / static_cast<double>(half);
    for (long k = -half; k <= half; ++k) {
      const auto idx = static_cast<std::size_t>(k + half);
      xs[idx] = static_cast<double>(k) * h;
      if (!prev.empty() && 2 * std::abs(k) <= half) {
        vals[idx] = prev[static_cast<std::size_t>(2 * k + half)];
      } else {
        vals[idx] = g(xs[idx]);
      }
    }
    for (double v : vals) peak = std::max(peak, v);
    detail::collect_peaks(xs, vals, h, opts.refine_peaks, candidates);
    prev = vals;

    const double edge = std::max(vals.front(), vals.back());
    if (peak == -std::numeric_limits<double>::infinity() || edge <= peak + log_decay) {
      status = LineStatus::Converged;
      break;
    }
    if (doublings >= opts.non_decaying_doublings && edge - peak >= log_ratio) {
      status = LineStatus::NonDecaying;
      break;
    }
  }

  LineMaxResult r;
  r.y = y;
  r.status = status;
  if (peak == -std::numeric_limits<double>::infinity()) return r;

  std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
    if (a.log_value != b.log_value) return a.log_value > b.log_value;
    if (std::abs(a.x) != std::abs(b.x)) return std::abs(a.x) < std::abs(b.x);
    if (a.x != b.x) return a.x < b.x;
    return a.spacing < b.spacing;
  });
  double best_x = candidates.front().x;
  double best = candidates.front().log_value;
  std::vector<detail::PeakCandidate> chosen;
  for (const auto& c : candidates) {
    if (chosen.size() >= opts.refine_peaks) break;
    const bool duplicate = std::any_of(chosen.begin(), chosen.end(), [&](const auto& o) {
      return std::abs(o.x - c.x) <= std::max(o.spacing, c.spacing);
    });
    if (!duplicate) chosen.push_back(c);
  }
  const double tol_rel = opts.x_tol;
  for (const auto& c : chosen) {
    const ScalarMax m = golden_maximize(g, c.x - c.spacing, c.x + c.spacing,
                                        [tol_rel](double x) { return tol_rel * (1.0 + std::abs(x)); });
    if (m.value > best) {
      best = m.value;
      best_x = m.x;
    }
  }
  r.log_value = best;
  r.value = std::exp(best);
  r.argmax_x = best_x;
  return r;
}

/// ln Mf on `grid`, one line_max per point (run in parallel).
/// Throws ZeroLineError if any line maximum is zero.
inline SampledCurve mf_curve(const Expr& f, std::span<const double> grid, const LineMaxOptions& opts = {},
                             std::string label = "ln Mf") {
  std::vector<double> values(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    if (!(grid[i] > 0.0)) throw std::invalid_argument("mf_curve: grid points must be positive");
    values[i] = line_max(f, grid[i], opts).log_value;
  });
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (values[i] == -std::numeric_limits<double>::infinity()) throw ZeroLineError(grid[i]);
  }
  return SampledCurve(std::vector<double>(grid.begin(), grid.end()), std::move(values), std::move(label));
}

struct ConvexityReport {
  double worst_defect = 0.0;  // max over triples of value(t2) - chord(t2)
  double worst_at = 0.0;
  double tol = 1e-6;
  bool passed = true;
};

/// Chord test on every consecutive triple. A defect is how far the middle
/// value rises above the chord of its neighbours.
inline ConvexityReport check_log_convexity(const SampledCurve& c, double tol = 1e-6) {
  if (c.size() < 3) throw std::invalid_argument("check_log_convexity: need at least 3 points");
  ConvexityReport r;
  r.tol = tol;
  r.worst_defect = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < c.size(); ++i) {
    const double t1 = c.t(i - 1), t2 = c.t(i), t3 = c.t(i + 1);
    const double chord = c.v(i - 1) + (c.v(i + 1) - c.v(i - 1)) * (t2 - t1) / (t3 - t1);
    const double defect = c.v(i) - chord;
    if (defect > r.worst_defect) {
      r.worst_defect = defect;
      r.worst_at = t2;
    }
  }
  r.passed = r.worst_defect <= tol;
  return r;
}

class MinorantVerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Affine minorant of a convex sampled curve: slope of the last chord
/// backed off by 1% (of 1+|slope|), intercept the exact sampled minimum.
inline AffineWitness affine_minorant_of_curve(const SampledCurve& c, double tol = 1e-6) {
  const ConvexityReport conv = check_log_convexity(c, tol);
  if (!conv.passed) {
    throw MinorantVerificationError("curve is not convex (defect " + std::to_string(conv.worst_defect) + " at t = " +
                                    std::to_string(conv.worst_at) + ")");
  }
  const std::size_t n = c.size();
  const double slope = (c.v(n - 1) - c.v(n - 2)) / (c.t(n - 1) - c.t(n - 2));
  AffineWitness w;
  w.a = slope - 0.01 * (1.0 + std::abs(slope));
  w.b = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) w.b = std::min(w.b, c.v(i) - w.a * c.t(i));
  for (std::size_t i = 0; i < n; ++i) {
    if (w.a * c.t(i) + w.b > c.v(i) + 1e-9 * (1.0 + std::abs(c.v(i)))) {
      throw MinorantVerificationError("minorant fails at t = " + std::to_string(c.t(i)));
    }
  }
  return w;
}

}  // namespace hpw

#endif  // HPW_LINEMAX_HPP
