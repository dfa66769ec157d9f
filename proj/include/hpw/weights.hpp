#ifndef HPW_WEIGHTS_HPP
#define HPW_WEIGHTS_HPP

/// \file
/// Weight functions p on (0, inf) and the two triviality decisions:
/// Lambda(p) != {0} iff -ln p admits an affine minorant a*t + b, and
/// lambda(p) != {0} iff additionally p(t) -> 0 as t -> 0+.
///
/// Both "for all t > 0" conditions are decided on a geometric probe grid
/// (2^-40 .. 2^40, six points per octave) with trend tests on the first and
/// last ten octaves. Sampling cannot certify every weight, so Inconclusive
/// is a legitimate answer.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hpw/curve.hpp"
#include "hpw/expr.hpp"
#include "hpw/golden.hpp"
#include "hpw/parallel.hpp"
#include "hpw/scaled.hpp"

namespace hpw {

class NonpositiveWeightError : public std::runtime_error {
 public:
  explicit NonpositiveWeightError(double t)
      : std::runtime_error("weight is not positive at t = " + format(t)), t_(t) {}
  double t() const { return t_; }

 private:
  static std::string format(double t) {
    std::ostringstream os;
    os.precision(17);
    os << t;
    return os.str();
  }
  double t_;
};

struct ProbeGridSpec {
  double lo_exp = -40.0;
  double hi_exp = 40.0;
  int per_octave = 6;
};

/// A validated weight: expression in t plus ln p cached on the probe grid.
/// Values are kept as logarithms; p itself is exp(ln p) and may under- or
/// overflow as a double (e.g. e^{t^2} at t = 2^40).
class Weight {
 public:
  const Expr& expr() const { return expr_; }
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& log_values() const { return log_values_; }
  const ProbeGridSpec& spec() const { return spec_; }

  std::vector<double> values() const {
    std::vector<double> p(log_values_.size());
    std::transform(log_values_.begin(), log_values_.end(), p.begin(), [](double l) { return std::exp(l); });
    return p;
  }

  /// Sampled form of inf_{[1/c, c]} p > 0 for c = 2, 4, ..., 2^40.
  bool condition_one() const { return condition_one_; }

  /// ln p(t) at an arbitrary t > 0. Throws NonpositiveWeightError.
  double log_p(double t) const {
    const RealLog r = eval_real_log(expr_, t);
    if (r.sign <= 0) throw NonpositiveWeightError(t);
    return r.log_abs;
  }

  double p(double t) const { return std::exp(log_p(t)); }

 private:
  friend Weight make_weight(const Expr& e, const ProbeGridSpec& spec);
  Weight(Expr e, ProbeGridSpec spec) : expr_(std::move(e)), spec_(spec) {}

  Expr expr_;
  ProbeGridSpec spec_;
  std::vector<double> grid_;
  std::vector<double> log_values_;
  bool condition_one_ = false;
};

/// Evaluates p on the probe grid. Throws NonpositiveWeightError naming the
/// first (smallest) probe point where p <= 0, or the evaluation error.
inline Weight make_weight(const Expr& e, const ProbeGridSpec& spec = {}) {
  if (!is_real_expression(e)) {
    throw EvalError(EvalErrorKind::NonReal, "weight expression must not contain imaginary constants");
  }
  Weight w(e, spec);
  w.grid_ = octave_grid(spec.lo_exp, spec.hi_exp, spec.per_octave);
  w.log_values_.resize(w.grid_.size());
  std::vector<int> sign(w.grid_.size());
  parallel_for(w.grid_.size(), [&](std::size_t i) {
    const RealLog r = eval_real_log(e, w.grid_[i]);
    sign[i] = r.sign;
    w.log_values_[i] = r.log_abs;
  });
  for (std::size_t i = 0; i < sign.size(); ++i) {
    if (sign[i] <= 0) throw NonpositiveWeightError(w.grid_[i]);
  }
  // Every symmetric window [1/c, c] with c = 2^k: its sampled infimum is
  // positive exactly when every ln p inside is finite.
  w.condition_one_ = true;
  for (int k = 1; static_cast<double>(k) <= std::min(-spec.lo_exp, spec.hi_exp); ++k) {
    const double c = std::exp2(k);
    for (std::size_t i = 0; i < w.grid_.size(); ++i) {
      if (w.grid_[i] >= 1.0 / c && w.grid_[i] <= c && !std::isfinite(w.log_values_[i])) w.condition_one_ = false;
    }
  }
  return w;
}

/// v(t) = -ln p(t) on the probe grid.
inline SampledCurve neglog_curve(const Weight& w) {
  std::vector<double> v(w.log_values().size());
  std::transform(w.log_values().begin(), w.log_values().end(), v.begin(), [](double l) { return -l; });
  return SampledCurve(w.grid(), std::move(v), "-ln p");
}

enum class Verdict { Nontrivial, Trivial, Inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Nontrivial: return "Nontrivial";
    case Verdict::Trivial: return "Trivial";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "";
}

struct ClassificationVerdict {
  Verdict kind = Verdict::Inconclusive;
  std::optional<AffineWitness> witness;  // Nontrivial only
  std::string evidence;                  // Trivial evidence or Inconclusive diagnostics
  std::vector<std::pair<double, double>> samples;
};

struct MinorantOptions {
  double tail_drop = 10.0;      // total drop of v(t)/t over the last octaves
  double head_drop = 50.0;      // drop of v near 0 below min over t >= 1
  double trend_octaves = 10.0;
  double slope_backoff = 0.01;
  int refine_factor = 3;
  double verify_slack = 1e-9;
};

/// Checks a*t + b <= v(t) + slack at every sample.
inline bool verify_witness(const AffineWitness& w, const SampledCurve& v, double slack = 1e-9) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (w.a * v.t(i) + w.b > v.v(i) + slack) return false;
  }
  return true;
}

/// Decides whether the sampled curve v = -ln p admits an affine minorant.
/// `neglog`, when given, evaluates v at arbitrary t; it is used to verify
/// the witness on a grid refine_factor times denser than v's and to polish
/// the intercept to the continuous local minimum of v(t) - a*t.
inline ClassificationVerdict find_affine_minorant(const SampledCurve& v,
                                                  const std::function<double(double)>& neglog = {},
                                                  const MinorantOptions& opts = {}) {
  ClassificationVerdict out;
  const std::size_t n = v.size();
  if (n < 3) {
    out.evidence = "curve too short";
    return out;
  }
  const double t_min = v.t(0);
  const double t_max = v.t(n - 1);
  const double tail_start = t_max / std::exp2(opts.trend_octaves);
  const double head_end = t_min * std::exp2(opts.trend_octaves);
  const double middle = std::sqrt(t_min * t_max);

  // (i) v(t)/t heading to -inf: no slope stays below v at infinity.
  {
    std::vector<std::size_t> tail;
    for (std::size_t i = 0; i < n; ++i) {
      if (v.t(i) >= tail_start) tail.push_back(i);
    }
    bool decreasing = tail.size() >= 2;
    for (std::size_t k = 1; k < tail.size() && decreasing; ++k) {
      const double prev = v.v(tail[k - 1]) / v.t(tail[k - 1]);
      const double cur = v.v(tail[k]) / v.t(tail[k]);
      decreasing = cur <= prev + 1e-12 * (1.0 + std::abs(prev));
    }
    if (decreasing) {
      const double first = v.v(tail.front()) / v.t(tail.front());
      const double last = v.v(tail.back()) / v.t(tail.back());
      if (first - last > opts.tail_drop) {
        out.kind = Verdict::Trivial;
        out.evidence = "-ln p(t)/t decreases without bound on the last octaves (drop " + std::to_string(first - last) +
                       "); no slope a keeps a*t below -ln p as t -> inf";
        out.samples = {{v.t(tail.front()), v.v(tail.front())}, {v.t(tail.back()), v.v(tail.back())}};
        return out;
      }
    }
  }

  // (ii) v unbounded below near 0: no intercept works.
  {
    double min_upper = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      if (v.t(i) >= std::min(1.0, middle)) min_upper = std::min(min_upper, v.v(i));
    }
    std::vector<std::size_t> head;
    for (std::size_t i = 0; i < n; ++i) {
      if (v.t(i) <= head_end) head.push_back(i);
    }
    bool still_decreasing = head.size() >= 2;  // decreasing as t -> 0+
    for (std::size_t k = 1; k < head.size() && still_decreasing; ++k) {
      still_decreasing = v.v(head[k - 1]) < v.v(head[k]);
    }
    if (still_decreasing && v.v(0) < min_upper - opts.head_drop) {
      out.kind = Verdict::Trivial;
      out.evidence = "-ln p(t) keeps decreasing as t -> 0+ and falls " + std::to_string(min_upper - v.v(0)) +
                     " below its minimum over t >= 1; no intercept b works";
      out.samples = {{v.t(head.back()), v.v(head.back())}, {v.t(0), v.v(0)}};
      return out;
    }
  }

  // (iii) candidate witness.
  double s_inf = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (v.t(i) >= middle) s_inf = std::min(s_inf, v.v(i) / v.t(i));
  }
  AffineWitness w;
  w.a = s_inf - opts.slope_backoff * (1.0 + std::abs(s_inf));

  std::vector<double> ts;
  std::vector<double> vs;
  if (neglog) {
    const std::size_t m = (n - 1) * static_cast<std::size_t>(opts.refine_factor) + 1;
    ts.resize(m);
    vs.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t i = j / static_cast<std::size_t>(opts.refine_factor);
      const std::size_t r = j % static_cast<std::size_t>(opts.refine_factor);
      ts[j] = r == 0 ? v.t(i)
                     : v.t(i) * std::pow(v.t(i + 1) / v.t(i), static_cast<double>(r) / opts.refine_factor);
    }
    try {
      parallel_for(m, [&](std::size_t j) {
        vs[j] = (j % static_cast<std::size_t>(opts.refine_factor) == 0) ? v.v(j / static_cast<std::size_t>(opts.refine_factor))
                                                                         : neglog(ts[j]);
      });
    } catch (const std::exception& ex) {
      out.kind = Verdict::Inconclusive;
      out.evidence = std::string("refined verification grid could not be evaluated: ") + ex.what();
      return out;
    }
  } else {
    ts = v.grid();
    vs = v.values();
  }
  for (double x : vs) {
    if (!std::isfinite(x)) {
      out.kind = Verdict::Inconclusive;
      out.evidence = "non-finite -ln p on the refined grid";
      return out;
    }
  }

  std::size_t arg = 0;
  w.b = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < ts.size(); ++j) {
    const double r = vs[j] - w.a * ts[j];
    if (r < w.b) {
      w.b = r;
      arg = j;
    }
  }
  if (neglog) {
    // Continuous minimum of v(t) - a*t next to the best refined sample.
    const double lo = std::log(ts[arg > 0 ? arg - 1 : 0]);
    const double hi = std::log(ts[std::min(arg + 1, ts.size() - 1)]);
    if (hi > lo) {
      try {
        const double a = w.a;
        const ScalarMax m = golden_maximize([&](double u) {
          const double t = std::exp(u);
          return -(neglog(t) - a * t);
        }, lo, hi, [](double) { return 1e-12; });
        w.b = std::min(w.b, -m.value);
      } catch (const std::exception&) {
        // keep the sampled minimum; verification below decides
      }
    }
  }

  SampledCurve refined(ts, vs, "-ln p (refined)");
  if (!std::isfinite(w.a) || !std::isfinite(w.b)) {
    out.kind = Verdict::Inconclusive;
    out.evidence = "witness is not finite";
    return out;
  }
  std::vector<std::pair<double, double>> bad;
  for (std::size_t j = 0; j < ts.size(); ++j) {
    if (w.a * ts[j] + w.b > vs[j] + opts.verify_slack) bad.emplace_back(ts[j], vs[j]);
  }
  if (!bad.empty()) {
    out.kind = Verdict::Inconclusive;
    out.evidence = "candidate witness violates the minorant inequality on the refined grid";
    out.samples = std::move(bad);
    return out;
  }
  out.kind = Verdict::Nontrivial;
  out.witness = w;
  return out;
}

enum class LimitTrend { ConvergedToZero, ConvergedNonzero, Diverging, Oscillating };

inline const char* to_string(LimitTrend t) {
  switch (t) {
    case LimitTrend::ConvergedToZero: return "converged-to-zero";
    case LimitTrend::ConvergedNonzero: return "converged-nonzero";
    case LimitTrend::Diverging: return "diverging";
    case LimitTrend::Oscillating: return "oscillating";
  }
  return "";
}

struct LimitEstimate {
  double value = 0.0;  // +inf when diverging
  LimitTrend trend = LimitTrend::Oscillating;
};

/// Trend of p at t = 2^-k, k = 20..40, judged on the last 8 samples.
inline LimitEstimate limit_at_zero(const Weight& w, double tol_zero = 1e-9) {
  std::vector<double> logs;
  for (int k = 20; k <= 40; ++k) logs.push_back(w.log_p(std::exp2(-k)));
  const std::vector<double> last(logs.end() - 8, logs.end());
  const double log_tol = std::log(tol_zero);

  LimitEstimate out;
  out.value = std::exp(last.back());
  bool below = true, decreasing = true, increasing = true;
  for (std::size_t i = 0; i < last.size(); ++i) {
    below = below && last[i] < log_tol;
    if (i > 0) {
      decreasing = decreasing && last[i] < last[i - 1];
      increasing = increasing && last[i] > last[i - 1];
    }
  }
  const auto [lo, hi] = std::minmax_element(last.begin(), last.end());
  if (below && decreasing) {
    out.trend = LimitTrend::ConvergedToZero;
  } else if (*lo > log_tol && std::expm1(*hi - *lo) <= 1e-6) {
    out.trend = LimitTrend::ConvergedNonzero;
  } else if (increasing) {
    out.trend = LimitTrend::Diverging;
    out.value = std::numeric_limits<double>::infinity();
  } else {
    out.trend = LimitTrend::Oscillating;
  }
  return out;
}

/// Lambda(p) != {0} decision.
inline ClassificationVerdict classify_big_space(const Weight& w, const MinorantOptions& opts = {}) {
  return find_affine_minorant(neglog_curve(w), [&w](double t) { return -w.log_p(t); }, opts);
}

/// lambda(p) != {0} decision: the Lambda(p) condition plus p -> 0 at 0+.
inline ClassificationVerdict classify_small_space(const Weight& w, const MinorantOptions& opts = {},
                                                  double tol_zero = 1e-9) {
  ClassificationVerdict big = classify_big_space(w, opts);
  const LimitEstimate lim = limit_at_zero(w, tol_zero);
  if (big.kind == Verdict::Trivial) return big;
  ClassificationVerdict out;
  if (lim.trend == LimitTrend::ConvergedNonzero || lim.trend == LimitTrend::Diverging) {
    out.kind = Verdict::Trivial;
    out.evidence = std::string("p(t) does not tend to 0 as t -> 0+ (trend ") + to_string(lim.trend) + ")";
    out.samples = {{std::exp2(-40), lim.value}};
    return out;
  }
  if (big.kind == Verdict::Nontrivial && lim.trend == LimitTrend::ConvergedToZero) {
    out.kind = Verdict::Nontrivial;
    out.witness = big.witness;
    return out;
  }
  out.kind = Verdict::Inconclusive;
  out.evidence = big.kind == Verdict::Inconclusive ? "affine-minorant decision inconclusive: " + big.evidence
                                                   : std::string("limit of p at 0+ undetermined (") + to_string(lim.trend) + ")";
  return out;
}

}  // namespace hpw

#endif  // HPW_WEIGHTS_HPP
