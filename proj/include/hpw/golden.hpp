#ifndef HPW_GOLDEN_HPP
#define HPW_GOLDEN_HPP

#include <cmath>

namespace hpw {

struct ScalarMax {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section maximization of fn on [lo, hi] until the bracket is no
/// wider than tol(mid). Returns the best probe seen, endpoints included, so
/// a monotone function still reports its edge maximum.
template <typename Fn, typename Tol>
ScalarMax golden_maximize(Fn&& fn, double lo, double hi, Tol&& tol, int max_iter = 200) {
  constexpr double inv_phi = 0.61803398874989484820;
  ScalarMax best{lo, fn(lo)};
  auto consider = [&best](double x, double v) {
    if (v > best.value) best = {x, v};
  };
  consider(hi, fn(hi));
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = fn(c);
  double fd = fn(d);
  consider(c, fc);
  consider(d, fd);
  for (int it = 0; it < max_iter && (b - a) > tol(0.5 * (a + b)); ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = fn(c);
      consider(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = fn(d);
      consider(d, fd);
    }
  }
  return best;
}

}  // namespace hpw

#endif  // HPW_GOLDEN_HPP
