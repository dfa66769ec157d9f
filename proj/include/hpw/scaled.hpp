#ifndef HPW_SCALED_HPP
#define HPW_SCALED_HPP

/// \file
/// Log-scaled evaluation of expression trees. A value is carried as
/// mantissa * e^scale, so |f| can be far outside the double range (for
/// example e^{2iz} at Im z = 2^20) while log|f| stays exact to rounding.

#include <cmath>
#include <limits>

#include "hpw/expr.hpp"

namespace hpw {

/// mantissa * exp(log_scale). Zero is mantissa == 0.
struct Scaled {
  Complex mantissa{0.0, 0.0};
  double log_scale = 0.0;

  bool is_zero() const { return mantissa == Complex{}; }

  double log_abs() const {
    if (is_zero()) return -std::numeric_limits<double>::infinity();
    return std::log(std::abs(mantissa)) + log_scale;
  }

  /// Plain value; may overflow to infinity or underflow to zero.
  Complex value() const { return is_zero() ? Complex{} : mantissa * std::exp(log_scale); }
};

namespace detail {

inline constexpr double kMantissaHigh = 1e100;
inline constexpr double kMantissaLow = 1e-100;
// ln(1e-300): magnitudes below this are treated as a pole when dividing.
inline constexpr double kLogPoleThreshold = -690.77552789821368;

inline Scaled normalized(Complex m, double s) {
  if (m == Complex{}) return {};
  const double a = std::abs(m);
  if (a > kMantissaHigh || a < kMantissaLow) {
    m /= a;
    s += std::log(a);
  }
  if (!std::isfinite(s)) throw EvalError(EvalErrorKind::Overflow, "overflow: log-magnitude is not finite");
  return {m, s};
}

inline Scaled scaled_add(const Scaled& x, const Scaled& y) {
  if (x.is_zero()) return y;
  if (y.is_zero()) return x;
  if (x.log_scale == y.log_scale) return normalized(x.mantissa + y.mantissa, x.log_scale);
  const double lx = x.log_abs();
  const double ly = y.log_abs();
  const double top = lx > ly ? lx : ly;
  const Complex ux = x.mantissa / std::abs(x.mantissa);
  const Complex uy = y.mantissa / std::abs(y.mantissa);
  return normalized(ux * std::exp(lx - top) + uy * std::exp(ly - top), top);
}

inline Scaled scaled_mul(const Scaled& x, const Scaled& y) {
  if (x.is_zero() || y.is_zero()) return {};
  return normalized(x.mantissa * y.mantissa, x.log_scale + y.log_scale);
}

inline Scaled scaled_div(const Scaled& x, const Scaled& y) {
  if (y.is_zero() || y.log_abs() < kLogPoleThreshold) {
    throw EvalError(EvalErrorKind::Pole, "pole: denominator vanishes");
  }
  if (x.is_zero()) return {};
  return normalized(x.mantissa / y.mantissa, x.log_scale - y.log_scale);
}

inline Scaled scaled_pow(const Scaled& base, int n) {
  if (n < 0) {
    return scaled_div(Scaled{{1.0, 0.0}, 0.0}, scaled_pow(base, -n));
  }
  Scaled result{{1.0, 0.0}, 0.0};
  Scaled b = base;
  unsigned m = static_cast<unsigned>(n);
  while (m != 0) {
    if (m & 1u) result = scaled_mul(result, b);
    m >>= 1u;
    if (m != 0) b = scaled_mul(b, b);
  }
  return result;
}

inline Scaled scaled_exp(const Scaled& u) {
  if (u.is_zero()) return {{1.0, 0.0}, 0.0};
  const double factor = std::exp(u.log_scale);
  const double re = u.mantissa.real() * factor;
  const double im = u.mantissa.imag() * factor;
  if (!std::isfinite(re) || !std::isfinite(im)) {
    throw EvalError(EvalErrorKind::Overflow, "overflow: exp argument is not finite");
  }
  if (im == 0.0) return {{1.0, 0.0}, re};
  return {std::polar(1.0, im), re};
}

inline Scaled scaled_node(const Node& n, Complex z) {
  switch (n.kind) {
    case NodeKind::Constant: return normalized(n.value, 0.0);
    case NodeKind::Variable: return normalized(z, 0.0);
    case NodeKind::Negate: {
      Scaled v = scaled_node(*n.lhs, z);
      v.mantissa = -v.mantissa;
      return v;
    }
    case NodeKind::Add: return scaled_add(scaled_node(*n.lhs, z), scaled_node(*n.rhs, z));
    case NodeKind::Subtract: {
      Scaled r = scaled_node(*n.rhs, z);
      r.mantissa = -r.mantissa;
      return scaled_add(scaled_node(*n.lhs, z), r);
    }
    case NodeKind::Multiply: return scaled_mul(scaled_node(*n.lhs, z), scaled_node(*n.rhs, z));
    case NodeKind::Divide: return scaled_div(scaled_node(*n.lhs, z), scaled_node(*n.rhs, z));
    case NodeKind::Power: return scaled_pow(scaled_node(*n.lhs, z), n.exponent);
    case NodeKind::Exp: return scaled_exp(scaled_node(*n.lhs, z));
  }
  return {};
}

}  // namespace detail

/// Evaluates e at z without overflow or underflow of the modulus.
inline Scaled eval_scaled(const Expr& e, Complex z) { return detail::scaled_node(e.root(), z); }

/// ln|e(z)|; -inf where e(z) == 0.
inline double log_abs(const Expr& e, Complex z) { return eval_scaled(e, z).log_abs(); }

/// Sign and log-modulus of a real expression evaluated at a real point.
struct RealLog {
  double log_abs = 0.0;
  int sign = 0;  // -1, 0, +1
};

/// Requires a real expression (see is_real_expression); the arithmetic then
/// never leaves the real axis, so the sign is exact.
inline RealLog eval_real_log(const Expr& e, double t) {
  const Scaled v = eval_scaled(e, Complex{t, 0.0});
  if (v.mantissa.imag() != 0.0) throw EvalError(EvalErrorKind::NonReal, "real expression produced an imaginary part");
  if (v.is_zero()) return {-std::numeric_limits<double>::infinity(), 0};
  return {v.log_abs(), v.mantissa.real() > 0.0 ? 1 : -1};
}

}  // namespace hpw

#endif  // HPW_SCALED_HPP
