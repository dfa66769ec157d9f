#ifndef HPW_CURVE_HPP
#define HPW_CURVE_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hpw {

/// Real function sampled on a strictly increasing positive grid.
class SampledCurve {
 public:
  SampledCurve() = default;
  SampledCurve(std::vector<double> grid, std::vector<double> values, std::string label = {})
      : grid_(std::move(grid)), values_(std::move(values)), label_(std::move(label)) {
    if (grid_.size() != values_.size()) throw std::invalid_argument("SampledCurve: grid/value size mismatch");
    for (std::size_t i = 0; i < grid_.size(); ++i) {
      if (!(grid_[i] > 0.0) || !std::isfinite(grid_[i])) throw std::invalid_argument("SampledCurve: grid must be positive");
      if (i > 0 && !(grid_[i] > grid_[i - 1])) throw std::invalid_argument("SampledCurve: grid must be strictly increasing");
      if (!std::isfinite(values_[i])) throw std::invalid_argument("SampledCurve: values must be finite");
    }
  }

  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  const std::string& label() const { return label_; }
  std::size_t size() const { return grid_.size(); }
  double t(std::size_t i) const { return grid_[i]; }
  double v(std::size_t i) const { return values_[i]; }

 private:
  std::vector<double> grid_;
  std::vector<double> values_;
  std::string label_;
};

/// Line a*t + b. Lives here because both the weight classifier and the
/// log-convexity lemma produce one.
struct AffineWitness {
  double a = 0.0;
  double b = 0.0;
};

/// 2^{lo + k/per_octave}, k = 0 .. (hi-lo)*per_octave. Exact at every
/// integer power of two.
inline std::vector<double> octave_grid(double lo_exp, double hi_exp, int per_octave) {
  if (per_octave < 1 || !(hi_exp > lo_exp)) throw std::invalid_argument("octave_grid: bad range");
  const auto steps = static_cast<long>(std::llround((hi_exp - lo_exp) * per_octave));
  std::vector<double> g;
  g.reserve(static_cast<std::size_t>(steps) + 1);
  for (long k = 0; k <= steps; ++k) g.push_back(std::exp2(lo_exp + static_cast<double>(k) / per_octave));
  return g;
}

/// n points geometrically spaced from lo to hi inclusive.
inline std::vector<double> geometric_grid(double lo, double hi, std::size_t n) {
  if (n < 2 || !(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("geometric_grid: bad range");
  std::vector<double> g(n);
  const double step = std::log(hi / lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) g[i] = lo * std::exp(step * static_cast<double>(i));
  g.front() = lo;
  g.back() = hi;
  return g;
}

}  // namespace hpw

#endif  // HPW_CURVE_HPP
