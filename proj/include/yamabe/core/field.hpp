#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "yamabe/core/chart.hpp"

namespace yamabe {

/// Real-valued function of chart coordinates.
using ScalarFn = std::function<double(std::span<const double>)>;

/// Neumaier-compensated accumulator; results depend only on the order of add().
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Scalar values at the nodes of a chart; nodes that could not be evaluated
/// (excluded bands, missing stencil) are flagged invalid.
struct SampledField {
  GridChart chart;
  std::vector<double> values;
  std::vector<std::uint8_t> valid;

  SampledField() = default;
  explicit SampledField(GridChart c)
      : chart(std::move(c)), values(chart.size(), 0.0), valid(chart.size(), 0) {}

  std::size_t size() const noexcept { return values.size(); }

  std::size_t valid_count() const {
    return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), 1));
  }

  double min() const {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < size(); ++i)
      if (valid[i]) m = std::min(m, values[i]);
    return m;
  }

  double max() const {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < size(); ++i)
      if (valid[i]) m = std::max(m, values[i]);
    return m;
  }

  double mean() const {
    CompensatedSum s;
    std::size_t n = 0;
    for (std::size_t i = 0; i < size(); ++i)
      if (valid[i]) {
        s.add(values[i]);
        ++n;
      }
    return n ? s.value() / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN();
  }

  /// sup |values - target| over valid nodes.
  double max_abs_deviation(double target) const {
    double m = 0.0;
    for (std::size_t i = 0; i < size(); ++i)
      if (valid[i]) m = std::max(m, std::abs(values[i] - target));
    return m;
  }
};

/// sup |a - b| over nodes valid in both fields (charts must match).
inline double max_abs_difference(const SampledField& a, const SampledField& b) {
  if (a.size() != b.size()) throw InvalidSpecError("field sizes differ");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.valid[i] && b.valid[i]) m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

/// Samples f at every node not inside an excluded band.
inline SampledField sample(const GridChart& chart, const ScalarFn& f) {
  SampledField out(chart);
  double x[kMaxDim];
  const std::span<double> xs(x, chart.dim());
  for (std::size_t i = 0; i < chart.size(); ++i) {
    chart.point(i, xs);
    if (chart.excluded(xs)) continue;
    out.values[i] = f(xs);
    out.valid[i] = 1;
  }
  return out;
}

/// Multilinear interpolation of nodal values; periodic axes wrap.
/// Points beyond a non-periodic boundary are clamped to it.
inline double interpolate(const GridChart& chart, std::span<const double> values,
                          std::span<const double> x) {
  const int n = chart.dim();
  int base[kMaxDim];
  double frac[kMaxDim];
  for (int a = 0; a < n; ++a) {
    const Axis& ax = chart.axis(a);
    const double h = chart.spacing(a);
    double u = (x[a] - ax.lo) / h;
    if (ax.periodic) {
      u = std::fmod(u, static_cast<double>(ax.resolution));
      if (u < 0) u += ax.resolution;
      int i = static_cast<int>(std::floor(u));
      double f = u - i;
      // Snap values that are a rounding error away from a node.
      if (f > 1.0 - 1e-9) { i += 1; f = 0.0; }
      base[a] = i % ax.resolution;
      frac[a] = f;
    } else {
      u = std::clamp(u, 0.0, static_cast<double>(ax.resolution - 1));
      int i = std::min(static_cast<int>(std::floor(u)), ax.resolution - 2);
      double f = u - i;
      if (f > 1.0 - 1e-9) { i += 1; f = 0.0; }
      if (i > ax.resolution - 2) { i = ax.resolution - 2; f = 1.0; }
      base[a] = i;
      frac[a] = f;
    }
  }
  double acc = 0.0;
  int idx[kMaxDim];
  for (int corner = 0; corner < (1 << n); ++corner) {
    double w = 1.0;
    for (int a = 0; a < n; ++a) {
      const bool up = (corner >> a) & 1;
      if (up && frac[a] == 0.0) { w = 0.0; break; }
      w *= up ? frac[a] : 1.0 - frac[a];
      idx[a] = base[a] + (up ? 1 : 0);
      if (chart.axis(a).periodic) idx[a] %= chart.axis(a).resolution;
    }
    if (w == 0.0) continue;
    acc += w * values[chart.flat_index(std::span<const int>(idx, n))];
  }
  return acc;
}

/// Wraps a sampled field as a function of coordinates.
inline ScalarFn as_function(const SampledField& field) {
  return [field](std::span<const double> x) {
    return interpolate(field.chart, field.values, x);
  };
}

}  // namespace yamabe
