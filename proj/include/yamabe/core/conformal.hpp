#pragma once

#include <cmath>
#include <span>

#include "yamabe/core/curvature.hpp"

namespace yamabe {

/// Critical Sobolev exponent p = 2n/(n-2).
inline double sobolev_exponent(int n) {
  if (n < 3) throw InvalidSpecError("p = 2n/(n-2) needs n >= 3");
  return 2.0 * n / (n - 2.0);
}

/// Conformal-Laplacian coefficient a = 4(n-1)/(n-2).
inline double conformal_coefficient(int n) {
  if (n < 3) throw InvalidSpecError("a = 4(n-1)/(n-2) needs n >= 3");
  return 4.0 * (n - 1.0) / (n - 2.0);
}

/// Positive conformal factor u; the conformal metric is u^{p-2} g.
struct ConformalFactor {
  ScalarFn u;
  double p = 6.0;

  double operator()(std::span<const double> x) const { return u(x); }
};

inline ConformalFactor make_conformal_factor(int n, ScalarFn u) {
  return {std::move(u), sobolev_exponent(n)};
}

inline ConformalFactor constant_factor(int n, double c) {
  return make_conformal_factor(n, [c](std::span<const double>) { return c; });
}

/// Throws unless u > 0 at every non-excluded node of the chart.
inline void check_positive(const GridChart& chart, const ConformalFactor& u) {
  double x[kMaxDim];
  const std::span<double> xs(x, chart.dim());
  for (std::size_t i = 0; i < chart.size(); ++i) {
    chart.point(i, xs);
    if (chart.excluded(xs)) continue;
    const double v = u(xs);
    if (!(v > 0.0)) {
      throw InvalidSpecError("conformal factor is not positive at " +
                             detail::format_point(std::vector<double>(x, x + chart.dim())));
    }
  }
}

/// u^{p-2} g.
inline MetricField conformal_metric(const MetricField& g, const ConformalFactor& u) {
  if (std::abs(u.p - sobolev_exponent(g.dim())) > 1e-12)
    throw InvalidSpecError("conformal factor exponent does not match chart dimension");
  check_positive(g.chart, u);
  MetricField out = g;
  out.name = g.name + "*u^(p-2)";
  out.g = [g, u](std::span<const double> x) -> Mat {
    return std::pow(u(x), u.p - 2.0) * g(x);
  };
  return out;
}

/// u^{1-p} (a Delta_g u + s_g u), the scalar curvature of u^{p-2} g.
inline double conformal_scalar_at(const MetricField& g, const ConformalFactor& u,
                                  std::span<const double> x, std::span<const double> h) {
  const int n = g.dim();
  const double a = conformal_coefficient(n);
  const double uv = u(x);
  const double lap = laplacian_at(g, u.u, x, h);
  const double s = scalar_curvature_at(g, x, h);
  return std::pow(uv, 1.0 - u.p) * (a * lap + s * uv);
}

inline SampledField conformal_scalar_formula(const MetricField& g, const ConformalFactor& u,
                                             const StencilOptions& opt = {}) {
  check_positive(g.chart, u);
  SampledField out(g.chart);
  const auto h = detail::resolve_steps(g.chart, opt);
  const std::span<const double> hs(h.data(), g.dim());
  double x[kMaxDim];
  const std::span<double> xs(x, g.dim());
  for (std::size_t i = 0; i < g.chart.size(); ++i) {
    g.chart.point(i, xs);
    if (!detail::evaluable(g, i, xs)) continue;
    out.values[i] = conformal_scalar_at(g, u, xs, hs);
    out.valid[i] = 1;
  }
  return out;
}

/// c^2 g.
inline MetricField scaled_metric(const MetricField& g, double c) {
  MetricField out = g;
  out.name = g.name + "*c^2";
  out.g = [g, c2 = c * c](std::span<const double> x) -> Mat { return c2 * g(x); };
  return out;
}

}  // namespace yamabe
