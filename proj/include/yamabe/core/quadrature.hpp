#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "yamabe/core/conformal.hpp"

namespace yamabe {

/// Per-axis trapezoid weights. Non-periodic axes integrate over the
/// contiguous run of nodes outside the excluded bands; periodic axes use
/// the uniform weight h.
inline std::vector<double> axis_weights(const GridChart& chart, int a) {
  const Axis& ax = chart.axis(a);
  const double h = chart.spacing(a);
  std::vector<double> w(static_cast<std::size_t>(ax.resolution), 0.0);
  if (ax.periodic) {
    std::fill(w.begin(), w.end(), h);
    return w;
  }
  const double tol = 1e-12 * (ax.hi - ax.lo);
  int i0 = -1, i1 = -1;
  for (int i = 0; i < ax.resolution; ++i) {
    const double x = chart.coordinate(a, i);
    if (x < ax.lo + ax.band - tol || x > ax.hi - ax.band + tol) continue;
    if (i0 < 0) i0 = i;
    i1 = i;
  }
  if (i0 < 0 || i1 == i0) return w;
  for (int i = i0; i <= i1; ++i) w[i] = h;
  w[i0] = w[i1] = 0.5 * h;
  return w;
}

/// Tensor-product quadrature weights for every node (zero on excluded nodes).
inline std::vector<double> node_weights(const GridChart& chart) {
  std::vector<std::vector<double>> ax;
  for (int a = 0; a < chart.dim(); ++a) ax.push_back(axis_weights(chart, a));
  std::vector<double> w(chart.size());
  int idx[kMaxDim];
  for (std::size_t i = 0; i < chart.size(); ++i) {
    chart.multi_index(i, std::span<int>(idx, chart.dim()));
    double v = 1.0;
    for (int a = 0; a < chart.dim(); ++a) v *= ax[a][idx[a]];
    w[i] = v;
  }
  return w;
}

/// sqrt(det g) at every node with nonzero quadrature weight.
inline std::vector<double> volume_density(const MetricField& g, const std::vector<double>& w) {
  std::vector<double> out(w.size(), 0.0);
  double x[kMaxDim];
  const std::span<double> xs(x, g.dim());
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 0.0) continue;
    g.chart.point(i, xs);
    const double det = g(xs).determinant();
    if (!(det > 0.0))
      throw SingularMetricError("metric '" + g.name + "' has non-positive determinant",
                                g.chart.point(i));
    out[i] = std::sqrt(det);
  }
  return out;
}

/// Integral of nodal values against dV_g. Invalid nodes must carry zero weight.
inline double integrate(const MetricField& g, const SampledField& f) {
  const std::vector<double> w = node_weights(g.chart);
  const std::vector<double> dv = volume_density(g, w);
  CompensatedSum s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 0.0) continue;
    if (!f.valid[i])
      throw InvalidSpecError("integrand undefined at a node with quadrature weight");
    s.add(w[i] * dv[i] * f.values[i]);
  }
  return s.value();
}

inline double volume(const MetricField& g) {
  const std::vector<double> w = node_weights(g.chart);
  const std::vector<double> dv = volume_density(g, w);
  CompensatedSum s;
  for (std::size_t i = 0; i < w.size(); ++i) s.add(w[i] * dv[i]);
  return s.value();
}

/// int s dV / vol^{(n-2)/n}, with s supplied or computed by the engine.
inline double einstein_hilbert(const MetricField& g, const SampledField& scalar) {
  const int n = g.dim();
  return integrate(g, scalar) / std::pow(volume(g), (n - 2.0) / n);
}

inline double einstein_hilbert(const MetricField& g, const StencilOptions& opt = {}) {
  return einstein_hilbert(g, scalar_curvature(g, opt));
}

/// Q(phi^{p-2} g) = int(a|dphi|^2 + s phi^2) dV / (int |phi|^p dV)^{2/p}.
inline double yamabe_quotient(const MetricField& g, const ConformalFactor& phi,
                              const SampledField& scalar, const StencilOptions& opt = {}) {
  const int n = g.dim();
  const double a = conformal_coefficient(n);
  const double p = sobolev_exponent(n);
  const std::vector<double> w = node_weights(g.chart);
  const std::vector<double> dv = volume_density(g, w);
  const auto h = detail::resolve_steps(g.chart, opt);
  const std::span<const double> hs(h.data(), n);
  CompensatedSum num, den;
  double x[kMaxDim];
  const std::span<double> xs(x, n);
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 0.0) continue;
    if (!scalar.valid[i])
      throw InvalidSpecError("scalar curvature undefined at a node with quadrature weight");
    g.chart.point(i, xs);
    const double f = phi(xs);
    const double grad = gradient_norm_sq_at(g, phi.u, xs, hs);
    const double dvol = w[i] * dv[i];
    num.add(dvol * (a * grad + scalar.values[i] * f * f));
    den.add(dvol * std::pow(std::abs(f), p));
  }
  if (!(den.value() > 0.0))
    throw DegenerateTestFunctionError("test function has zero L^p norm");
  return num.value() / std::pow(den.value(), 2.0 / p);
}

inline double yamabe_quotient(const MetricField& g, const ConformalFactor& phi,
                              const StencilOptions& opt = {}) {
  return yamabe_quotient(g, phi, scalar_curvature(g, opt), opt);
}

}  // namespace yamabe
