#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "yamabe/core/field.hpp"
#include "yamabe/core/metric.hpp"

namespace yamabe {

/// One-parameter group acting on chart coordinates: map(x, angle, out).
/// Haar integral replaced by `samples` equally spaced angles over a period.
struct GroupAction {
  std::string name;
  std::function<void(std::span<const double>, double, std::span<double>)> map;
  double period = 2.0 * std::numbers::pi;
  int samples = 360;
};

/// Translation of one coordinate (rotation about the polar axis for an
/// azimuthal coordinate).
inline GroupAction coordinate_rotation(int axis, double period = 2.0 * std::numbers::pi, int samples = 360) {
  GroupAction g;
  g.name = "shift(x" + std::to_string(axis) + ")";
  g.period = period;
  g.samples = samples;
  g.map = [axis](std::span<const double> x, double angle, std::span<double> out) {
    for (std::size_t a = 0; a < x.size(); ++a) out[a] = x[a];
    out[static_cast<std::size_t>(axis)] += angle;
  };
  return g;
}

/// Rotation of S^2 in polar coordinates (theta, phi) about the Cartesian x axis.
inline GroupAction s2_rotation_about_x(int samples = 360) {
  GroupAction g;
  g.name = "rot_x";
  g.samples = samples;
  g.map = [](std::span<const double> x, double angle, std::span<double> out) {
    const double X = std::sin(x[0]) * std::cos(x[1]);
    const double Y = std::sin(x[0]) * std::sin(x[1]);
    const double Z = std::cos(x[0]);
    const double c = std::cos(angle), s = std::sin(angle);
    const double Y2 = c * Y - s * Z, Z2 = s * Y + c * Z;
    out[0] = std::acos(std::clamp(Z2, -1.0, 1.0));
    double ph = std::atan2(Y2, X);
    if (ph < 0.0) ph += 2.0 * std::numbers::pi;
    out[1] = ph;
  };
  return g;
}

struct IsometryCheck {
  double max_mismatch = 0.0;
  std::size_t points = 0;
};

/// Compares J^T g(T x) J with g(x) (J by central differences) on a strided
/// subset of nodes and a few group elements; images landing in an excluded
/// band are skipped.
inline IsometryCheck check_isometry(const MetricField& g, const GroupAction& act, int node_stride = 7,
                                    int elements = 5) {
  const GridChart& c = g.chart;
  const int n = c.dim();
  IsometryCheck out;
  double x[kMaxDim], y[kMaxDim], yp[kMaxDim], ym[kMaxDim], xp[kMaxDim];
  const std::span<double> xs(x, n), ys(y, n);
  const double h = 1e-6;
  for (std::size_t i = 0; i < c.size(); i += static_cast<std::size_t>(std::max(1, node_stride))) {
    c.point(i, xs);
    if (c.excluded(xs)) continue;
    const Mat gx = g(xs);
    for (int e = 1; e <= elements; ++e) {
      const double angle = act.period * e / (elements + 1.0) + 0.1;
      act.map(xs, angle, ys);
      if (c.excluded(ys)) continue;
      Mat J(n, n);
      for (int b = 0; b < n; ++b) {
        for (int a = 0; a < n; ++a) xp[a] = x[a];
        xp[b] = x[b] + h;
        act.map(std::span<const double>(xp, n), angle, std::span<double>(yp, n));
        xp[b] = x[b] - h;
        act.map(std::span<const double>(xp, n), angle, std::span<double>(ym, n));
        for (int a = 0; a < n; ++a) {
          double d = yp[a] - ym[a];
          const Axis& ax = c.axis(a);
          if (ax.periodic) {
            const double P = ax.hi - ax.lo;
            d -= P * std::round(d / P);
          }
          J(a, b) = d / (2.0 * h);
        }
      }
      const Mat pull = J.transpose() * g(ys) * J;
      const double scale = std::max(gx.cwiseAbs().maxCoeff(), 1e-300);
      out.max_mismatch = std::max(out.max_mismatch, (pull - gx).cwiseAbs().maxCoeff() / scale);
      ++out.points;
    }
  }
  return out;
}

/// Samples f at every node, including excluded bands.
inline SampledField sample_everywhere(const GridChart& chart, const ScalarFn& f) {
  SampledField out(chart);
  double x[kMaxDim];
  const std::span<double> xs(x, chart.dim());
  for (std::size_t i = 0; i < chart.size(); ++i) {
    chart.point(i, xs);
    out.values[i] = f(xs);
    out.valid[i] = 1;
  }
  return out;
}

struct AverageOptions {
  double isometry_tolerance = 1e-5;
  bool check = true;
};

/// (1/N) sum_i phi(g_i x) by multilinear interpolation. An output node is
/// invalid when some image's interpolation stencil touches an invalid node.
inline SampledField group_average(const MetricField& g, const SampledField& phi, const GroupAction& act,
                                  const AverageOptions& opt = {}) {
  if (act.samples < 1) throw ParameterError("group quadrature needs at least one sample");
  if (!act.map) throw InvalidActionError("group action has no map");
  if (phi.size() != g.chart.size()) throw ParameterError("sampled function does not match the chart");
  if (opt.check) {
    const IsometryCheck ic = check_isometry(g, act);
    if (!(ic.max_mismatch <= opt.isometry_tolerance))
      throw InvalidActionError("action '" + act.name + "' is not isometric: pullback mismatch " +
                               std::to_string(ic.max_mismatch));
  }
  const GridChart& c = g.chart;
  const int n = c.dim();
  std::vector<double> validity(phi.valid.begin(), phi.valid.end());
  SampledField out(c);
  double x[kMaxDim], y[kMaxDim];
  const std::span<double> xs(x, n), ys(y, n);
  for (std::size_t i = 0; i < c.size(); ++i) {
    c.point(i, xs);
    CompensatedSum acc;
    bool ok = phi.valid[i] != 0;
    for (int k = 0; k < act.samples && ok; ++k) {
      act.map(xs, act.period * k / act.samples, ys);
      if (interpolate(c, validity, ys) < 1.0 - 1e-12) ok = false;
      acc.add(interpolate(c, phi.values, ys));
    }
    if (!ok) continue;
    out.values[i] = acc.value() / act.samples;
    out.valid[i] = 1;
  }
  return out;
}

/// Largest spread max - min of f along the grid lines of one periodic axis,
/// over lines where every node is valid, relative to sup |f|.
inline double orbit_variation(const SampledField& f, int axis) {
  const GridChart& c = f.chart;
  const int n = c.dim();
  const int M = c.axis(axis).resolution;
  int idx[kMaxDim];
  double worst = 0.0, mag = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (f.valid[i]) mag = std::max(mag, std::abs(f.values[i]));
  if (mag == 0.0) return 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    c.multi_index(i, std::span<int>(idx, n));
    if (idx[axis] != 0) continue;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    bool ok = true;
    for (int k = 0; k < M; ++k) {
      idx[axis] = k;
      const std::size_t j = c.flat_index(std::span<const int>(idx, n));
      if (!f.valid[j]) {
        ok = false;
        break;
      }
      lo = std::min(lo, f.values[j]);
      hi = std::max(hi, f.values[j]);
    }
    if (ok) worst = std::max(worst, (hi - lo) / mag);
  }
  return worst;
}

}  // namespace yamabe
