#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "yamabe/core/metric.hpp"

namespace yamabe {

using Profile1D = std::function<double(double)>;

namespace detail {

inline int pick_resolution(const std::vector<int>& res, std::size_t a, int fallback) {
  if (res.empty()) return fallback;
  if (res.size() == 1) return res[0];
  return res.at(a);
}

}  // namespace detail

/// Round sphere of the given radius in iterated polar coordinates
/// (theta_1, ..., theta_{n-1}, phi):
///   R^2 (dtheta_1^2 + sin^2 theta_1 (dtheta_2^2 + sin^2 theta_2 (... + dphi^2))).
/// Polar axes lie in [0, pi]; phi is periodic.
struct SphereSpec {
  int n = 3;
  double radius = 1.0;
  /// One entry for all axes or one per axis.
  std::vector<int> resolution{64};
  /// Pole band in grid cells of each polar axis; ignored if band >= 0.
  double band_cells = 2.0;
  /// Absolute pole band in radians (negative: use band_cells).
  double band = -1.0;
};

inline MetricField round_sphere(const SphereSpec& spec) {
  if (spec.n < 1) throw InvalidSpecError("sphere dimension must be positive");
  if (!(spec.radius > 0.0)) throw InvalidSpecError("sphere radius must be positive");
  const int n = spec.n;
  std::vector<Axis> axes;
  for (int a = 0; a + 1 < n; ++a) {
    Axis ax{0.0, std::numbers::pi, detail::pick_resolution(spec.resolution, a, 64), false, 0.0};
    const double h = std::numbers::pi / (ax.resolution - 1);
    ax.band = spec.band >= 0.0 ? spec.band : spec.band_cells * h;
    axes.push_back(ax);
  }
  axes.push_back(Axis{0.0, 2.0 * std::numbers::pi,
                      detail::pick_resolution(spec.resolution, n - 1, 64), true, 0.0});
  const double r2 = spec.radius * spec.radius;
  MetricField m;
  m.chart = GridChart(std::move(axes));
  m.name = "S^" + std::to_string(n) + "(" + std::to_string(spec.radius) + ")";
  m.g = [n, r2](std::span<const double> x) -> Mat {
    Mat g = Mat::Zero(n, n);
    double f = r2;
    for (int a = 0; a < n; ++a) {
      g(a, a) = f;
      if (a + 1 < n) {
        const double s = std::sin(x[a]);
        f *= s * s;
      }
    }
    return g;
  };
  return m;
}

/// Flat torus R^n / (periods) with the Euclidean metric.
inline MetricField flat_torus(const std::vector<double>& periods, const std::vector<int>& resolution) {
  if (periods.empty()) throw InvalidSpecError("torus needs at least one period");
  std::vector<Axis> axes;
  for (std::size_t a = 0; a < periods.size(); ++a) {
    if (!(periods[a] > 0.0)) throw InvalidSpecError("torus periods must be positive");
    axes.push_back(Axis{0.0, periods[a], detail::pick_resolution(resolution, a, 16), true, 0.0});
  }
  const int n = static_cast<int>(periods.size());
  MetricField m;
  m.chart = GridChart(std::move(axes));
  m.name = "T^" + std::to_string(n);
  m.g = [n](std::span<const double>) -> Mat { return Mat::Identity(n, n); };
  return m;
}

/// Riemannian product g1 x g2 on the concatenated chart.
inline MetricField product(const MetricField& g1, const MetricField& g2) {
  const int n1 = g1.dim(), n2 = g2.dim();
  if (n1 + n2 > kMaxDim) throw InvalidSpecError("product dimension exceeds capacity");
  std::vector<Axis> axes = g1.chart.axes();
  axes.insert(axes.end(), g2.chart.axes().begin(), g2.chart.axes().end());
  MetricField m;
  m.chart = GridChart(std::move(axes));
  m.name = g1.name + "x" + g2.name;
  m.closed_form = g1.closed_form && g2.closed_form;
  m.g = [g1, g2, n1, n2](std::span<const double> x) -> Mat {
    Mat g = Mat::Zero(n1 + n2, n1 + n2);
    g.topLeftCorner(n1, n1) = g1(x.subspan(0, n1));
    g.bottomRightCorner(n2, n2) = g2(x.subspan(n1, n2));
    return g;
  };
  return m;
}

/// One fiber of a warped product: f(t)^2 g_fiber.
struct WarpFiber {
  MetricField fiber;
  Profile1D warp;
};

/// dt^2 + sum_i f_i(t)^2 g_i over a base interval.
struct WarpedProductSpec {
  Axis base{0.0, 1.0, 64, false, 0.0};
  std::vector<WarpFiber> fibers;
  std::string name = "warped";
};

inline MetricField warped_product(const WarpedProductSpec& spec) {
  std::vector<Axis> axes{spec.base};
  std::vector<int> offsets;
  int n = 1;
  for (const WarpFiber& f : spec.fibers) {
    offsets.push_back(n);
    n += f.fiber.dim();
    axes.insert(axes.end(), f.fiber.chart.axes().begin(), f.fiber.chart.axes().end());
  }
  if (n > kMaxDim) throw InvalidSpecError("warped product dimension exceeds capacity");
  GridChart chart(std::move(axes));
  // Warp functions must be positive on the evaluated part of the base.
  const Axis& b = spec.base;
  for (int i = 0; i < b.resolution; ++i) {
    const double t = chart.coordinate(0, i);
    if (t < b.lo + b.band - 1e-12 || t > b.hi - b.band + 1e-12) continue;
    for (const WarpFiber& f : spec.fibers)
      if (!(f.warp(t) > 0.0))
        throw InvalidSpecError("warp function is not positive at t = " + std::to_string(t));
  }
  MetricField m;
  m.chart = std::move(chart);
  m.name = spec.name;
  m.closed_form = true;
  for (const WarpFiber& f : spec.fibers) m.closed_form = m.closed_form && f.fiber.closed_form;
  m.g = [fibers = spec.fibers, offsets, n](std::span<const double> x) -> Mat {
    Mat g = Mat::Zero(n, n);
    g(0, 0) = 1.0;
    for (std::size_t i = 0; i < fibers.size(); ++i) {
      const int d = fibers[i].fiber.dim();
      const double w = fibers[i].warp(x[0]);
      g.block(offsets[i], offsets[i], d, d) = w * w * fibers[i].fiber(x.subspan(offsets[i], d));
    }
    return g;
  };
  return m;
}

/// Cylinder dt^2 + g_cross on [0, length].
inline MetricField cylinder(const MetricField& cross, double length, int resolution) {
  if (!(length > 0.0)) throw InvalidSpecError("cylinder length must be positive");
  WarpedProductSpec spec;
  spec.base = Axis{0.0, length, resolution, false, 0.0};
  spec.fibers.push_back({cross, [](double) { return 1.0; }});
  spec.name = "[0," + std::to_string(length) + "]x" + cross.name;
  return warped_product(spec);
}

/// Descriptor accepted by build_model (used by the command-line front end).
struct ModelSpec {
  std::string kind = "sphere";  // sphere | torus | cylinder | sphere_product
  int n = 3;
  double radius = 1.0;
  double radius2 = 1.0;  // second factor radius for sphere_product
  int n2 = 2;            // second factor dimension for sphere_product
  std::vector<double> periods;
  double length = 1.0;
  std::vector<int> resolution{64};
  double band_cells = 2.0;
  double band = -1.0;
};

inline MetricField build_model(const ModelSpec& s) {
  if (s.kind == "sphere") return round_sphere({s.n, s.radius, s.resolution, s.band_cells, s.band});
  if (s.kind == "torus") {
    std::vector<double> periods = s.periods;
    if (periods.empty()) periods.assign(static_cast<std::size_t>(s.n), 1.0);
    return flat_torus(periods, s.resolution);
  }
  if (s.kind == "cylinder") {
    std::vector<int> cross_res = s.resolution;
    if (cross_res.size() > 1) cross_res.erase(cross_res.begin());
    const MetricField cross = round_sphere({s.n - 1, s.radius, cross_res, s.band_cells, s.band});
    return cylinder(cross, s.length, s.resolution.empty() ? 64 : s.resolution.front());
  }
  if (s.kind == "sphere_product") {
    std::vector<int> r1, r2;
    if (s.resolution.size() <= 1) {
      r1 = r2 = s.resolution;
    } else {
      r1.assign(s.resolution.begin(), s.resolution.begin() + s.n);
      r2.assign(s.resolution.begin() + s.n, s.resolution.end());
    }
    return product(round_sphere({s.n, s.radius, r1, s.band_cells, s.band}),
                   round_sphere({s.n2, s.radius2, r2, s.band_cells, s.band}));
  }
  throw InvalidSpecError("unknown model kind '" + s.kind + "'");
}

}  // namespace yamabe
