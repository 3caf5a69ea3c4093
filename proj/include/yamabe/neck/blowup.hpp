#pragma once

#include <cmath>
#include <string>

#include "yamabe/core/models.hpp"
#include "yamabe/core/quadrature.hpp"
#include "yamabe/invariants/invariants.hpp"

namespace yamabe {

struct BlowupOptions {
  int radial_resolution = 400;
  int polar_resolution = 200;
  int phi_resolution = 4;
  /// Pole band for the curvature check (radians); volume uses two cells.
  double curvature_band = 0.4;
};

struct BlowupReport {
  int n = 3;
  double r_min = 0.0, r_max = 0.0;
  double length = 0.0;  // ln(r_max / r_min)
  double volume = 0.0, cylinder_volume = 0.0, volume_rel_error = 0.0;
  double s_expected = 0.0, s_min = 0.0, s_max = 0.0, s_max_abs_error = 0.0;
  /// sup |d(ln r)/dr - 1/r| over radial nodes: the map t = ln r pulls dt^2 back to dr^2/r^2.
  double map_defect = 0.0;
  double s_rel_error() const {
    return s_expected != 0.0 ? s_max_abs_error / s_expected : s_max_abs_error;
  }
};

namespace detail {

inline MetricField blowup_metric(int n, double r_min, double r_max, const BlowupOptions& o,
                                 double band, double band_cells) {
  const MetricField sph = round_sphere({n - 1, 1.0, {o.polar_resolution, o.phi_resolution}, band_cells, band});
  std::vector<Axis> axes{Axis{r_min, r_max, o.radial_resolution, false, 0.0}};
  axes.insert(axes.end(), sph.chart.axes().begin(), sph.chart.axes().end());
  MetricField m;
  m.chart = GridChart(std::move(axes));
  m.name = "annulus/r^2";
  // (1/r^2)(dr^2 + r^2 g_S) = dr^2/r^2 + g_S.
  m.g = [sph, n](std::span<const double> x) -> Mat {
    Mat g = Mat::Zero(n, n);
    g(0, 0) = 1.0 / (x[0] * x[0]);
    g.bottomRightCorner(n - 1, n - 1) = sph(x.subspan(1, n - 1));
    return g;
  };
  return m;
}

}  // namespace detail

/// Conformal blow-up r^{-2}(dr^2 + r^2 g_{S^{n-1}}) of a Euclidean annulus,
/// compared against the cylinder dt^2 + g_{S^{n-1}} of length ln(r_max/r_min).
inline std::pair<MetricField, BlowupReport> cylindrical_blowup(int n, double r_min, double r_max,
                                                               const BlowupOptions& o = {}) {
  if (n < 2) throw ParameterError("blow-up needs n >= 2");
  if (!(r_min > 0.0 && r_min < r_max)) throw ParameterError("need 0 < r_min < r_max");
  BlowupReport rep;
  rep.n = n;
  rep.r_min = r_min;
  rep.r_max = r_max;
  rep.length = std::log(r_max / r_min);
  MetricField vol_metric = detail::blowup_metric(n, r_min, r_max, o, -1.0, 2.0);
  rep.volume = volume(vol_metric);
  rep.cylinder_volume = rep.length * vol_sphere(n - 1);
  rep.volume_rel_error = std::abs(rep.volume - rep.cylinder_volume) / rep.cylinder_volume;

  const MetricField curv_metric = detail::blowup_metric(n, r_min, r_max, o, o.curvature_band, 2.0);
  const SampledField s = scalar_curvature(curv_metric);
  rep.s_expected = (n - 1.0) * (n - 2.0);
  rep.s_min = s.min();
  rep.s_max = s.max();
  rep.s_max_abs_error = s.max_abs_deviation(rep.s_expected);

  const Axis& ax = vol_metric.chart.axis(0);
  for (int i = 0; i < ax.resolution; ++i) {
    const double r = vol_metric.chart.coordinate(0, i);
    const double h = 1e-4 * r;
    const double dt = (std::log(r + h) - std::log(r - h)) / (2.0 * h);
    rep.map_defect = std::max(rep.map_defect, std::abs(dt * r - 1.0));
  }
  return {std::move(vol_metric), rep};
}

}  // namespace yamabe
