#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "yamabe/core/quadrature.hpp"
#include "yamabe/neck/bend.hpp"
#include "yamabe/neck/homotopy.hpp"

namespace yamabe {

/// Metric near W in polar normal coordinates (x, r, angles):
/// dr^2 + g^W + r^2 g_S + P_r, on r in [r_lo, r_hi].
inline MetricField perturbed_outer_metric(const HomotopyRegionSpec& spec, double r_lo, double r_hi,
                                          int radial_resolution = 9) {
  if (!(r_lo > 0.0 && r_lo < r_hi)) throw ParameterError("need 0 < r_lo < r_hi");
  const GridChart cross = detail::homotopy_chart(spec, false);
  const int dw = spec.dim_w(), m = spec.q - 1, n = dw + 1 + m;
  if (n > kMaxDim) throw InvalidSpecError("outer dimension exceeds capacity");
  std::vector<Axis> axes(cross.axes().begin(), cross.axes().begin() + dw);
  axes.push_back(Axis{r_lo, r_hi, radial_resolution, false, 0.0});
  axes.insert(axes.end(), cross.axes().begin() + dw, cross.axes().end());
  const MetricField sph = detail::unit_sphere_factor(spec);
  MetricField out;
  out.chart = GridChart(std::move(axes));
  out.name = "outer";
  out.g = [spec, sph, dw, m, n](std::span<const double> x) -> Mat {
    double z[kMaxDim];
    for (int i = 0; i < dw; ++i) z[i] = x[i];
    for (int a = 0; a < m; ++a) z[dw + a] = x[dw + 1 + a];
    const std::span<const double> zs(z, dw + m);
    const double r = x[dw];
    Mat h = detail::product_metric(spec, sph, zs, r) + detail::perturbation_at(spec, zs, r);
    Mat g = Mat::Zero(n, n);
    g.topLeftCorner(dw, dw) = h.topLeftCorner(dw, dw);
    g.block(0, dw + 1, dw, m) = h.topRightCorner(dw, m);
    g.block(dw + 1, 0, m, dw) = h.bottomLeftCorner(m, dw);
    g.bottomRightCorner(m, m) = h.bottomRightCorner(m, m);
    g(dw, dw) = 1.0;
    return g;
  };
  return out;
}

/// Local chart (l, x, angles) around curve sample i: dl^2 + h_{r(l)} with the
/// quadratic r(l) = r_i - cos(theta_i) l + k_i sin(theta_i) l^2 / 2, which has
/// the exact 2-jet of r along the curve.
inline MetricField bend_local_metric(const BendCurve& c, std::size_t i, const HomotopyRegionSpec& spec) {
  const BendSample& b = c.samples.at(i);
  const GridChart cross = detail::homotopy_chart(spec, false);
  std::vector<Axis> axes{Axis{-b.r * 1e-2, b.r * 1e-2, 5, false, 0.0}};
  axes.insert(axes.end(), cross.axes().begin(), cross.axes().end());
  const MetricField sph = detail::unit_sphere_factor(spec);
  const int n = spec.dim() + 1;
  const double r0 = b.r, r1 = -std::cos(b.theta), r2 = 0.5 * b.k * std::sin(b.theta);
  MetricField out;
  out.chart = GridChart(std::move(axes));
  out.name = "bend@" + std::to_string(i);
  out.g = [spec, sph, n, r0, r1, r2](std::span<const double> x) -> Mat {
    const double l = x[0];
    const double r = r0 + l * (r1 + l * r2);
    const auto zs = x.subspan(1, n - 1);
    Mat g = Mat::Zero(n, n);
    g(0, 0) = 1.0;
    g.bottomRightCorner(n - 1, n - 1) = detail::product_metric(spec, sph, zs, r) + detail::perturbation_at(spec, zs, r);
    return g;
  };
  return out;
}

/// Closed-form scalar curvature of dL^2 + g^W + r(L)^2 g_S for a flat W.
inline double bend_product_scalar(int q, double r, double theta, double k, double s_w = 0.0) {
  const double st = std::sin(theta);
  return s_w + (q - 1.0) * (q - 2.0) * st * st / (r * r) - 2.0 * (q - 1.0) * k * st / r;
}

struct NeckRegion {
  std::string tag;  // outer | bend | homotopy
  MetricField metric;
  double volume = 0.0;
  double s_min = std::numeric_limits<double>::quiet_NaN();
  double s_max = std::numeric_limits<double>::quiet_NaN();
  double certified_lower = std::numeric_limits<double>::quiet_NaN();
};

struct NeckParameters {
  double delta = 0.0, eps = 0.0, mu = 0.0;
  double r0 = 0.0, r1 = 0.0, r1p = 0.0, r2 = 0.0, r3 = 0.0;
  double theta0 = 0.0, eps2 = 0.0;
  int q = 0;
};

struct InterfaceCheck {
  std::string name;
  double mismatch = 0.0;
};

struct NeckAssembly {
  NeckParameters parameters;
  BendCurve curve;  // shrunk by mu = delta eps
  std::vector<NeckRegion> regions;
  std::vector<InterfaceCheck> interfaces;
  double vol_S = 0.0, vol_T = 0.0, vol_N = 0.0;
  double s_g_lower = 0.0;
  /// False when the measured outer minimum lies below the supplied s_g_lower.
  bool outer_consistent = true;
  double global_s_lower = std::numeric_limits<double>::quiet_NaN();

  const NeckRegion& region(const std::string& tag) const {
    for (const NeckRegion& r : regions)
      if (r.tag == tag) return r;
    throw InvalidSpecError("no region '" + tag + "'");
  }
};

struct AssemblyOptions {
  /// Lower bound for s_g on the outer region; NaN takes the measured minimum
  /// (requires scalar_reports).
  double s_g_lower = 0.0;
  double interface_tolerance = 1e-6;
  double outer_width = 0.25;  // outer annulus is [r0, (1 + width) r0]
  int outer_radial_resolution = 9;
  int area_table = 41;
  bool scalar_reports = true;
  int report_stride = 64;
  /// Cross-section resolution used by the bend scalar report.
  int report_w_resolution = 8;
  int report_polar_resolution = 16;
  /// Stencil step as a fraction of grid spacing; the region metrics are closed-form.
  double report_step_scale = 1e-3;
};

namespace detail {

/// A(r) = int_{W x S^{q-1}} dV(h_r) / r^{q-1}, tabulated in log r.
class CrossSectionArea {
 public:
  CrossSectionArea(const HomotopyRegionSpec& spec, double r_lo, double r_hi, int count) : q_(spec.q) {
    HomotopyRegionSpec vs = spec;
    vs.band = -1.0;
    const MetricField sph = unit_sphere_factor(vs);
    const GridChart chart = homotopy_chart(vs, false);
    const std::vector<double> w = node_weights(chart);
    lo_ = std::log(r_lo);
    hi_ = std::log(r_hi);
    const int n = vs.dim();
    double z[kMaxDim];
    const std::span<double> zs(z, n);
    for (int j = 0; j < count; ++j) {
      const double r = std::exp(lo_ + (hi_ - lo_) * j / (count - 1));
      CompensatedSum s;
      for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] == 0.0) continue;
        chart.point(i, zs);
        Mat h = product_metric(vs, sph, zs, r) + perturbation_at(vs, zs, r);
        // Divide the sphere block by r^2 so the determinant stays O(1).
        const int dw = vs.dim_w();
        h.rightCols(n - dw) /= r;
        h.bottomRows(n - dw) /= r;
        const double det = h.determinant();
        if (!(det > 0.0))
          throw InvalidPerturbationError("cross-section metric degenerate at r = " + std::to_string(r));
        s.add(w[i] * std::sqrt(det));
      }
      table_.push_back(s.value());
    }
  }

  /// int dV(h_r) over the cross-section.
  double operator()(double r) const {
    const double u = (std::log(r) - lo_) / (hi_ - lo_) * (table_.size() - 1);
    const double uc = std::clamp(u, 0.0, static_cast<double>(table_.size() - 1));
    const std::size_t j = std::min(static_cast<std::size_t>(uc), table_.size() - 2);
    const double f = uc - j;
    return ((1.0 - f) * table_[j] + f * table_[j + 1]) * std::pow(r, q_ - 1);
  }

 private:
  int q_;
  double lo_ = 0.0, hi_ = 1.0;
  std::vector<double> table_;
};

/// int A(r(L)) dL over the curve part with r <= r_cut (trapezoid in segment-local s).
inline double curve_volume(const BendCurve& c, const CrossSectionArea& A, double r_cut) {
  CompensatedSum v;
  for (const BendSegment& seg : c.segments) {
    for (std::size_t j = seg.first; j < seg.last; ++j) {
      const BendSample& a = c.samples[j];
      const BendSample& b = c.samples[j + 1];
      const double ds = b.s - a.s;
      if (b.r > r_cut) continue;
      if (a.r <= r_cut) {
        v.add(0.5 * ds * (A(a.r) + A(b.r)));
      } else {
        const double f = (r_cut - b.r) / (a.r - b.r);
        v.add(0.5 * f * ds * (A(r_cut) + A(b.r)));
      }
    }
  }
  return v.value();
}

/// Block-normalized mismatch |a_AB - b_AB| / sqrt(a_AA a_BB).
inline double normalized_mismatch(const Mat& a, const Mat& b) {
  double m = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      m = std::max(m, std::abs(a(i, j) - b(i, j)) / std::sqrt(a(i, i) * a(j, j)));
  return m;
}

}  // namespace detail

/// Surgered metric near W from the outer metric, the bend curve shrunk by
/// mu = delta eps, and the homotopy collar at radius mu r3. The outer chart
/// must be laid out as (x, r, angles).
inline NeckAssembly assemble_surgered_metric(const MetricField& outer, const BendCurve& curve,
                                             const HomotopyRegionSpec& spec, double delta, double eps,
                                             const AssemblyOptions& opt = {}) {
  if (!(delta > 0.0 && delta <= 1.0 && eps > 0.0 && eps <= 1.0))
    throw ParameterError("delta and eps must lie in (0, 1]");
  if (curve.q != spec.q) throw AssemblyError("curve and homotopy region have different q");
  const int dw = spec.dim_w(), m = spec.q - 1;
  if (outer.dim() != dw + 1 + m) throw AssemblyError("outer chart does not match W x [r] x S^{q-1}");
  const double mu = delta * eps;

  NeckAssembly as;
  if (std::isnan(opt.s_g_lower) && !opt.scalar_reports)
    throw ParameterError("measured s_g_lower needs scalar reports");
  as.curve = shrink_curve(curve, mu);
  const BendCurve& c = as.curve;
  as.parameters = {delta, eps, mu, c.r0, c.r1, c.r1p, c.r2, c.r3, c.theta0, c.eps2, c.q};

  HomotopyRegionSpec hs = spec;
  hs.r = curve.r3;
  hs.mu = mu;
  const MetricField collar = homotopy_metric(hs, 1.0, true);
  const MetricField sph = detail::unit_sphere_factor(spec);

  // Interfaces: outer at r = r0 against the curve start; curve end against the collar at t = 0.
  {
    const GridChart cross = detail::homotopy_chart(spec, false);
    double z[kMaxDim], xo[kMaxDim], xc[kMaxDim];
    const std::span<double> zs(z, dw + m);
    double mis_outer = 0.0, mis_collar = 0.0;
    const BendSample& first = c.samples.front();
    const BendSample& last = c.samples.back();
    for (std::size_t i = 0; i < cross.size(); ++i) {
      cross.point(i, zs);
      if (cross.excluded(zs)) continue;
      for (int a = 0; a < dw; ++a) xo[a] = z[a];
      xo[dw] = first.r;
      for (int a = 0; a < m; ++a) xo[dw + 1 + a] = z[dw + a];
      const Mat go = outer(std::span<const double>(xo, dw + 1 + m));
      // Reorder outer to (r, x, angles) to compare with dL^2 + h_r.
      Mat gb = Mat::Zero(dw + 1 + m, dw + 1 + m);
      const double st = std::sin(first.theta), ct = std::cos(first.theta);
      Mat h = detail::product_metric(spec, sph, zs, first.r) + detail::perturbation_at(spec, zs, first.r);
      gb(0, 0) = st * st + ct * ct;
      gb.bottomRightCorner(dw + m, dw + m) = h;
      Mat go2 = Mat::Zero(dw + 1 + m, dw + 1 + m);
      std::vector<int> perm{dw};
      for (int a = 0; a < dw; ++a) perm.push_back(a);
      for (int a = 0; a < m; ++a) perm.push_back(dw + 1 + a);
      for (int a = 0; a < dw + 1 + m; ++a)
        for (int b = 0; b < dw + 1 + m; ++b) go2(a, b) = go(perm[a], perm[b]);
      mis_outer = std::max(mis_outer, detail::normalized_mismatch(go2, gb));

      for (int a = 0; a < dw + m; ++a) xc[a] = z[a];
      xc[dw + m] = 0.0;
      Mat gc = collar(std::span<const double>(xc, dw + m + 1));
      // dL = mu dt on the collar side.
      gc(dw + m, dw + m) /= mu * mu;
      Mat ge = Mat::Zero(dw + m + 1, dw + m + 1);
      ge.topLeftCorner(dw + m, dw + m) =
          detail::product_metric(spec, sph, zs, last.r) + detail::perturbation_at(spec, zs, last.r);
      ge(dw + m, dw + m) = 1.0;
      mis_collar = std::max(mis_collar, detail::normalized_mismatch(gc, ge));
    }
    as.interfaces.push_back({"outer|bend", mis_outer});
    as.interfaces.push_back({"bend|homotopy", mis_collar});
    for (const InterfaceCheck& ic : as.interfaces)
      if (!(ic.mismatch <= opt.interface_tolerance))
        throw AssemblyError("interface " + ic.name + " mismatch " + std::to_string(ic.mismatch) +
                            " exceeds tolerance");
  }

  // Volumes.
  const double r_min = c.samples.back().r, r_max = c.samples.front().r;
  const detail::CrossSectionArea A(spec, r_min, r_max, opt.area_table);
  HomotopyRegionSpec vs = hs;
  vs.band = -1.0;
  const double vol_collar = volume(homotopy_metric(vs, 1.0, true));
  const double vol_curve_all = detail::curve_volume(c, A, std::numeric_limits<double>::infinity());
  as.vol_S = detail::curve_volume(c, A, mu * curve.r1p) + vol_collar;
  as.vol_T = detail::curve_volume(c, A, eps * curve.r1) + vol_collar;
  as.vol_N = vol_curve_all + vol_collar;

  NeckRegion ro{"outer", outer, volume(outer)};
  NeckRegion rb{"bend", bend_local_metric(c, 0, spec), vol_curve_all};
  NeckRegion rh{"homotopy", collar, vol_collar};
  if (opt.scalar_reports) {
    StencilOptions fine;
    fine.step_scale = opt.report_step_scale;
    const SampledField so = scalar_curvature(outer, fine);
    ro.s_min = so.min();
    ro.s_max = so.max();
  }
  as.s_g_lower = std::isnan(opt.s_g_lower) ? ro.s_min : opt.s_g_lower;
  as.outer_consistent = !opt.scalar_reports || ro.s_min >= as.s_g_lower;
  const BendCertification cert = certify_bend(c, as.s_g_lower, true);
  rb.certified_lower = cert.s_lower;
  ro.certified_lower = as.s_g_lower;
  if (opt.scalar_reports) {
    StencilOptions fine;
    fine.step_scale = opt.report_step_scale;
    const SampledField sc = scalar_curvature(collar, fine);
    rh.s_min = sc.min();
    rh.s_max = sc.max();
    rh.certified_lower = rh.s_min;
    HomotopyRegionSpec rs = spec;
    rs.polar_resolution = opt.report_polar_resolution;
    {
      std::vector<Axis> wa = spec.gW.chart.axes();
      for (Axis& a : wa) a.resolution = std::min(a.resolution, opt.report_w_resolution);
      rs.gW.chart = GridChart(std::move(wa));
    }
    const GridChart cross = detail::homotopy_chart(rs, false);
    double smin = std::numeric_limits<double>::infinity(), smax = -smin;
    const std::size_t stride = static_cast<std::size_t>(std::max(1, opt.report_stride));
    for (std::size_t i = 0; i < c.samples.size(); ++i) {
      const bool edge = i == 0 || i + 1 == c.samples.size() ||
                        c.samples[i].segment != c.samples[i - 1].segment;
      if (!edge && i % stride != 0) continue;
      const MetricField bl = bend_local_metric(c, i, rs);
      const int n = bl.dim();
      std::vector<double> steps(n);
      steps[0] = 1e-3 * c.samples[i].r;
      for (int a = 1; a < n; ++a) steps[a] = opt.report_step_scale * bl.chart.spacing(a);
      double x[kMaxDim] = {};
      const std::span<double> zs(x + 1, n - 1);
      for (std::size_t j = 0; j < cross.size(); ++j) {
        cross.point(j, zs);
        if (cross.excluded(zs)) continue;
        const double s = scalar_curvature_at(bl, std::span<const double>(x, n), steps);
        smin = std::min(smin, s);
        smax = std::max(smax, s);
      }
    }
    rb.s_min = smin;
    rb.s_max = smax;
  }
  as.regions = {ro, rb, rh};
  as.global_s_lower = std::min({ro.certified_lower, rb.certified_lower,
                                std::isnan(rh.certified_lower) ? rb.certified_lower : rh.certified_lower});
  return as;
}

}  // namespace yamabe
