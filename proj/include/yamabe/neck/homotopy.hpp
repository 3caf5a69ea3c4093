#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "yamabe/core/curvature.hpp"
#include "yamabe/core/models.hpp"
#include "yamabe/neck/profiles.hpp"

namespace yamabe {

/// h_r - hbar_r at z = (x, sphere angles), as a matrix on W x S^{q-1}.
using PerturbationFn = std::function<Mat(std::span<const double> z, double r)>;

struct HomotopyRegionSpec {
  MetricField gW;
  int q = 3;
  double r = 0.1;
  std::vector<double> nu_grid{0.0, 0.25, 0.5, 0.75, 1.0};
  double d = 1.0;
  double mu = 1.0;
  PerturbationFn perturbation;
  /// Sphere chart: polar resolution, phi resolution and pole band (radians).
  int polar_resolution = 96;
  int phi_resolution = 4;
  double band = 0.4;
  int collar_resolution = 9;

  int dim_w() const { return gW.dim(); }
  int dim() const { return gW.dim() + q - 1; }
};

namespace detail {

inline MetricField unit_sphere_factor(const HomotopyRegionSpec& s) {
  std::vector<int> res(static_cast<std::size_t>(s.q - 1), s.polar_resolution);
  res.back() = s.phi_resolution;
  return round_sphere({s.q - 1, 1.0, res, 2.0, s.band});
}

inline GridChart homotopy_chart(const HomotopyRegionSpec& s, bool collar) {
  std::vector<Axis> axes = s.gW.chart.axes();
  const MetricField sph = unit_sphere_factor(s);
  axes.insert(axes.end(), sph.chart.axes().begin(), sph.chart.axes().end());
  if (collar) axes.push_back(Axis{0.0, s.d, s.collar_resolution, false, 0.0});
  return GridChart(std::move(axes));
}

/// hbar_r = g^W + r^2 g_{S^{q-1}} at z.
inline Mat product_metric(const HomotopyRegionSpec& s, const MetricField& sph,
                          std::span<const double> z, double r) {
  const int dw = s.dim_w(), m = s.q - 1;
  Mat g = Mat::Zero(dw + m, dw + m);
  g.topLeftCorner(dw, dw) = s.gW(z.subspan(0, dw));
  g.bottomRightCorner(m, m) = r * r * sph(z.subspan(dw, m));
  return g;
}

inline Mat perturbation_at(const HomotopyRegionSpec& s, std::span<const double> z, double r) {
  if (!s.perturbation) return Mat::Zero(s.dim(), s.dim());
  return s.perturbation(z, r);
}

inline void require_positive(const MetricField& m) {
  const MetricCheck c = check_metric(m);
  if (c.max_relative_asymmetry > 1e-12)
    throw InvalidPerturbationError("perturbation is not symmetric");
  if (!(c.min_eigenvalue > 0.0))
    throw InvalidPerturbationError("perturbed metric '" + m.name + "' is not positive definite at " +
                                   format_point(c.worst_point));
}

}  // namespace detail

/// phi: 1 near 0, 0 near 1, smooth and decreasing.
inline double collar_cutoff(double tau) { return 1.0 - SmoothStep::value((tau - 0.1) / 0.8); }

/// Without collar: nu h_r + (1 - nu) hbar_r on W x S^{q-1}, r = spec.r.
/// With collar: hbar_rho + phi(t/d) nu P_rho + mu^2 dt^2 on W x S^{q-1} x [0, d],
/// rho = mu spec.r (spec.r plays the role of r_3).
inline MetricField homotopy_metric(const HomotopyRegionSpec& s, double nu, bool include_collar) {
  if (s.q < 3) throw InvalidSpecError("homotopy region needs q >= 3");
  if (!(nu >= 0.0 && nu <= 1.0)) throw ParameterError("nu must lie in [0, 1]");
  if (!(s.r > 0.0)) throw ParameterError("sphere radius must be positive");
  if (!(s.mu > 0.0 && s.mu <= 1.0)) throw ParameterError("mu must lie in (0, 1]");
  if (include_collar && !(s.d > 0.0)) throw ParameterError("collar length must be positive");
  if (s.dim() + (include_collar ? 1 : 0) > kMaxDim)
    throw InvalidSpecError("homotopy region dimension exceeds capacity");
  const MetricField sph = detail::unit_sphere_factor(s);
  MetricField m;
  m.chart = detail::homotopy_chart(s, include_collar);
  const int n = s.dim();
  if (!include_collar) {
    m.name = "h_r^nu";
    m.g = [s, sph, nu](std::span<const double> z) -> Mat {
      Mat g = detail::product_metric(s, sph, z, s.r);
      if (nu != 0.0) g += nu * detail::perturbation_at(s, z, s.r);
      return g;
    };
  } else {
    m.name = "H_rho+mu^2dt^2";
    const double rho = s.mu * s.r;
    m.g = [s, sph, nu, rho, n](std::span<const double> z) -> Mat {
      Mat g = Mat::Zero(n + 1, n + 1);
      const auto zz = z.subspan(0, n);
      g.topLeftCorner(n, n) = detail::product_metric(s, sph, zz, rho);
      const double w = nu * collar_cutoff(z[n] / s.d);
      if (w != 0.0) g.topLeftCorner(n, n) += w * detail::perturbation_at(s, zz, rho);
      g(n, n) = s.mu * s.mu;
      return g;
    };
  }
  detail::require_positive(m);
  return m;
}

/// Closed-form scalar curvature of hbar_r for a flat W: (q-1)(q-2)/r^2.
inline double product_scalar(int q, double r) { return (q - 1.0) * (q - 2.0) / (r * r); }

/// The sample perturbation used in the desk check, times `amplitude`: W-block
/// 0.5 r cos(theta_1), mixed entries -0.3 r^2 cos(x_1) sin(theta_1) and
/// 0.2 r^2 (phi coefficient of g_S), sphere block zero.
inline PerturbationFn sample_perturbation(int dim_w, int q, double amplitude = 1.0) {
  return [dim_w, q, amplitude](std::span<const double> z, double r) -> Mat {
    const int n = dim_w + q - 1;
    Mat p = Mat::Zero(n, n);
    const double th = z[dim_w];
    for (int i = 0; i < dim_w; ++i) p(i, i) = 0.5 * r * std::cos(th);
    const double a = -0.3 * r * r * std::cos(z[0]) * std::sin(th);
    p(0, dim_w) = p(dim_w, 0) = a;
    double phi_coef = 1.0;
    for (int k = 0; k + 1 < q - 1; ++k) {
      const double sk = std::sin(z[dim_w + k]);
      phi_coef *= sk * sk;
    }
    const double b = 0.2 * r * r * phi_coef;
    p(0, n - 1) += b;
    p(n - 1, 0) += b;
    return amplitude * p;
  };
}

struct BlockOrders {
  std::vector<double> r_list;
  std::vector<double> w_sup, mixed_sup, sphere_sup;
  double w_order = 0.0, mixed_order = 0.0;
  bool sphere_block_zero = true;
  bool ok = false;
};

namespace detail {

inline double log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0.0, my = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]) / n;
    my += std::log(y[i]) / n;
  }
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace detail

/// Fits the scaling exponents of the perturbation blocks over an r sweep.
/// Required: W block O(r), mixed block O(r^2), sphere block identically zero.
/// A block that vanishes identically counts as any order.
inline BlockOrders fit_block_orders(const HomotopyRegionSpec& s, const std::vector<double>& r_list,
                                    double slack = 0.1) {
  BlockOrders b;
  b.r_list = r_list;
  const GridChart chart = detail::homotopy_chart(s, false);
  const int dw = s.dim_w(), n = s.dim();
  double z[kMaxDim];
  const std::span<double> zs(z, n);
  for (double r : r_list) {
    double w = 0.0, mx = 0.0, sp = 0.0;
    for (std::size_t i = 0; i < chart.size(); ++i) {
      chart.point(i, zs);
      if (chart.excluded(zs)) continue;
      const Mat p = detail::perturbation_at(s, zs, r);
      w = std::max(w, p.topLeftCorner(dw, dw).cwiseAbs().maxCoeff());
      mx = std::max(mx, p.topRightCorner(dw, n - dw).cwiseAbs().maxCoeff());
      mx = std::max(mx, p.bottomLeftCorner(n - dw, dw).cwiseAbs().maxCoeff());
      sp = std::max(sp, p.bottomRightCorner(n - dw, n - dw).cwiseAbs().maxCoeff());
    }
    b.w_sup.push_back(w);
    b.mixed_sup.push_back(mx);
    b.sphere_sup.push_back(sp);
    if (sp != 0.0) b.sphere_block_zero = false;
  }
  auto order = [&](const std::vector<double>& v) {
    for (double x : v)
      if (x == 0.0) return std::numeric_limits<double>::infinity();
    return detail::log_slope(r_list, v);
  };
  b.w_order = order(b.w_sup);
  b.mixed_order = order(b.mixed_sup);
  b.ok = b.sphere_block_zero && b.w_order >= 1.0 - slack && b.mixed_order >= 2.0 - slack;
  return b;
}

struct HomotopyCertification {
  std::vector<double> r_list;
  std::vector<double> min_s_r2;  // min over nu of min s * r^2
  std::vector<double> worst_nu;
  std::vector<double> mu_list;
  std::vector<double> collar_min_s_rho2;  // min over nu of min s * (mu r)^2
  BlockOrders orders;
  double lower_constant = 1.0;
  double spread = 0.0;  // max/min of min_s_r2
  bool lemma_ok = false, collar_ok = false;
  bool pass() const { return orders.ok && lemma_ok && collar_ok; }
};

/// Minimum of s r^2 over the grid, nu and r; collar sweep over mu uses the
/// region radius spec.r as r_3.
inline HomotopyCertification certify_homotopy(const HomotopyRegionSpec& spec,
                                              const std::vector<double>& r_list,
                                              const std::vector<double>& mu_list = {1.0, 0.5, 0.25},
                                              double lower_constant = 1.0) {
  HomotopyCertification c;
  c.r_list = r_list;
  c.mu_list = mu_list;
  c.lower_constant = lower_constant;
  c.orders = fit_block_orders(spec, r_list);
  for (double r : r_list) {
    HomotopyRegionSpec s = spec;
    s.r = r;
    double best = std::numeric_limits<double>::infinity(), wnu = 0.0;
    for (double nu : spec.nu_grid) {
      const double v = scalar_curvature(homotopy_metric(s, nu, false)).min() * r * r;
      if (v < best) {
        best = v;
        wnu = nu;
      }
    }
    c.min_s_r2.push_back(best);
    c.worst_nu.push_back(wnu);
  }
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (double v : c.min_s_r2) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  c.spread = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  c.lemma_ok = !r_list.empty() && lo >= lower_constant && c.spread <= 2.0;
  c.collar_ok = !mu_list.empty();
  for (double mu : mu_list) {
    HomotopyRegionSpec s = spec;
    s.mu = mu;
    // The collar already sweeps the full homotopy through phi(t/d).
    const double rho = mu * spec.r;
    const double best = scalar_curvature(homotopy_metric(s, 1.0, true)).min() * rho * rho;
    c.collar_min_s_rho2.push_back(best);
    c.collar_ok = c.collar_ok && best > 0.0;
  }
  return c;
}

}  // namespace yamabe
