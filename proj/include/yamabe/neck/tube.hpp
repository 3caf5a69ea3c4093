#pragma once

#include <Eigen/Eigenvalues>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "yamabe/core/conformal.hpp"
#include "yamabe/core/curvature.hpp"
#include "yamabe/neck/profiles.hpp"

namespace yamabe {

/// Pi^alpha_{ij}(x): one dimW x dimW matrix per normal direction alpha.
using SecondFundamentalFn = std::function<std::vector<Mat>(std::span<const double>)>;
/// Normal connection: one q x q matrix per tangent index i, entry (alpha, beta) = Gamma^alpha_{i beta}.
using NormalConnectionFn = std::function<std::vector<Mat>(std::span<const double>)>;

/// Data of a codimension-q submanifold W in normal (Fermi) coordinates (x, y).
/// A zero-dimensional W (a point) is represented by a default-constructed gW.
struct TubeData {
  int q = 3;
  MetricField gW;
  SecondFundamentalFn second_fundamental;
  NormalConnectionFn normal_connection;
  double r0 = 0.1;
  /// Nodes per normal axis of the tube chart (odd keeps y = 0 on the grid).
  int normal_resolution = 17;

  int dim_w() const { return gW.g ? gW.dim() : 0; }
  int dim() const { return dim_w() + q; }
};

namespace detail {

inline std::vector<Mat> zero_pi(int dw, int q) { return std::vector<Mat>(q, Mat::Zero(dw, dw)); }
inline std::vector<Mat> zero_conn(int dw, int q) { return std::vector<Mat>(dw, Mat::Zero(q, q)); }

/// Nodes of W (a single empty point when W is zero-dimensional).
template <class F>
void for_each_w_node(const TubeData& t, F f) {
  if (t.dim_w() == 0) {
    f(std::span<const double>());
    return;
  }
  double x[kMaxDim];
  const std::span<double> xs(x, t.dim_w());
  for (std::size_t i = 0; i < t.gW.chart.size(); ++i) {
    t.gW.chart.point(i, xs);
    if (t.gW.chart.excluded(xs)) continue;
    f(std::span<const double>(x, t.dim_w()));
  }
}

inline std::vector<Mat> eval_pi(const TubeData& t, std::span<const double> x) {
  return t.second_fundamental ? t.second_fundamental(x) : zero_pi(t.dim_w(), t.q);
}
inline std::vector<Mat> eval_conn(const TubeData& t, std::span<const double> x) {
  return t.normal_connection ? t.normal_connection(x) : zero_conn(t.dim_w(), t.q);
}

/// Constant part A(x) and linear parts B_alpha(x) of the first-order metric.
inline void tube_jet(const TubeData& t, std::span<const double> x, Mat& A, std::vector<Mat>& B) {
  const int dw = t.dim_w(), q = t.q, n = dw + q;
  A = Mat::Identity(n, n);
  if (dw > 0) A.topLeftCorner(dw, dw) = t.gW(x);
  const auto pi = eval_pi(t, x);
  const auto conn = eval_conn(t, x);
  B.assign(q, Mat::Zero(n, n));
  for (int al = 0; al < q; ++al) {
    if (dw > 0) B[al].topLeftCorner(dw, dw) = -2.0 * pi[al];
    // g_{i alpha} = -sum_beta Gamma^alpha_{i beta} y^beta: coefficient of y^beta.
    for (int i = 0; i < dw; ++i)
      for (int a = 0; a < q; ++a) {
        B[al](i, dw + a) = -conn[i](a, al);
        B[al](dw + a, i) = -conn[i](a, al);
      }
  }
}

}  // namespace detail

/// Largest normal half-width r for which the first-order tube metric stays
/// positive definite on the cube [-r, r]^q over every W node. The positive
/// cone is convex, so checking the 2^q cube vertices suffices.
inline double max_tube_radius(const TubeData& t) {
  double rmax = std::numeric_limits<double>::infinity();
  const int q = t.q;
  detail::for_each_w_node(t, [&](std::span<const double> x) {
    Mat A;
    std::vector<Mat> B;
    detail::tube_jet(t, x, A, B);
    for (int mask = 0; mask < (1 << q); ++mask) {
      Mat Bs = Mat::Zero(A.rows(), A.cols());
      for (int a = 0; a < q; ++a) Bs += ((mask >> a) & 1 ? 1.0 : -1.0) * B[a];
      Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(-Bs, A, Eigen::EigenvaluesOnly);
      const double mu = es.eigenvalues().maxCoeff();
      if (mu > 0.0) rmax = std::min(rmax, 1.0 / mu);
    }
  });
  return rmax;
}

/// Tube chart: W axes followed by q normal axes [-r0, r0].
inline GridChart tube_chart(const TubeData& t) {
  std::vector<Axis> axes;
  if (t.dim_w() > 0) axes = t.gW.chart.axes();
  for (int a = 0; a < t.q; ++a) axes.push_back(Axis{-t.r0, t.r0, t.normal_resolution, false, 0.0});
  return GridChart(std::move(axes));
}

/// ghat = (gW - 2 y^alpha Pi^alpha) dx dx + g_{i alpha} dx dy + dy dy with
/// g_{i alpha} = -Gamma^alpha_{i beta} y^beta.
inline MetricField canonical_tube_metric(const TubeData& t) {
  if (t.q < 3) throw InvalidSpecError("tube codimension must be >= 3");
  if (t.dim() > kMaxDim) throw InvalidSpecError("tube dimension exceeds capacity");
  if (!(t.r0 > 0.0)) throw InvalidSpecError("tube radius must be positive");
  detail::for_each_w_node(t, [&](std::span<const double> x) {
    for (const Mat& p : detail::eval_pi(t, x)) {
      if (p.size() == 0) continue;
      const double scale = std::max(1.0, p.cwiseAbs().maxCoeff());
      if ((p - p.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw InvalidSpecError("second fundamental form is not symmetric");
    }
  });
  const double rmax = max_tube_radius(t);
  if (!(t.r0 < rmax))
    throw TubeRadiusError("tube radius " + std::to_string(t.r0) +
                              " exceeds the maximal admissible radius " + std::to_string(rmax),
                          rmax);
  MetricField m;
  m.chart = tube_chart(t);
  m.name = "ghat";
  const int dw = t.dim_w(), q = t.q;
  m.g = [t, dw, q](std::span<const double> z) -> Mat {
    Mat A;
    std::vector<Mat> B;
    detail::tube_jet(t, z.subspan(0, dw), A, B);
    for (int a = 0; a < q; ++a) A += z[dw + a] * B[a];
    return A;
  };
  return m;
}

/// Scalar curvature of a tube metric restricted to W (y = 0), as a function of x.
inline ScalarFn scalar_on_w(const MetricField& g, int q) {
  const int n = g.dim(), dw = n - q;
  std::vector<double> h(n);
  for (int a = 0; a < n; ++a) h[a] = g.chart.spacing(a);
  return [g, dw, n, h](std::span<const double> x) {
    double z[kMaxDim] = {};
    for (int i = 0; i < dw; ++i) z[i] = x[i];
    return scalar_curvature_at(g, std::span<const double>(z, n), h);
  };
}

/// u(x,y) = 1 - |y|^2 (s_g|W - s_ghat|W) / (2 a q), so that
/// u^{1-p}(a Delta u + s_ghat u) = s_g on W.
inline ConformalFactor correction_factor(const TubeData& t, const ScalarFn& s_g_on_w,
                                         const ScalarFn& s_ghat_on_w, int n) {
  if (n != t.dim()) throw InvalidSpecError("dimension does not match the tube");
  const double a = conformal_coefficient(n);
  const int q = t.q, dw = t.dim_w();
  // u > 0 on the cube |y|^2 <= q r0^2.
  double dmax = 0.0;
  detail::for_each_w_node(t, [&](std::span<const double> x) {
    dmax = std::max(dmax, s_g_on_w(x) - s_ghat_on_w(x));
  });
  const double rmax = dmax > 0.0 ? std::sqrt(2.0 * a / dmax) : std::numeric_limits<double>::infinity();
  if (!(t.r0 < rmax))
    throw TubeRadiusError("correction factor not positive on the tube; shrink r0 below " +
                              std::to_string(rmax),
                          rmax);
  const double c = 1.0 / (2.0 * a * q);
  return make_conformal_factor(n, [=](std::span<const double> z) {
    double y2 = 0.0;
    for (int a2 = 0; a2 < q; ++a2) y2 += z[dw + a2] * z[dw + a2];
    const auto x = z.subspan(0, dw);
    return 1.0 - y2 * c * (s_g_on_w(x) - s_ghat_on_w(x));
  });
}

/// Euclidean norm of the normal coordinates.
inline double normal_radius(std::span<const double> z, int q) {
  double y2 = 0.0;
  for (int a = 0; a < q; ++a) y2 += z[z.size() - q + a] * z[z.size() - q + a];
  return std::sqrt(y2);
}

struct JetCheck {
  double max_value_gap = 0.0;
  double max_derivative_gap = 0.0;
};

/// sup over W nodes of |gbar - g| and of the normal derivatives of gbar - g.
inline JetCheck first_order_gap(const MetricField& g, const MetricField& gbar, int q,
                                double step = 1e-6) {
  JetCheck c;
  const int n = g.dim(), dw = n - q;
  auto check = [&](std::span<const double> x) {
    double z[kMaxDim] = {};
    for (int i = 0; i < dw; ++i) z[i] = x[i];
    const std::span<const double> zs(z, n);
    c.max_value_gap = std::max(c.max_value_gap, (gbar(zs) - g(zs)).cwiseAbs().maxCoeff());
    for (int a = 0; a < q; ++a) {
      z[dw + a] = step;
      const Mat dp = gbar(zs) - g(zs);
      z[dw + a] = -step;
      const Mat dm = gbar(zs) - g(zs);
      z[dw + a] = 0.0;
      c.max_derivative_gap =
          std::max(c.max_derivative_gap, ((dp - dm) / (2.0 * step)).cwiseAbs().maxCoeff());
    }
  };
  if (dw == 0) {
    check(std::span<const double>());
    return c;
  }
  // W nodes: tube-chart nodes whose normal indices are all zero.
  int idx[kMaxDim];
  double x[kMaxDim];
  for (std::size_t i = 0; i < g.chart.size(); ++i) {
    g.chart.multi_index(i, std::span<int>(idx, n));
    bool first = true;
    for (int a = dw; a < n; ++a) first = first && idx[a] == 0;
    if (!first) continue;
    for (int a = 0; a < dw; ++a) x[a] = g.chart.coordinate(a, idx[a]);
    if (g.chart.excluded(std::span<const double>(x, n))) continue;
    check(std::span<const double>(x, dw));
  }
  return c;
}

struct GlueOptions {
  double jet_tolerance = 1e-5;
  double jet_step = 1e-6;
  /// Profile beta; the profile is the log ramp from (1/4)e^{-1/delta} to delta.
  double beta = 0.25;
};

/// g_delta = g + w_delta(r)(gbar - g): gbar on the inner plateau, g for r >= delta.
inline MetricField glue_interpolated_metric(const MetricField& g, const MetricField& gbar, int q,
                                            double delta, const GlueOptions& opt = {}) {
  if (g.dim() != gbar.dim()) throw InvalidSpecError("metrics live on different charts");
  const JetCheck jc = first_order_gap(g, gbar, q, opt.jet_step);
  if (jc.max_value_gap > opt.jet_tolerance || jc.max_derivative_gap > opt.jet_tolerance)
    throw IncompatibleJetError("metrics disagree to first order on W (value gap " +
                               std::to_string(jc.max_value_gap) + ", derivative gap " +
                               std::to_string(jc.max_derivative_gap) + ")");
  const Profile w = build_interpolation_profile(delta, opt.beta);
  MetricField out = g;
  out.name = "g_delta";
  out.closed_form = g.closed_form && gbar.closed_form;
  out.g = [g, gbar, w, q](std::span<const double> z) -> Mat {
    const double r = normal_radius(z, q);
    const double wv = w(r);
    if (wv == 0.0) return g(z);
    if (wv == 1.0) return gbar(z);
    const Mat a = g(z);
    return a + wv * (gbar(z) - a);
  };
  return out;
}

struct GlueGapOptions {
  int samples = 400;
  /// Radii below this are skipped: O(r^2) metric deviations drop under
  /// double-precision resolution of second differences.
  double r_floor = 1e-4;
  /// Finite-difference step as a fraction of the sample radius.
  double step_ratio = 0.05;
};

struct GlueGap {
  double delta = 0.0;
  double sup_scalar_gap = 0.0, worst_r = 0.0;
  double c1_distance = 0.0;
  double r_lo = 0.0, r_hi = 0.0;
  int samples = 0;
};

/// sup |s_{g_delta} - s_g| and the C^1 distance between g_delta and g, sampled
/// along coordinate and diagonal rays in the normal directions over a
/// log-spaced radius range covering the transition annulus.
inline GlueGap glue_gap(const MetricField& g, const MetricField& g_delta, int q, double delta,
                        const GlueGapOptions& opt = {}) {
  GlueGap out;
  out.delta = delta;
  const int n = g.dim(), dw = n - q;
  out.r_lo = std::max(0.5 * w_plateau_radius(delta), opt.r_floor);
  out.r_hi = 2.0 * delta;
  double base[kMaxDim] = {};
  if (dw > 0) {
    const auto x0 = g.chart.point(0);
    for (int i = 0; i < dw; ++i) base[i] = x0[i];
  }
  std::vector<std::vector<double>> dirs;
  for (int a = 0; a < q; ++a) {
    std::vector<double> d(q, 0.0);
    d[a] = 1.0;
    dirs.push_back(d);
  }
  dirs.emplace_back(q, 1.0 / std::sqrt(static_cast<double>(q)));
  for (double r : detail::log_samples(out.r_lo, out.r_hi, opt.samples)) {
    const double h = opt.step_ratio * r;
    const std::vector<double> steps(n, h);
    for (const auto& d : dirs) {
      double z[kMaxDim];
      std::copy(base, base + n, z);
      for (int a = 0; a < q; ++a) z[dw + a] = r * d[a];
      const std::span<const double> zs(z, n);
      const double gap = std::abs(scalar_curvature_at(g_delta, zs, steps) - scalar_curvature_at(g, zs, steps));
      if (gap > out.sup_scalar_gap) {
        out.sup_scalar_gap = gap;
        out.worst_r = r;
      }
      double c1 = (g_delta(zs) - g(zs)).cwiseAbs().maxCoeff();
      double dmax = 0.0;
      for (int a = 0; a < n; ++a) {
        const double za = z[a];
        z[a] = za + h;
        const Mat p = g_delta(zs) - g(zs);
        z[a] = za - h;
        const Mat m = g_delta(zs) - g(zs);
        z[a] = za;
        dmax = std::max(dmax, ((p - m) / (2.0 * h)).cwiseAbs().maxCoeff());
      }
      out.c1_distance = std::max(out.c1_distance, c1 + dmax);
      ++out.samples;
    }
  }
  return out;
}

// ------------------------------------------------------------ model tubes

/// (1 - sin^2 r / r^2) / r^2 with a series near r = 0.
inline double radial_defect_ratio(double r) {
  if (r < 1e-3) {
    const double r2 = r * r;
    return 1.0 / 3.0 - 2.0 * r2 / 45.0 + r2 * r2 / 315.0;
  }
  const double s = std::sin(r);
  return (r * r - s * s) / (r * r * r * r);
}

/// dr^2 + sin^2 r g_{S^{q-1}} written in Cartesian normal coordinates y:
/// S delta + (1 - S) y y^T / r^2 with S = sin^2 r / r^2.
inline Mat geodesic_polar_block(std::span<const double> y) {
  const int q = static_cast<int>(y.size());
  double r2 = 0.0;
  for (double v : y) r2 += v * v;
  const double r = std::sqrt(r2);
  const double c = radial_defect_ratio(r);  // (1 - S)/r^2
  const double S = 1.0 - c * r2;
  Mat g = S * Mat::Identity(q, q);
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b) g(a, b) += c * y[a] * y[b];
  return g;
}

/// A tube together with the exact metric in the same coordinates.
struct TubeExample {
  TubeData tube;
  MetricField exact;
  double s_exact_on_w = 0.0;
};

/// Great circle S^1 in the round unit S^n (q = n - 1): totally geodesic,
/// exact metric cos^2|y| dx^2 + (geodesic polar block).
inline TubeExample great_circle_in_sphere(int n, double r0, int w_resolution, int normal_resolution) {
  TubeExample ex;
  ex.tube.q = n - 1;
  ex.tube.r0 = r0;
  ex.tube.normal_resolution = normal_resolution;
  ex.tube.gW.chart = GridChart({Axis{0.0, 2.0 * std::numbers::pi, w_resolution, true, 0.0}});
  ex.tube.gW.name = "S^1";
  ex.tube.gW.g = [](std::span<const double>) -> Mat { return Mat::Identity(1, 1); };
  ex.exact.chart = tube_chart(ex.tube);
  ex.exact.name = "S^" + std::to_string(n);
  const int q = n - 1;
  ex.exact.g = [q](std::span<const double> z) -> Mat {
    Mat g = Mat::Zero(q + 1, q + 1);
    double r2 = 0.0;
    for (int a = 0; a < q; ++a) r2 += z[1 + a] * z[1 + a];
    const double c = std::cos(std::sqrt(r2));
    g(0, 0) = c * c;
    g.bottomRightCorner(q, q) = geodesic_polar_block(z.subspan(1, q));
    return g;
  };
  ex.s_exact_on_w = n * (n - 1.0);
  return ex;
}

/// Planar circle of radius R in R^{q+1}: Pi^1 = -1/R along the outward normal y^1,
/// exact flat metric (1 + y^1/R)^2 dx^2 + dy^2.
inline TubeExample circle_in_euclidean(double R, int q, double r0, int w_resolution,
                                       int normal_resolution) {
  TubeExample ex;
  ex.tube.q = q;
  ex.tube.r0 = r0;
  ex.tube.normal_resolution = normal_resolution;
  ex.tube.gW.chart = GridChart({Axis{0.0, 2.0 * std::numbers::pi * R, w_resolution, true, 0.0}});
  ex.tube.gW.name = "circle";
  ex.tube.gW.g = [](std::span<const double>) -> Mat { return Mat::Identity(1, 1); };
  ex.tube.second_fundamental = [q, R](std::span<const double>) {
    std::vector<Mat> pi(q, Mat::Zero(1, 1));
    pi[0](0, 0) = -1.0 / R;
    return pi;
  };
  ex.exact.chart = tube_chart(ex.tube);
  ex.exact.name = "R^" + std::to_string(q + 1);
  ex.exact.g = [q, R](std::span<const double> z) -> Mat {
    Mat g = Mat::Identity(q + 1, q + 1);
    const double f = 1.0 + z[1] / R;
    g(0, 0) = f * f;
    return g;
  };
  ex.s_exact_on_w = 0.0;
  return ex;
}

/// A point in the round unit S^n: W is zero-dimensional, q = n, exact metric
/// is the round metric in geodesic normal coordinates.
inline TubeExample point_in_sphere(int n, double r0, int normal_resolution) {
  TubeExample ex;
  ex.tube.q = n;
  ex.tube.r0 = r0;
  ex.tube.normal_resolution = normal_resolution;
  ex.exact.chart = tube_chart(ex.tube);
  ex.exact.name = "S^" + std::to_string(n);
  ex.exact.g = [](std::span<const double> z) -> Mat { return geodesic_polar_block(z); };
  ex.s_exact_on_w = n * (n - 1.0);
  return ex;
}

/// gbar = u^{p-2} ghat with u the correction factor built from the exact metric.
inline MetricField corrected_tube_metric(const TubeExample& ex) {
  const MetricField ghat = canonical_tube_metric(ex.tube);
  const int n = ex.tube.dim();
  const double s_exact = ex.s_exact_on_w;
  const ConformalFactor u = correction_factor(
      ex.tube, [s_exact](std::span<const double>) { return s_exact; }, scalar_on_w(ghat, ex.tube.q), n);
  MetricField gbar = conformal_metric(ghat, u);
  gbar.name = "gbar";
  return gbar;
}

}  // namespace yamabe
