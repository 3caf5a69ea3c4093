#pragma once

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "yamabe/core/field.hpp"
#include "yamabe/core/metric.hpp"

namespace yamabe {

// Index conventions (n = chart dimension):
//   Gamma^C_{AB}          christoffel(C, A, B)
//   R^D_{ABC}             riemann(D, A, B, C)
//                         = d_A Gamma^D_{BC} - d_B Gamma^D_{AC}
//                           + Gamma^E_{BC} Gamma^D_{AE} - Gamma^E_{AC} Gamma^D_{BE}
//   Ric_{BC}              sum_A R^A_{ABC}
//   s                     g^{BC} Ric_{BC}        (round unit S^n: s = n(n-1))

/// Finite-difference options shared by every pointwise operator.
struct StencilOptions {
  /// Per-axis step; empty means the chart spacing times `step_scale`.
  std::vector<double> steps;
  double step_scale = 1.0;
  /// Keep Christoffel/Riemann/Ricci tensors per node (memory heavy).
  bool keep_tensors = false;
};

namespace detail {

inline std::array<double, kMaxDim> resolve_steps(const GridChart& chart,
                                                 const StencilOptions& opt) {
  std::array<double, kMaxDim> h{};
  for (int a = 0; a < chart.dim(); ++a)
    h[a] = opt.steps.empty() ? chart.spacing(a) * opt.step_scale
                             : opt.steps.at(static_cast<std::size_t>(a));
  return h;
}

/// Metric value, inverse, and centered-difference first/second derivatives.
struct MetricJet {
  int n = 0;
  Mat g, ginv;
  std::array<Mat, kMaxDim> dg;
  std::array<std::array<Mat, kMaxDim>, kMaxDim> ddg;
};

inline Mat checked_inverse(const MetricField& m, const Mat& g, std::span<const double> x) {
  Eigen::LLT<Mat> llt(g);
  if (llt.info() != Eigen::Success) {
    std::vector<double> p(x.begin(), x.end());
    throw SingularMetricError("metric '" + m.name + "' is singular or indefinite at " +
                                  format_point(p),
                              p);
  }
  return llt.solve(Mat::Identity(g.rows(), g.cols()));
}

inline MetricJet metric_jet(const MetricField& m, std::span<const double> x,
                            std::span<const double> h, bool second_order) {
  MetricJet jet;
  const int n = m.dim();
  jet.n = n;
  double y[kMaxDim];
  std::copy(x.begin(), x.end(), y);
  const std::span<const double> ys(y, n);
  jet.g = m(ys);
  jet.ginv = checked_inverse(m, jet.g, x);

  std::array<Mat, kMaxDim> gp, gm;
  for (int a = 0; a < n; ++a) {
    y[a] = x[a] + h[a];
    gp[a] = m(ys);
    y[a] = x[a] - h[a];
    gm[a] = m(ys);
    y[a] = x[a];
    jet.dg[a] = (gp[a] - gm[a]) / (2.0 * h[a]);
    if (second_order) jet.ddg[a][a] = (gp[a] - 2.0 * jet.g + gm[a]) / (h[a] * h[a]);
  }
  if (!second_order) return jet;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      y[a] = x[a] + h[a];
      y[b] = x[b] + h[b];
      const Mat pp = m(ys);
      y[b] = x[b] - h[b];
      const Mat pm = m(ys);
      y[a] = x[a] - h[a];
      const Mat mm = m(ys);
      y[b] = x[b] + h[b];
      const Mat mp = m(ys);
      y[a] = x[a];
      y[b] = x[b];
      jet.ddg[a][b] = (pp - pm - mp + mm) / (4.0 * h[a] * h[b]);
      jet.ddg[b][a] = jet.ddg[a][b];
    }
  return jet;
}

/// Dense storage for Gamma and its first derivatives at one point.
struct ConnectionJet {
  int n = 0;
  double gamma[kMaxDim][kMaxDim][kMaxDim];                 // [C][A][B]
  double dgamma[kMaxDim][kMaxDim][kMaxDim][kMaxDim];       // [E][C][A][B] = d_E Gamma^C_{AB}
};

inline void lower_christoffel(const MetricJet& jet,
                              double out[kMaxDim][kMaxDim][kMaxDim]) {
  const int n = jet.n;
  for (int e = 0; e < n; ++e)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        out[e][a][b] = 0.5 * (jet.dg[a](b, e) + jet.dg[b](a, e) - jet.dg[e](a, b));
}

inline void raise_christoffel(const MetricJet& jet,
                              const double low[kMaxDim][kMaxDim][kMaxDim],
                              double out[kMaxDim][kMaxDim][kMaxDim]) {
  const int n = jet.n;
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double s = 0.0;
        for (int e = 0; e < n; ++e) s += jet.ginv(c, e) * low[e][a][b];
        out[c][a][b] = s;
      }
}

inline void connection_jet(const MetricJet& jet, ConnectionJet& cj) {
  const int n = jet.n;
  cj.n = n;
  double low[kMaxDim][kMaxDim][kMaxDim];
  lower_christoffel(jet, low);
  raise_christoffel(jet, low, cj.gamma);
  for (int e = 0; e < n; ++e) {
    const Mat dginv = -jet.ginv * jet.dg[e] * jet.ginv;
    double dlow[kMaxDim][kMaxDim][kMaxDim];
    for (int d = 0; d < n; ++d)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          dlow[d][a][b] =
              0.5 * (jet.ddg[e][a](b, d) + jet.ddg[e][b](a, d) - jet.ddg[e][d](a, b));
    for (int c = 0; c < n; ++c)
      for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
          double s = 0.0;
          for (int d = 0; d < n; ++d) s += dginv(c, d) * low[d][a][b] + jet.ginv(c, d) * dlow[d][a][b];
          cj.dgamma[e][c][a][b] = s;
          cj.dgamma[e][c][b][a] = s;
        }
  }
}

inline double riemann_component(const ConnectionJet& cj, int d, int a, int b, int c) {
  double r = cj.dgamma[a][d][b][c] - cj.dgamma[b][d][a][c];
  for (int e = 0; e < cj.n; ++e)
    r += cj.gamma[e][b][c] * cj.gamma[d][a][e] - cj.gamma[e][a][c] * cj.gamma[d][b][e];
  return r;
}

}  // namespace detail

/// Christoffel symbols at one point.
struct Christoffel {
  int n = 0;
  std::vector<double> data;  // [C][A][B]
  double operator()(int c, int a, int b) const {
    return data[(static_cast<std::size_t>(c) * n + a) * n + b];
  }
};

/// Full curvature data at one point.
struct PointCurvature {
  int n = 0;
  Christoffel christoffel;
  std::vector<double> riemann;  // [D][A][B][C]
  Mat ricci;
  double scalar = 0.0;

  double riemann_at(int d, int a, int b, int c) const {
    return riemann[((static_cast<std::size_t>(d) * n + a) * n + b) * n + c];
  }
};

inline Christoffel christoffel_at(const MetricField& m, std::span<const double> x,
                                  std::span<const double> h) {
  const detail::MetricJet jet = detail::metric_jet(m, x, h, false);
  double low[kMaxDim][kMaxDim][kMaxDim], up[kMaxDim][kMaxDim][kMaxDim];
  detail::lower_christoffel(jet, low);
  detail::raise_christoffel(jet, low, up);
  const int n = m.dim();
  Christoffel out;
  out.n = n;
  out.data.resize(static_cast<std::size_t>(n) * n * n);
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) out.data[(static_cast<std::size_t>(c) * n + a) * n + b] = up[c][a][b];
  return out;
}

inline PointCurvature curvature_at(const MetricField& m, std::span<const double> x,
                                   std::span<const double> h) {
  const detail::MetricJet jet = detail::metric_jet(m, x, h, true);
  auto cj = std::make_unique<detail::ConnectionJet>();
  detail::connection_jet(jet, *cj);
  const int n = m.dim();
  PointCurvature out;
  out.n = n;
  out.christoffel.n = n;
  out.christoffel.data.resize(static_cast<std::size_t>(n) * n * n);
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        out.christoffel.data[(static_cast<std::size_t>(c) * n + a) * n + b] = cj->gamma[c][a][b];
  out.riemann.resize(static_cast<std::size_t>(n) * n * n * n);
  for (int d = 0; d < n; ++d)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          out.riemann[((static_cast<std::size_t>(d) * n + a) * n + b) * n + c] =
              detail::riemann_component(*cj, d, a, b, c);
  out.ricci = Mat::Zero(n, n);
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c)
      for (int a = 0; a < n; ++a) out.ricci(b, c) += out.riemann_at(a, a, b, c);
  out.scalar = (jet.ginv.cwiseProduct(out.ricci)).sum();
  return out;
}

/// Scalar curvature only; avoids materializing the Riemann tensor.
inline double scalar_curvature_at(const MetricField& m, std::span<const double> x,
                                  std::span<const double> h) {
  const detail::MetricJet jet = detail::metric_jet(m, x, h, true);
  detail::ConnectionJet cj;
  detail::connection_jet(jet, cj);
  const int n = m.dim();
  double s = 0.0;
  for (int b = 0; b < n; ++b)
    for (int c = b; c < n; ++c) {
      double ric = 0.0;
      for (int a = 0; a < n; ++a) ric += detail::riemann_component(cj, a, a, b, c);
      s += (b == c ? 1.0 : 2.0) * jet.ginv(b, c) * ric;
    }
  return s;
}

namespace detail {

/// Nodes at which pointwise differential operators are evaluated.
inline bool evaluable(const MetricField& m, std::size_t flat, std::span<const double> x) {
  if (m.chart.excluded(x)) return false;
  return m.closed_form || m.chart.interior_node(flat);
}

}  // namespace detail

/// Christoffel symbols at every evaluable node (others left empty).
struct ChristoffelField {
  GridChart chart;
  std::vector<Christoffel> values;
  std::vector<std::uint8_t> valid;
};

inline ChristoffelField christoffel(const MetricField& m, const StencilOptions& opt = {}) {
  ChristoffelField out{m.chart, std::vector<Christoffel>(m.chart.size()),
                       std::vector<std::uint8_t>(m.chart.size(), 0)};
  const auto h = detail::resolve_steps(m.chart, opt);
  double x[kMaxDim];
  const std::span<double> xs(x, m.dim());
  for (std::size_t i = 0; i < m.chart.size(); ++i) {
    m.chart.point(i, xs);
    if (!detail::evaluable(m, i, xs)) continue;
    out.values[i] = christoffel_at(m, xs, std::span<const double>(h.data(), m.dim()));
    out.valid[i] = 1;
  }
  return out;
}

/// Scalar curvature at every evaluable node, plus tensors when requested.
struct CurvatureData {
  SampledField scalar;
  std::vector<PointCurvature> tensors;  // empty unless keep_tensors
};

inline SampledField scalar_curvature(const MetricField& m, const StencilOptions& opt = {}) {
  SampledField out(m.chart);
  const auto h = detail::resolve_steps(m.chart, opt);
  const std::span<const double> hs(h.data(), m.dim());
  double x[kMaxDim];
  const std::span<double> xs(x, m.dim());
  for (std::size_t i = 0; i < m.chart.size(); ++i) {
    m.chart.point(i, xs);
    if (!detail::evaluable(m, i, xs)) continue;
    out.values[i] = scalar_curvature_at(m, xs, hs);
    out.valid[i] = 1;
  }
  return out;
}

inline CurvatureData riemann_ricci_scalar(const MetricField& m, const StencilOptions& opt = {}) {
  if (!opt.keep_tensors) return {scalar_curvature(m, opt), {}};
  CurvatureData out{SampledField(m.chart), std::vector<PointCurvature>(m.chart.size())};
  const auto h = detail::resolve_steps(m.chart, opt);
  const std::span<const double> hs(h.data(), m.dim());
  double x[kMaxDim];
  const std::span<double> xs(x, m.dim());
  for (std::size_t i = 0; i < m.chart.size(); ++i) {
    m.chart.point(i, xs);
    if (!detail::evaluable(m, i, xs)) continue;
    out.tensors[i] = curvature_at(m, xs, hs);
    out.scalar.values[i] = out.tensors[i].scalar;
    out.scalar.valid[i] = 1;
  }
  return out;
}

/// First and second centered differences of a scalar function.
struct ScalarJet {
  double f = 0.0;
  Vec df;
  Mat ddf;
};

inline ScalarJet scalar_jet(const ScalarFn& f, std::span<const double> x,
                            std::span<const double> h) {
  const int n = static_cast<int>(x.size());
  ScalarJet j;
  j.df = Vec::Zero(n);
  j.ddf = Mat::Zero(n, n);
  double y[kMaxDim];
  std::copy(x.begin(), x.end(), y);
  const std::span<const double> ys(y, n);
  j.f = f(ys);
  for (int a = 0; a < n; ++a) {
    y[a] = x[a] + h[a];
    const double fp = f(ys);
    y[a] = x[a] - h[a];
    const double fm = f(ys);
    y[a] = x[a];
    j.df(a) = (fp - fm) / (2.0 * h[a]);
    j.ddf(a, a) = (fp - 2.0 * j.f + fm) / (h[a] * h[a]);
  }
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      y[a] = x[a] + h[a]; y[b] = x[b] + h[b];
      const double pp = f(ys);
      y[b] = x[b] - h[b];
      const double pm = f(ys);
      y[a] = x[a] - h[a];
      const double mm = f(ys);
      y[b] = x[b] + h[b];
      const double mp = f(ys);
      y[a] = x[a]; y[b] = x[b];
      j.ddf(a, b) = j.ddf(b, a) = (pp - pm - mp + mm) / (4.0 * h[a] * h[b]);
    }
  return j;
}

/// Positive-spectrum Laplacian  -g^{AB}(d_A d_B f - Gamma^C_{AB} d_C f).
inline double laplacian_at(const MetricField& m, const ScalarFn& f, std::span<const double> x,
                           std::span<const double> h) {
  const Christoffel gam = christoffel_at(m, x, h);
  const Mat ginv = detail::checked_inverse(m, m(x), x);
  const ScalarJet fj = scalar_jet(f, x, h);
  const int n = m.dim();
  double acc = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double hess = fj.ddf(a, b);
      for (int c = 0; c < n; ++c) hess -= gam(c, a, b) * fj.df(c);
      acc += ginv(a, b) * hess;
    }
  return -acc;
}

inline SampledField laplacian(const MetricField& m, const ScalarFn& f,
                              const StencilOptions& opt = {}) {
  SampledField out(m.chart);
  const auto h = detail::resolve_steps(m.chart, opt);
  const std::span<const double> hs(h.data(), m.dim());
  double x[kMaxDim];
  const std::span<double> xs(x, m.dim());
  for (std::size_t i = 0; i < m.chart.size(); ++i) {
    m.chart.point(i, xs);
    if (!detail::evaluable(m, i, xs)) continue;
    out.values[i] = laplacian_at(m, f, xs, hs);
    out.valid[i] = 1;
  }
  return out;
}

/// |df|_g^2 by centered differences.
inline double gradient_norm_sq_at(const MetricField& m, const ScalarFn& f,
                                  std::span<const double> x, std::span<const double> h) {
  const int n = m.dim();
  const Mat ginv = detail::checked_inverse(m, m(x), x);
  Vec df(n);
  double y[kMaxDim];
  std::copy(x.begin(), x.end(), y);
  const std::span<const double> ys(y, n);
  for (int a = 0; a < n; ++a) {
    y[a] = x[a] + h[a];
    const double fp = f(ys);
    y[a] = x[a] - h[a];
    const double fm = f(ys);
    y[a] = x[a];
    df(a) = (fp - fm) / (2.0 * h[a]);
  }
  return df.dot(ginv * df);
}

}  // namespace yamabe
