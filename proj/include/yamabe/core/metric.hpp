#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "yamabe/core/chart.hpp"
#include "yamabe/core/field.hpp"

namespace yamabe {

/// Small dense matrix with a compile-time capacity (no heap allocation).
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor,
                          kMaxDim, kMaxDim>;
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;

using MetricFn = std::function<Mat(std::span<const double>)>;

/// A Riemannian metric on a coordinate chart.
///
/// The metric is held as an evaluator. Closed-form metrics may be evaluated
/// slightly outside the chart box (one stencil step), so curvature is
/// available at every non-excluded node. Metrics rebuilt from samples are
/// interpolated and only have full stencils at interior nodes.
struct MetricField {
  GridChart chart;
  MetricFn g;
  std::string name;
  bool closed_form = true;

  int dim() const noexcept { return chart.dim(); }
  Mat operator()(std::span<const double> x) const { return g(x); }
};

/// Reports the worst symmetry / definiteness defect over non-excluded nodes.
struct MetricCheck {
  double max_relative_asymmetry = 0.0;
  double min_eigenvalue = 0.0;
  std::vector<double> worst_point;
};

inline MetricCheck check_metric(const MetricField& m) {
  MetricCheck out;
  out.min_eigenvalue = std::numeric_limits<double>::infinity();
  const GridChart& c = m.chart;
  double x[kMaxDim];
  const std::span<double> xs(x, c.dim());
  for (std::size_t i = 0; i < c.size(); ++i) {
    c.point(i, xs);
    if (c.excluded(xs)) continue;
    const Mat g = m(xs);
    if (g.rows() != c.dim() || g.cols() != c.dim())
      throw InvalidSpecError("metric '" + m.name + "' has wrong shape");
    const double scale = std::max(g.cwiseAbs().maxCoeff(), 1e-300);
    out.max_relative_asymmetry =
        std::max(out.max_relative_asymmetry, (g - g.transpose()).cwiseAbs().maxCoeff() / scale);
    Eigen::SelfAdjointEigenSolver<Mat> es(g, Eigen::EigenvaluesOnly);
    const double ev = es.eigenvalues().minCoeff();
    if (ev < out.min_eigenvalue) {
      out.min_eigenvalue = ev;
      out.worst_point.assign(x, x + c.dim());
    }
  }
  return out;
}

/// Throws unless the metric is symmetric (1e-12 relative) and positive definite
/// at every non-excluded node.
inline void validate(const MetricField& m) {
  const MetricCheck chk = check_metric(m);
  if (chk.max_relative_asymmetry > 1e-12)
    throw InvalidSpecError("metric '" + m.name + "' is not symmetric");
  if (!(chk.min_eigenvalue > 0.0))
    throw SingularMetricError("metric '" + m.name + "' is not positive definite at " +
                                  detail::format_point(chk.worst_point),
                              chk.worst_point);
}

/// Builds an interpolating metric from per-node samples (row-major node order).
inline MetricField sampled_metric(GridChart chart, std::vector<Mat> samples,
                                  std::string name) {
  if (samples.size() != chart.size())
    throw InvalidSpecError("sample count does not match chart size");
  const int n = chart.dim();
  // One component array per upper-triangular entry.
  auto comps = std::make_shared<std::vector<std::vector<double>>>();
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      std::vector<double> v(samples.size());
      for (std::size_t k = 0; k < samples.size(); ++k) v[k] = samples[k](i, j);
      comps->push_back(std::move(v));
    }
  MetricField out;
  out.chart = chart;
  out.name = std::move(name);
  out.closed_form = false;
  out.g = [chart, comps, n](std::span<const double> x) {
    Mat g(n, n);
    int c = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const double v = interpolate(chart, (*comps)[c++], x);
        g(i, j) = v;
        g(j, i) = v;
      }
    return g;
  };
  return out;
}

}  // namespace yamabe
