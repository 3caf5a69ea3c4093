#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "yamabe/core/errors.hpp"

namespace yamabe {

/// Upper bound on chart dimension; lets small matrices live on the stack.
inline constexpr int kMaxDim = 8;

/// One coordinate axis of a tensor-product grid.
struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  int resolution = 4;
  bool periodic = false;
  /// Margin at each end of the axis that is excluded from evaluation
  /// (coordinate singularities such as sphere poles).
  double band = 0.0;
};

/// Tensor-product grid over a coordinate box.
///
/// Non-periodic axes carry nodes at both endpoints, spacing (hi-lo)/(N-1).
/// Periodic axes identify hi with lo and use spacing (hi-lo)/N.
/// Nodes are numbered row-major: the last axis varies fastest.
class GridChart {
 public:
  GridChart() = default;

  explicit GridChart(std::vector<Axis> axes) : axes_(std::move(axes)) {
    if (axes_.empty() || static_cast<int>(axes_.size()) > kMaxDim)
      throw InvalidSpecError("chart dimension must be in [1, " +
                             std::to_string(kMaxDim) + "]");
    std::size_t total = 1;
    for (std::size_t a = 0; a < axes_.size(); ++a) {
      const Axis& ax = axes_[a];
      const std::string tag = "axis " + std::to_string(a);
      if (ax.resolution < 4)
        throw InvalidSpecError(tag + ": resolution must be >= 4");
      if (!(ax.hi - ax.lo > 0.0))
        throw InvalidSpecError(tag + ": bounds must have positive length");
      if (ax.band < 0.0) throw InvalidSpecError(tag + ": negative band");
      if (ax.periodic && ax.band > 0.0)
        throw InvalidSpecError(tag + ": periodic axes cannot carry bands");
      if (2.0 * ax.band >= ax.hi - ax.lo)
        throw InvalidSpecError(tag + ": excluded bands must lie strictly inside the bounds");
      total *= static_cast<std::size_t>(ax.resolution);
    }
    size_ = total;
  }

  int dim() const noexcept { return static_cast<int>(axes_.size()); }
  std::size_t size() const noexcept { return size_; }
  const Axis& axis(int a) const { return axes_.at(static_cast<std::size_t>(a)); }
  const std::vector<Axis>& axes() const noexcept { return axes_; }

  double spacing(int a) const {
    const Axis& ax = axis(a);
    return ax.periodic ? (ax.hi - ax.lo) / ax.resolution
                       : (ax.hi - ax.lo) / (ax.resolution - 1);
  }

  double coordinate(int a, int i) const { return axis(a).lo + i * spacing(a); }

  void multi_index(std::size_t flat, std::span<int> idx) const {
    for (int a = dim() - 1; a >= 0; --a) {
      const auto n = static_cast<std::size_t>(axes_[a].resolution);
      idx[a] = static_cast<int>(flat % n);
      flat /= n;
    }
  }

  std::size_t flat_index(std::span<const int> idx) const {
    std::size_t flat = 0;
    for (int a = 0; a < dim(); ++a)
      flat = flat * static_cast<std::size_t>(axes_[a].resolution) +
             static_cast<std::size_t>(idx[a]);
    return flat;
  }

  void point(std::size_t flat, std::span<double> x) const {
    int idx[kMaxDim];
    multi_index(flat, std::span<int>(idx, dim()));
    for (int a = 0; a < dim(); ++a) x[a] = coordinate(a, idx[a]);
  }

  std::vector<double> point(std::size_t flat) const {
    std::vector<double> x(dim());
    point(flat, x);
    return x;
  }

  /// True when x lies inside an excluded band on some axis.
  bool excluded(std::span<const double> x) const {
    for (int a = 0; a < dim(); ++a) {
      const Axis& ax = axes_[a];
      if (ax.band <= 0.0) continue;
      const double tol = 1e-12 * (ax.hi - ax.lo);
      if (x[a] < ax.lo + ax.band - tol || x[a] > ax.hi - ax.band + tol) return true;
    }
    return false;
  }

  bool excluded_node(std::size_t flat) const {
    double x[kMaxDim];
    point(flat, std::span<double>(x, dim()));
    return excluded(std::span<const double>(x, dim()));
  }

  /// True when the centered stencil around the node stays on the grid.
  bool interior_node(std::size_t flat) const {
    int idx[kMaxDim];
    multi_index(flat, std::span<int>(idx, dim()));
    for (int a = 0; a < dim(); ++a) {
      if (axes_[a].periodic) continue;
      if (idx[a] == 0 || idx[a] == axes_[a].resolution - 1) return false;
    }
    return true;
  }

  /// Same chart with every resolution multiplied by `factor` (spacing divided).
  GridChart refined(int factor) const {
    std::vector<Axis> axes = axes_;
    for (Axis& ax : axes) {
      ax.resolution = ax.periodic ? ax.resolution * factor
                                  : (ax.resolution - 1) * factor + 1;
    }
    return GridChart(std::move(axes));
  }

 private:
  std::vector<Axis> axes_;
  std::size_t size_ = 0;
};

}  // namespace yamabe
