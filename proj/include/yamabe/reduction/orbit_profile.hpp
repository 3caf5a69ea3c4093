#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "yamabe/core/curvature.hpp"
#include "yamabe/core/models.hpp"
#include "yamabe/invariants/invariants.hpp"

namespace yamabe {

/// Homogeneous fiber: round sphere of a given radius or flat torus.
struct FiberSpec {
  std::string kind = "sphere";  // sphere | torus
  int dim = 2;
  double radius = 1.0;
  std::vector<double> periods;

  int dimension() const { return kind == "torus" ? static_cast<int>(periods.size()) : dim; }

  double volume() const {
    if (kind == "sphere") return vol_sphere(dim) * std::pow(radius, dim);
    if (kind == "torus")
      return std::accumulate(periods.begin(), periods.end(), 1.0, std::multiplies<>());
    throw InvalidSpecError("unknown fiber kind '" + kind + "'");
  }

  double scalar() const {
    if (kind == "sphere") return dim * (dim - 1.0) / (radius * radius);
    if (kind == "torus") return 0.0;
    throw InvalidSpecError("unknown fiber kind '" + kind + "'");
  }

  MetricField metric(int resolution) const {
    if (kind == "sphere") return round_sphere({dim, radius, {resolution}, 2.0, -1.0});
    if (kind == "torus") return flat_torus(periods, {resolution});
    throw InvalidSpecError("unknown fiber kind '" + kind + "'");
  }

  void validate() const {
    if (kind == "sphere") {
      if (dim < 1) throw InvalidSpecError("sphere fiber needs dim >= 1");
      if (!(radius > 0.0)) throw InvalidSpecError("sphere fiber radius must be positive");
    } else if (kind == "torus") {
      if (periods.empty()) throw InvalidSpecError("torus fiber needs periods");
      for (double p : periods)
        if (!(p > 0.0)) throw InvalidSpecError("torus periods must be positive");
    } else {
      throw InvalidSpecError("unknown fiber kind '" + kind + "'");
    }
  }
};

/// f(t)^2 g_fiber; derivatives are optional (central differences otherwise).
struct WarpedFactor {
  FiberSpec fiber;
  Profile1D f, df, ddf;
};

/// dt^2 + sum_i f_i(t)^2 g_i over [t_min, t_max].
struct CohomogeneityOneModel {
  double t_min = 0.0, t_max = 1.0;
  std::vector<WarpedFactor> factors;
  std::string name = "warped";

  int n() const {
    int d = 1;
    for (const WarpedFactor& f : factors) d += f.fiber.dimension();
    return d;
  }
};

enum class EndpointKind { smooth_cap, boundary };

inline const char* to_string(EndpointKind k) {
  return k == EndpointKind::smooth_cap ? "smooth-cap" : "boundary";
}

/// Orbit-space data on a uniform grid (nodes include both endpoints).
struct OrbitProfile {
  double t_min = 0.0, t_max = 1.0;
  std::vector<double> t, w, s;
  int n = 3;
  std::array<EndpointKind, 2> endpoint_kind{EndpointKind::boundary, EndpointKind::boundary};
  std::string name;

  std::size_t size() const { return t.size(); }
  double spacing() const { return (t_max - t_min) / (static_cast<double>(t.size()) - 1.0); }

  /// Trapezoid weight times w at every node.
  std::vector<double> masses() const {
    const double h = spacing();
    std::vector<double> m(size());
    for (std::size_t j = 0; j < size(); ++j)
      m[j] = (j == 0 || j + 1 == size() ? 0.5 * h : h) * w[j];
    return m;
  }

  double volume() const {
    CompensatedSum acc;
    for (double m : masses()) acc.add(m);
    return acc.value();
  }
};

/// Profile from weight and scalar functions; endpoints where w vanishes are caps.
inline OrbitProfile make_profile(double t_min, double t_max, int resolution,
                                 const Profile1D& w, const Profile1D& s, int n,
                                 std::string name = "profile") {
  if (resolution < 4) throw ParameterError("profile resolution must be >= 4");
  if (!(t_max > t_min)) throw ParameterError("profile interval is empty");
  if (n < 3) throw ParameterError("profile dimension must be >= 3");
  OrbitProfile p;
  p.t_min = t_min;
  p.t_max = t_max;
  p.n = n;
  p.name = std::move(name);
  const double h = (t_max - t_min) / (resolution - 1);
  for (int j = 0; j < resolution; ++j) {
    const double t = j + 1 == resolution ? t_max : t_min + j * h;
    p.t.push_back(t);
    p.w.push_back(w(t));
    p.s.push_back(s(t));
  }
  for (int j = 1; j + 1 < resolution; ++j)
    if (!(p.w[j] > 0.0)) throw InvalidSpecError("orbit weight must be positive inside the interval");
  for (int e = 0; e < 2; ++e) {
    const double we = e == 0 ? p.w.front() : p.w.back();
    if (we < 0.0) throw InvalidSpecError("orbit weight is negative at an endpoint");
    p.endpoint_kind[e] = we == 0.0 ? EndpointKind::smooth_cap : EndpointKind::boundary;
  }
  return p;
}

struct ReduceOptions {
  int resolution = 400;
  bool cross_check = true;
  int cross_check_points = 9;
  double cross_check_tolerance = 1e-5;
  /// Warps below this count as collapsed at an endpoint.
  double cap_threshold = 1e-12;
};

namespace detail {

struct WarpJet {
  double f, df, ddf;
};

inline WarpJet warp_jet(const WarpedFactor& w, double t, double scale) {
  WarpJet j{w.f(t), 0.0, 0.0};
  const double h = 1e-4 * scale;
  j.df = w.df ? w.df(t) : (w.f(t + h) - w.f(t - h)) / (2.0 * h);
  j.ddf = w.ddf ? w.ddf(t) : (w.f(t + h) - 2.0 * j.f + w.f(t - h)) / (h * h);
  return j;
}

/// Scalar curvature of dt^2 + sum f_i^2 g_i at t (fibers k_i-dimensional, scalar sigma_i).
inline double warped_scalar(const CohomogeneityOneModel& m, double t) {
  const double scale = m.t_max - m.t_min;
  double s = 0.0, lin = 0.0;
  for (const WarpedFactor& w : m.factors) {
    const WarpJet j = warp_jet(w, t, scale);
    const double k = w.fiber.dimension();
    const double u = j.df / j.f;
    s += w.fiber.scalar() / (j.f * j.f) - 2.0 * k * j.ddf / j.f - k * (k - 1.0) * u * u;
    lin += k * u;
  }
  // sum_{i != j} k_i k_j u_i u_j = lin^2 - sum k_i^2 u_i^2
  double diag = 0.0;
  for (const WarpedFactor& w : m.factors) {
    const WarpJet j = warp_jet(w, t, scale);
    const double k = w.fiber.dimension();
    diag += k * k * (j.df / j.f) * (j.df / j.f);
  }
  return s - (lin * lin - diag);
}

/// Collapsing fiber at a cap must close up smoothly: S^k(R) needs R|f'| = 1,
/// a circle of period P needs P|f'| = 2 pi.
inline void check_cap(const WarpedFactor& w, double t, double scale) {
  const double d = std::abs(warp_jet(w, t, scale).df);
  const FiberSpec& f = w.fiber;
  double closing = 0.0;
  if (f.kind == "sphere") {
    closing = f.radius * d;
  } else if (f.periods.size() == 1) {
    closing = f.periods[0] * d / (2.0 * std::numbers::pi);
  } else {
    throw InvalidSpecError("a torus of dimension > 1 cannot collapse smoothly");
  }
  if (std::abs(closing - 1.0) > 1e-6)
    throw InvalidSpecError("collapsing fiber leaves a cone singularity at t = " + std::to_string(t));
}

}  // namespace detail

/// Full-chart metric of the model (fiber charts at the given resolution).
inline MetricField full_metric(const CohomogeneityOneModel& m, int base_resolution, int fiber_resolution,
                               double base_band_cells = 2.0) {
  WarpedProductSpec spec;
  const double h = (m.t_max - m.t_min) / (base_resolution - 1);
  bool cap = false;
  for (const WarpedFactor& w : m.factors)
    if (std::abs(w.f(m.t_min)) < 1e-12 || std::abs(w.f(m.t_max)) < 1e-12) cap = true;
  spec.base = Axis{m.t_min, m.t_max, base_resolution, false, cap ? base_band_cells * h : 0.0};
  for (const WarpedFactor& w : m.factors) spec.fibers.push_back({w.fiber.metric(fiber_resolution), w.f});
  spec.name = m.name;
  return warped_product(spec);
}

/// w(t) = prod vol_i f_i^{k_i}; s(t) from the warped-product formula,
/// checked against the pointwise engine on the full chart.
inline OrbitProfile reduce_cohomogeneity_one(const CohomogeneityOneModel& m, const ReduceOptions& opt = {}) {
  if (m.factors.empty()) throw InvalidSpecError("model needs at least one fiber");
  if (!(m.t_max > m.t_min)) throw InvalidSpecError("base interval is empty");
  if (opt.resolution < 4) throw ParameterError("resolution must be >= 4");
  for (const WarpedFactor& w : m.factors) {
    w.fiber.validate();
    if (!w.f) throw InvalidSpecError("fiber without warp function");
  }
  const int n = m.n();
  if (n < 3 || n > kMaxDim) throw InvalidSpecError("model dimension must lie in [3, 8]");
  const double scale = m.t_max - m.t_min;

  OrbitProfile p;
  p.t_min = m.t_min;
  p.t_max = m.t_max;
  p.n = n;
  p.name = m.name;
  for (int e = 0; e < 2; ++e) {
    const double te = e == 0 ? m.t_min : m.t_max;
    int collapsed = 0;
    for (const WarpedFactor& w : m.factors)
      if (std::abs(w.f(te)) < opt.cap_threshold) {
        detail::check_cap(w, te, scale);
        ++collapsed;
      }
    if (collapsed > 1) throw InvalidSpecError("more than one fiber collapses at an endpoint");
    p.endpoint_kind[e] = collapsed ? EndpointKind::smooth_cap : EndpointKind::boundary;
  }

  const int N = opt.resolution;
  const double h = scale / (N - 1);
  p.t.resize(N);
  p.w.resize(N);
  p.s.resize(N);
  for (int j = 0; j < N; ++j) {
    const double t = j + 1 == N ? m.t_max : m.t_min + j * h;
    p.t[j] = t;
    const bool cap = (j == 0 && p.endpoint_kind[0] == EndpointKind::smooth_cap) ||
                     (j + 1 == N && p.endpoint_kind[1] == EndpointKind::smooth_cap);
    if (cap) {
      p.w[j] = 0.0;
      continue;
    }
    double w = 1.0;
    for (const WarpedFactor& f : m.factors) {
      const double v = f.f(t);
      if (!(v > 0.0)) throw InvalidSpecError("warp function is not positive at t = " + std::to_string(t));
      w *= f.fiber.volume() * std::pow(v, f.fiber.dimension());
    }
    p.w[j] = w;
    p.s[j] = detail::warped_scalar(m, t);
  }
  // Cap rows carry zero mass; extrapolate s there for display only.
  if (p.endpoint_kind[0] == EndpointKind::smooth_cap) p.s[0] = 2.0 * p.s[1] - p.s[2];
  if (p.endpoint_kind[1] == EndpointKind::smooth_cap) p.s[N - 1] = 2.0 * p.s[N - 2] - p.s[N - 3];

  if (opt.cross_check) {
    const MetricField g = full_metric(m, N, 16);
    double x[kMaxDim];
    std::array<double, kMaxDim> steps{};
    for (int a = 0; a < n; ++a) steps[a] = 1e-4 * (g.chart.axis(a).hi - g.chart.axis(a).lo);
    for (int a = 1; a < n; ++a) {
      const Axis& ax = g.chart.axis(a);
      x[a] = ax.lo + 0.37 * (ax.hi - ax.lo);
    }
    const int K = std::max(1, opt.cross_check_points);
    for (int k = 1; k <= K; ++k) {
      const int j = std::clamp(static_cast<int>(std::lround(k * (N - 1.0) / (K + 1))), 1, N - 2);
      x[0] = p.t[j];
      const double ref = scalar_curvature_at(g, std::span<const double>(x, n), std::span<const double>(steps.data(), n));
      const double tol = opt.cross_check_tolerance * std::max(1.0, std::abs(ref));
      if (!(std::abs(ref - p.s[j]) <= tol))
        throw ReductionError("reduced scalar curvature " + std::to_string(p.s[j]) + " disagrees with full chart " +
                             std::to_string(ref) + " at t = " + std::to_string(p.t[j]));
    }
  }
  return p;
}

/// Round S^n(1) as dt^2 + sin^2 t g_{S^{n-1}}.
inline CohomogeneityOneModel round_sphere_model(int n) {
  CohomogeneityOneModel m;
  m.t_min = 0.0;
  m.t_max = std::numbers::pi;
  m.name = "S^" + std::to_string(n);
  m.factors.push_back({FiberSpec{"sphere", n - 1, 1.0, {}}, [](double t) { return std::sin(t); },
                       [](double t) { return std::cos(t); }, [](double t) { return -std::sin(t); }});
  return m;
}

/// [0, length] x S^{n-1}(radius).
inline CohomogeneityOneModel cylinder_model(int n, double length, double radius = 1.0) {
  CohomogeneityOneModel m;
  m.t_max = length;
  m.name = "cylinder";
  m.factors.push_back({FiberSpec{"sphere", n - 1, radius, {}}, [](double) { return 1.0; },
                       [](double) { return 0.0; }, [](double) { return 0.0; }});
  return m;
}

/// S^3 as dt^2 + a(t)^2 dx^2 + sin^2 t dy^2 on [0, pi/2] with
/// a = cos t (1 + (A/2) sin^2 2t); A = 0 is the round metric. The T^2 action
/// rotating x and y is isometric for every A.
inline CohomogeneityOneModel torus_warped_s3(double amplitude) {
  const double A = amplitude;
  if (!(1.0 + 0.5 * std::min(A, 0.0) > 0.0)) throw InvalidSpecError("amplitude makes the warp vanish");
  CohomogeneityOneModel m;
  m.t_min = 0.0;
  m.t_max = 0.5 * std::numbers::pi;
  m.name = "S^3[A=" + std::to_string(A) + "]";
  const FiberSpec circle{"torus", 1, 1.0, {2.0 * std::numbers::pi}};
  auto B = [A](double t) { const double s = std::sin(2.0 * t); return 1.0 + 0.5 * A * s * s; };
  auto dB = [A](double t) { return A * std::sin(4.0 * t); };
  auto ddB = [A](double t) { return 4.0 * A * std::cos(4.0 * t); };
  m.factors.push_back({circle, [B](double t) { return std::cos(t) * B(t); },
                       [B, dB](double t) { return -std::sin(t) * B(t) + std::cos(t) * dB(t); },
                       [B, dB, ddB](double t) {
                         return -std::cos(t) * B(t) - 2.0 * std::sin(t) * dB(t) + std::cos(t) * ddB(t);
                       }});
  m.factors.push_back({circle, [](double t) { return std::sin(t); }, [](double t) { return std::cos(t); },
                       [](double t) { return -std::sin(t); }});
  return m;
}

}  // namespace yamabe
