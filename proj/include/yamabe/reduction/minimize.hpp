#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "yamabe/core/conformal.hpp"
#include "yamabe/core/quadrature.hpp"
#include "yamabe/reduction/orbit_profile.hpp"

namespace yamabe {

namespace detail {

/// Pieces of the discrete quotient: staggered differences for phi', nodal
/// trapezoid masses for the potential and the L^p norm.
struct ReducedOperator {
  int N = 0;
  double h = 0.0, a = 0.0;
  std::vector<double> mass, w_half, s;

  explicit ReducedOperator(const OrbitProfile& p)
      : N(static_cast<int>(p.size())), h(p.spacing()), a(conformal_coefficient(p.n)), mass(p.masses()), s(p.s) {
    w_half.resize(static_cast<std::size_t>(N - 1));
    for (int j = 0; j + 1 < N; ++j) w_half[j] = 0.5 * (p.w[j] + p.w[j + 1]);
  }

  /// A phi, with phi^T A phi = int (a phi'^2 + s phi^2) w.
  std::vector<double> apply(const std::vector<double>& phi) const {
    std::vector<double> out(static_cast<std::size_t>(N));
    for (int j = 0; j < N; ++j) out[j] = mass[j] * s[j] * phi[j];
    for (int j = 0; j + 1 < N; ++j) {
      const double f = a * w_half[j] * (phi[j + 1] - phi[j]) / h;
      out[j] -= f;
      out[j + 1] += f;
    }
    return out;
  }

  double energy(const std::vector<double>& phi) const {
    CompensatedSum acc;
    for (int j = 0; j + 1 < N; ++j) {
      const double d = phi[j + 1] - phi[j];
      acc.add(a * w_half[j] * d * d / h);
    }
    for (int j = 0; j < N; ++j) acc.add(mass[j] * s[j] * phi[j] * phi[j]);
    return acc.value();
  }

  double lp(const std::vector<double>& phi, double p) const {
    CompensatedSum acc;
    for (int j = 0; j < N; ++j) acc.add(mass[j] * std::pow(std::abs(phi[j]), p));
    return acc.value();
  }

  double quotient(const std::vector<double>& phi, double p) const {
    const double d = lp(phi, p);
    if (!(d > 0.0)) throw DegenerateTestFunctionError("test function has zero weighted L^p norm");
    return energy(phi) / std::pow(d, 2.0 / p);
  }

  /// Extended-precision quotient for line-search comparisons near convergence.
  long double quotient_ext(const std::vector<double>& phi, double p) const {
    long double e = 0.0L, d = 0.0L;
    for (int j = 0; j + 1 < N; ++j) {
      const long double df = static_cast<long double>(phi[j + 1]) - phi[j];
      e += static_cast<long double>(a) * w_half[j] * df * df / h;
    }
    for (int j = 0; j < N; ++j) {
      const long double v = phi[j];
      e += static_cast<long double>(mass[j]) * s[j] * v * v;
      d += mass[j] * std::pow(std::abs(v), static_cast<long double>(p));
    }
    return e / std::pow(d, 2.0L / p);
  }

  /// Solves (a K + c M) x = b with the Thomas algorithm.
  std::vector<double> precondition(const std::vector<double>& b, double c) const {
    std::vector<double> lo(N, 0.0), di(N, 0.0), up(N, 0.0);
    for (int j = 0; j < N; ++j) di[j] = c * mass[j];
    for (int j = 0; j + 1 < N; ++j) {
      const double k = a * w_half[j] / h;
      di[j] += k;
      di[j + 1] += k;
      up[j] = -k;
      lo[j + 1] = -k;
    }
    std::vector<double> cp(N), dp(N), x(N);
    cp[0] = up[0] / di[0];
    dp[0] = b[0] / di[0];
    for (int j = 1; j < N; ++j) {
      const double m = di[j] - lo[j] * cp[j - 1];
      cp[j] = up[j] / m;
      dp[j] = (b[j] - lo[j] * dp[j - 1]) / m;
    }
    x[N - 1] = dp[N - 1];
    for (int j = N - 2; j >= 0; --j) x[j] = dp[j] - cp[j] * x[j + 1];
    return x;
  }
};

inline void normalize(std::vector<double>& phi, const ReducedOperator& op, double p) {
  const double c = std::pow(op.lp(phi, p), -1.0 / p);
  for (double& v : phi) v *= c;
}

}  // namespace detail

inline double reduced_quotient(const OrbitProfile& profile, const std::vector<double>& phi) {
  if (phi.size() != profile.size()) throw ParameterError("test function does not match the profile grid");
  const detail::ReducedOperator op(profile);
  return op.quotient(phi, sobolev_exponent(profile.n));
}

inline double reduced_quotient(const OrbitProfile& profile, const Profile1D& phi) {
  std::vector<double> v(profile.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = phi(profile.t[j]);
  return reduced_quotient(profile, v);
}

/// Weighted L^2 norm of a Delta_w phi + s phi - Q phi^{p-1} at normalization
/// int |phi|^p w = 1; zero-mass cap rows are skipped.
inline double euler_lagrange_residual(const OrbitProfile& profile, const std::vector<double>& phi) {
  const detail::ReducedOperator op(profile);
  const double p = sobolev_exponent(profile.n);
  std::vector<double> u = phi;
  detail::normalize(u, op, p);
  const double Q = op.energy(u);
  const std::vector<double> Au = op.apply(u);
  CompensatedSum acc;
  for (int j = 0; j < op.N; ++j) {
    if (op.mass[j] == 0.0) continue;
    const double r = Au[j] / op.mass[j] - Q * std::pow(u[j], p - 1.0);
    acc.add(op.mass[j] * r * r);
  }
  return std::sqrt(acc.value());
}

struct MinimizeOptions {
  double tol = 1e-8;
  int max_iterations = 50000;
  double armijo = 0.5;
  double shrink = 0.5;
  int max_backtracks = 60;
  /// Exponent continuation p_k = p - (p - start) 2^{-k}, k < stages, before
  /// the critical exponent; 0 stages disables it.
  int continuation_stages = 0;
  double continuation_start = 2.0;
  double continuation_tol = 1e-7;
};

struct YamabeEstimate {
  double value = 0.0;
  std::vector<double> t, minimizer;
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> history;
  /// Final quotient of each continuation stage (empty without continuation).
  std::vector<double> stage_values;
  std::vector<double> stage_exponents;
};

namespace detail {

struct StageResult {
  std::vector<double> phi;
  std::vector<double> history;
  double value = 0.0, residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Projected preconditioned gradient at exponent p with normalization
/// int |phi|^p w = 1.
inline StageResult descend(const ReducedOperator& op, std::vector<double> phi, double p, double tol,
                           int max_iter, const MinimizeOptions& opt) {
  StageResult r;
  double smax = 0.0;
  for (double v : op.s) smax = std::max(smax, std::abs(v));
  const double shift = smax + 1.0;
  normalize(phi, op, p);
  long double Qx = op.quotient_ext(phi, p);
  double Q = static_cast<double>(Qx);
  r.history.push_back(Q);
  double prev = std::numeric_limits<double>::quiet_NaN();
  double alpha0 = 1.0;
  for (int it = 0;; ++it) {
    const std::vector<double> Ap = op.apply(phi);
    std::vector<double> g(static_cast<std::size_t>(op.N));
    CompensatedSum res;
    for (int j = 0; j < op.N; ++j) {
      const double nl = std::pow(phi[j], p - 1.0);
      g[j] = 2.0 * (Ap[j] - Q * nl * op.mass[j]);
      if (op.mass[j] > 0.0) {
        const double e = Ap[j] / op.mass[j] - Q * nl;
        res.add(op.mass[j] * e * e);
      }
    }
    r.residual = std::sqrt(res.value());
    const double change = std::isnan(prev) ? 0.0 : std::abs(Q - prev) / std::max(std::abs(Q), 1.0);
    if (r.residual < 10.0 * tol && (it == 0 || change < tol)) {
      r.converged = true;
      r.iterations = it;
      break;
    }
    if (it >= max_iter) {
      r.iterations = it;
      break;
    }
    std::vector<double> d = op.precondition(g, shift);
    double slope = 0.0;
    for (int j = 0; j < op.N; ++j) {
      d[j] = -d[j];
      slope += g[j] * d[j];
    }
    double alpha = alpha0;
    long double Qn = Qx;
    std::vector<double> trial(static_cast<std::size_t>(op.N));
    bool accepted = false;
    for (int b = 0; b < opt.max_backtracks; ++b) {
      for (int j = 0; j < op.N; ++j) trial[j] = std::abs(phi[j] + alpha * d[j]);
      normalize(trial, op, p);
      Qn = op.quotient_ext(trial, p);
      if (Qn <= Qx + static_cast<long double>(opt.armijo * alpha) * slope) {
        accepted = true;
        break;
      }
      alpha *= opt.shrink;
    }
    if (!accepted) {
      // No representable decrease left; converged only if the residual says so.
      r.iterations = it;
      r.converged = r.residual < 10.0 * tol;
      break;
    }
    alpha0 = std::min(1.0, 2.0 * alpha);
    phi.swap(trial);
    prev = Q;
    Qx = Qn;
    Q = static_cast<double>(Qx);
    r.history.push_back(Q);
  }
  r.value = Q;
  r.phi = std::move(phi);
  return r;
}

}  // namespace detail

/// Minimizes the reduced quotient from a positive initial function.
inline YamabeEstimate minimize_reduced(const OrbitProfile& profile, const std::vector<double>& init,
                                       const MinimizeOptions& opt = {}) {
  if (init.size() != profile.size()) throw ParameterError("initial function does not match the profile grid");
  for (double v : init)
    if (!(v > 0.0)) throw ParameterError("initial function must be positive");
  if (!(opt.tol > 0.0)) throw ParameterError("tolerance must be positive");
  const detail::ReducedOperator op(profile);
  const double p = sobolev_exponent(profile.n);
  YamabeEstimate est;
  est.t = profile.t;
  std::vector<double> phi = init;
  int budget = opt.max_iterations;
  for (int k = 0; k < opt.continuation_stages; ++k) {
    const double pk = p - (p - opt.continuation_start) * std::pow(0.5, k);
    detail::StageResult sr =
        detail::descend(op, std::move(phi), pk, std::max(opt.tol, opt.continuation_tol), budget, opt);
    budget -= sr.iterations;
    est.iterations += sr.iterations;
    est.stage_values.push_back(sr.value);
    est.stage_exponents.push_back(pk);
    phi = std::move(sr.phi);
  }
  detail::StageResult sr = detail::descend(op, std::move(phi), p, opt.tol, std::max(budget, 0), opt);
  est.iterations += sr.iterations;
  est.value = sr.value;
  est.residual = sr.residual;
  est.history = std::move(sr.history);
  est.minimizer = std::move(sr.phi);
  if (!sr.converged)
    throw ConvergenceError("reduced minimization stopped after " + std::to_string(est.iterations) +
                               " iterations with residual " + detail::num(est.residual),
                           est.history);
  return est;
}

inline YamabeEstimate minimize_reduced(const OrbitProfile& profile, const MinimizeOptions& opt = {}) {
  return minimize_reduced(profile, std::vector<double>(profile.size(), 1.0), opt);
}

/// sup |phi - mean| / mean over nodes, mean taken with the profile masses.
inline double relative_sup_deviation(const OrbitProfile& profile, const std::vector<double>& phi) {
  const std::vector<double> m = profile.masses();
  CompensatedSum num, den;
  for (std::size_t j = 0; j < phi.size(); ++j) {
    num.add(m[j] * phi[j]);
    den.add(m[j]);
  }
  const double mean = num.value() / den.value();
  double dev = 0.0;
  for (double v : phi) dev = std::max(dev, std::abs(v - mean));
  return dev / mean;
}

/// Q at phi = 1 on the full chart.
inline double evaluate_constant(const MetricField& g, const StencilOptions& opt = {}) {
  return einstein_hilbert(g, opt);
}

/// phi(t) pulled back to the full chart of a model (first coordinate is t).
inline ConformalFactor lifted_factor(const OrbitProfile& profile, const std::vector<double>& phi) {
  GridChart chart({Axis{profile.t_min, profile.t_max, static_cast<int>(profile.size()), false, 0.0}});
  return make_conformal_factor(profile.n, [chart, phi](std::span<const double> x) {
    return interpolate(chart, phi, x.subspan(0, 1));
  });
}

struct ContinuityReport {
  std::vector<double> parameters;
  std::vector<double> values, gaps, ratios;
  std::vector<int> iterations;
  double limit_value = 0.0;
  bool monotone = false;
  double min_ratio = 0.0;
};

/// Minimizes every profile and the limit with the same options; gaps are
/// |value_i - value_limit| and ratios gap_i / gap_{i+1}.
inline ContinuityReport continuity_experiment(const std::vector<OrbitProfile>& profiles, const OrbitProfile& limit,
                                              const std::vector<double>& parameters = {},
                                              const MinimizeOptions& opt = {}) {
  for (const OrbitProfile& p : profiles)
    if (p.size() != limit.size() || p.t_min != limit.t_min || p.t_max != limit.t_max || p.n != limit.n)
      throw ParameterError("profiles must share the interval, dimension and grid");
  ContinuityReport rep;
  rep.parameters = parameters;
  rep.limit_value = minimize_reduced(limit, opt).value;
  for (const OrbitProfile& p : profiles) {
    const YamabeEstimate e = minimize_reduced(p, opt);
    rep.values.push_back(e.value);
    rep.iterations.push_back(e.iterations);
    rep.gaps.push_back(std::abs(e.value - rep.limit_value));
  }
  rep.monotone = true;
  rep.min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < rep.gaps.size(); ++i) {
    const double r = rep.gaps[i + 1] > 0.0 ? rep.gaps[i] / rep.gaps[i + 1] : std::numeric_limits<double>::infinity();
    rep.ratios.push_back(r);
    rep.min_ratio = std::min(rep.min_ratio, r);
    if (!(rep.gaps[i + 1] <= rep.gaps[i])) rep.monotone = false;
  }
  return rep;
}

}  // namespace yamabe
