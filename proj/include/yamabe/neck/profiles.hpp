#pragma once

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "yamabe/core/errors.hpp"

namespace yamabe {

/// exp(-1/s) for s > 0, else 0.
inline double psi_exp(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

/// C-infinity step: 0 for s <= 0, 1 for s >= 1, psi(s)/(psi(s)+psi(1-s)) between.
struct SmoothStep {
  static double value(double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    // 1/(1+e^v) with v = 1/s - 1/(1-s)
    const double v = 1.0 / s - 1.0 / (1.0 - s);
    return 1.0 / (1.0 + std::exp(v));
  }
  static double d1(double s) {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    const double L = value(s);
    const double g = L * (1.0 - L);
    if (g == 0.0) return 0.0;
    const double vp = -1.0 / (s * s) - 1.0 / ((1.0 - s) * (1.0 - s));
    return -g * vp;
  }
  static double d2(double s) {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    const double L = value(s);
    const double g = L * (1.0 - L);
    if (g == 0.0) return 0.0;
    const double vp = -1.0 / (s * s) - 1.0 / ((1.0 - s) * (1.0 - s));
    const double vpp = 2.0 / (s * s * s) - 2.0 / ((1.0 - s) * (1.0 - s) * (1.0 - s));
    return (1.0 - 2.0 * L) * g * vp * vp - g * vpp;
  }
  /// int_0^x value, exact symmetry I(x) = x - 1/2 + I(1-x) used for x > 1/2.
  static double integral(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return x - 0.5;
    if (x > 0.5) return x - 0.5 + integral(1.0 - x);
    return boost::math::quadrature::gauss<double, 30>::integrate(
        [](double s) { return value(s); }, 0.0, x);
  }
};

/// Monotone C-infinity step on [0,1] whose slope B(s)/(1-beta) rises over
/// [0,beta], is flat on [beta, 1-beta] and falls over [1-beta, 1].
/// Maximal slope is 1/(1-beta).
class PlateauStep {
 public:
  explicit PlateauStep(double beta = 0.25) : beta_(beta), m_(1.0 / (1.0 - beta)) {
    if (!(beta > 0.0 && beta <= 0.5)) throw ParameterError("plateau step needs beta in (0, 1/2]");
  }

  double beta() const noexcept { return beta_; }
  double max_slope() const noexcept { return m_; }

  double value(double s) const {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    if (s > 0.5) return 1.0 - value(1.0 - s);
    if (s <= beta_) return m_ * beta_ * SmoothStep::integral(s / beta_);
    return m_ * (0.5 * beta_ + (s - beta_));
  }
  double d1(double s) const { return m_ * bump(s); }
  double d2(double s) const {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    if (s < beta_) return m_ * SmoothStep::d1(s / beta_) / beta_;
    if (s > 1.0 - beta_) return -m_ * SmoothStep::d1((1.0 - s) / beta_) / beta_;
    return 0.0;
  }

 private:
  double bump(double s) const {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    if (s < beta_) return SmoothStep::value(s / beta_);
    if (s > 1.0 - beta_) return SmoothStep::value((1.0 - s) / beta_);
    return 1.0;
  }
  double beta_;
  double m_;
};

/// A scalar profile of one variable with its first two derivatives.
struct Profile {
  std::function<double(double)> value, d1, d2;
  /// Transition interval; the profile is constant outside it.
  double lo = 0.0, hi = 1.0;
  double operator()(double x) const { return value(x); }
};

namespace detail {

/// f(r) = S((ln r - ln lo)/ln(hi/lo)) (decreasing = false) or 1 - S(...).
inline Profile log_ramp(double lo, double hi, PlateauStep step, bool decreasing) {
  const double span = std::log(hi / lo);
  const double sign = decreasing ? -1.0 : 1.0;
  auto tau = [lo, span](double r) { return std::log(r / lo) / span; };
  Profile p;
  p.lo = lo;
  p.hi = hi;
  p.value = [=](double r) {
    if (r <= lo) return decreasing ? 1.0 : 0.0;
    if (r >= hi) return decreasing ? 0.0 : 1.0;
    const double v = step.value(tau(r));
    return decreasing ? 1.0 - v : v;
  };
  p.d1 = [=](double r) {
    if (r <= lo || r >= hi) return 0.0;
    return sign * step.d1(tau(r)) / (span * r);
  };
  p.d2 = [=](double r) {
    if (r <= lo || r >= hi) return 0.0;
    const double t = tau(r);
    return sign * (step.d2(t) / (span * span * r * r) - step.d1(t) / (span * r * r));
  };
  return p;
}

inline std::vector<double> log_samples(double lo, double hi, int count) {
  std::vector<double> r(static_cast<std::size_t>(count));
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < count; ++i) r[i] = std::exp(a + (b - a) * i / (count - 1));
  return r;
}

}  // namespace detail

// ---------------------------------------------------------------- xi

/// xi(t) = 1 on (-inf,0] and [2,inf), 0 on [2/3, 4/3], values in [0,1].
inline Profile cutoff_xi() {
  Profile p;
  p.lo = 0.0;
  p.hi = 2.0;
  p.value = [](double t) {
    if (t <= 2.0 / 3.0) return 1.0 - SmoothStep::value(1.5 * t);
    if (t < 4.0 / 3.0) return 0.0;
    return SmoothStep::value(1.5 * (t - 4.0 / 3.0));
  };
  p.d1 = [](double t) {
    if (t <= 2.0 / 3.0) return -1.5 * SmoothStep::d1(1.5 * t);
    if (t < 4.0 / 3.0) return 0.0;
    return 1.5 * SmoothStep::d1(1.5 * (t - 4.0 / 3.0));
  };
  p.d2 = [](double t) {
    if (t <= 2.0 / 3.0) return -2.25 * SmoothStep::d2(1.5 * t);
    if (t < 4.0 / 3.0) return 0.0;
    return 2.25 * SmoothStep::d2(1.5 * (t - 4.0 / 3.0));
  };
  return p;
}

// ---------------------------------------------------------------- eta

/// sqrt((q-1)(q-2)/2)
inline double bend_constant(int q) { return std::sqrt((q - 1.0) * (q - 2.0) / 2.0); }

/// Largest r2 for which eta can meet its gradient bound (strict inequality).
inline double eta_max_r2(int q, double theta0, double r1p) {
  return r1p * std::exp(-1.0 / (bend_constant(q) * std::sin(theta0)));
}

struct EtaCheck {
  double bound = 0.0;          // c sin(theta0)
  double max_ratio = 0.0;      // max r|eta'| / bound
  double worst_r = 0.0;
  double max_plateau_error = 0.0;
  bool monotone = true;
  int samples = 0;
  bool pass = false;
};

/// Checks eta on `samples` log-spaced radii over [r2/2, 2 r1p].
inline EtaCheck verify_eta(const Profile& eta, int q, double theta0, int samples = 2000) {
  EtaCheck c;
  c.bound = bend_constant(q) * std::sin(theta0);
  c.samples = samples;
  const auto rs = detail::log_samples(0.5 * eta.lo, 2.0 * eta.hi, samples);
  double prev = -1.0;
  for (double r : rs) {
    const double v = eta(r);
    const double ratio = r * std::abs(eta.d1(r)) / c.bound;
    if (ratio > c.max_ratio) {
      c.max_ratio = ratio;
      c.worst_r = r;
    }
    if (r <= eta.lo) c.max_plateau_error = std::max(c.max_plateau_error, std::abs(v));
    if (r >= eta.hi) c.max_plateau_error = std::max(c.max_plateau_error, std::abs(v - 1.0));
    if (v < prev) c.monotone = false;
    prev = v;
  }
  c.pass = c.max_ratio <= 1.0 && c.max_plateau_error == 0.0 && c.monotone;
  return c;
}

/// eta(r) = 0 for r <= r2, 1 for r >= r1p, r|eta'| <= c sin(theta0).
inline Profile cutoff_eta(int q, double theta0, double r1p, double r2, int samples = 2000) {
  if (q < 3) throw ParameterError("eta needs q >= 3");
  if (!(theta0 > 0.0 && theta0 < std::numbers::pi / 2))
    throw ParameterError("theta0 must lie in (0, pi/2)");
  if (!(r2 > 0.0 && r1p > r2)) throw ParameterError("eta needs 0 < r2 < r1p");
  const double rho = bend_constant(q) * std::sin(theta0) * std::log(r1p / r2);
  const double r2max = eta_max_r2(q, theta0, r1p);
  if (!(rho > 1.0 + 1e-12) || !(r2 < r2max))
    throw FeasibilityError("eta infeasible: r2 = " + std::to_string(r2) +
                               " must be below " + std::to_string(r2max),
                           r2max);
  const double beta = std::min(0.25, 0.5 * (1.0 - 1.0 / rho));
  Profile eta = detail::log_ramp(r2, r1p, PlateauStep(beta), false);
  const EtaCheck chk = verify_eta(eta, q, theta0, samples);
  if (!chk.pass)
    throw ProfileConstructionError("eta violates its gradient bound", chk.worst_r,
                                   chk.max_ratio);
  return eta;
}

// ---------------------------------------------------------------- w_delta

/// Inner plateau radius (1/4) e^{-1/delta}.
inline double w_plateau_radius(double delta) { return 0.25 * std::exp(-1.0 / delta); }

/// Log-ramp profile from 1 on [0, (1/4)e^{-1/delta}] to 0 on [delta, inf).
/// No conditions are checked here; see verify_interpolation_profile.
inline Profile build_interpolation_profile(double delta, double beta = 0.25) {
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must lie in (0,1)");
  const double ra = w_plateau_radius(delta);
  if (!(ra < delta)) throw ParameterError("delta too large: (1/4)e^{-1/delta} >= delta");
  return detail::log_ramp(ra, delta, PlateauStep(beta), true);
}

struct InterpolationProfileCheck {
  double delta = 0.0;
  double max_r_d1 = 0.0, worst_r_d1 = 0.0;
  double max_r_d2 = 0.0, worst_r_d2 = 0.0;
  double max_plateau_error = 0.0;
  /// Lower bound on max|r w'| for any profile: 1/ln(delta/r_a).
  double slope_lower_bound = 0.0;
  int samples = 0;
  bool first_ok = false, second_ok = false, plateaus_ok = false;
  bool pass() const { return first_ok && second_ok && plateaus_ok; }
};

inline InterpolationProfileCheck verify_interpolation_profile(const Profile& w, double delta,
                                                              int samples = 2000) {
  InterpolationProfileCheck c;
  c.delta = delta;
  c.samples = samples;
  c.slope_lower_bound = 1.0 / std::log(w.hi / w.lo);
  for (double r : detail::log_samples(0.5 * w.lo, 2.0 * w.hi, samples)) {
    const double a = std::abs(r * w.d1(r));
    const double b = std::abs(r * w.d2(r));
    if (a > c.max_r_d1) { c.max_r_d1 = a; c.worst_r_d1 = r; }
    if (b > c.max_r_d2) { c.max_r_d2 = b; c.worst_r_d2 = r; }
    if (r <= w.lo) c.max_plateau_error = std::max(c.max_plateau_error, std::abs(w(r) - 1.0));
    if (r >= w.hi) c.max_plateau_error = std::max(c.max_plateau_error, std::abs(w(r)));
  }
  c.first_ok = c.max_r_d1 < delta;
  c.second_ok = c.max_r_d2 < delta;
  c.plateaus_ok = c.max_plateau_error == 0.0;
  return c;
}

/// w_delta meeting |r w'| < delta and |r w''| < delta, or a
/// ProfileConstructionError naming the worst sample.
inline Profile interpolation_profile(double delta, int samples = 2000) {
  Profile w = build_interpolation_profile(delta);
  const InterpolationProfileCheck c = verify_interpolation_profile(w, delta, samples);
  if (!c.plateaus_ok)
    throw ProfileConstructionError("w_delta plateau violated", w.lo, c.max_plateau_error);
  if (!c.first_ok)
    throw ProfileConstructionError("|r w'| < delta violated", c.worst_r_d1, c.max_r_d1);
  if (!c.second_ok)
    throw ProfileConstructionError("|r w''| < delta violated", c.worst_r_d2, c.max_r_d2);
  return w;
}

}  // namespace yamabe
