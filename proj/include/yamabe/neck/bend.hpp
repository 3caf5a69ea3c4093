#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "yamabe/core/errors.hpp"
#include "yamabe/neck/profiles.hpp"

namespace yamabe {

// Profile curve gamma(L) = (t(L), r(L)) in the (t, r) half plane, unit speed.
// theta is the angle between the tangent and the -r direction:
//   dt/dL = sin(theta), dr/dL = -cos(theta), dtheta/dL = k.
// theta = 0 at the start (moving straight down in r), pi/2 at the end.

/// (q-1)(q-2)/2 sin^2 / r^2 - 3(q-1) k sin / r
inline double bend_defect(int q, double r, double theta, double k) {
  const double s = std::sin(theta);
  return 0.5 * (q - 1.0) * (q - 2.0) * s * s / (r * r) - 3.0 * (q - 1.0) * k * s / r;
}

struct BendSample {
  int step = 0;      // 1, 2 or 3
  int segment = 0;   // index into BendCurve::segments
  double s = 0.0;    // arc length from the segment start
  double L = 0.0;    // absolute arc length
  double t = 0.0;    // absolute t
  double dt = 0.0;   // t - t(segment start)
  double r = 0.0;
  double theta = 0.0;
  double k = 0.0;
  double defect = 0.0;
};

struct BendSegment {
  int step = 0;
  double L0 = 0.0, t0 = 0.0;
  double length = 0.0;
  std::size_t first = 0, last = 0;  // inclusive sample range
  double dtheta = 0.0;              // integral of k over the segment
};

struct BendCurve {
  int q = 3;
  double theta0 = 0.1;
  double r0 = 0.0, r1 = 0.0, r1p = 0.0, r2 = 0.0, r3 = 0.0;
  double eps2 = 1e-3;
  double k1 = 0.0;  // constant curvature of step 1
  int bump_count = 0;
  double mu = 1.0;  // accumulated shrink factor
  double step3_length = 0.0;
  std::vector<BendSample> samples;
  std::vector<BendSegment> segments;

  double total_length() const { return segments.empty() ? 0.0 : segments.back().L0 + segments.back().length; }
  double terminal_angle() const { return samples.back().theta; }
  /// (q-2) sin(theta0) / 12
  double bump_angle() const { return (q - 2.0) * std::sin(theta0) / 12.0; }
  /// Predicted step-3 bump count ceil((pi/2 - theta0)/bump_angle).
  int predicted_bumps() const {
    return static_cast<int>(std::ceil((std::numbers::pi / 2 - theta0) / bump_angle() - 1e-12));
  }
  /// 3 pi r2 / ((q-2) sin theta0) + r2/2
  double step3_length_bound() const {
    return 3.0 * std::numbers::pi * r2 / ((q - 2.0) * std::sin(theta0)) + 0.5 * r2;
  }
};

struct BendOptions {
  int q = 3;
  double theta0 = 0.1;
  double r0 = 30.0;
  double eps2 = 1e-3;
  double r1p_ratio = 0.1;
  double safety = 1.2;
  double theta_cap = 0.3;
  int step1_samples = 2001;
  int step2_samples = 2001;
  int steps_per_bump = 256;
  int max_bumps = 100000;
};

namespace detail {

/// min over step 1 of the defect for constant curvature k.
inline double step1_min_defect(int q, double theta0, double r0, double k, int samples) {
  const double Lend = theta0 / k;
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double L = Lend * i / (samples - 1);
    const double r = r0 - std::sin(k * L) / k;
    if (!(r > 0.0)) return -std::numeric_limits<double>::infinity();
    m = std::min(m, bend_defect(q, r, k * L, k));
  }
  return m;
}

/// Normalized bump integration: radius starts at 1, support lambda, cap
/// K / R times the raised cosine window. Returns the angle gained, or +inf
/// if the radius collapses.
struct BumpState {
  double sigma, T, R, theta;
};

inline double bump_window(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  return 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * u));
}

template <class Visit>
double integrate_bump(double K, double lambda, double theta_start, int steps, Visit visit) {
  auto rhs = [K, lambda](double sigma, const std::array<double, 3>& y) {
    // y = (T, R, theta)
    const double k = K * bump_window(sigma / lambda) / y[1];
    return std::array<double, 3>{std::sin(y[2]), -std::cos(y[2]), k};
  };
  std::array<double, 3> y{0.0, 1.0, theta_start};
  const double h = lambda / steps;
  visit(0, 0.0, y);
  for (int i = 0; i < steps; ++i) {
    const double s = i * h;
    const auto k1 = rhs(s, y);
    std::array<double, 3> y2, y3, y4;
    for (int j = 0; j < 3; ++j) y2[j] = y[j] + 0.5 * h * k1[j];
    const auto k2 = rhs(s + 0.5 * h, y2);
    for (int j = 0; j < 3; ++j) y3[j] = y[j] + 0.5 * h * k2[j];
    const auto k3 = rhs(s + 0.5 * h, y3);
    for (int j = 0; j < 3; ++j) y4[j] = y[j] + h * k3[j];
    const auto k4 = rhs(s + h, y4);
    for (int j = 0; j < 3; ++j) y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
    if (!(y[1] > 0.0) || !std::isfinite(y[2])) return std::numeric_limits<double>::infinity();
    visit(i + 1, (i + 1) * h, y);
  }
  return y[2] - theta_start;
}

inline void push_sample(BendCurve& c, BendSegment& seg, int step, double s, double dt, double r,
                        double theta, double k) {
  BendSample b;
  b.step = step;
  b.segment = static_cast<int>(c.segments.size());
  b.s = s;
  b.L = seg.L0 + s;
  b.dt = dt;
  b.t = seg.t0 + dt;
  b.r = r;
  b.theta = theta;
  b.k = k;
  b.defect = bend_defect(c.q, r, theta, k);
  c.samples.push_back(b);
}

inline void close_segment(BendCurve& c, BendSegment& seg) {
  seg.last = c.samples.size() - 1;
  seg.length = c.samples[seg.last].s;
  c.segments.push_back(seg);
}

/// Straight step-2 segment from r_from down to r_to at angle theta0.
inline void append_step2(BendCurve& c, double r_from, double r_to, int samples) {
  const BendSample& last = c.samples.back();
  BendSegment seg{2, last.L, last.t, 0.0, c.samples.size(), 0, 0.0};
  const double ct = std::cos(c.theta0), st = std::sin(c.theta0);
  for (int i = 0; i < samples; ++i) {
    const double r = i + 1 == samples ? r_to
                                      : r_from * std::pow(r_to / r_from,
                                                          static_cast<double>(i) / (samples - 1));
    const double s = (r_from - r) / ct;
    push_sample(c, seg, 2, s, s * st, r, c.theta0, 0.0);
  }
  close_segment(c, seg);
}

}  // namespace detail

/// Three-step profile curve: constant-k bend to theta0, straight descent to
/// r2, then raised-cosine curvature bumps up to theta = pi/2.
inline BendCurve build_bend_curve(const BendOptions& o) {
  if (o.q < 3) throw ParameterError("bend curve needs q >= 3");
  if (!(o.theta0 > 0.0)) throw ParameterError("theta0 must be positive");
  if (!(o.theta0 < o.theta_cap))
    throw ParameterError("theta0 must be below the cap " + std::to_string(o.theta_cap));
  if (!(o.eps2 > 0.0)) throw ParameterError("eps2 must be positive");
  if (!(o.r0 > 0.0)) throw ParameterError("r0 must be positive");
  if (!(o.r1p_ratio > 0.0 && o.r1p_ratio < 1.0)) throw ParameterError("r1p_ratio must lie in (0,1)");
  if (!(o.safety >= 1.0)) throw ParameterError("safety must be >= 1");
  if (o.step1_samples < 2 || o.step2_samples < 2 || o.steps_per_bump < 8)
    throw ParameterError("sample counts too small");

  BendCurve c;
  c.q = o.q;
  c.theta0 = o.theta0;
  c.r0 = o.r0;
  c.eps2 = o.eps2;

  // Step 1: largest constant k with min defect > -eps2/2.
  const double kmin = std::sin(o.theta0) / o.r0;
  auto feasible = [&](double k) {
    return detail::step1_min_defect(o.q, o.theta0, o.r0, k, o.step1_samples) > -0.5 * o.eps2;
  };
  double k_hi = 1e6 / o.r0, k_ok = 0.0;
  for (double k = k_hi; k > kmin; k *= 0.5) {
    if (feasible(k)) {
      k_ok = k;
      break;
    }
    k_hi = k;
  }
  if (k_ok == 0.0)
    throw ParameterError("step 1 infeasible: no constant curvature keeps the defect above -eps2/2 "
                         "(increase r0 or eps2)");
  for (int it = 0; it < 200 && k_hi - k_ok > 1e-15 * k_hi; ++it) {
    const double mid = 0.5 * (k_ok + k_hi);
    (feasible(mid) ? k_ok : k_hi) = mid;
  }
  const double k = k_ok;
  c.k1 = k;
  {
    BendSegment seg{1, 0.0, 0.0, 0.0, 0, 0, 0.0};
    const double Lend = o.theta0 / k;
    for (int i = 0; i < o.step1_samples; ++i) {
      const double L = i + 1 == o.step1_samples ? Lend : Lend * i / (o.step1_samples - 1);
      const double th = i + 1 == o.step1_samples ? o.theta0 : k * L;
      detail::push_sample(c, seg, 1, L, (1.0 - std::cos(k * L)) / k, o.r0 - std::sin(k * L) / k, th,
                          k);
    }
    seg.dtheta = o.theta0;
    detail::close_segment(c, seg);
  }
  c.r1 = c.samples.back().r;

  // Step 2.
  c.r1p = o.r1p_ratio * c.r1;
  c.r2 = c.r1p * std::exp(-o.safety / (bend_constant(o.q) * std::sin(o.theta0)));
  detail::append_step2(c, c.r1, c.r2, o.step2_samples);

  // Step 3.
  const double K = (o.q - 2.0) * std::sin(o.theta0) / 6.0;
  const double dtheta = c.bump_angle();
  const double target = std::numbers::pi / 2;
  double theta = o.theta0;
  int bumps = 0;
  while (target - theta > 1e-12) {
    if (bumps >= o.max_bumps) {
      std::vector<double> trace;
      for (const BendSegment& s : c.segments) trace.push_back(s.dtheta);
      throw ConvergenceError("bump iteration did not reach pi/2", trace);
    }
    const double want = std::min(dtheta, target - theta);
    auto gain = [&](double lambda) {
      return detail::integrate_bump(K, lambda, theta, o.steps_per_bump,
                                    [](int, double, const std::array<double, 3>&) {});
    };
    double lo = 0.0, hi = 1.0;
    if (!(gain(hi) >= want)) {
      std::vector<double> trace{theta, gain(hi), want};
      throw ConvergenceError("bump support cannot deliver the prescribed angle", trace);
    }
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double g = gain(mid);
      (g < want ? lo : hi) = mid;
      if (hi - lo < 1e-15) break;
    }
    const double lambda = hi;
    const BendSample& last = c.samples.back();
    const double rho = last.r;
    BendSegment seg{3, last.L, last.t, 0.0, c.samples.size(), 0, 0.0};
    const double got = detail::integrate_bump(
        K, lambda, theta, o.steps_per_bump,
        [&](int, double sigma, const std::array<double, 3>& y) {
          const double kk = K * detail::bump_window(sigma / lambda) / (rho * y[1]);
          detail::push_sample(c, seg, 3, rho * sigma, rho * y[0], rho * y[1], y[2], kk);
        });
    seg.dtheta = got;
    detail::close_segment(c, seg);
    c.step3_length += c.segments.back().length;
    theta = c.samples.back().theta;
    ++bumps;
  }
  c.bump_count = bumps;
  c.r3 = c.samples.back().r;
  return c;
}

struct BendCertification {
  bool pass = false;
  double eps2 = 0.0;
  double step1_min_defect = 0.0, step1_worst_L = 0.0;
  double step23_min_defect = 0.0, step23_worst_L = 0.0;
  int step23_worst_segment = 0;
  bool step2_straight = true;
  double s_lower_step1 = 0.0, s_lower_rest = 0.0, s_lower = 0.0;
};

/// Checks D > -eps2 on step 1 and D >= 0 on steps 2-3 at every sample.
inline BendCertification certify_bend(const BendCurve& c, double s_g_lower, bool strict = true) {
  BendCertification r;
  r.eps2 = c.eps2;
  r.step1_min_defect = r.step23_min_defect = std::numeric_limits<double>::infinity();
  for (const BendSample& b : c.samples) {
    if (b.step == 1) {
      if (b.defect < r.step1_min_defect) {
        r.step1_min_defect = b.defect;
        r.step1_worst_L = b.L;
      }
    } else {
      if (b.step == 2 && b.k != 0.0) r.step2_straight = false;
      if (b.defect < r.step23_min_defect) {
        r.step23_min_defect = b.defect;
        r.step23_worst_L = b.L;
        r.step23_worst_segment = b.segment;
      }
    }
  }
  r.s_lower_step1 = s_g_lower - c.eps2;
  r.s_lower_rest = s_g_lower;
  r.s_lower = std::min(r.s_lower_step1, r.s_lower_rest);
  r.pass = r.step1_min_defect > -c.eps2 && r.step23_min_defect >= 0.0 && r.step2_straight;
  if (strict && !r.pass) {
    if (!(r.step1_min_defect > -c.eps2))
      throw CertificationError("step-1 defect below -eps2", r.step1_worst_L, r.step1_min_defect);
    throw CertificationError("negative defect on steps 2-3", r.step23_worst_L,
                             r.step23_min_defect);
  }
  return r;
}

/// Homothetic shrink of the step-3 part by mu; step 2 is extended down to
/// mu r2 so the shrunk bumps attach at (tau_mu, mu r2).
inline BendCurve shrink_curve(const BendCurve& c, double mu) {
  if (!(mu > 0.0 && mu <= 1.0)) throw ParameterError("mu must lie in (0, 1]");
  if (mu == 1.0) return c;
  BendCurve out;
  out.q = c.q;
  out.theta0 = c.theta0;
  out.r0 = c.r0;
  out.r1 = c.r1;
  out.r1p = mu * c.r1p;
  out.r2 = mu * c.r2;
  out.eps2 = c.eps2;
  out.k1 = c.k1;
  out.bump_count = c.bump_count;
  out.mu = c.mu * mu;
  // Step 1 is unchanged.
  const BendSegment& s1 = c.segments.front();
  for (std::size_t i = s1.first; i <= s1.last; ++i) out.samples.push_back(c.samples[i]);
  out.segments.push_back(s1);
  const BendSegment& s2 = c.segments.at(1);
  detail::append_step2(out, c.r1, out.r2, static_cast<int>(s2.last - s2.first + 1));
  for (std::size_t g = 2; g < c.segments.size(); ++g) {
    const BendSegment& src = c.segments[g];
    const BendSample& last = out.samples.back();
    BendSegment seg{3, last.L, last.t, 0.0, out.samples.size(), 0, src.dtheta};
    for (std::size_t i = src.first; i <= src.last; ++i) {
      const BendSample& b = c.samples[i];
      detail::push_sample(out, seg, 3, mu * b.s, mu * b.dt, mu * b.r, b.theta, b.k / mu);
    }
    detail::close_segment(out, seg);
    out.step3_length += out.segments.back().length;
  }
  out.r3 = out.samples.back().r;
  return out;
}

}  // namespace yamabe
