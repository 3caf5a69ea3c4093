#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "yamabe/core/errors.hpp"

namespace yamabe {

/// vol(S^n(1)) = 2 pi^{(n+1)/2} / Gamma((n+1)/2).
inline double vol_sphere(int n) {
  if (n < 0) throw ParameterError("sphere dimension must be nonnegative");
  const double h = 0.5 * (n + 1);
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

/// Same volume from vol(S^0) = 2, vol(S^1) = 2 pi and
/// vol(S^n) = 2 pi vol(S^{n-2}) / (n - 1).
inline double vol_sphere_recursive(int n) {
  if (n < 0) throw ParameterError("sphere dimension must be nonnegative");
  double v = (n % 2 == 0) ? 2.0 : 2.0 * std::numbers::pi;
  for (int k = (n % 2 == 0) ? 2 : 3; k <= n; k += 2) v *= 2.0 * std::numbers::pi / (k - 1);
  return v;
}

/// Yamabe constant of the round unit n-sphere: n(n-1) vol(S^n)^{2/n}.
inline double lambda_n(int n) {
  if (n < 2) throw ParameterError("lambda_n needs n >= 2");
  return n * (n - 1.0) * std::pow(vol_sphere(n), 2.0 / n);
}

enum class Provenance { formula, estimate, assumption };

inline const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::formula: return "formula";
    case Provenance::estimate: return "estimate";
    case Provenance::assumption: return "assumption";
  }
  return "?";
}

/// Extended real: +infinity marks a vacuous upper bound.
struct YamabeValue {
  double value = 0.0;
  int n = 3;
  Provenance provenance = Provenance::formula;

  bool unbounded() const { return std::isinf(value) && value > 0.0; }
};

/// Lambda_n k^{2/n}; k = nullopt means every orbit is infinite.
inline YamabeValue hebey_vaugon_bound(int n, std::optional<long long> min_orbit) {
  if (n < 3) throw ParameterError("orbit bound needs n >= 3");
  if (!min_orbit) return {std::numeric_limits<double>::infinity(), n, Provenance::formula};
  if (*min_orbit <= 0) throw ParameterError("minimal orbit cardinality must be positive");
  return {lambda_n(n) * std::pow(static_cast<double>(*min_orbit), 2.0 / n), n, Provenance::formula};
}

struct Interval {
  double lo = 0.0, hi = 0.0;
  bool contains(double x) const { return lo <= x && x <= hi; }
};

/// [s_min vol^{2/n}, s_max vol^{2/n}]; meaningful when the constant is <= 0.
inline Interval kobayashi_interval(double s_min, double s_max, double vol, int n) {
  if (!(vol > 0.0)) throw ParameterError("volume must be positive");
  if (n < 3) throw ParameterError("interval needs n >= 3");
  if (s_min > s_max) throw ParameterError("s_min exceeds s_max");
  const double f = std::pow(vol, 2.0 / n);
  return {s_min * f, s_max * f};
}

inline double disjoint_union_yamabe(double y1, double y2, int n) {
  if (n < 3) throw ParameterError("disjoint union formula needs n >= 3");
  if (std::max(y1, y2) >= 0.0) return std::min(y1, y2);
  const double h = 0.5 * n;
  return -std::pow(std::pow(-y1, h) + std::pow(-y2, h), 2.0 / n);
}

struct CheckedValue {
  double value = 0.0;
  bool valid = false;
  std::string reason;
};

/// Y_G(M) >= y0 after a codimension-q surgery; valid iff 3 <= q <= n.
inline CheckedValue surgery_lower_bound(double y0, int q, int n) {
  CheckedValue c{y0, true, "ok"};
  if (q < 3) {
    c.valid = false;
    c.reason = "codimension q = " + std::to_string(q) + " < 3";
  } else if (q > n) {
    c.valid = false;
    c.reason = "codimension q = " + std::to_string(q) + " exceeds n = " + std::to_string(n);
  }
  return c;
}

struct DerivationStep {
  std::string operation;
  std::string inputs;
  double output = 0.0;
  bool valid = true;
  std::string claim;
};

struct ChainReport {
  int n = 0, q = 0, l = 0, m = 0;
  std::string manifold;
  double value = std::numeric_limits<double>::quiet_NaN();
  double upper_bound = std::numeric_limits<double>::quiet_NaN();
  bool valid = false;
  std::vector<DerivationStep> steps;
};

namespace detail {

inline std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace detail

/// Derivation of Y_G for S^{n-q+1} x S^{q-1} and for connected sums of l copies
/// and m reversed copies taken at fixed points.
inline ChainReport derivation_chain(int n, int q, int l, int m) {
  if (l < 0 || m < 0) throw ParameterError("summand counts must be nonnegative");
  if (n < 3) throw ParameterError("examples need n >= 3");
  ChainReport rep;
  rep.n = n;
  rep.q = q;
  rep.l = l;
  rep.m = m;
  const std::string prod =
      "S^" + std::to_string(n - q + 1) + "xS^" + std::to_string(q - 1);
  const double L = lambda_n(n);
  bool ok = true;

  rep.steps.push_back({"lambda_n", "n=" + std::to_string(n), L, true,
                       "Y_G(S^n) = Lambda_n: round metric is G-invariant Yamabe, action has fixed points"});
  const double du = disjoint_union_yamabe(L, L, n);
  rep.steps.push_back({"disjoint_union_yamabe", "y1=" + detail::num(L) + ", y2=" + detail::num(L), du,
                       true, "Y_G(S^n u S^n) = min(Lambda_n, Lambda_n)"});
  const CheckedValue sb = surgery_lower_bound(du, q, n);
  ok = ok && sb.valid;
  rep.steps.push_back({"surgery_lower_bound",
                       "y0=" + detail::num(du) + ", q=" + std::to_string(q) + ", n=" + std::to_string(n),
                       sb.value, sb.valid, "Y_G(" + prod + ") >= Y_G(S^n u S^n) [" + sb.reason + "]"});
  const YamabeValue hv = hebey_vaugon_bound(n, 1);
  rep.steps.push_back({"hebey_vaugon_bound", "n=" + std::to_string(n) + ", k=1", hv.value, true,
                       "Y_G(" + prod + ") <= Lambda_n: fixed points exist"});

  // Connected sums at fixed points are codimension-n surgeries on a disjoint union.
  double current = (sb.valid && sb.value == hv.value) ? hv.value : std::numeric_limits<double>::quiet_NaN();
  for (int i = 0; i < l + m; ++i) {
    const bool reversed = i >= l;
    const std::string piece = reversed ? "reversed " + prod : prod;
    const double y_piece = ok ? L : std::numeric_limits<double>::quiet_NaN();
    const double base = i == 0 ? L : current;
    const double d = disjoint_union_yamabe(base, y_piece, n);
    rep.steps.push_back({"disjoint_union_yamabe", "y1=" + detail::num(base) + ", y2=" + detail::num(y_piece), d,
                         ok, "add summand " + std::to_string(i + 1) + " (" + piece + ")"});
    const CheckedValue cs = surgery_lower_bound(d, n, n);
    rep.steps.push_back({"surgery_lower_bound", "y0=" + detail::num(d) + ", q=" + std::to_string(n) +
                                                     ", n=" + std::to_string(n),
                         cs.value, cs.valid && ok, "connected sum at a fixed point [" + cs.reason + "]"});
    rep.steps.push_back({"hebey_vaugon_bound", "n=" + std::to_string(n) + ", k=1", hv.value, true,
                         "fixed points survive the connected sum"});
    ok = ok && cs.valid;
    current = (ok && cs.value == hv.value) ? hv.value : std::numeric_limits<double>::quiet_NaN();
  }

  if (l + m == 0) {
    rep.manifold = prod;
  } else {
    rep.manifold = std::to_string(l) + "(" + prod + ") # " + std::to_string(m) + "(reversed " + prod + ")";
  }
  rep.valid = ok;
  rep.upper_bound = hv.value;
  if (ok) rep.value = l + m == 0 ? sb.value : current;
  return rep;
}

}  // namespace yamabe
