#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "json.hpp"
#include "yamabe/core/curvature.hpp"
#include "yamabe/invariants/invariants.hpp"
#include "yamabe/neck/assembly.hpp"
#include "yamabe/neck/blowup.hpp"
#include "yamabe/neck/homotopy.hpp"
#include "yamabe/neck/tube.hpp"
#include "yamabe/reduction/minimize.hpp"

namespace yamabe::io {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolkitVersion = "1.0.0";

/// Non-finite numbers become strings so the output stays valid JSON.
inline json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

inline json numbers(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

inline json envelope(const std::string& kind) {
  json j;
  j["schema"] = "yamabe-report";
  j["schema_version"] = kSchemaVersion;
  j["kind"] = kind;
  return j;
}

inline json chart_json(const GridChart& c) {
  json axes = json::array();
  for (const Axis& a : c.axes())
    axes.push_back({{"lo", a.lo}, {"hi", a.hi}, {"resolution", a.resolution}, {"periodic", a.periodic},
                    {"band", a.band}});
  return {{"dim", c.dim()}, {"nodes", c.size()}, {"axes", axes}};
}

inline json metric_header(const MetricField& g) {
  json j = envelope("metric");
  j["name"] = g.name;
  j["closed_form"] = g.closed_form;
  j["chart"] = chart_json(g.chart);
  return j;
}

/// Summary of a scalar-curvature field; nodes off target by more than `tol`
/// (relative to max(1, |target|)) are listed, up to `max_violations`.
inline json curvature_report(const MetricField& g, const SampledField& s, double target, double tol,
                             std::size_t max_violations = 20) {
  json j = envelope("curvature");
  j["metric"] = g.name;
  j["chart"] = chart_json(g.chart);
  j["valid_nodes"] = s.valid_count();
  j["s_min"] = number(s.min());
  j["s_max"] = number(s.max());
  j["s_mean"] = number(s.mean());
  j["target"] = number(target);
  const double scale = std::max(1.0, std::abs(target));
  const double err = s.max_abs_deviation(target) / scale;
  j["max_relative_error"] = number(err);
  j["tolerance"] = tol;
  json v = json::array();
  std::size_t count = 0;
  double x[kMaxDim];
  const std::span<double> xs(x, g.dim());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!s.valid[i] || std::abs(s.values[i] - target) <= tol * scale) continue;
    ++count;
    if (v.size() < max_violations) {
      g.chart.point(i, xs);
      v.push_back({{"point", std::vector<double>(x, x + g.dim())}, {"s", s.values[i]}});
    }
  }
  j["violation_count"] = count;
  j["violations"] = v;
  j["pass"] = count == 0;
  return j;
}

inline json bend_report(const BendCurve& c, const BendCertification& r) {
  json j = envelope("bend");
  j["q"] = c.q;
  j["theta0"] = c.theta0;
  j["eps2"] = c.eps2;
  j["radii"] = {{"r0", c.r0}, {"r1", c.r1}, {"r1p", c.r1p}, {"r2", c.r2}, {"r3", c.r3}};
  j["k1"] = c.k1;
  j["mu"] = c.mu;
  j["samples"] = c.samples.size();
  j["terminal_angle"] = c.terminal_angle();
  j["terminal_angle_error"] = std::abs(c.terminal_angle() - std::numbers::pi / 2);
  j["bump_count"] = c.bump_count;
  j["predicted_bumps"] = c.predicted_bumps();
  j["step3_length"] = c.step3_length;
  j["step3_length_bound"] = c.step3_length_bound();
  j["total_length"] = c.total_length();
  j["certification"] = {{"pass", r.pass},
                        {"step1_min_defect", number(r.step1_min_defect)},
                        {"step1_worst_L", r.step1_worst_L},
                        {"step23_min_defect", number(r.step23_min_defect)},
                        {"step23_worst_L", r.step23_worst_L},
                        {"step23_worst_segment", r.step23_worst_segment},
                        {"step2_straight", r.step2_straight},
                        {"s_lower", number(r.s_lower)}};
  return j;
}

inline json profile_summary(const OrbitProfile& p) {
  return {{"name", p.name},
          {"n", p.n},
          {"interval", {p.t_min, p.t_max}},
          {"resolution", p.size()},
          {"volume", p.volume()},
          {"endpoint_kind", {to_string(p.endpoint_kind[0]), to_string(p.endpoint_kind[1])}}};
}

inline json estimate_report(const OrbitProfile& p, const YamabeEstimate& e) {
  json j = envelope("yamabe-estimate");
  j["profile"] = profile_summary(p);
  j["value"] = e.value;
  j["residual"] = e.residual;
  j["iterations"] = e.iterations;
  j["lambda_n"] = lambda_n(p.n);
  j["relative_to_lambda_n"] = e.value / lambda_n(p.n) - 1.0;
  j["sup_deviation"] = relative_sup_deviation(p, e.minimizer);
  j["continuation"] = {{"exponents", e.stage_exponents}, {"values", numbers(e.stage_values)}};
  j["history_length"] = e.history.size();
  return j;
}

inline json continuity_report(const ContinuityReport& r, double reference, double min_ratio) {
  json j = envelope("continuity");
  j["parameters"] = r.parameters;
  j["values"] = numbers(r.values);
  j["gaps"] = numbers(r.gaps);
  j["ratios"] = numbers(r.ratios);
  j["iterations"] = r.iterations;
  j["limit_value"] = r.limit_value;
  j["reference"] = reference;
  j["limit_relative_error"] = std::abs(r.limit_value / reference - 1.0);
  j["monotone"] = r.monotone;
  j["min_ratio"] = number(r.min_ratio);
  j["required_ratio"] = min_ratio;
  j["pass"] = r.monotone && r.min_ratio >= min_ratio;
  return j;
}

inline json chain_report(const ChainReport& r) {
  json j = envelope("invariants-chain");
  j["n"] = r.n;
  j["q"] = r.q;
  j["l"] = r.l;
  j["m"] = r.m;
  j["manifold"] = r.manifold;
  j["value"] = number(r.value);
  j["upper_bound"] = number(r.upper_bound);
  j["valid"] = r.valid;
  json steps = json::array();
  for (const DerivationStep& s : r.steps)
    steps.push_back({{"operation", s.operation},
                     {"inputs", s.inputs},
                     {"output", number(s.output)},
                     {"valid", s.valid},
                     {"claim", s.claim}});
  j["steps"] = steps;
  return j;
}

inline json homotopy_report(const HomotopyCertification& c) {
  json j = envelope("homotopy");
  j["r"] = c.r_list;
  j["min_s_r2"] = numbers(c.min_s_r2);
  j["worst_nu"] = c.worst_nu;
  j["lower_constant"] = c.lower_constant;
  j["spread"] = number(c.spread);
  j["orders"] = {{"w_block", number(c.orders.w_order)},
                 {"mixed_block", number(c.orders.mixed_order)},
                 {"sphere_block_zero", c.orders.sphere_block_zero},
                 {"ok", c.orders.ok}};
  j["collar"] = {{"mu", c.mu_list}, {"min_s_rho2", numbers(c.collar_min_s_rho2)}, {"ok", c.collar_ok}};
  j["lemma_ok"] = c.lemma_ok;
  j["pass"] = c.pass();
  return j;
}

inline json blowup_report(const BlowupReport& b, double volume_tol, double scalar_tol) {
  json j = envelope("blowup");
  j["n"] = b.n;
  j["annulus"] = {b.r_min, b.r_max};
  j["length"] = b.length;
  j["volume"] = b.volume;
  j["cylinder_volume"] = b.cylinder_volume;
  j["volume_rel_error"] = b.volume_rel_error;
  j["s_expected"] = b.s_expected;
  j["s_min"] = b.s_min;
  j["s_max"] = b.s_max;
  j["s_rel_error"] = b.s_rel_error();
  j["map_defect"] = b.map_defect;
  j["pass"] = b.volume_rel_error <= volume_tol && b.s_rel_error() <= scalar_tol;
  return j;
}

inline json glue_report(const GlueGap& g) {
  json j;
  j["delta"] = g.delta;
  j["sup_scalar_gap"] = g.sup_scalar_gap;
  j["worst_r"] = g.worst_r;
  j["c1_distance"] = g.c1_distance;
  j["radius_range"] = {g.r_lo, g.r_hi};
  j["samples"] = g.samples;
  return j;
}

inline json assembly_report(const NeckAssembly& a) {
  json j = envelope("surgery-assembly");
  const NeckParameters& p = a.parameters;
  j["parameters"] = {{"delta", p.delta}, {"eps", p.eps}, {"mu", p.mu}, {"q", p.q},
                     {"theta0", p.theta0}, {"eps2", p.eps2}, {"r0", p.r0}, {"r1", p.r1},
                     {"r1p", p.r1p}, {"r2", p.r2}, {"r3", p.r3}};
  json regions = json::array();
  for (const NeckRegion& r : a.regions)
    regions.push_back({{"tag", r.tag}, {"volume", r.volume}, {"s_min", number(r.s_min)},
                       {"s_max", number(r.s_max)}, {"certified_lower", number(r.certified_lower)}});
  j["regions"] = regions;
  json inter = json::array();
  for (const InterfaceCheck& c : a.interfaces) inter.push_back({{"name", c.name}, {"mismatch", c.mismatch}});
  j["interfaces"] = inter;
  j["volumes"] = {{"S", a.vol_S}, {"T", a.vol_T}, {"N", a.vol_N}};
  j["s_g_lower"] = number(a.s_g_lower);
  j["outer_consistent"] = a.outer_consistent;
  j["global_s_lower"] = number(a.global_s_lower);
  j["bump_count"] = a.curve.bump_count;
  return j;
}

}  // namespace yamabe::io
