// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance            run every criterion
//   acceptance <id>...    run the listed criteria (1..13)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "yamabe/yamabe.hpp"

using namespace yamabe;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[1024];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

MetricField unit_circle(int res) {
  MetricField g;
  g.chart = GridChart({Axis{0.0, 2.0 * std::numbers::pi, res, true, 0.0}});
  g.g = [](std::span<const double>) -> Mat { return Mat::Identity(1, 1); };
  g.name = "S^1";
  return g;
}

Outcome c01_curvature_calibration() {
  const auto t0 = std::chrono::steady_clock::now();
  const SampledField s200 = scalar_curvature(round_sphere({3, 1.0, {200, 200, 4}, 2.0, 0.4}));
  const double t200 = seconds_since(t0);
  const SampledField s400 = scalar_curvature(round_sphere({3, 1.0, {400, 400, 4}, 2.0, 0.4}));
  const double e200 = s200.max_abs_deviation(6.0) / 6.0;
  const double e400 = s400.max_abs_deviation(6.0) / 6.0;
  const double ratio = e200 / e400;
  const bool ok = e200 <= 5e-3 && std::abs(ratio - 4.0) <= 1.0 && t200 <= 10.0;
  return {ok, fmt("rel err %.3e at 200 (<= 5e-3), halving ratio %.3f (4 +- 1), %.2fs (<= 10s)", e200, ratio, t200)};
}

Outcome c02_conformal_law() {
  const MetricField t = flat_torus({1.0, 1.0, 1.0}, {64, 4, 4});
  const double two_pi = 2.0 * std::numbers::pi;
  const ConformalFactor u =
      make_conformal_factor(3, [two_pi](std::span<const double> x) { return 1.0 + 0.1 * std::cos(two_pi * x[0]); });
  const SampledField formula = conformal_scalar_formula(t, u);
  const SampledField direct = scalar_curvature(conformal_metric(t, u));
  // s of u^4 dx^2 on T^3: u^{-5} (8 * 0.1 (2 pi)^2 cos(2 pi x)).
  const SampledField exact = sample(t.chart, [two_pi](std::span<const double> x) {
    const double c = std::cos(two_pi * x[0]);
    return std::pow(1.0 + 0.1 * c, -5.0) * 8.0 * 0.1 * two_pi * two_pi * c;
  });
  const double gap = max_abs_difference(formula, direct);
  const double baseline = max_abs_difference(direct, exact);
  // Same law with a/4 in place of a.
  const SampledField quarter = sample(t.chart, [two_pi](std::span<const double> x) {
    const double c = std::cos(two_pi * x[0]);
    return std::pow(1.0 + 0.1 * c, -5.0) * 2.0 * 0.1 * two_pi * two_pi * c;
  });
  const double quarter_gap = max_abs_difference(quarter, direct);
  const bool ok = gap <= 5.0 * baseline && quarter_gap > 5.0 * baseline;
  return {ok, fmt("sup|formula - direct| %.3e <= 5 x baseline %.3e; a/4 variant gap %.3e", gap, baseline, quarter_gap)};
}

Outcome c03_lambda_values() {
  const double l3 = lambda_n(3), l4 = lambda_n(4);
  const double o3 = 3.0 * 2.0 * std::pow(vol_sphere_recursive(3), 2.0 / 3.0);
  const double o4 = 4.0 * 3.0 * std::pow(vol_sphere_recursive(4), 0.5);
  const double c3 = 6.0 * std::pow(2.0 * std::numbers::pi * std::numbers::pi, 2.0 / 3.0);
  const double c4 = 12.0 * std::sqrt(8.0 * std::numbers::pi * std::numbers::pi / 3.0);
  const double e3 = std::max(std::abs(l3 - o3), std::abs(l3 - c3)) / l3;
  const double e4 = std::max(std::abs(l4 - o4), std::abs(l4 - c4)) / l4;
  const double vol = volume(round_sphere({3, 1.0, {200, 200, 4}, 2.0, -1.0}));
  const double ev = std::abs(vol / (2.0 * std::numbers::pi * std::numbers::pi) - 1.0);
  const bool ok = e3 <= 1e-9 && e4 <= 1e-9 && ev <= 5e-3;
  return {ok, fmt("lambda_3 %.15g (err %.1e), lambda_4 %.15g (err %.1e), vol(S^3) rel err %.3e", l3, e3, l4, e4, ev)};
}

Outcome c04_reduced_s3() {
  const auto t0 = std::chrono::steady_clock::now();
  const OrbitProfile p = reduce_cohomogeneity_one(round_sphere_model(3), {400});
  std::vector<double> init(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) init[j] = 1.0 + 0.3 * std::cos(p.t[j]);
  MinimizeOptions opt;
  opt.continuation_stages = 6;
  const YamabeEstimate e = minimize_reduced(p, init, opt);
  const double secs = seconds_since(t0);
  const double rel = std::abs(e.value / lambda_n(3) - 1.0);
  const double dev = relative_sup_deviation(p, e.minimizer);
  const bool ok = rel <= 5e-3 && dev < 1e-2 && e.residual < 1e-6 && secs <= 60.0;
  return {ok, fmt("value %.12g rel err %.2e (<= 5e-3), sup deviation %.2e (< 1e-2), residual %.2e (< 1e-6), "
                  "%d iterations, %.2fs",
                  e.value, rel, dev, e.residual, e.iterations, secs)};
}

Outcome c05_bend() {
  BendOptions o;
  o.q = 3;
  o.theta0 = 0.1;
  o.eps2 = 1e-3;
  const BendCurve c = build_bend_curve(o);
  const BendCertification r = certify_bend(c, 0.0, false);
  const double term = std::abs(c.terminal_angle() - std::numbers::pi / 2);
  const int dbump = std::abs(c.bump_count - c.predicted_bumps());
  const bool ok = term <= 1e-6 && r.step1_min_defect > -c.eps2 && r.step23_min_defect >= 0.0 &&
                  c.step3_length <= c.step3_length_bound() && dbump <= 2;
  return {ok, fmt("terminal angle err %.2e, step-1 min D %.3e (> -%g), steps 2-3 min D %.3e (>= 0), "
                  "step-3 length %.5g <= %.5g, bumps %d vs predicted %d",
                  term, r.step1_min_defect, c.eps2, r.step23_min_defect, c.step3_length, c.step3_length_bound(),
                  c.bump_count, c.predicted_bumps())};
}

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

Outcome c06_shrink() {
  BendOptions o;
  const BendCurve c = build_bend_curve(o);
  std::vector<int> ref1, ref3;
  for (const BendSample& b : c.samples) {
    if (b.step == 1) ref1.push_back(sign_of(b.defect));
    if (b.step == 3) ref3.push_back(sign_of(b.defect));
  }
  const int ref_bumps = static_cast<int>(c.segments.size()) - 2;
  bool ok = true;
  std::string detail;
  for (double mu : {1.0, 0.5, 0.25}) {
    const BendCurve s = shrink_curve(c, mu);
    const BendCertification r = certify_bend(s, 0.0, false);
    std::size_t i1 = 0, i3 = 0, flips = 0;
    bool step2_ok = true;
    for (const BendSample& b : s.samples) {
      if (b.step == 1 && i1 < ref1.size()) flips += sign_of(b.defect) != ref1[i1++];
      if (b.step == 3 && i3 < ref3.size()) flips += sign_of(b.defect) != ref3[i3++];
      if (b.step == 2 && b.defect < 0.0) step2_ok = false;
    }
    const int bumps = static_cast<int>(s.segments.size()) - 2;
    const bool here = r.pass && flips == 0 && i1 == ref1.size() && i3 == ref3.size() && step2_ok && bumps == ref_bumps;
    ok = ok && here;
    detail += fmt("mu=%g: certified %d, sign flips %zu, bumps %d/%d; ", mu, r.pass, flips, bumps, ref_bumps);
  }
  return {ok, detail};
}

Outcome c07_cutoffs() {
  bool eta_ok = true, w_ok = true;
  std::string detail;
  double worst_eta = 0.0;
  for (int q : {3, 4})
    for (double th : {0.05, 0.1})
      for (double delta : {0.05, 0.1}) {
        (void)delta;
        const double r1p = 1.0;
        const Profile eta = cutoff_eta(q, th, r1p, 0.5 * eta_max_r2(q, th, r1p), 2000);
        const EtaCheck ec = verify_eta(eta, q, th, 20000);
        worst_eta = std::max(worst_eta, ec.max_ratio);
        eta_ok = eta_ok && ec.pass;
      }
  for (double delta : {0.05, 0.1}) {
    const Profile w = build_interpolation_profile(delta);
    const InterpolationProfileCheck wc = verify_interpolation_profile(w, delta, 20000);
    w_ok = w_ok && wc.pass();
    detail += fmt("w_%g: max|r w'| %.4f, max|r w''| %.4f (need < %g; any profile has max|r w'| >= %.4f); ", delta,
                  wc.max_r_d1, wc.max_r_d2, delta, wc.slope_lower_bound);
  }
  return {eta_ok && w_ok, fmt("eta: max r|eta'|/bound %.4f over 8 cases; ", worst_eta) + detail};
}

Outcome c08_blowup() {
  const auto [g, r] = cylindrical_blowup(3, std::exp(-4.0), 1.0);
  (void)g;
  const bool ok = std::abs(r.length - 4.0) <= 1e-12 && r.volume_rel_error <= 5e-3 && r.s_rel_error() <= 1e-2;
  return {ok, fmt("length %.12g, volume %.6g vs cylinder %.6g (rel %.2e <= 5e-3), s in [%.6g, %.6g] "
                  "rel err %.2e (<= 1e-2)",
                  r.length, r.volume, r.cylinder_volume, r.volume_rel_error, r.s_min, r.s_max, r.s_rel_error())};
}

Outcome c09_homotopy() {
  HomotopyRegionSpec s;
  s.gW = unit_circle(32);
  s.q = 3;
  s.perturbation = sample_perturbation(1, 3);
  const HomotopyCertification c = certify_homotopy(s, {0.2, 0.1, 0.05});
  std::string d = fmt("orders W %.3f mixed %.3f sphere zero %d; min s r^2:", c.orders.w_order, c.orders.mixed_order,
                      c.orders.sphere_block_zero);
  for (std::size_t i = 0; i < c.r_list.size(); ++i) d += fmt(" %.4f(r=%g)", c.min_s_r2[i], c.r_list[i]);
  d += fmt(", spread %.3f (<= 2); collar:", c.spread);
  for (std::size_t i = 0; i < c.mu_list.size(); ++i) d += fmt(" %.4f(mu=%g)", c.collar_min_s_rho2[i], c.mu_list[i]);
  return {c.pass(), d};
}

Outcome c10_volume_scaling() {
  bool ok = true;
  std::string d;
  for (int q : {3, 4}) {
    HomotopyRegionSpec s;
    s.gW = unit_circle(16);
    s.q = q;
    s.perturbation = sample_perturbation(1, q, 0.01);
    s.polar_resolution = 32;
    BendOptions bo;
    bo.q = q;
    const BendCurve curve = build_bend_curve(bo);
    const MetricField outer = perturbed_outer_metric(s, curve.r0, 1.25 * curve.r0);
    AssemblyOptions ao;
    ao.scalar_reports = false;
    std::vector<double> eps{1.0, 0.5, 0.25}, vols;
    for (double e : eps) vols.push_back(assemble_surgered_metric(outer, curve, s, 0.5, e, ao).vol_S);
    const double target = std::pow(2.0, q);
    const double r1 = vols[0] / vols[1], r2 = vols[1] / vols[2];
    const double slope = detail::log_slope(eps, vols);
    const bool here = std::abs(r1 / target - 1.0) <= 0.05 && std::abs(r2 / target - 1.0) <= 0.05 &&
                      std::abs(slope - q) <= 0.1;
    ok = ok && here;
    d += fmt("q=%d: ratios %.5f %.5f (2^q=%g), exponent %.4f; ", q, r1, r2, target, slope);
  }
  return {ok, d};
}

Outcome c11_disjoint_union() {
  const std::vector<double> vals{-3.0, -1.0, -0.25, 0.0, 0.5, 2.0, 43.8};
  bool comm = true, below = true, eq = true;
  for (int n : {3, 4, 5})
    for (double a : vals)
      for (double b : vals) {
        const double ab = disjoint_union_yamabe(a, b, n), ba = disjoint_union_yamabe(b, a, n);
        comm = comm && ab == ba;
        below = below && ab <= std::min(a, b);
        if (std::max(a, b) >= 0.0) eq = eq && ab == std::min(a, b);
      }
  const double v = disjoint_union_yamabe(-1.0, -1.0, 4);
  const double err = std::abs(v + std::sqrt(2.0));
  double cont = 0.0;
  for (double e : {1e-2, 1e-4, 1e-8})
    for (double a : {-e, 0.0, e})
      for (double b : {-e, 0.0, e}) cont = std::max(cont, std::abs(disjoint_union_yamabe(a, b, 4)) / e);
  const bool ok = comm && below && eq && err <= 1e-12 && cont <= std::sqrt(2.0) + 1e-12;
  return {ok, fmt("commutative %d, <= min %d, = min when max >= 0 %d, (-1,-1,n=4) err %.1e, "
                  "sup |f(a,b)|/eps near 0 = %.4f (<= sqrt 2)",
                  comm, below, eq, err, cont)};
}

Outcome c12_chain() {
  const ChainReport r = derivation_chain(5, 3, 2, 1);
  bool complete = !r.steps.empty();
  for (const DerivationStep& s : r.steps)
    complete = complete && s.valid && !s.operation.empty() && !s.inputs.empty() && !s.claim.empty();
  const ChainReport bad = derivation_chain(5, 2, 0, 0);
  bool flagged = !bad.valid && std::isnan(bad.value);
  bool some_invalid = false;
  for (const DerivationStep& s : bad.steps) some_invalid = some_invalid || !s.valid;
  const bool ok = r.valid && r.value == lambda_n(5) && complete && flagged && some_invalid;
  return {ok, fmt("value %.17g vs lambda_5 %.17g (exact %d), %zu steps all valid %d; q=2 flagged invalid %d",
                  r.value, lambda_n(5), r.value == lambda_n(5), r.steps.size(), complete, flagged && some_invalid)};
}

Outcome c13_continuity() {
  std::vector<OrbitProfile> family;
  std::vector<double> amps;
  for (int k = 0; k <= 4; ++k) {
    amps.push_back(std::pow(2.0, -k));
    family.push_back(reduce_cohomogeneity_one(torus_warped_s3(amps.back()), {400}));
  }
  const OrbitProfile limit = reduce_cohomogeneity_one(torus_warped_s3(0.0), {400});
  const ContinuityReport r = continuity_experiment(family, limit, amps);
  const double lim_err = std::abs(r.limit_value / lambda_n(3) - 1.0);
  std::string d = "gaps:";
  for (double g : r.gaps) d += fmt(" %.3e", g);
  d += fmt("; min ratio %.3f (>= 1.5), monotone %d, limit %.10g vs lambda_3 rel %.1e", r.min_ratio, r.monotone,
           r.limit_value, lim_err);
  return {r.monotone && r.min_ratio >= 1.5 && lim_err <= 5e-3, d};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "curvature engine calibration", c01_curvature_calibration},
      {2, "conformal law cross-check", c02_conformal_law},
      {3, "Lambda_n values", c03_lambda_values},
      {4, "reduced minimization on S^3", c04_reduced_s3},
      {5, "bend certification", c05_bend},
      {6, "shrink invariance", c06_shrink},
      {7, "cutoff bounds", c07_cutoffs},
      {8, "cylindrical blow-up", c08_blowup},
      {9, "homotopy desk check", c09_homotopy},
      {10, "neck volume scaling", c10_volume_scaling},
      {11, "disjoint union formula", c11_disjoint_union},
      {12, "derivation chain", c12_chain},
      {13, "continuity experiment", c13_continuity},
  };
  std::vector<int> pick;
  for (int i = 1; i < argc; ++i) pick.push_back(std::atoi(argv[i]));
  int failures = 0;
  for (const Criterion& c : all) {
    if (!pick.empty() && std::find(pick.begin(), pick.end(), c.id) == pick.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s  C%02d %s: %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
