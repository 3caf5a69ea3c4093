#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "yamabe/yamabe.hpp"

using namespace yamabe;
constexpr double kPi = std::numbers::pi;

namespace {

MetricField circle(int res) {
  MetricField g;
  g.chart = GridChart({Axis{0.0, 2.0 * kPi, res, true, 0.0}});
  g.g = [](std::span<const double>) -> Mat { return Mat::Identity(1, 1); };
  g.name = "S^1";
  return g;
}

const BendCurve& default_curve() {
  static const BendCurve c = build_bend_curve(BendOptions{});
  return c;
}

}  // namespace

// ------------------------------------------------------------------ profiles

TEST(SmoothStep, EndpointsSymmetryAndDerivatives) {
  EXPECT_EQ(SmoothStep::value(-0.1), 0.0);
  EXPECT_EQ(SmoothStep::value(1.2), 1.0);
  EXPECT_NEAR(SmoothStep::value(0.5), 0.5, 1e-15);
  for (double s : {0.1, 0.3, 0.45, 0.8}) {
    EXPECT_NEAR(SmoothStep::value(s) + SmoothStep::value(1.0 - s), 1.0, 1e-14);
    const double h = 1e-5;
    EXPECT_NEAR(SmoothStep::d1(s), (SmoothStep::value(s + h) - SmoothStep::value(s - h)) / (2 * h), 1e-6);
    EXPECT_NEAR(SmoothStep::d2(s), (SmoothStep::d1(s + h) - SmoothStep::d1(s - h)) / (2 * h), 1e-4);
  }
  EXPECT_NEAR(SmoothStep::integral(1.0), 0.5, 1e-14);
  // composite Simpson on 2000 panels
  double simpson = 0.0;
  const int m = 2000;
  for (int i = 0; i <= m; ++i) {
    const double w = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    simpson += w * SmoothStep::value(0.5 * i / m);
  }
  simpson *= 0.5 / m / 3.0;
  EXPECT_NEAR(SmoothStep::integral(0.5), simpson, 1e-10);
  EXPECT_NEAR(SmoothStep::integral(0.8), 0.3 + SmoothStep::integral(0.2), 1e-14);
}

TEST(PlateauStep, MonotoneWithBoundedSlope) {
  const PlateauStep p(0.25);
  EXPECT_NEAR(p.value(0.5), 0.5, 1e-12);
  EXPECT_EQ(p.value(0.0), 0.0);
  EXPECT_EQ(p.value(1.0), 1.0);
  double prev = 0.0, dmax = 0.0;
  for (int i = 1; i <= 1000; ++i) {
    const double s = i / 1000.0;
    EXPECT_GE(p.value(s), prev);
    prev = p.value(s);
    dmax = std::max(dmax, p.d1(s));
  }
  EXPECT_NEAR(dmax, 4.0 / 3.0, 1e-12);
  const double h = 1e-6;
  for (double s : {0.1, 0.5, 0.9}) EXPECT_NEAR(p.d1(s), (p.value(s + h) - p.value(s - h)) / (2 * h), 1e-6);
  EXPECT_THROW(PlateauStep(0.7), ParameterError);
}

TEST(Eta, PlateausAndGradientBound) {
  const double r1p = 1.0, r2 = 0.5 * eta_max_r2(3, 0.1, r1p);
  const Profile eta = cutoff_eta(3, 0.1, r1p, r2);
  EXPECT_EQ(eta(0.5 * r2), 0.0);
  EXPECT_EQ(eta(2.0 * r1p), 1.0);
  const EtaCheck c = verify_eta(eta, 3, 0.1, 5000);
  EXPECT_TRUE(c.pass);
  EXPECT_LE(c.max_ratio, 1.0);
  EXPECT_NEAR(c.bound, std::sin(0.1), 1e-15);  // sqrt((q-1)(q-2)/2) = 1 for q = 3
}

TEST(Eta, InfeasibleRadiusRaises) {
  EXPECT_THROW(cutoff_eta(3, 0.1, 1.0, 1.1 * eta_max_r2(3, 0.1, 1.0)), FeasibilityError);
  EXPECT_THROW(cutoff_eta(2, 0.1, 1.0, 1e-9), ParameterError);
}

TEST(InterpolationProfile, PlateausAndSlopeLowerBound) {
  for (double delta : {0.05, 0.1, 0.3}) {
    const Profile w = build_interpolation_profile(delta);
    const double ra = w_plateau_radius(delta);
    EXPECT_EQ(w(0.5 * ra), 1.0);
    EXPECT_EQ(w(1.5 * delta), 0.0);
    const InterpolationProfileCheck c = verify_interpolation_profile(w, delta, 4000);
    EXPECT_TRUE(c.plateaus_ok);
    // mean value theorem in log r: some r has |r w'| >= 1/ln(delta/r_a)
    EXPECT_NEAR(c.slope_lower_bound, 1.0 / (std::log(4.0 * delta) + 1.0 / delta), 1e-12);
    EXPECT_GE(c.max_r_d1, c.slope_lower_bound);
  }
}

TEST(InterpolationProfile, SmallDeltaCannotMeetFirstDerivativeBound) {
  EXPECT_THROW(interpolation_profile(0.05), ProfileConstructionError);
  EXPECT_THROW(build_interpolation_profile(1.5), ParameterError);
}

// ---------------------------------------------------------------- bending

TEST(Bend, DefectFormula) {
  EXPECT_NEAR(bend_defect(3, 1.0, kPi / 2, 0.0), 1.0, 1e-15);
  EXPECT_NEAR(bend_defect(4, 2.0, kPi / 6, 0.1), 0.1875 - 0.225, 1e-15);
  EXPECT_EQ(bend_defect(5, 0.3, 0.0, 7.0), 0.0);
}

TEST(Bend, StepOneIsACircularArc) {
  const BendCurve& c = default_curve();
  ASSERT_GT(c.k1, 0.0);
  for (const BendSample& b : c.samples) {
    if (b.step != 1) continue;
    EXPECT_NEAR(b.theta, c.k1 * b.L, 1e-12);
    EXPECT_NEAR(b.r, c.r0 - std::sin(c.k1 * b.L) / c.k1, 1e-9 * c.r0);
    EXPECT_NEAR(b.t, (1.0 - std::cos(c.k1 * b.L)) / c.k1, 1e-9 * c.r0);
  }
}

TEST(Bend, SamplesFollowTheKinematics) {
  const BendCurve& c = default_curve();
  EXPECT_EQ(c.samples.front().theta, 0.0);
  EXPECT_NEAR(c.terminal_angle(), kPi / 2, 1e-6);
  double worst_r = 0.0, worst_t = 0.0, worst_th = 0.0;
  for (std::size_t i = 1; i < c.samples.size(); ++i) {
    const BendSample &a = c.samples[i - 1], &b = c.samples[i];
    if (a.segment != b.segment) continue;
    // segment-local arc length and t keep precision where the step is tiny
    const double dL = b.s - a.s;
    ASSERT_GE(dL, 0.0);
    if (dL == 0.0) continue;
    // midpoint rule on one sample interval
    const double th = 0.5 * (a.theta + b.theta);
    worst_t = std::max(worst_t, std::abs((b.dt - a.dt) - dL * std::sin(th)) / dL);
    worst_r = std::max(worst_r, std::abs((b.r - a.r) + dL * std::cos(th)) / dL);
    worst_th = std::max(worst_th, std::abs((b.theta - a.theta) - 0.5 * dL * (a.k + b.k)));
  }
  EXPECT_LT(worst_t, 1e-3);
  EXPECT_LT(worst_r, 1e-3);
  EXPECT_LT(worst_th, 1e-3);
}

TEST(Bend, StoredDefectsMatchFormula) {
  const BendCurve& c = default_curve();
  for (std::size_t i = 0; i < c.samples.size(); i += 7) {
    const BendSample& b = c.samples[i];
    EXPECT_NEAR(b.defect, bend_defect(c.q, b.r, b.theta, b.k), 1e-9 * (1.0 + std::abs(b.defect)));
  }
}

TEST(Bend, RadiiDecreaseAndCertificationPasses) {
  const BendCurve& c = default_curve();
  EXPECT_GT(c.r0, c.r1);
  EXPECT_GT(c.r1, c.r2);
  EXPECT_GT(c.r2, 0.0);
  const BendCertification r = certify_bend(c, 0.0);
  EXPECT_TRUE(r.pass);
  EXPECT_TRUE(r.step2_straight);
  EXPECT_NEAR(r.s_lower, -c.eps2, 1e-15);
  EXPECT_LE(c.step3_length, c.step3_length_bound());
  EXPECT_LE(std::abs(c.bump_count - c.predicted_bumps()), 2);
}

TEST(Bend, CorruptedCurveFailsStrictCertification) {
  BendCurve c = default_curve();
  BendSample& b = c.samples[c.samples.size() / 2];
  b.defect = -1.0;
  EXPECT_FALSE(certify_bend(c, 0.0, false).pass);
  EXPECT_THROW(certify_bend(c, 0.0, true), CertificationError);
}

TEST(Bend, HigherCodimension) {
  BendOptions o;
  o.q = 4;
  o.theta0 = 0.05;
  const BendCurve c = build_bend_curve(o);
  EXPECT_TRUE(certify_bend(c, 0.0, false).pass);
  EXPECT_NEAR(c.terminal_angle(), kPi / 2, 1e-6);
}

TEST(Bend, ShrinkScalesStepThree) {
  const BendCurve& c = default_curve();
  const BendCurve s = shrink_curve(c, 0.5);
  EXPECT_NEAR(s.r2, 0.5 * c.r2, 1e-12);
  EXPECT_NEAR(s.step3_length, 0.5 * c.step3_length, 1e-9 * c.step3_length);
  EXPECT_NEAR(s.terminal_angle(), kPi / 2, 1e-6);
  EXPECT_TRUE(certify_bend(s, 0.0, false).pass);
  EXPECT_THROW(shrink_curve(c, 0.0), ParameterError);
  EXPECT_THROW(shrink_curve(c, 1.5), ParameterError);
}

TEST(Bend, BadOptionsThrow) {
  BendOptions o;
  o.q = 2;
  EXPECT_THROW(build_bend_curve(o), ParameterError);
  o = {};
  o.theta0 = 0.5;
  EXPECT_THROW(build_bend_curve(o), ParameterError);
  o = {};
  o.eps2 = 0.0;
  EXPECT_THROW(build_bend_curve(o), ParameterError);
}

// ------------------------------------------------------------------ tubes

TEST(Tube, CircleInEuclideanSpace) {
  const TubeExample ex = circle_in_euclidean(2.0, 3, 0.2, 16, 9);
  EXPECT_NEAR(max_tube_radius(ex.tube), 1.0, 1e-12);
  const MetricField ghat = canonical_tube_metric(ex.tube);
  const JetCheck j = first_order_gap(ex.exact, ghat, 3);
  EXPECT_LT(j.max_value_gap, 1e-12);
  EXPECT_LT(j.max_derivative_gap, 1e-8);
}

TEST(Tube, CorrectedGreatCircleHasRoundCurvatureOnW) {
  const TubeExample ex = great_circle_in_sphere(4, 0.2, 16, 9);
  const MetricField gbar = corrected_tube_metric(ex);
  const JetCheck j = first_order_gap(ex.exact, gbar, 3);
  EXPECT_LT(j.max_value_gap, 1e-12);
  EXPECT_LT(j.max_derivative_gap, 1e-8);
  const double z[] = {1.0, 0.0, 0.0, 0.0};
  EXPECT_NEAR(scalar_curvature_at(gbar, std::span<const double>(z, 4), std::vector<double>(4, 1e-3)), 12.0, 1e-4);
}

TEST(Tube, CorrectedPointInSphere) {
  const TubeExample ex = point_in_sphere(3, 0.3, 9);
  const MetricField gbar = corrected_tube_metric(ex);
  const double z[] = {0.0, 0.0, 0.0};
  EXPECT_NEAR(scalar_curvature_at(gbar, std::span<const double>(z, 3), std::vector<double>(3, 1e-3)), 6.0, 1e-4);
}

TEST(Tube, CorrectionFactorNeedsSmallRadius) {
  // s_g - s_ghat = 6 and a = 8 leave u > 0 only for |y| < sqrt(16/6)
  const TubeExample ex = point_in_sphere(3, 2.0, 5);
  EXPECT_THROW(corrected_tube_metric(ex), TubeRadiusError);
}

TEST(Tube, InvalidTubes) {
  TubeExample ex = point_in_sphere(3, 0.3, 9);
  ex.tube.q = 2;
  EXPECT_THROW(canonical_tube_metric(ex.tube), InvalidSpecError);
  ex = point_in_sphere(3, 0.3, 9);
  ex.tube.r0 = 0.0;
  EXPECT_THROW(canonical_tube_metric(ex.tube), InvalidSpecError);
}

TEST(Glue, InterpolatesBetweenMetrics) {
  const TubeExample ex = great_circle_in_sphere(4, 0.2, 16, 9);
  const MetricField gbar = corrected_tube_metric(ex);
  const double delta = 0.1;
  const MetricField gd = glue_interpolated_metric(ex.exact, gbar, 3, delta);
  const double inner[] = {0.3, 0.5 * w_plateau_radius(delta), 0.0, 0.0};
  const double outer[] = {0.3, 0.15, 0.0, 0.05};
  const std::span<const double> zi(inner, 4), zo(outer, 4);
  EXPECT_EQ((gd(zi) - gbar(zi)).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ((gd(zo) - ex.exact(zo)).cwiseAbs().maxCoeff(), 0.0);
  const GlueGap gap = glue_gap(ex.exact, gd, 3, delta, {60, 1e-4, 0.05});
  EXPECT_GT(gap.samples, 0);
  EXPECT_TRUE(std::isfinite(gap.sup_scalar_gap));
  EXPECT_GT(gap.c1_distance, 0.0);
}

TEST(Glue, MismatchedJetsAreRejected) {
  const TubeExample ex = great_circle_in_sphere(4, 0.2, 16, 9);
  const MetricField doubled = scaled_metric(ex.exact, 2.0);
  EXPECT_THROW(glue_interpolated_metric(ex.exact, doubled, 3, 0.1), IncompatibleJetError);
}

// ----------------------------------------------------------- blow-up, homotopy

TEST(Blowup, AnnulusBecomesCylinder) {
  BlowupOptions o;
  o.radial_resolution = 120;
  o.polar_resolution = 120;
  const auto [g, r] = cylindrical_blowup(3, std::exp(-2.0), 1.0, o);
  EXPECT_EQ(g.dim(), 3);
  EXPECT_NEAR(r.length, 2.0, 1e-14);
  EXPECT_NEAR(r.cylinder_volume, 2.0 * 4.0 * kPi, 1e-12);
  EXPECT_LT(r.volume_rel_error, 1e-2);
  EXPECT_LT(r.s_rel_error(), 2e-2);
  EXPECT_LT(r.map_defect, 1e-6);
  EXPECT_THROW(cylindrical_blowup(3, 1.0, 0.5), ParameterError);
}

TEST(Homotopy, UnperturbedRegionIsAProduct) {
  HomotopyRegionSpec s;
  s.gW = circle(8);
  s.q = 3;
  s.r = 0.1;
  s.polar_resolution = 96;
  s.perturbation = sample_perturbation(1, 3, 0.0);
  const SampledField sc = scalar_curvature(homotopy_metric(s, 1.0, false));
  EXPECT_LT(sc.max_abs_deviation(product_scalar(3, 0.1)) / product_scalar(3, 0.1), 2e-2);
  EXPECT_NEAR(product_scalar(4, 0.5), 24.0, 1e-12);
}

TEST(Homotopy, SamplePerturbationOrders) {
  HomotopyRegionSpec s;
  s.gW = circle(8);
  s.q = 3;
  s.polar_resolution = 24;
  s.perturbation = sample_perturbation(1, 3);
  const BlockOrders b = fit_block_orders(s, {0.2, 0.1, 0.05});
  EXPECT_NEAR(b.w_order, 1.0, 1e-9);
  EXPECT_NEAR(b.mixed_order, 2.0, 1e-9);
  EXPECT_TRUE(b.sphere_block_zero);
  EXPECT_TRUE(b.ok);
}

TEST(Homotopy, ParameterChecks) {
  HomotopyRegionSpec s;
  s.gW = circle(8);
  s.perturbation = sample_perturbation(1, 3);
  EXPECT_THROW(homotopy_metric(s, 1.5, false), ParameterError);
  s.q = 2;
  EXPECT_THROW(homotopy_metric(s, 0.5, false), InvalidSpecError);
}

// ----------------------------------------------------------------- assembly

TEST(Assembly, RegionsInterfacesAndScaling) {
  HomotopyRegionSpec s;
  s.gW = circle(8);
  s.q = 3;
  s.polar_resolution = 24;
  s.perturbation = sample_perturbation(1, 3, 0.01);
  const BendCurve& curve = default_curve();
  const MetricField outer = perturbed_outer_metric(s, curve.r0, 1.25 * curve.r0);
  AssemblyOptions ao;
  ao.scalar_reports = false;
  const NeckAssembly a = assemble_surgered_metric(outer, curve, s, 0.5, 1.0, ao);
  const NeckAssembly b = assemble_surgered_metric(outer, curve, s, 0.5, 0.5, ao);
  EXPECT_NO_THROW(a.region("outer"));
  EXPECT_NO_THROW(a.region("bend"));
  EXPECT_NO_THROW(a.region("homotopy"));
  EXPECT_THROW(a.region("nowhere"), InvalidSpecError);
  for (const InterfaceCheck& ic : a.interfaces) EXPECT_LE(ic.mismatch, ao.interface_tolerance) << ic.name;
  EXPECT_GT(a.vol_S, 0.0);
  EXPECT_NEAR(a.vol_S / b.vol_S, 8.0, 0.4);
  EXPECT_NEAR(a.parameters.mu, 0.5, 1e-15);
}

TEST(Assembly, MismatchedCodimension) {
  HomotopyRegionSpec s;
  s.gW = circle(8);
  s.q = 4;
  s.perturbation = sample_perturbation(1, 4);
  const MetricField outer = perturbed_outer_metric(s, 30.0, 37.5);
  EXPECT_THROW(assemble_surgered_metric(outer, default_curve(), s, 0.5, 1.0), AssemblyError);
  HomotopyRegionSpec s3 = s;
  s3.q = 3;
  EXPECT_THROW(assemble_surgered_metric(outer, default_curve(), s3, 0.0, 1.0), ParameterError);
}
