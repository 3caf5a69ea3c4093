#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "yamabe/yamabe.hpp"

using namespace yamabe;
constexpr double kPi = std::numbers::pi;

namespace {

std::vector<double> on_grid(const OrbitProfile& p, const Profile1D& f) {
  std::vector<double> v(p.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = f(p.t[j]);
  return v;
}

OrbitProfile constant_profile(double weight, double s, int res = 200) {
  return make_profile(0.0, 1.0, res, [weight](double) { return weight; }, [s](double) { return s; }, 3, "const");
}

}  // namespace

TEST(Profile, RoundSphereWeightsAndCurvature) {
  for (int n : {3, 4, 5}) {
    const OrbitProfile p = reduce_cohomogeneity_one(round_sphere_model(n), {120});
    EXPECT_EQ(p.endpoint_kind[0], EndpointKind::smooth_cap);
    EXPECT_EQ(p.endpoint_kind[1], EndpointKind::smooth_cap);
    EXPECT_EQ(p.w.front(), 0.0);
    EXPECT_EQ(p.w.back(), 0.0);
    for (std::size_t j = 1; j + 1 < p.size(); ++j) {
      EXPECT_NEAR(p.w[j], vol_sphere(n - 1) * std::pow(std::sin(p.t[j]), n - 1), 1e-12);
      EXPECT_NEAR(p.s[j], n * (n - 1.0), 1e-8);
    }
  }
}

TEST(Profile, CylinderHasBoundaryEndsAndConstantData) {
  const OrbitProfile p = reduce_cohomogeneity_one(cylinder_model(4, 2.0, 0.5), {50});
  EXPECT_EQ(p.endpoint_kind[0], EndpointKind::boundary);
  EXPECT_EQ(p.endpoint_kind[1], EndpointKind::boundary);
  for (std::size_t j = 0; j < p.size(); ++j) {
    EXPECT_NEAR(p.s[j], 3.0 * 2.0 / 0.25, 1e-10);
    EXPECT_NEAR(p.w[j], 2.0 * kPi * kPi * 0.125, 1e-12);
  }
  EXPECT_NEAR(p.volume(), 2.0 * 2.0 * kPi * kPi * 0.125, 1e-12);
}

TEST(Profile, TorusWarpedFamilyReducesToRoundSphere) {
  const OrbitProfile p = reduce_cohomogeneity_one(torus_warped_s3(0.0), {100});
  for (std::size_t j = 1; j + 1 < p.size(); ++j) EXPECT_NEAR(p.s[j], 6.0, 1e-8);
  EXPECT_NEAR(p.volume() / (2.0 * kPi * kPi), 1.0, 1e-3);
}

TEST(Profile, WarpedScalarAgreesWithFullChartForPerturbedFamily) {
  // the cross-check inside the reduction throws on disagreement
  EXPECT_NO_THROW(reduce_cohomogeneity_one(torus_warped_s3(0.7), {100}));
}

TEST(Profile, WrongDerivativesAreCaught) {
  CohomogeneityOneModel m = cylinder_model(3, 1.0);
  m.factors[0].f = [](double t) { return 1.0 + 0.2 * t * t; };
  m.factors[0].df = [](double t) { return 0.4 * t; };
  m.factors[0].ddf = [](double) { return 0.0; };
  EXPECT_THROW(reduce_cohomogeneity_one(m, {40}), ReductionError);
  m.factors[0].ddf = [](double) { return 0.4; };
  EXPECT_NO_THROW(reduce_cohomogeneity_one(m, {40}));
}

TEST(Profile, ConeSingularityIsRejected) {
  CohomogeneityOneModel m = round_sphere_model(3);
  m.factors[0].f = [](double t) { return 2.0 * std::sin(t); };
  m.factors[0].df = [](double t) { return 2.0 * std::cos(t); };
  m.factors[0].ddf = [](double t) { return -2.0 * std::sin(t); };
  EXPECT_THROW(reduce_cohomogeneity_one(m, {40}), InvalidSpecError);
}

TEST(Profile, BadModelsThrow) {
  CohomogeneityOneModel empty;
  EXPECT_THROW(reduce_cohomogeneity_one(empty, {40}), InvalidSpecError);
  EXPECT_THROW(reduce_cohomogeneity_one(round_sphere_model(3), {3}), ParameterError);
  EXPECT_THROW(make_profile(0.0, 1.0, 10, [](double) { return 1.0; }, [](double) { return 0.0; }, 2, "x"),
               ParameterError);
  EXPECT_THROW(torus_warped_s3(-3.0), InvalidSpecError);
}

TEST(Quotient, ConstantOnRoundS3IsLambda) {
  const OrbitProfile p = reduce_cohomogeneity_one(round_sphere_model(3), {400});
  EXPECT_NEAR(reduced_quotient(p, [](double) { return 1.0; }) / lambda_n(3), 1.0, 1e-10);
}

TEST(Quotient, ConstantOnRoundS4IsLambda) {
  const OrbitProfile p = reduce_cohomogeneity_one(round_sphere_model(4), {400});
  EXPECT_NEAR(reduced_quotient(p, [](double) { return 1.0; }) / lambda_n(4), 1.0, 1e-4);
}

TEST(Quotient, FlatProfile) {
  const OrbitProfile p = constant_profile(3.0, 0.0);
  EXPECT_NEAR(reduced_quotient(p, [](double) { return 2.0; }), 0.0, 1e-14);
  EXPECT_GT(reduced_quotient(p, [](double t) { return 1.0 + 0.5 * t; }), 0.0);
}

TEST(Quotient, ScaleInvariant) {
  const OrbitProfile p = reduce_cohomogeneity_one(torus_warped_s3(0.5), {200});
  const double a = reduced_quotient(p, [](double t) { return 1.0 + 0.4 * std::cos(2.0 * t); });
  const double b = reduced_quotient(p, [](double t) { return 9.0 * (1.0 + 0.4 * std::cos(2.0 * t)); });
  EXPECT_NEAR(a / b, 1.0, 1e-10);
}

TEST(Quotient, MatchesFullChartQuotient) {
  const CohomogeneityOneModel m = round_sphere_model(3);
  const OrbitProfile p = reduce_cohomogeneity_one(m, {120});
  const std::vector<double> phi = on_grid(p, [](double t) { return 1.0 + 0.3 * std::cos(t); });
  const double reduced = reduced_quotient(p, phi);
  const MetricField g = full_metric(m, 120, 48);
  const SampledField sc = scalar_curvature(g);
  const double full = yamabe_quotient(g, lifted_factor(p, phi), sc);
  const double full_one = yamabe_quotient(g, constant_factor(3, 1.0), sc);
  // fiber pole bands scale every t-dependent quotient by one common factor
  const double reduced_one = reduced_quotient(p, [](double) { return 1.0; });
  EXPECT_NEAR((full / full_one) / (reduced / reduced_one), 1.0, 5e-3);
  EXPECT_GT(reduced, lambda_n(3));
}

TEST(Quotient, GridMismatchThrows) {
  const OrbitProfile p = constant_profile(1.0, 1.0, 20);
  EXPECT_THROW(reduced_quotient(p, std::vector<double>(19, 1.0)), ParameterError);
}

TEST(Minimize, ConstantIsFixedPointOnRoundSphere) {
  const OrbitProfile p = reduce_cohomogeneity_one(round_sphere_model(3), {400});
  const YamabeEstimate e = minimize_reduced(p);
  EXPECT_LE(e.iterations, 1);
  EXPECT_NEAR(e.value / lambda_n(3), 1.0, 1e-10);
  EXPECT_LT(e.residual, 1e-8);
  EXPECT_LE(e.value, hebey_vaugon_bound(3, 1).value * (1.0 + 1e-9));
}

TEST(Minimize, NegativeConstantCurvature) {
  // s = -1 with constant weight: the minimum is s vol^{2/n}, attained by constants.
  const OrbitProfile p = constant_profile(2.0, -1.0);
  const std::vector<double> init = on_grid(p, [](double t) { return 1.0 + 0.5 * std::sin(3.0 * t); });
  const YamabeEstimate e = minimize_reduced(p, init);
  EXPECT_NEAR(e.value, -std::pow(2.0, 2.0 / 3.0), 1e-8);
  EXPECT_LT(relative_sup_deviation(p, e.minimizer), 1e-4);
  EXPECT_LT(euler_lagrange_residual(p, e.minimizer), 1e-6);
}

TEST(Minimize, ValueIsBelowTrialFunctions) {
  const OrbitProfile p = reduce_cohomogeneity_one(torus_warped_s3(0.5), {200});
  const YamabeEstimate e = minimize_reduced(p);
  for (double c : {-0.3, 0.0, 0.2, 0.5})
    EXPECT_LE(e.value, reduced_quotient(p, [c](double t) { return 1.0 + c * std::cos(2.0 * t); }) + 1e-9);
  EXPECT_LE(e.value, lambda_n(3));
  EXPECT_LT(e.residual, 1e-6);
  ASSERT_GE(e.history.size(), 2u);
  for (std::size_t k = 1; k < e.history.size(); ++k) EXPECT_LE(e.history[k], e.history[k - 1] + 1e-12);
}

TEST(Minimize, DiscretizationErrorIsSecondOrder) {
  std::vector<double> v;
  for (int res : {100, 200, 400}) v.push_back(minimize_reduced(reduce_cohomogeneity_one(torus_warped_s3(0.5), {res})).value);
  const double ratio = (v[0] - v[1]) / (v[1] - v[2]);
  EXPECT_NEAR(ratio, 4.0, 1.5);
}

TEST(Minimize, ContinuationRecordsStages) {
  const OrbitProfile p = reduce_cohomogeneity_one(round_sphere_model(3), {200});
  MinimizeOptions opt;
  opt.continuation_stages = 4;
  const YamabeEstimate e = minimize_reduced(p, on_grid(p, [](double t) { return 1.0 + 0.3 * std::cos(t); }), opt);
  EXPECT_EQ(e.stage_exponents.size(), 4u);
  for (std::size_t k = 1; k < e.stage_exponents.size(); ++k) EXPECT_GT(e.stage_exponents[k], e.stage_exponents[k - 1]);
  EXPECT_LT(e.stage_exponents.back(), 6.0);
  EXPECT_NEAR(e.value / lambda_n(3), 1.0, 5e-3);
}

TEST(Minimize, BudgetExhaustionRaises) {
  const OrbitProfile p = reduce_cohomogeneity_one(torus_warped_s3(0.5), {200});
  MinimizeOptions opt;
  opt.max_iterations = 2;
  try {
    minimize_reduced(p, on_grid(p, [](double t) { return 1.0 + 0.5 * std::cos(2.0 * t); }), opt);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_FALSE(e.history().empty());
  }
}

TEST(Minimize, RejectsBadInput) {
  const OrbitProfile p = constant_profile(1.0, 1.0, 20);
  EXPECT_THROW(minimize_reduced(p, std::vector<double>(5, 1.0)), ParameterError);
  MinimizeOptions opt;
  opt.tol = 0.0;
  EXPECT_THROW(minimize_reduced(p, opt), ParameterError);
}

TEST(EvaluateConstant, ModelMetrics) {
  EXPECT_NEAR(evaluate_constant(flat_torus({1.0, 2.0, 1.0}, {8, 8, 8})), 0.0, 1e-12);
  // S^2 x S^2: s = 4, vol = 16 pi^2.
  const MetricField g = product(round_sphere({2, 1.0, {60, 16}, 2.0, -1.0}), round_sphere({2, 1.0, {60, 16}, 2.0, -1.0}));
  EXPECT_NEAR(evaluate_constant(g) / (16.0 * kPi), 1.0, 2e-2);
}

TEST(Continuity, NegativeFamilyConvergesGeometrically) {
  std::vector<OrbitProfile> fam;
  std::vector<double> par;
  for (int k = 0; k < 5; ++k) {
    par.push_back(std::pow(2.0, -k));
    fam.push_back(constant_profile(1.0 + par.back(), -1.0, 50));
  }
  const ContinuityReport r = continuity_experiment(fam, constant_profile(1.0, -1.0, 50), par);
  EXPECT_NEAR(r.limit_value, -1.0, 1e-9);
  EXPECT_TRUE(r.monotone);
  EXPECT_GE(r.min_ratio, 1.5);
  for (std::size_t k = 0; k < r.values.size(); ++k)
    EXPECT_NEAR(r.values[k], -std::pow(1.0 + par[k], 2.0 / 3.0), 1e-8);
}

TEST(Continuity, MismatchedGridsThrow) {
  EXPECT_THROW(continuity_experiment({constant_profile(1.0, -1.0, 30)}, constant_profile(1.0, -1.0, 40), {1.0}),
               ParameterError);
}

TEST(Averaging, RotationAveragedFunctionIsInvariant) {
  const MetricField g = round_sphere({2, 1.0, {90, 72}, 2.0, -1.0});
  const SampledField f = sample_everywhere(g.chart, [](std::span<const double> x) {
    const double X = std::sin(x[0]) * std::cos(x[1]) - 0.6, Y = std::sin(x[0]) * std::sin(x[1]);
    return std::exp(-4.0 * (X * X + Y * Y));
  });
  EXPECT_GT(orbit_variation(f, 1), 0.5);
  const GroupAction act = coordinate_rotation(1);
  const SampledField a = group_average(g, f, act);
  EXPECT_LT(orbit_variation(a, 1), 1e-12);
  const SampledField b = group_average(g, a, act);
  EXPECT_LT(max_abs_difference(a, b), 1e-12);
}

TEST(Averaging, IsometryChecks) {
  const MetricField g = round_sphere({2, 1.0, {90, 72}, 2.0, -1.0});
  EXPECT_LT(check_isometry(g, s2_rotation_about_x()).max_mismatch, 1e-5);
  EXPECT_LT(check_isometry(g, coordinate_rotation(1)).max_mismatch, 1e-5);
  const SampledField f = sample_everywhere(g.chart, [](std::span<const double> x) { return std::cos(x[0]); });
  EXPECT_THROW(group_average(g, f, coordinate_rotation(0, kPi)), InvalidActionError);
  GroupAction none;
  EXPECT_THROW(group_average(g, f, none), InvalidActionError);
}
