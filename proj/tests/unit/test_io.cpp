#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "yamabe/io/csv.hpp"
#include "yamabe/io/reports.hpp"
#include "yamabe/yamabe.hpp"

using namespace yamabe;
using namespace yamabe::io;

namespace {

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST(Csv, FormatNumberRoundTrips) {
  for (double x : {0.1, -2.5e-300, 43.82323271630235, 1.0 / 3.0, 6.02214076e23}) {
    const std::string s = format_number(x);
    EXPECT_EQ(std::stod(s), x) << s;
    EXPECT_EQ(s.find(','), std::string::npos);
  }
  EXPECT_EQ(format_number(0.5), "0.5");
  EXPECT_EQ(format_number(std::numeric_limits<double>::quiet_NaN()), "nan");
  EXPECT_EQ(format_number(-std::numeric_limits<double>::infinity()), "-inf");
}

TEST(Csv, WriterHeaderAndRows) {
  CsvWriter w({"a", "b"});
  w.row({1.0, 0.25});
  w.row({-3.0, 1e-20});
  EXPECT_EQ(w.str(), "a,b\n1,0.25\n-3,1e-20\n");
  EXPECT_THROW(w.row({1.0}), ParameterError);
}

TEST(Csv, ProfileRows) {
  const OrbitProfile p = reduce_cohomogeneity_one(round_sphere_model(3), {50});
  const auto l = lines(profile_csv(p));
  ASSERT_EQ(l.size(), p.size() + 1);
  EXPECT_EQ(l[0], "t,w,s");
}

TEST(Csv, FieldRowsSkipInvalidNodes) {
  const SampledField s = scalar_curvature(flat_torus({1.0, 2.0}, {6, 5}));
  const auto l = lines(field_csv(s, "scal"));
  EXPECT_EQ(l[0], "x0,x1,scal");
  EXPECT_EQ(l.size(), s.valid_count() + 1);
}

TEST(Reports, Envelope) {
  const auto j = envelope("thing");
  EXPECT_EQ(j["schema"], "yamabe-report");
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["kind"], "thing");
}

TEST(Reports, NonFiniteNumbersBecomeStrings) {
  EXPECT_EQ(number(std::nan("")), "nan");
  EXPECT_EQ(number(HUGE_VAL), "inf");
  EXPECT_EQ(number(-HUGE_VAL), "-inf");
  EXPECT_DOUBLE_EQ(number(2.5).get<double>(), 2.5);
  const std::string dumped = numbers({1.0, std::nan("")}).dump();
  EXPECT_TRUE(json::accept(dumped));
}

TEST(Reports, CurvatureReportFlagsViolations) {
  const MetricField g = flat_torus({1.0, 1.0}, {8, 8});
  const SampledField s = scalar_curvature(g);
  const auto ok = curvature_report(g, s, 0.0, 1e-8);
  EXPECT_EQ(ok["kind"], "curvature");
  EXPECT_TRUE(ok["pass"].get<bool>());
  EXPECT_EQ(ok["violation_count"], 0);
  const auto bad = curvature_report(g, s, 1.0, 1e-3, 5);
  EXPECT_FALSE(bad["pass"].get<bool>());
  EXPECT_EQ(bad["violation_count"].get<std::size_t>(), s.valid_count());
  EXPECT_EQ(bad["violations"].size(), 5u);
}

TEST(Reports, EstimateReportFields) {
  const OrbitProfile p = reduce_cohomogeneity_one(round_sphere_model(3), {100});
  const YamabeEstimate e = minimize_reduced(p);
  const auto j = estimate_report(p, e);
  EXPECT_EQ(j["kind"], "yamabe-estimate");
  EXPECT_EQ(j["profile"]["n"], 3);
  EXPECT_EQ(j["profile"]["resolution"].get<std::size_t>(), p.size());
  EXPECT_NEAR(j["value"].get<double>(), e.value, 0.0);
  EXPECT_NEAR(j["relative_to_lambda_n"].get<double>(), e.value / lambda_n(3) - 1.0, 1e-15);
  EXPECT_EQ(lines(minimizer_csv(e)).size(), e.t.size() + 1);
}
