#pragma once

#include <charconv>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "yamabe/core/curvature.hpp"
#include "yamabe/core/metric.hpp"
#include "yamabe/neck/bend.hpp"
#include "yamabe/reduction/minimize.hpp"

namespace yamabe::io {

/// Shortest round-trip decimal form; always '.' as separator.
inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header) : columns_(header.size()) { row_strings(header); }

  void row(const std::vector<double>& values) {
    if (values.size() != columns_) throw ParameterError("csv row has the wrong number of columns");
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) out_ << ',';
      out_ << format_number(values[i]);
    }
    out_ << '\n';
  }

  std::string str() const { return out_.str(); }

 private:
  void row_strings(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

  std::size_t columns_;
  std::ostringstream out_;
};

/// Point coordinates followed by the upper-triangular metric entries
/// (g_00, g_01, ..., g_nn) at every non-excluded node.
inline std::string metric_csv(const MetricField& g) {
  const int n = g.dim();
  std::vector<std::string> head;
  for (int a = 0; a < n; ++a) head.push_back("x" + std::to_string(a));
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) head.push_back("g" + std::to_string(a) + std::to_string(b));
  CsvWriter w(head);
  double x[kMaxDim];
  const std::span<double> xs(x, n);
  std::vector<double> row;
  for (std::size_t i = 0; i < g.chart.size(); ++i) {
    g.chart.point(i, xs);
    if (g.chart.excluded(xs)) continue;
    const Mat m = g(xs);
    row.assign(x, x + n);
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) row.push_back(m(a, b));
    w.row(row);
  }
  return w.str();
}

/// Coordinates and value at valid nodes.
inline std::string field_csv(const SampledField& f, const std::string& name = "value") {
  const int n = f.chart.dim();
  std::vector<std::string> head;
  for (int a = 0; a < n; ++a) head.push_back("x" + std::to_string(a));
  head.push_back(name);
  CsvWriter w(head);
  double x[kMaxDim];
  const std::span<double> xs(x, n);
  std::vector<double> row;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!f.valid[i]) continue;
    f.chart.point(i, xs);
    row.assign(x, x + n);
    row.push_back(f.values[i]);
    w.row(row);
  }
  return w.str();
}

inline std::string bend_csv(const BendCurve& c) {
  CsvWriter w({"L", "t", "r", "theta", "k", "defect"});
  for (const BendSample& b : c.samples) w.row({b.L, b.t, b.r, b.theta, b.k, b.defect});
  return w.str();
}

inline std::string profile_csv(const OrbitProfile& p) {
  CsvWriter w({"t", "w", "s"});
  for (std::size_t j = 0; j < p.size(); ++j) w.row({p.t[j], p.w[j], p.s[j]});
  return w.str();
}

inline std::string minimizer_csv(const YamabeEstimate& e) {
  CsvWriter w({"t", "phi"});
  for (std::size_t j = 0; j < e.t.size(); ++j) w.row({e.t[j], e.minimizer[j]});
  return w.str();
}

}  // namespace yamabe::io
