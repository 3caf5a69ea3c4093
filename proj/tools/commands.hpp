#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "cli_support.hpp"
#include "yamabe/io/csv.hpp"
#include "yamabe/io/reports.hpp"
#include "yamabe/yamabe.hpp"

namespace cli {

using namespace yamabe;
namespace yio = yamabe::io;

struct Command {
  std::string name;
  CLI::App* app = nullptr;
  std::shared_ptr<Params> params;
  std::vector<std::string> sections;
  std::function<void(Run&)> run;
};

// ------------------------------------------------------------- model helpers

struct ModelArgs {
  std::string model = "sphere";
  int n = 3;
  double radius = 1.0, radius2 = 1.0;
  int n2 = 2;
  double length = 1.0;
  std::vector<int> resolution{64};
  double band = 0.4;

  void add(Params& p) {
    p.add("model", model, "sphere | torus | cylinder | sphere_product");
    p.add("n", n, "dimension", Check::positive);
    p.add("radius", radius, "radius (first factor)", Check::positive);
    p.add("radius2", radius2, "radius of the second factor", Check::positive);
    p.add("n2", n2, "dimension of the second factor", Check::positive);
    p.add("length", length, "cylinder length / torus period", Check::positive);
    p.add("resolution", resolution, "nodes per axis (one value or one per axis)", Check::resolution);
    p.add("band", band, "pole band in radians (negative: two cells)");
  }

  ModelSpec spec() const {
    ModelSpec s;
    s.kind = model;
    s.n = n;
    s.radius = radius;
    s.radius2 = radius2;
    s.n2 = n2;
    s.length = length;
    s.resolution = resolution;
    s.band = band;
    if (model == "torus") s.periods.assign(static_cast<std::size_t>(n), length);
    return s;
  }

  int dim() const { return model == "sphere_product" ? n + n2 : n; }

  /// Closed-form scalar curvature of the model.
  double scalar() const {
    if (model == "sphere") return n * (n - 1.0) / (radius * radius);
    if (model == "torus") return 0.0;
    if (model == "cylinder") return (n - 1.0) * (n - 2.0) / (radius * radius);
    if (model == "sphere_product")
      return n * (n - 1.0) / (radius * radius) + n2 * (n2 - 1.0) / (radius2 * radius2);
    throw InvalidSpecError("unknown model kind '" + model + "'");
  }

  /// Closed-form volume of the model.
  double volume() const {
    if (model == "sphere") return vol_sphere(n) * std::pow(radius, n);
    if (model == "torus") return std::pow(length, n);
    if (model == "cylinder") return length * vol_sphere(n - 1) * std::pow(radius, n - 1);
    if (model == "sphere_product") return vol_sphere(n) * std::pow(radius, n) * vol_sphere(n2) * std::pow(radius2, n2);
    throw InvalidSpecError("unknown model kind '" + model + "'");
  }
};

inline MetricField unit_circle(int res) {
  MetricField g;
  g.chart = GridChart({Axis{0.0, 2.0 * std::numbers::pi, res, true, 0.0}});
  g.g = [](std::span<const double>) -> Mat { return Mat::Identity(1, 1); };
  g.name = "S^1";
  return g;
}

// ---------------------------------------------------------------- commands

inline Command make_curvature(CLI::App& root) {
  struct S {
    ModelArgs m;
    double tolerance = 5e-3;
    bool metric = false;
  };
  auto s = std::make_shared<S>();
  Command c{"curvature", root.add_subcommand("curvature", "scalar curvature of a model metric"), nullptr, {"curvature"}, {}};
  c.params = std::make_shared<Params>(c.app);
  s->m.add(*c.params);
  c.params->add("tolerance", s->tolerance, "relative tolerance against the closed form", Check::tolerance);
  c.params->add_flag("write-metric", s->metric, "also write the metric samples");
  c.run = [s](Run& run) {
    const MetricField g = build_model(s->m.spec());
    const SampledField sc = scalar_curvature(g);
    const json rep = yio::curvature_report(g, sc, s->m.scalar(), s->tolerance);
    run.write_json("curvature.json", rep);
    run.write("scalar.csv", yio::field_csv(sc, "s"));
    if (s->metric) {
      run.write_json("metric.json", yio::metric_header(g));
      run.write("metric.csv", yio::metric_csv(g));
    }
    run.check("scalar curvature within tolerance", rep["pass"].get<bool>());
  };
  return c;
}

inline Command make_quotient(CLI::App& root) {
  struct S {
    ModelArgs m;
    double amplitude = 0.0;
    double tolerance = 1e-2;
  };
  auto s = std::make_shared<S>();
  s->m.band = -1.0;
  Command c{"quotient", root.add_subcommand("quotient", "Yamabe quotient of phi = 1 + A cos(x0)"), nullptr, {"quotient"}, {}};
  c.params = std::make_shared<Params>(c.app);
  s->m.add(*c.params);
  c.params->add("amplitude", s->amplitude, "test function amplitude A (|A| < 1)");
  c.params->add("tolerance", s->tolerance, "relative tolerance for the constant-function check", Check::tolerance);
  c.run = [s](Run& run) {
    if (!(std::abs(s->amplitude) < 1.0)) throw ConfigError("field 'amplitude' must satisfy |A| < 1");
    const MetricField g = build_model(s->m.spec());
    const int n = g.dim();
    const double A = s->amplitude;
    const SampledField sc = scalar_curvature(g);
    const double q = yamabe_quotient(
        g, make_conformal_factor(n, [A](std::span<const double> x) { return 1.0 + A * std::cos(x[0]); }), sc);
    const double eh = einstein_hilbert(g, sc);
    const double closed = s->m.scalar() * std::pow(s->m.volume(), 2.0 / n);
    json j = yio::envelope("quotient");
    j["metric"] = g.name;
    j["n"] = n;
    j["amplitude"] = A;
    j["quotient"] = q;
    j["constant_quotient"] = eh;
    j["constant_closed_form"] = closed;
    j["lambda_n"] = lambda_n(n);
    const double scale = std::max(1.0, std::abs(closed));
    const bool const_ok = std::abs(eh - closed) <= s->tolerance * scale;
    j["constant_ok"] = const_ok;
    run.write_json("quotient.json", j);
    run.check("constant quotient matches closed form", const_ok);
    if (s->m.model == "sphere") run.check("quotient >= lambda_n", q >= lambda_n(n) * (1.0 - s->tolerance));
  };
  return c;
}

inline Command make_bend(CLI::App& root) {
  struct S {
    BendOptions o;
    double mu = 1.0;
    double s_g_lower = 0.0;
  };
  auto s = std::make_shared<S>();
  Command c{"bend", root.add_subcommand("bend", "build and certify the bending curve"), nullptr, {"bend"}, {}};
  c.params = std::make_shared<Params>(c.app);
  Params& p = *c.params;
  p.add("q", s->o.q, "codimension (>= 3)", Check::positive);
  p.add("theta0", s->o.theta0, "initial bending angle", Check::positive);
  p.add("eps2", s->o.eps2, "step-1 defect allowance", Check::tolerance);
  p.add("r0", s->o.r0, "starting radius", Check::positive);
  p.add("mu", s->mu, "homothetic shrink of step 3", Check::unit_interval);
  p.add("s-g-lower", s->s_g_lower, "lower bound for the scalar curvature of g");
  p.add("steps-per-bump", s->o.steps_per_bump, "samples per bump", Check::resolution);
  c.run = [s](Run& run) {
    BendCurve curve = build_bend_curve(s->o);
    if (s->mu != 1.0) curve = shrink_curve(curve, s->mu);
    const BendCertification cert = certify_bend(curve, s->s_g_lower, false);
    run.write("bend_curve.csv", yio::bend_csv(curve));
    run.write_json("bend_certification.json", yio::bend_report(curve, cert));
    run.check("bend certification", cert.pass);
  };
  return c;
}

inline Command make_homotopy(CLI::App& root) {
  struct S {
    int q = 3;
    int w_resolution = 32;
    int polar_resolution = 96;
    double amplitude = 1.0;
    double lower_constant = 1.0;
    std::vector<double> r{0.2, 0.1, 0.05};
    std::vector<double> mu{1.0, 0.5, 0.25};
  };
  auto s = std::make_shared<S>();
  Command c{"homotopy", root.add_subcommand("homotopy", "homotopy-region desk check over W = S^1"), nullptr, {"homotopy"}, {}};
  c.params = std::make_shared<Params>(c.app);
  Params& p = *c.params;
  p.add("q", s->q, "codimension (>= 3)", Check::positive);
  p.add("w-resolution", s->w_resolution, "nodes on W", Check::resolution);
  p.add("polar-resolution", s->polar_resolution, "polar nodes on the sphere factor", Check::resolution);
  p.add("amplitude", s->amplitude, "perturbation amplitude", Check::nonnegative);
  p.add("lower-constant", s->lower_constant, "required lower bound for s r^2", Check::positive);
  p.add("r", s->r, "sphere radii", Check::positive);
  p.add("mu", s->mu, "collar shrink factors", Check::unit_interval);
  c.run = [s](Run& run) {
    HomotopyRegionSpec spec;
    spec.gW = unit_circle(s->w_resolution);
    spec.q = s->q;
    spec.polar_resolution = s->polar_resolution;
    spec.perturbation = sample_perturbation(1, s->q, s->amplitude);
    const HomotopyCertification h = certify_homotopy(spec, s->r, s->mu, s->lower_constant);
    run.write_json("homotopy.json", yio::homotopy_report(h));
    run.check("block orders", h.orders.ok);
    run.check("s r^2 lower bound and spread", h.lemma_ok);
    run.check("collar positivity", h.collar_ok);
  };
  return c;
}

inline OrbitProfile reduce_profile(const std::string& model, int n, double amplitude, double length, int res) {
  if (model == "s3") return reduce_cohomogeneity_one(round_sphere_model(3), {res});
  if (model == "sphere") return reduce_cohomogeneity_one(round_sphere_model(n), {res});
  if (model == "torus-s3") return reduce_cohomogeneity_one(torus_warped_s3(amplitude), {res});
  if (model == "cylinder") return reduce_cohomogeneity_one(cylinder_model(n, length), {res});
  throw ConfigError("field 'model' must be s3 | sphere | torus-s3 | cylinder");
}

inline Command make_reduce(CLI::App& root) {
  struct S {
    std::string model = "s3";
    int n = 3;
    double amplitude = 0.5;
    double length = 1.0;
    int resolution = 400;
    double init_amplitude = 0.0;
    MinimizeOptions opt;
  };
  auto s = std::make_shared<S>();
  Command c{"reduce", root.add_subcommand("reduce", "minimize the reduced quotient on the orbit space"), nullptr, {"reduce"}, {}};
  c.params = std::make_shared<Params>(c.app);
  Params& p = *c.params;
  p.add("model", s->model, "s3 | sphere | torus-s3 | cylinder");
  p.add("n", s->n, "dimension (sphere, cylinder)", Check::positive);
  p.add("amplitude", s->amplitude, "warp amplitude (torus-s3)", Check::nonnegative);
  p.add("length", s->length, "cylinder length", Check::positive);
  p.add("resolution", s->resolution, "orbit-space nodes", Check::resolution);
  p.add("init-amplitude", s->init_amplitude, "initial function 1 + A cos(pi (t - t_min)/(t_max - t_min))");
  p.add("tol", s->opt.tol, "stopping tolerance", Check::tolerance);
  p.add("max-iterations", s->opt.max_iterations, "iteration cap", Check::positive);
  p.add("continuation", s->opt.continuation_stages, "exponent continuation stages (0 = off)", Check::nonnegative);
  c.run = [s](Run& run) {
    if (!(std::abs(s->init_amplitude) < 1.0)) throw ConfigError("field 'init-amplitude' must satisfy |A| < 1");
    const OrbitProfile prof = reduce_profile(s->model, s->n, s->amplitude, s->length, s->resolution);
    run.write("profile.csv", yio::profile_csv(prof));
    std::vector<double> init(prof.size());
    for (std::size_t j = 0; j < prof.size(); ++j)
      init[j] = 1.0 + s->init_amplitude *
                          std::cos(std::numbers::pi * (prof.t[j] - prof.t_min) / (prof.t_max - prof.t_min));
    try {
      const YamabeEstimate e = minimize_reduced(prof, init, s->opt);
      run.write("minimizer.csv", yio::minimizer_csv(e));
      json rep = yio::estimate_report(prof, e);
      const bool fixed_point = s->model == "s3" || s->model == "sphere";
      rep["fixed_point_bound_applies"] = fixed_point;
      run.write_json("estimate.json", rep);
      run.check("converged", true);
      if (fixed_point)
        run.check("value <= lambda_n", e.value <= lambda_n(prof.n) * (1.0 + s->opt.tol) + s->opt.tol);
    } catch (const ConvergenceError& err) {
      json rep = yio::envelope("yamabe-estimate");
      rep["profile"] = yio::profile_summary(prof);
      rep["error"] = err.what();
      rep["history"] = yio::numbers(err.history());
      run.write_json("estimate.json", rep);
      run.check("converged", false);
    }
  };
  return c;
}

inline Command make_surgery_demo(CLI::App& root) {
  struct S {
    int q = 3;
    double delta = 0.5;
    std::vector<double> eps{1.0, 0.5, 0.25};
    double theta0 = 0.1;
    double eps2 = 1e-3;
    double amplitude = 0.01;
    int w_resolution = 16;
    int polar_resolution = 32;
  };
  auto s = std::make_shared<S>();
  Command c{"surgery-demo", root.add_subcommand("surgery-demo", "surgery on two copies of S^n along S^1: neck assembly"),
            nullptr, {"surgery-demo"}, {}};
  c.params = std::make_shared<Params>(c.app);
  Params& p = *c.params;
  p.add("q", s->q, "codimension (>= 3)", Check::positive);
  p.add("delta", s->delta, "interpolation parameter", Check::tolerance);
  p.add("eps", s->eps, "neck scale factors", Check::unit_interval);
  p.add("theta0", s->theta0, "initial bending angle", Check::positive);
  p.add("eps2", s->eps2, "step-1 defect allowance", Check::tolerance);
  p.add("amplitude", s->amplitude, "outer perturbation amplitude", Check::nonnegative);
  p.add("w-resolution", s->w_resolution, "nodes on W", Check::resolution);
  p.add("polar-resolution", s->polar_resolution, "polar nodes on the sphere factor", Check::resolution);
  c.run = [s](Run& run) {
    if (s->eps.size() < 2) throw ConfigError("field 'eps' needs at least two values");
    HomotopyRegionSpec spec;
    spec.gW = unit_circle(s->w_resolution);
    spec.q = s->q;
    spec.polar_resolution = s->polar_resolution;
    spec.perturbation = sample_perturbation(1, s->q, s->amplitude);
    BendOptions bo;
    bo.q = s->q;
    bo.theta0 = s->theta0;
    bo.eps2 = s->eps2;
    const BendCurve curve = build_bend_curve(bo);
    const MetricField outer = perturbed_outer_metric(spec, curve.r0, 1.25 * curve.r0);
    std::vector<double> vols;
    json regions = json::array();
    for (std::size_t i = 0; i < s->eps.size(); ++i) {
      AssemblyOptions ao;
      ao.s_g_lower = std::numeric_limits<double>::quiet_NaN();
      ao.scalar_reports = i == 0;
      if (i != 0) ao.s_g_lower = 0.0;
      const NeckAssembly a = assemble_surgered_metric(outer, curve, spec, s->delta, s->eps[i], ao);
      vols.push_back(a.vol_S);
      run.write_json("assembly_" + std::to_string(i) + ".json", yio::assembly_report(a));
      if (i == 0) {
        run.write("neck_curve.csv", yio::bend_csv(a.curve));
        run.check("outer scalar curvature consistent", a.outer_consistent);
      }
    }
    json j = yio::envelope("surgery-demo");
    const int n = 1 + s->q;
    j["n"] = n;
    j["q"] = s->q;
    j["eps"] = s->eps;
    j["vol_S"] = vols;
    json ratios = json::array();
    bool ok = true;
    for (std::size_t i = 0; i + 1 < vols.size(); ++i) {
      const double expected = std::pow(s->eps[i] / s->eps[i + 1], s->q);
      const double r = vols[i] / vols[i + 1];
      ratios.push_back(r);
      ok = ok && std::abs(r / expected - 1.0) <= 0.05;
    }
    const double slope = yamabe::detail::log_slope(s->eps, vols);
    j["ratios"] = ratios;
    j["fitted_exponent"] = slope;
    ok = ok && std::abs(slope - s->q) <= 0.1;
    const ChainReport chain = derivation_chain(n, s->q, 0, 0);
    j["chain"] = yio::chain_report(chain);
    run.write_json("surgery_demo.json", j);
    run.check("volume scaling eps^q", ok);
    run.check("derivation chain valid", chain.valid);
  };
  return c;
}

inline Command make_continuity(CLI::App& root) {
  struct S {
    std::string family = "torus-s3";
    int levels = 5;
    int resolution = 400;
    double min_ratio = 1.5;
    double volume = 2.0;
    MinimizeOptions opt;
  };
  auto s = std::make_shared<S>();
  Command c{"continuity", root.add_subcommand("continuity", "continuity of the reduced estimate along a family"),
            nullptr, {"continuity"}, {}};
  c.params = std::make_shared<Params>(c.app);
  Params& p = *c.params;
  p.add("family", s->family, "torus-s3 | negative");
  p.add("levels", s->levels, "number of family members (parameter 2^-k)", Check::positive);
  p.add("resolution", s->resolution, "orbit-space nodes", Check::resolution);
  p.add("min-ratio", s->min_ratio, "required shrink factor of successive gaps", Check::positive);
  p.add("volume", s->volume, "limit volume (negative family)", Check::positive);
  p.add("tol", s->opt.tol, "solver tolerance", Check::tolerance);
  c.run = [s](Run& run) {
    std::vector<OrbitProfile> fam;
    std::vector<double> par;
    OrbitProfile limit;
    double reference = 0.0;
    const int n = 3;
    if (s->family == "torus-s3") {
      for (int k = 0; k < s->levels; ++k) {
        par.push_back(std::pow(2.0, -k));
        fam.push_back(reduce_cohomogeneity_one(torus_warped_s3(par.back()), {s->resolution}));
      }
      limit = reduce_cohomogeneity_one(torus_warped_s3(0.0), {s->resolution});
      reference = lambda_n(n);
    } else if (s->family == "negative") {
      // s = -1, constant weight with total volume v (1 + 2^-k).
      auto member = [&](double v) {
        return make_profile(0.0, 1.0, s->resolution, [v](double) { return v; }, [](double) { return -1.0; }, n,
                            "s=-1");
      };
      for (int k = 0; k < s->levels; ++k) {
        par.push_back(std::pow(2.0, -k));
        fam.push_back(member(s->volume * (1.0 + par.back())));
      }
      limit = member(s->volume);
      reference = -std::pow(s->volume, 2.0 / n);
    } else {
      throw ConfigError("field 'family' must be torus-s3 | negative");
    }
    const ContinuityReport r = continuity_experiment(fam, limit, par, s->opt);
    json rep = yio::continuity_report(r, reference, s->min_ratio);
    rep["family"] = s->family;
    run.write_json("continuity.json", rep);
    yio::CsvWriter w({"k", "parameter", "value", "gap"});
    for (std::size_t k = 0; k < r.values.size(); ++k)
      w.row({static_cast<double>(k), par[k], r.values[k], r.gaps[k]});
    run.write("continuity.csv", w.str());
    run.check("monotone decay", r.monotone);
    run.check("gap ratio", r.min_ratio >= s->min_ratio);
    run.check("limit matches reference", std::abs(r.limit_value - reference) <= 5e-3 * std::abs(reference));
  };
  return c;
}

inline std::vector<Command> make_invariants(CLI::App& root) {
  CLI::App* inv = root.add_subcommand("invariants", "closed-form invariants and derivation chains");
  inv->require_subcommand(1);
  std::vector<Command> out;

  struct Lambda { int n = 3; };
  auto l = std::make_shared<Lambda>();
  Command c1{"invariants lambda", inv->add_subcommand("lambda", "Lambda_n"), nullptr, {"invariants", "lambda"}, {}};
  c1.params = std::make_shared<Params>(c1.app);
  c1.params->add("n", l->n, "dimension (>= 2)", Check::positive);
  c1.run = [l](Run& run) {
    json j = yio::envelope("invariants");
    j["operation"] = "lambda_n";
    j["n"] = l->n;
    j["vol_sphere"] = vol_sphere(l->n);
    j["value"] = lambda_n(l->n);
    run.write_json("invariants.json", j);
  };
  out.push_back(std::move(c1));

  struct Hv { int n = 3; long long orbit = 1; };
  auto h = std::make_shared<Hv>();
  Command c2{"invariants hebey-vaugon", inv->add_subcommand("hebey-vaugon", "Lambda_n k^{2/n} orbit bound"), nullptr,
             {"invariants", "hebey-vaugon"}, {}};
  c2.params = std::make_shared<Params>(c2.app);
  c2.params->add("n", h->n, "dimension (>= 3)", Check::positive);
  c2.params->add("orbit", h->orbit, "minimal orbit cardinality (0: all orbits infinite)", Check::nonnegative);
  c2.run = [h](Run& run) {
    const YamabeValue v = hebey_vaugon_bound(h->n, h->orbit == 0 ? std::nullopt : std::optional<long long>(h->orbit));
    json j = yio::envelope("invariants");
    j["operation"] = "hebey_vaugon_bound";
    j["n"] = h->n;
    j["orbit"] = h->orbit;
    j["value"] = yio::number(v.value);
    j["provenance"] = to_string(v.provenance);
    run.write_json("invariants.json", j);
  };
  out.push_back(std::move(c2));

  struct Kob { double s_min = -1.0, s_max = -1.0, volume = 1.0; int n = 3; };
  auto k = std::make_shared<Kob>();
  Command c3{"invariants kobayashi", inv->add_subcommand("kobayashi", "[s_min, s_max] vol^{2/n} interval"), nullptr,
             {"invariants", "kobayashi"}, {}};
  c3.params = std::make_shared<Params>(c3.app);
  c3.params->add("s-min", k->s_min, "minimum scalar curvature");
  c3.params->add("s-max", k->s_max, "maximum scalar curvature");
  c3.params->add("volume", k->volume, "volume", Check::positive);
  c3.params->add("n", k->n, "dimension (>= 3)", Check::positive);
  c3.run = [k](Run& run) {
    const Interval iv = kobayashi_interval(k->s_min, k->s_max, k->volume, k->n);
    json j = yio::envelope("invariants");
    j["operation"] = "kobayashi_interval";
    j["lo"] = iv.lo;
    j["hi"] = iv.hi;
    j["applies"] = k->s_max <= 0.0;
    run.write_json("invariants.json", j);
  };
  out.push_back(std::move(c3));

  struct Du { double y1 = -1.0, y2 = -1.0; int n = 4; };
  auto d = std::make_shared<Du>();
  Command c4{"invariants disjoint-union", inv->add_subcommand("disjoint-union", "Yamabe constant of a disjoint union"),
             nullptr, {"invariants", "disjoint-union"}, {}};
  c4.params = std::make_shared<Params>(c4.app);
  c4.params->add("y1", d->y1, "first value");
  c4.params->add("y2", d->y2, "second value");
  c4.params->add("n", d->n, "dimension (>= 3)", Check::positive);
  c4.run = [d](Run& run) {
    json j = yio::envelope("invariants");
    j["operation"] = "disjoint_union_yamabe";
    j["inputs"] = {d->y1, d->y2, d->n};
    j["value"] = disjoint_union_yamabe(d->y1, d->y2, d->n);
    run.write_json("invariants.json", j);
  };
  out.push_back(std::move(c4));

  struct Sb { double y0 = 1.0; int q = 3, n = 4; };
  auto b = std::make_shared<Sb>();
  Command c5{"invariants surgery", inv->add_subcommand("surgery", "lower bound after a codimension-q surgery"), nullptr,
             {"invariants", "surgery"}, {}};
  c5.params = std::make_shared<Params>(c5.app);
  c5.params->add("y0", b->y0, "value before surgery");
  c5.params->add("q", b->q, "codimension", Check::positive);
  c5.params->add("n", b->n, "dimension", Check::positive);
  c5.run = [b](Run& run) {
    const CheckedValue v = surgery_lower_bound(b->y0, b->q, b->n);
    json j = yio::envelope("invariants");
    j["operation"] = "surgery_lower_bound";
    j["value"] = v.value;
    j["valid"] = v.valid;
    j["reason"] = v.reason;
    run.write_json("invariants.json", j);
    run.check("codimension admissible", v.valid);
  };
  out.push_back(std::move(c5));

  struct Ch { int n = 5, q = 3, l = 0, m = 0; };
  auto ch = std::make_shared<Ch>();
  Command c6{"invariants chain", inv->add_subcommand("chain", "derivation chain for products and connected sums"),
             nullptr, {"invariants", "chain"}, {}};
  c6.params = std::make_shared<Params>(c6.app);
  c6.params->add("n", ch->n, "dimension (>= 3)", Check::positive);
  c6.params->add("q", ch->q, "codimension", Check::positive);
  c6.params->add("l", ch->l, "copies", Check::nonnegative);
  c6.params->add("m", ch->m, "reversed copies", Check::nonnegative);
  c6.run = [ch](Run& run) {
    const ChainReport r = derivation_chain(ch->n, ch->q, ch->l, ch->m);
    run.write_json("invariants.json", yio::chain_report(r));
    run.check("derivation chain valid", r.valid);
  };
  out.push_back(std::move(c6));
  return out;
}

}  // namespace cli
