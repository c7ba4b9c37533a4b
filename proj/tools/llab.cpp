// llab: command-line surface of the disc-bundle / ellipsoid toolkit.
//
// Subcommands: reeb, virtdim, buildings, classify, flow, verify,
// blowup-verify, bubbles, packing, karshon.  Exit codes: 0 all requested
// checks pass, 1 a check failed (machine-readable failure JSON on stdout),
// 2 malformed configuration, 3 violated precondition (named inequality).

#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "llab/blowup.hpp"
#include "llab/bundle.hpp"
#include "llab/config.hpp"
#include "llab/flow.hpp"
#include "llab/rational.hpp"
#include "llab/reeb.hpp"
#include "llab/report.hpp"
#include "llab/sft.hpp"

namespace {

using llab::Rational;

llab::EllipsoidSpec parse_spec(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos)
    throw llab::ConfigError("--spec expects \"p/q,p/q\" (a_plus,a_minus)");
  return llab::EllipsoidSpec(Rational::parse(text.substr(0, comma)),
                             Rational::parse(text.substr(comma + 1)));
}

llab::PunctureSet parse_punctures(const std::string& text) {
  llab::PunctureSet out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto g = item.find('g');
    if (g == std::string::npos || g + 2 != item.size() ||
        (item[g + 1] != '-' && item[g + 1] != '+'))
      throw llab::ConfigError("puncture \"" + item + "\" is not of the form <mult>g- or <mult>g+");
    out.push_back({item[g + 1] == '-' ? llab::Axis::Minus : llab::Axis::Plus,
                   std::stoi(item.substr(0, g))});
  }
  std::sort(out.begin(), out.end());
  return out;
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << "\n";
  } else {
    llab::write_text(out_path, text);
  }
}

nlohmann::ordered_json candidate_json(const llab::EllipsoidSpec& spec,
                                      const llab::BuildingCandidate& cand) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json comps = nlohmann::ordered_json::array();
  for (const auto& c : cand.components) {
    nlohmann::ordered_json cj;
    cj["layer"] = llab::layer_name(c.layer);
    cj["level"] = c.level;
    if (c.layer == llab::LayerKind::Outside) cj["degree"] = c.degree;
    auto punct = [](const llab::PunctureSet& ps) {
      nlohmann::ordered_json a = nlohmann::ordered_json::array();
      for (const auto& p : ps)
        a.push_back(std::to_string(p.mult) + (p.axis == llab::Axis::Minus ? "g-" : "g+"));
      return a;
    };
    if (!c.top.empty()) cj["top"] = punct(c.top);
    if (!c.bottom.empty()) cj["bottom"] = punct(c.bottom);
    cj["points"] = c.points;
    cj["area"] = llab::component_area(spec, c).str();
    if (llab::simple_certified(c)) {
      if (c.layer == llab::LayerKind::Inside)
        cj["dim"] = llab::virtdim_inside(spec, c.top, c.points);
      else if (c.layer == llab::LayerKind::Outside)
        cj["dim"] = llab::virtdim_outside(spec, c.bottom, c.points, c.degree);
      else
        cj["dim"] = nullptr;
    } else {
      cj["dim"] = nullptr;  // cover-capable: no dimension certificate
    }
    comps.push_back(cj);
  }
  j["components"] = comps;
  j["verdict"] = "survivor";
  return j;
}

nlohmann::ordered_json enumeration_json(const llab::EllipsoidSpec& spec,
                                        const llab::EnumerationResult& result) {
  nlohmann::ordered_json j = llab::report_root("buildings");
  j["spec"] = spec.str();
  j["filters"] = {"F1", "F2", "F3", "F4", "F5", "F6"};
  nlohmann::ordered_json cands = nlohmann::ordered_json::array();
  for (const auto& s : result.survivors) cands.push_back(candidate_json(spec, s));
  for (const auto& r : result.rejected) {
    nlohmann::ordered_json cj;
    cj["components"] = r.description;
    cj["verdict"] = "rejected";
    cj["killed_by"] = r.killed_by;
    cands.push_back(cj);
  }
  j["candidates"] = cands;
  j["survivors"] = result.survivors.size();
  j["pruned_component_shapes"] = result.pruned_component_shapes;
  j["cap_limited"] = result.cap_limited;
  return j;
}

int cmd_reeb(const std::string& spec_text, const std::string& cap_text,
             const std::string& format, const std::string& out_path) {
  const auto spec = parse_spec(spec_text);
  const auto orbits = llab::orbits_up_to_action(spec, Rational::parse(cap_text));
  if (format == "csv") {
    std::string csv = "axis,mult,action,cz\n";
    for (const auto& o : orbits)
      csv += std::string(llab::axis_name(o.axis)) + "," + std::to_string(o.mult) + "," +
             o.action.str() + "," + std::to_string(o.cz) + "\n";
    emit(out_path, csv);
  } else {
    auto j = llab::report_root("reeb");
    j["spec"] = spec.str();
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& o : orbits) {
      nlohmann::ordered_json r;
      r["axis"] = llab::axis_name(o.axis);
      r["mult"] = o.mult;
      r["action"] = o.action.str();
      r["cz"] = o.cz;
      rows.push_back(r);
    }
    j["orbits"] = rows;
    emit(out_path, j.dump(2));
  }
  return 0;
}

int cmd_virtdim(const std::string& spec_text, const std::string& layer,
                const std::string& punctures, int points, int degree,
                const std::string& out_path) {
  const auto spec = parse_spec(spec_text);
  const auto ps = parse_punctures(punctures);
  int dim = 0;
  if (layer == "inside") {
    dim = llab::virtdim_inside(spec, ps, points);
  } else if (layer == "outside") {
    dim = llab::virtdim_outside(spec, ps, points, degree);
  } else {
    throw llab::ConfigError("--layer must be inside or outside");
  }
  auto j = llab::report_root("virtdim");
  j["spec"] = spec.str();
  j["layer"] = layer;
  j["punctures"] = punctures;
  j["points"] = points;
  if (layer == "outside") j["degree"] = degree;
  j["dim"] = dim;
  emit(out_path, j.dump(2));
  return 0;
}

int cmd_buildings(const std::string& spec_text, int degree, int points_inside,
                  int points_outside, int mult_cap, bool traced,
                  const std::string& out_path) {
  const auto spec = parse_spec(spec_text);
  llab::EnumerationOptions opt;
  opt.mult_cap = mult_cap;
  opt.traced = traced;
  const auto result = llab::enumerate_buildings(spec, degree, points_inside, points_outside,
                                                opt);
  emit(out_path, enumeration_json(spec, result).dump(2));
  return 0;
}

int cmd_classify(const std::string& mode, const std::string& spec_text,
                 const std::string& out_path) {
  const auto spec = parse_spec(spec_text);
  llab::ClassificationReport report =
      mode == "line" ? llab::classify_line_degeneration(spec)
                     : llab::classify_conic_degeneration(spec);
  auto j = enumeration_json(spec, report.result);
  j["kind"] = "classify";
  j["mode"] = mode;
  j["expected"] = report.expected;
  j["unique"] = report.unique;
  emit(out_path, j.dump(2));
  return report.unique ? 0 : 1;
}

int cmd_flow(int k, const std::string& base_area, const std::vector<double>& start,
             double time, double tol, int samples, const std::string& out_path) {
  llab::BundleParams params(k, llab::BaseKind::Disc, Rational::parse(base_area));
  llab::FlowRequest req{params, llab::LiouvilleSpec{},
                        llab::BundlePoint{start[0], start[1], start[2], start[3]}, time, tol};
  const auto trajectory = llab::integrate_flow_sampled(req, samples);
  emit(out_path, llab::trajectory_csv(trajectory));
  return 0;
}

int cmd_verify(const std::string& spec_text, int k, int grid, double tol, unsigned seed,
               const std::string& out_path) {
  const auto spec = parse_spec(spec_text);
  llab::BundleParams params(k, llab::BaseKind::Disc, spec.a_plus);
  llab::EllipsoidChart chart(params);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.05, 0.95);
  std::vector<llab::ResidualRecord> records;

  // action-angle chart carries omega0 to the standard form
  for (int i = 0; i < grid; ++i) {
    llab::BundlePoint p;
    p.s = unit(rng) * params.fiber_cap();
    p.theta = unit(rng) * llab::kTwoPi;
    p.A = unit(rng) * params.base_area.value();
    p.phi = unit(rng) * llab::kTwoPi;
    llab::Map4 map = [&chart](const std::array<double, 4>& y) {
      return chart.forward(llab::BundlePoint{y[0], y[1], y[2], y[3]});
    };
    const double res = llab::pullback_residual(map, {p.s, p.theta, p.A, p.phi},
                                               llab::standard_action_angle_form(),
                                               llab::omega0_form(params), 1e-6);
    records.push_back({"chart_symplectic", {p.s, p.A}, res, tol});
  }

  // time-t flow scales omega0 by e^{-t}
  const double t_flow = 0.4;
  for (int i = 0; i < std::max(1, grid / 4); ++i) {
    llab::BundlePoint p;
    p.s = (0.1 + 0.5 * unit(rng)) * params.fiber_cap();
    p.theta = unit(rng) * llab::kTwoPi;
    p.A = unit(rng) * params.base_area.value();
    p.phi = unit(rng) * llab::kTwoPi;
    llab::Map4 map = [&](const std::array<double, 4>& y) {
      llab::FlowRequest req{params, llab::LiouvilleSpec{},
                            llab::BundlePoint{y[0], y[1], y[2], y[3]}, t_flow, 1e-11};
      const auto q = llab::integrate_flow(req);
      return std::array<double, 4>{q.s, q.theta, q.A, q.phi};
    };
    const double res = llab::pullback_residual(
        map, {p.s, p.theta, p.A, p.phi},
        llab::scaled_form(llab::omega0_form(params), std::exp(t_flow)),
        llab::omega0_form(params), 1e-5);
    records.push_back({"flow_scaling", {p.s, p.A}, res, tol});
  }

  const auto report = llab::residual_report("verify", records);
  emit(out_path, report.dump(2));
  return report["pass"].get<bool>() ? 0 : 1;
}

int cmd_blowup_verify(const std::string& lam_text, int grid, double tol, unsigned seed,
                      const std::string& out_path) {
  const Rational lam = Rational::parse(lam_text);
  if (!(lam > Rational(0)))
    throw llab::PreconditionError("blow-up capacity must be positive", "lam > 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, llab::kTwoPi);
  std::uniform_real_distribution<double> shell(1.05, 1.6);
  std::vector<std::array<llab::Complex, 2>> samples;
  for (int i = 0; i < grid; ++i) {
    const double n = std::sqrt(shell(rng) * lam.value());
    const double a = angle(rng), b = angle(rng);
    const double c = std::acos(std::uniform_real_distribution<double>(-1, 1)(rng)) / 2;
    samples.push_back({llab::Complex{n * std::cos(c) * std::cos(a), n * std::cos(c) * std::sin(a)},
                       llab::Complex{n * std::sin(c) * std::cos(b), n * std::sin(c) * std::sin(b)}});
  }
  const auto shell_report = llab::omega_lambda_residual(lam, samples, 1e-5);
  std::vector<llab::ResidualRecord> records;
  records.push_back({"blowup_transition", {}, shell_report.max_residual, tol});
  auto report = llab::residual_report("blowup-verify", records);
  report["evaluated"] = shell_report.evaluated;
  report["skipped"] = shell_report.skipped;
  emit(out_path, report.dump(2));
  return report["pass"].get<bool>() ? 0 : 1;
}

int cmd_bubbles(const std::string& lam_text, const std::string& scale_text,
                const std::string& format, const std::string& out_path) {
  const auto report = llab::enumerate_bubble_decompositions(Rational::parse(lam_text),
                                                            Rational::parse(scale_text));
  if (format == "csv") {
    std::string csv = "k,area,virtual_genus,verdict\n";
    for (const auto& c : report.candidates)
      csv += std::to_string(c.principal.m) + "," + c.principal_area.str() + "," +
             c.virtual_genus.str() + "," + (c.survives() ? "survivor" : c.killed_by()) + "\n";
    emit(out_path, csv);
  } else {
    auto j = llab::report_root("bubbles");
    j["lam"] = report.lam.str();
    j["scale"] = report.scale.str();
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& c : report.candidates) {
      nlohmann::ordered_json r;
      r["class"] = c.principal.str();
      r["area"] = c.principal_area.str();
      r["virtual_genus"] = c.virtual_genus.str();
      r["verdict"] = c.survives() ? "survivor" : c.killed_by();
      rows.push_back(r);
    }
    j["candidates"] = rows;
    j["survivors"] = report.survivors;
    emit(out_path, j.dump(2));
  }
  return report.survivors == 0 ? 0 : 1;
}

int cmd_packing(const std::string& r1, const std::string& r2, const std::string& out_path) {
  const auto verdict = llab::packing_obstruction(Rational::parse(r1), Rational::parse(r2));
  auto j = llab::report_root("packing");
  j["r1_sq"] = Rational::parse(r1).str();
  j["r2_sq"] = Rational::parse(r2).str();
  j["verdict"] = verdict == llab::PackingVerdict::Admissible ? "admissible" : "obstructed";
  emit(out_path, j.dump(2));
  return 0;
}

int cmd_karshon(const std::string& out_path) {
  const auto model = llab::karshon_model();
  auto j = llab::report_root("karshon");
  j["capacity_sum"] = model.capacity_sum().str();
  j["interior_disjointness_margin"] = llab::format_real(model.interior_disjointness_margin());
  j["boundary_circle_deviation"] = llab::format_real(model.boundary_circle_deviation());
  emit(out_path, j.dump(2));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"disc-bundle and ellipsoid verification toolkit"};
  app.require_subcommand(1);

  llab::RunConfig defaults;
  try {
    defaults = llab::default_config();
  } catch (const llab::ConfigError& e) {
    std::cerr << nlohmann::ordered_json{{"error", "config"}, {"detail", e.what()}}.dump()
              << "\n";
    return 2;
  }

  std::string spec_text = defaults.a_plus.str() + "," + defaults.a_minus.str();
  std::string out_path = defaults.output_path;
  std::string format = defaults.format;
  std::string cap_text = "2";
  std::string lam_text = "1/2";
  std::string scale_text = "1";
  std::string layer = "inside";
  std::string punctures = "1g-";
  std::string mode = "line";
  std::string base_area = defaults.base_area.str();
  std::string r1 = "1/2", r2 = "1/2";
  std::string config_path;
  int k = defaults.k;
  int grid = defaults.grid_samples;
  int degree = 1, points_inside = 1, points_outside = 1, points = 0, mult_cap = 0;
  int samples = 32;
  double tol = defaults.tol_pullback;
  double time = 1.0;
  unsigned seed = 1;
  bool traced = false;
  std::vector<double> start{0.1, 0.0, 0.1, 0.0};

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--spec", spec_text, "ellipsoid axes a_plus,a_minus as p/q,p/q");
    sub->add_option("--out", out_path, "output path (default stdout)");
    sub->add_option("--format", format, "json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--tol", tol, "tolerance");
    sub->add_option("--grid", grid, "sample count");
    sub->add_option("--seed", seed, "RNG seed for randomized sweeps");
  };

  auto* reeb = app.add_subcommand("reeb", "closed orbit catalog up to an action cap");
  add_common(reeb);
  reeb->add_option("--cap", cap_text, "action cap as p/q");

  auto* virtdim = app.add_subcommand("virtdim", "virtual dimension of one component");
  add_common(virtdim);
  virtdim->add_option("--layer", layer, "inside|outside");
  virtdim->add_option("--punctures", punctures, "e.g. 1g-,2g+");
  virtdim->add_option("--points", points, "point constraints");
  virtdim->add_option("--degree", degree, "outside component degree");

  auto* buildings = app.add_subcommand("buildings", "enumerate admissible buildings");
  add_common(buildings);
  buildings->add_option("--degree", degree, "total degree (1 or 2)");
  buildings->add_option("--points-inside", points_inside, "points inside");
  buildings->add_option("--points-outside", points_outside, "points outside");
  buildings->add_option("--mult-cap", mult_cap, "asymptote multiplicity cap (0 = auto)");
  buildings->add_flag("--traced", traced, "record the rejection trace");

  auto* classify = app.add_subcommand("classify", "degeneration classification");
  add_common(classify);
  classify->add_option("--mode", mode, "line|conic")->check(CLI::IsMember({"line", "conic"}));

  auto* flow = app.add_subcommand("flow", "trajectory dump of the radial Liouville flow");
  add_common(flow);
  flow->add_option("--k", k, "bundle degree");
  flow->add_option("--base-area", base_area, "base chart area p/q");
  flow->add_option("--start", start, "s,theta,A,phi")->expected(4);
  flow->add_option("--time", time, "flow time");
  flow->add_option("--samples", samples, "trajectory samples");

  auto* verify = app.add_subcommand("verify", "chart and flow residual checks");
  add_common(verify);
  verify->add_option("--k", k, "bundle degree");

  auto* blowup = app.add_subcommand("blowup-verify", "blow-up form residual check");
  add_common(blowup);
  blowup->add_option("--lam", lam_text, "blow-up capacity p/q");

  auto* bubbles = app.add_subcommand("bubbles", "bubbling decomposition table");
  add_common(bubbles);
  bubbles->add_option("--lam", lam_text, "blow-up capacity p/q");
  bubbles->add_option("--scale", scale_text, "deformation parameter p/q in (0,1]");

  auto* packing = app.add_subcommand("packing", "two-ball packing verdict");
  add_common(packing);
  packing->add_option("--r1", r1, "first squared radius p/q");
  packing->add_option("--r2", r2, "second squared radius p/q");

  auto* karshon = app.add_subcommand("karshon", "maximal packing model report");
  add_common(karshon);

  try {
    app.parse(argc, argv);
    if (!config_path.empty()) {
      const auto cfg = llab::load_config(config_path);
      // config supplies defaults; explicit flags already override them above
      if (spec_text == defaults.a_plus.str() + "," + defaults.a_minus.str())
        spec_text = cfg.a_plus.str() + "," + cfg.a_minus.str();
      if (out_path == defaults.output_path) out_path = cfg.output_path;
      if (format == defaults.format) format = cfg.format;
      if (grid == defaults.grid_samples) grid = cfg.grid_samples;
      if (tol == defaults.tol_pullback) tol = cfg.tol_pullback;
      if (k == defaults.k) k = cfg.k;
    }
    if (reeb->parsed()) return cmd_reeb(spec_text, cap_text, format, out_path);
    if (virtdim->parsed())
      return cmd_virtdim(spec_text, layer, punctures, points, degree, out_path);
    if (buildings->parsed())
      return cmd_buildings(spec_text, degree, points_inside, points_outside, mult_cap, traced,
                           out_path);
    if (classify->parsed()) return cmd_classify(mode, spec_text, out_path);
    if (flow->parsed()) return cmd_flow(k, base_area, start, time, tol, samples, out_path);
    if (verify->parsed()) return cmd_verify(spec_text, k, grid, tol, seed, out_path);
    if (blowup->parsed()) return cmd_blowup_verify(lam_text, grid, tol, seed, out_path);
    if (bubbles->parsed()) return cmd_bubbles(lam_text, scale_text, format, out_path);
    if (packing->parsed()) return cmd_packing(r1, r2, out_path);
    if (karshon->parsed()) return cmd_karshon(out_path);
    return 2;
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const llab::ConfigError& e) {
    std::cerr << nlohmann::ordered_json{{"error", "config"}, {"detail", e.what()}}.dump()
              << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    // PreconditionError and rational parse failures
    nlohmann::ordered_json j{{"error", "precondition"}, {"detail", e.what()}};
    if (const auto* pre = dynamic_cast<const llab::PreconditionError*>(&e))
      j["inequality"] = pre->inequality;
    std::cerr << j.dump() << "\n";
    return 3;
  } catch (const llab::ClassificationError& e) {
    std::cerr << nlohmann::ordered_json{{"error", "classification"}, {"detail", e.what()}}
                     .dump()
              << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << nlohmann::ordered_json{{"error", "runtime"}, {"detail", e.what()}}.dump()
              << "\n";
    return 1;
  }
}
