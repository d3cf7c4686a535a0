#include "spirallab/cli.hpp"

#include <chrono>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "spirallab/catalog.hpp"
#include "spirallab/loewner.hpp"
#include "spirallab/operators.hpp"
#include "spirallab/report.hpp"
#include "spirallab/spirallike.hpp"
#include "spirallab/svg.hpp"

namespace spirallab {
namespace cli {

namespace {

using report::json;
using report::ReportDoc;

struct CommonOpts {
  std::string catalog;
  std::string spec;
  std::string out;
  std::string svg_path;
  std::string proj = "re1,re2";
  std::string tgrid;
  std::vector<std::string> field_texts;
  std::vector<std::string> probes;
  double tol = 1e-9;
  std::uint64_t seed = 1;
  int samples = 200;
  double tmax = 5.0;
  int degree = 8;
  int budget = 2000;
  bool timing = false;
};

void attach_common(CLI::App* sub, CommonOpts& o) {
  sub->add_option("--catalog", o.catalog, "built-in object name, e.g. ball(2), hartogs-spiral(5)");
  sub->add_option("--spec", o.spec, "JSON spec file with domain/field/maps");
  sub->add_option("--field", o.field_texts, "vector field component expression (repeatable)");
  sub->add_option("--probe", o.probes, "point literal like \"2,0\" or \"1+2i\" (repeatable)");
  sub->add_option("--tol", o.tol, "integration tolerance");
  sub->add_option("--seed", o.seed, "seed for every randomized step");
  sub->add_option("--samples", o.samples, "sample count for clouds");
  sub->add_option("--tmax", o.tmax, "time horizon");
  sub->add_option("--tgrid", o.tgrid, "comma-separated time grid");
  sub->add_option("--degree", o.degree, "polynomial degree cap");
  sub->add_option("--budget", o.budget, "search budget");
  sub->add_option("--out", o.out, "report JSON path");
  sub->add_option("--svg", o.svg_path, "SVG plot path");
  sub->add_option("--proj", o.proj, "plot projection, e.g. re1,im1");
  sub->add_flag("--timing", o.timing, "embed wall-clock time in the report");
}

json config_echo(const CommonOpts& o, const std::vector<std::string>& args) {
  return json{{"argv", args},       {"catalog", o.catalog}, {"spec", o.spec},
              {"tol", o.tol},       {"seed", o.seed},       {"samples", o.samples},
              {"tmax", o.tmax},     {"tgrid", o.tgrid},     {"degree", o.degree},
              {"budget", o.budget}, {"proj", o.proj},       {"probes", o.probes},
              {"field", o.field_texts}};
}

struct Resolved {
  std::optional<domains::DomainSpec> domain;
  std::optional<fields::VectorFieldSpec> field;
  std::map<std::string, expr::MapExpr> maps;
  json inputs = json::object();
};

Resolved resolve_inputs(const CommonOpts& o, bool need_domain, bool need_field) {
  Resolved r;
  if (!o.catalog.empty()) {
    auto entry = catalog::builtin(o.catalog);
    r.domain = entry.domain;
    if (entry.field) r.field = entry.field;
    r.inputs["catalog"] = o.catalog;
  }
  if (!o.spec.empty()) {
    auto spec = report::load_spec_file(o.spec);
    if (spec.domain) r.domain = spec.domain;
    if (spec.field) r.field = spec.field;
    r.maps = spec.maps;
    r.inputs["spec_path"] = o.spec;
  }
  if (!o.field_texts.empty()) r.field = fields::VectorFieldSpec::parse(o.field_texts);
  if (r.domain) r.inputs["domain"] = report::domain_to_json(*r.domain);
  if (r.field) r.inputs["field"] = report::field_to_json(*r.field);
  if (need_domain && !r.domain)
    throw Error("this subcommand needs a domain (--catalog or --spec)");
  if (need_field && !r.field)
    throw Error("this subcommand needs a vector field (--catalog, --spec or --field)");
  return r;
}

std::vector<double> parse_grid(const std::string& text, std::vector<double> fallback) {
  if (text.empty()) return fallback;
  std::vector<double> out;
  std::istringstream is(text);
  std::string piece;
  while (std::getline(is, piece, ',')) {
    if (piece.empty()) continue;
    out.push_back(std::atof(piece.c_str()));
  }
  if (out.empty()) throw Error("empty time grid: " + text);
  return out;
}

// ---------------------------------------------------------------------------
// Subcommand handlers
// ---------------------------------------------------------------------------

ReportDoc run_stability(const CommonOpts& o, bool sample_evidence) {
  Resolved in = resolve_inputs(o, false, true);
  ReportDoc doc;
  doc.command = "stability";
  doc.inputs = in.inputs;

  std::optional<fields::StabilitySampling> sampling;
  if (sample_evidence) {
    fields::StabilitySampling s;
    s.samples = o.samples;
    s.horizon = o.tmax;
    s.seed = o.seed;
    s.tol = o.tol;
    sampling = s;
  }
  auto verdict = fields::classify_stability(*in.field, sampling);

  json eig = json::array();
  for (int j = 0; j < verdict.eigenvalues.size(); ++j)
    eig.push_back({verdict.eigenvalues[j].real(), verdict.eigenvalues[j].imag()});
  json details{{"verdict", verdict.hyperbolic_stable ? "HyperbolicStable" : "Inconclusive"},
               {"eigenvalues", eig},
               {"scope", fields::StabilityVerdict::kScopeNote}};
  if (!verdict.hyperbolic_stable) details["reason"] = verdict.reason;
  if (verdict.evidence) {
    details["evidence"] = json{{"samples", verdict.evidence->samples},
                               {"reached", verdict.evidence->reached},
                               {"all_reached", verdict.evidence->all_reached},
                               {"ball_radius", verdict.evidence->ball_radius},
                               {"horizon", verdict.evidence->horizon},
                               {"eps", verdict.evidence->eps},
                               {"seed", verdict.evidence->seed}};
  }
  doc.results.push_back({"hyperbolic-stability", verdict.hyperbolic_stable, details});
  return doc;
}

ReportDoc run_flow(const CommonOpts& o) {
  Resolved in = resolve_inputs(o, false, true);
  if (o.probes.empty()) throw Error("flow needs --probe with the initial point");
  PointCn z0 = report::parse_point(o.probes.front());
  if (z0.size() != in.field->dim()) throw Error("--probe dimension does not match the field");

  ReportDoc doc;
  doc.command = "flow";
  doc.inputs = in.inputs;
  doc.inputs["z0"] = report::point_to_json(z0);

  auto traj = fields::integrate(*in.field, z0, o.tmax, o.tol);
  bool completed = traj.status == fields::TrajectoryStatus::Completed;
  json details{{"status", fields::to_string(traj.status)},
               {"steps", traj.steps},
               {"rejected_steps", traj.rejected_steps},
               {"max_local_error", traj.max_local_error},
               {"end_time", traj.end_time()},
               {"endpoint", report::point_to_json(traj.end())}};
  doc.results.push_back({"flow", completed, details});

  if (!o.svg_path.empty()) {
    svg::Plot plot(svg::Projection::parse(o.proj, in.field->dim()));
    plot.polyline(traj.points, "#205080");
    plot.scatter({traj.points.front(), traj.points.back()}, "#c03020", 3.0);
    plot.write(o.svg_path);
  }
  return doc;
}

ReportDoc run_spirallike(const CommonOpts& o) {
  Resolved in = resolve_inputs(o, true, true);
  ReportDoc doc;
  doc.command = "spirallike";
  doc.inputs = in.inputs;

  auto cloud = domains::sample_boundary(*in.domain, o.samples, o.seed);
  auto tgrid = parse_grid(o.tgrid, {0.01, 0.1, 1.0, 5.0});
  auto rep = spirallike::check_strict_spirallike(*in.field, *in.domain, cloud, tgrid, o.tol);

  json details{{"verdict", spirallike::to_string(rep.verdict)},
               {"worst_margin", rep.worst_margin},
               {"passes", rep.passes},
               {"margin_failures", rep.margin_failures},
               {"outside", rep.outside},
               {"inconclusive", rep.inconclusive},
               {"decay_ok", rep.decay_ok},
               {"decay_horizon", rep.decay_horizon},
               {"worst_end_norm", rep.worst_end_norm},
               {"cloud", json{{"count", cloud.points.size()}, {"seed", cloud.seed}}}};
  if (rep.counterexample) {
    details["counterexample"] = json{{"start", report::point_to_json(rep.counterexample->start)},
                                     {"t", rep.counterexample->t},
                                     {"flowed", report::point_to_json(rep.counterexample->flowed)},
                                     {"r", rep.counterexample->r_value}};
  }
  doc.results.push_back(
      {"strict-spirallike", rep.verdict == spirallike::SpirallikeVerdict::EvidenceStrict, details});

  auto crit = spirallike::criterion_sweep(*in.field, *in.domain, cloud.points);
  json crit_details{{"max_value", crit.max_value},
                    {"tested", crit.tested},
                    {"skipped", crit.skipped}};
  if (crit.tested > 0) crit_details["argmax"] = report::point_to_json(crit.argmax);
  doc.results.push_back({"criterion-re-vtilde", crit.holds, crit_details});

  if (!o.svg_path.empty()) {
    svg::Plot plot(svg::Projection::parse(o.proj, in.domain->dim()));
    plot.scatter(cloud.points, "#205080", 1.8);
    std::vector<PointCn> flowed;
    for (const auto& z : cloud.points)
      flowed.push_back(fields::flow_to(*in.field, z, tgrid.back(), o.tol));
    plot.scatter(flowed, "#c03020", 1.8);
    plot.write(o.svg_path);
  }
  return doc;
}

ReportDoc run_hull(const CommonOpts& o) {
  Resolved in = resolve_inputs(o, true, false);
  if (o.probes.empty()) throw Error("hull needs at least one --probe point");

  ReportDoc doc;
  doc.command = "hull";
  doc.inputs = in.inputs;

  auto bc = domains::sample_boundary(*in.domain, o.samples, o.seed);
  hull::SampleCloud K;
  K.label = in.domain->name();
  K.seed = bc.seed;
  K.points = bc.points;

  hull::HullProbeConfig cfg;
  cfg.degree_cap = o.degree;
  cfg.budget = o.budget;
  cfg.seed = o.seed;

  std::vector<PointCn> queries;
  for (const auto& text : o.probes) {
    PointCn z0 = report::parse_point(text);
    if (z0.size() != in.domain->dim()) throw Error("--probe dimension does not match the domain");
    queries.push_back(z0);
  }
  auto certs = hull::hull_membership_grid(K, queries, cfg);
  for (size_t k = 0; k < certs.size(); ++k) {
    bool pass = certs[k].verdict == hull::HullVerdict::Separated && certs[k].verify(K);
    doc.results.push_back(
        {"probe:" + o.probes[k], pass, report::certificate_to_json(certs[k])});
  }

  if (!o.svg_path.empty()) {
    svg::Plot plot(svg::Projection::parse(o.proj, in.domain->dim()));
    plot.scatter(K.points, "#205080", 1.5);
    plot.scatter(queries, "#c03020", 3.5);
    plot.write(o.svg_path);
  }
  return doc;
}

ReportDoc run_loewner(const CommonOpts& o, double inflate_margin) {
  Resolved in = resolve_inputs(o, true, true);
  ReportDoc doc;
  doc.command = "loewner";
  doc.inputs = in.inputs;

  const int n = in.domain->dim();
  expr::MapExpr f = expr::MapExpr::identity(n), f_inv = expr::MapExpr::identity(n);
  expr::MapExpr psi = expr::MapExpr::identity(n), psi_inv = expr::MapExpr::identity(n);
  if (in.maps.count("f")) {
    f = in.maps.at("f");
    f_inv = in.maps.count("f_inv") ? in.maps.at("f_inv") : expr::MapExpr();
  }
  if (in.maps.count("psi")) {
    if (!in.maps.count("psi_inv")) throw Error("maps.psi requires maps.psi_inv");
    psi = in.maps.at("psi");
    psi_inv = in.maps.at("psi_inv");
  }
  auto chain = loewner::make_chain(f, f_inv, psi, psi_inv, *in.field, *in.domain);

  auto cloud = domains::sample_boundary(*in.domain, o.samples, o.seed).points;
  auto tgrid = parse_grid(o.tgrid, {0.0, 0.5, 1.0});

  // f_0 = f on the cloud.
  {
    double worst = 0.0;
    for (const auto& z : cloud)
      worst = std::max(worst, (loewner::chain_map(chain, 0.0, z, o.tol) - f.eval(z)).norm());
    doc.results.push_back({"base-map-at-zero", worst <= 1e-8, json{{"max_error", worst}}});
  }

  // Closure inclusions for every s < t in the grid.
  for (size_t a = 0; a < tgrid.size(); ++a) {
    for (size_t b = a + 1; b < tgrid.size(); ++b) {
      if (!(tgrid[a] < tgrid[b])) continue;
      auto rep = loewner::check_inclusion(chain, tgrid[a], tgrid[b], cloud, o.tol);
      std::ostringstream name;
      name << "inclusion:s=" << tgrid[a] << ",t=" << tgrid[b];
      doc.results.push_back({name.str(), rep.all_inside,
                             json{{"min_margin", rep.min_margin},
                                  {"inside", rep.inside},
                                  {"outside", rep.outside}}});
    }
  }

  // Normalization against exp(-t DV(0)).
  for (double t : tgrid) {
    if (!(t > 0)) continue;
    auto rep = loewner::check_normalization(chain, t);
    std::ostringstream name;
    name << "normalization:t=" << t;
    doc.results.push_back(
        {name.str(), rep.pass, json{{"err", rep.err}, {"ref_norm", rep.J_ref.norm()}}});
  }

  // Filtering window at s = 0 against an inflated neighborhood.
  {
    json details{{"inflate", inflate_margin}};
    bool pass = false;
    try {
      auto window =
          loewner::filtering_window(chain, 0.0, domains::inflate(*in.domain, inflate_margin),
                                    cloud, o.tol);
      pass = window.all_verified;
      details["r_s"] = window.r_s;
      details["R"] = window.R;
      details["t0"] = window.t0;
      details["verified_grid"] = window.verified_ts;
    } catch (const EmptyWindow& e) {
      details["error"] = e.what();
    }
    doc.results.push_back({"filtering-window", pass, details});
  }

  // Range exhaustion for requested probe points.
  for (const auto& text : o.probes) {
    PointCn w = report::parse_point(text);
    auto hit = loewner::range_exhaustion_time(chain, w, o.tmax, 400, o.tol);
    doc.results.push_back({"range-exhaustion:" + text, hit.reached,
                           json{{"t_hit", hit.t_hit},
                                {"reached", hit.reached},
                                {"via_pullback", hit.via_pullback},
                                {"t_cap", o.tmax}}});
  }

  // Modulus-of-continuity constant over a small interior cloud.
  {
    std::vector<PointCn> K;
    for (size_t k = 0; k < cloud.size() && K.size() < 12; k += std::max<size_t>(cloud.size() / 12, 1))
      K.push_back(0.5 * cloud[k]);
    double T = tgrid.back() > 0 ? tgrid.back() : 1.0;
    auto bound = loewner::ld_bound_constant(chain, K, T, o.seed, 60, o.tol);
    doc.results.push_back({"ld-bound", bound.verified,
                           json{{"kappa", bound.kappa},
                                {"T", T},
                                {"checked", bound.checked},
                                {"max_ratio", bound.max_ratio}}});
  }

  if (!o.svg_path.empty()) {
    svg::Plot plot(svg::Projection::parse(o.proj, n));
    const char* palette[] = {"#205080", "#208050", "#a07020", "#c03020"};
    int color = 0;
    for (double t : tgrid) {
      std::vector<PointCn> image;
      for (const auto& z : cloud) image.push_back(loewner::chain_map(chain, t, z, o.tol));
      plot.scatter(image, palette[color++ % 4], 1.8);
    }
    plot.write(o.svg_path);
  }
  return doc;
}

ReportDoc run_operators(const CommonOpts& o, double mobius_c, double rotation_theta,
                        double compact_radius, double k_radius, int j_max,
                        const std::string& g_text, const std::string& h_text, double eps) {
  ReportDoc doc;
  doc.command = "operators";

  operators::AutomorphismSpec tau = rotation_theta != 0.0
                                        ? operators::rotation_disc_automorphism(rotation_theta)
                                        : operators::hyperbolic_disc_automorphism(mobius_c);
  doc.inputs["tau"] = json{{"forward", tau.forward.sources()},
                           {"inverse", tau.inverse.sources()},
                           {"domain", report::domain_to_json(tau.domain)}};

  // H = K = samples of the closed disc of the given radius plus extremes.
  auto disc_cloud = [&](double rho, int count, std::uint64_t seed) {
    hull::SampleCloud K;
    K.label = "disc";
    K.seed = seed;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0), ang(0.0, 2 * M_PI);
    for (int k = 0; k < count; ++k) {
      double r = rho * std::sqrt(u(rng)), t = ang(rng);
      PointCn p(1);
      p << Complex(r * std::cos(t), r * std::sin(t));
      K.points.push_back(p);
    }
    for (auto c : {Complex(rho, 0), Complex(-rho, 0), Complex(0, rho), Complex(0, -rho)}) {
      PointCn p(1);
      p << c;
      K.points.push_back(p);
    }
    return K;
  };

  auto H = disc_cloud(compact_radius, std::min(o.samples, 20), o.seed);
  auto compact = domains::ball(1, compact_radius);
  auto divergence = operators::compact_divergence_check(tau, H, compact, j_max);
  {
    json per_j = json::array();
    for (bool b : divergence.disjoint_per_j) per_j.push_back(b);
    doc.results.push_back({"compact-divergence", divergence.observed,
                           json{{"observed", divergence.observed},
                                {"j0", divergence.j0},
                                {"j_max", divergence.j_max},
                                {"disjoint_per_j", per_j},
                                {"radius", compact_radius}}});
  }

  // Instance-level dichotomy: compact divergence iff no interior fixed point.
  {
    std::vector<PointCn> starts;
    for (auto c : {Complex(0.0, 0.0), Complex(0.3, 0.2), Complex(-0.5, 0.1), Complex(0.1, -0.6)}) {
      PointCn p(1);
      p << c;
      starts.push_back(p);
    }
    auto fp = operators::fixed_point_search(tau, tau.domain, starts);
    bool consistent = divergence.observed == !fp.found;
    json details{{"fixed_point_found", fp.found}, {"divergence_observed", divergence.observed}};
    if (fp.found) {
      details["point"] = report::point_to_json(fp.point);
      details["residual"] = fp.residual;
    }
    doc.results.push_back({"fixed-point-dichotomy", consistent, details});
  }

  // Generalized-translation conditions on a smaller compact.
  {
    auto K = disc_cloud(k_radius, std::min(o.samples, 30), o.seed + 1);
    hull::HullProbeConfig cfg;
    cfg.degree_cap = std::max(o.degree, 8);
    cfg.budget = o.budget;
    cfg.seed = o.seed;
    auto rep = operators::generalized_translation_check(tau, K, j_max, cfg);
    doc.results.push_back({"generalized-translation", rep.found,
                           json{{"j", rep.j},
                                {"disjoint_distance", rep.disjoint_distance},
                                {"cluster_gap", rep.cluster_gap},
                                {"midpoints_tested", rep.midpoints_tested},
                                {"midpoints_separated", rep.midpoints_separated},
                                {"hull_approximation", rep.hull_approximation_flag},
                                {"first_disjoint_j", rep.first_disjoint_j}}});
  }

  if (!g_text.empty() && !h_text.empty()) {
    auto K = disc_cloud(k_radius, std::min(o.samples, 46), o.seed + 2);
    auto g = expr::MapExpr::parse({g_text}, 1);
    auto h = expr::MapExpr::parse({h_text}, 1);
    auto witness = operators::transitivity_witness(tau, g, h, K, eps, o.degree, j_max);
    json details{{"eps", eps}, {"degree_cap", o.degree}};
    if (witness.found) {
      details["n"] = witness.n;
      details["residual_g"] = witness.residual_g;
      details["residual_h"] = witness.residual_h;
      json comps = json::array();
      for (const auto& c : witness.F) comps.push_back(report::polynomial_to_json(c));
      details["witness"] = comps;
    } else {
      details["failure"] = witness.failure;
    }
    doc.results.push_back({"transitivity-witness", witness.found && witness.reverified, details});
    doc.inputs["g"] = g_text;
    doc.inputs["h"] = h_text;
  }

  if (o.probes.size() >= 2) {
    PointCn z = report::parse_point(o.probes[0]);
    PointCn w = report::parse_point(o.probes[1]);
    auto family = operators::default_caratheodory_family(tau.domain, 32, o.seed);
    auto cb = operators::caratheodory_lb(tau.domain, z, w, family, o.budget);
    doc.results.push_back({"caratheodory-lower-bound", true,
                           json{{"value", cb.lower_bound},
                                {"is_lower_bound", cb.is_lower_bound},
                                {"family_tested", cb.family_tested},
                                {"best_index", cb.best_index}}});
  }
  return doc;
}

ReportDoc run_catalog(const std::string& verb, const std::string& name) {
  ReportDoc doc;
  doc.command = "catalog";
  if (verb == "list") {
    json names = json::array();
    for (const auto& n : catalog::list_names()) {
      names.push_back(n);
      std::cout << n << "\n";
    }
    doc.results.push_back({"list", true, json{{"names", names}}});
    return doc;
  }
  if (verb == "show") {
    auto entry = catalog::builtin(name);
    json spec{{"domain", report::domain_to_json(entry.domain)}};
    if (entry.field) spec["field"] = report::field_to_json(*entry.field);
    spec["provenance"] = entry.provenance;
    std::cout << spec.dump(2) << "\n";
    doc.results.push_back({"show:" + name, true, spec});
    doc.inputs["catalog"] = name;
    return doc;
  }
  throw Error("catalog verb must be list or show");
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"spirallab: numerical experiments on spirallike domains"};
  app.require_subcommand(1);

  CommonOpts opts;
  bool sample_evidence = false;
  double inflate_margin = 0.5;
  double mobius_c = 0.5, rotation_theta = 0.0;
  double compact_radius = 0.9, k_radius = 0.3;
  int j_max = 12;
  std::string g_text, h_text, catalog_verb, catalog_name;
  double eps = 1e-3;

  auto* stability = app.add_subcommand("stability", "classify the equilibrium at the origin");
  attach_common(stability, opts);
  stability->add_flag("--evidence", sample_evidence, "also integrate sampled trajectories");

  auto* flow = app.add_subcommand("flow", "integrate one trajectory");
  attach_common(flow, opts);

  auto* spirallike_cmd = app.add_subcommand("spirallike", "strict spirallikeness sweep");
  attach_common(spirallike_cmd, opts);

  auto* hull_cmd = app.add_subcommand("hull", "polynomial hull probes");
  attach_common(hull_cmd, opts);

  auto* loewner_cmd = app.add_subcommand("loewner", "chain construction checks");
  attach_common(loewner_cmd, opts);
  loewner_cmd->add_option("--inflate", inflate_margin, "neighborhood inflation for the window");

  auto* operators_cmd = app.add_subcommand("operators", "composition-operator experiments");
  attach_common(operators_cmd, opts);
  operators_cmd->add_option("--mobius-c", mobius_c, "hyperbolic automorphism parameter");
  operators_cmd->add_option("--rotation", rotation_theta, "use the rotation by this angle");
  operators_cmd->add_option("--compact-radius", compact_radius, "radius of H = K");
  operators_cmd->add_option("--k-radius", k_radius, "radius of the translation compact");
  operators_cmd->add_option("--j-max", j_max, "iterate cap");
  operators_cmd->add_option("--map-g", g_text, "transitivity target g");
  operators_cmd->add_option("--map-h", h_text, "transitivity target h");
  operators_cmd->add_option("--eps", eps, "transitivity tolerance");

  auto* catalog_cmd = app.add_subcommand("catalog", "list or show built-in objects");
  attach_common(catalog_cmd, opts);
  catalog_cmd->add_option("verb", catalog_verb, "list | show")->required();
  catalog_cmd->add_option("name", catalog_name, "entry name for show");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  auto started = std::chrono::steady_clock::now();
  ReportDoc doc;
  try {
    if (stability->parsed()) doc = run_stability(opts, sample_evidence);
    else if (flow->parsed()) doc = run_flow(opts);
    else if (spirallike_cmd->parsed()) doc = run_spirallike(opts);
    else if (hull_cmd->parsed()) doc = run_hull(opts);
    else if (loewner_cmd->parsed()) doc = run_loewner(opts, inflate_margin);
    else if (operators_cmd->parsed())
      doc = run_operators(opts, mobius_c, rotation_theta, compact_radius, k_radius, j_max, g_text,
                          h_text, eps);
    else if (catalog_cmd->parsed()) doc = run_catalog(catalog_verb, catalog_name);
  } catch (const Error& e) {
    std::cerr << "spirallab: " << e.what() << "\n";
    return 2;
  }

  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
                  .count();
  std::cerr << "spirallab: " << doc.command << " finished in " << ms << " ms\n";
  if (opts.timing) doc.wall_clock_ms = ms;
  doc.config = config_echo(opts, args);

  try {
    if (!opts.out.empty()) report::write_report(doc, opts.out);
  } catch (const Error& e) {
    std::cerr << "spirallab: " << e.what() << "\n";
    return 2;
  }

  for (const auto& r : doc.results)
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << doc.command << "/" << r.name << "\n";
  return doc.all_pass() ? 0 : 1;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);
  return run(args);
}

}  // namespace cli
}  // namespace spirallab
