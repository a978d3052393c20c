// plspread: command-line front end.
//
//   plspread profile  --lambda 2 --gamma 0 --geometry planar
//   plspread shoot    --lambda 2 --theta 0,0.5,1
//   plspread tw       --lambda 2
//   plspread evolve   --lambda 2 --t-end 1e6
//   plspread replay   <manifest> [--out dir]
//
// Every run writes <out>/manifest.txt; `plspread replay` (or
// `plspread <cmd> --config manifest.txt`) re-executes it. Config files hold
// `key = value` lines named after the long flags; flags given on the command
// line win over the file. The output directory is --out, else $PLSPREAD_OUT,
// else ./plspread_out.
//
// Exit codes: 0 ok, 2 solver did not converge, 3 invalid configuration,
// 4 internal numeric failure.

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include "plspread/errors.hpp"
#include "plspread/io.hpp"
#include "plspread/pde_evolve.hpp"
#include "plspread/profile_ode.hpp"
#include "plspread/rheology.hpp"
#include "plspread/shooting.hpp"
#include "plspread/traveling_wave.hpp"

namespace fs = std::filesystem;
using namespace plspread;

namespace {

constexpr int kOk = 0, kNoConvergence = 2, kBadConfig = 3, kNumeric = 4;

using Pairs = std::vector<std::pair<std::string, std::string>>;

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += format_number(v[i]);
  }
  return s;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t end = s.find(',', pos);
    if (end == std::string::npos) end = s.size();
    const std::string item = s.substr(pos, end - pos);
    if (!item.empty()) {
      double v = 0.0;
      const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
      if (res.ec != std::errc() || res.ptr != item.data() + item.size()) {
        throw DomainError("not a number: '" + item + "'");
      }
      out.push_back(v);
    }
    pos = end + 1;
  }
  return out;
}

void write_manifest(const fs::path& out, const std::string& command, const Pairs& kv) {
  std::string text = "command = " + command + "\nversion = " PLSPREAD_VERSION "\n";
  for (const auto& [k, v] : kv) text += k + " = " + v + "\n";
  save_text(out / "manifest.txt", text);
}

// ---------------------------------------------------------------------------

struct ProfileCfg {
  double lambda = 2.0;
  double gamma = 0.0;
  std::string geometry = "planar";
  double delta = 1e-10;
  double tol = 1e-10;
  double x0 = 1e-4;
  double x_max = 0.0;  // 0: automatic

  void bind(CLI::App* c) {
    c->add_option("--lambda", lambda, "rheology exponent")->capture_default_str();
    c->add_option("--gamma", gamma, "shooting parameter")->capture_default_str();
    c->add_option("--geometry", geometry, "planar or radial")->capture_default_str();
    c->add_option("--delta", delta, "working floor z = delta")->capture_default_str();
    c->add_option("--tol", tol, "integrator tolerance")->capture_default_str();
    c->add_option("--x0", x0, "series start")->capture_default_str();
    c->add_option("--x-max", x_max, "integration cap (0: 4 B(gamma) or 10)")->capture_default_str();
  }
  Pairs pairs() const {
    return {{"lambda", format_number(lambda)}, {"gamma", format_number(gamma)},
            {"geometry", geometry},            {"delta", format_number(delta)},
            {"tol", format_number(tol)},       {"x0", format_number(x0)},
            {"x-max", format_number(x_max)}};
  }
};

void run_profile(const ProfileCfg& c, const fs::path& out) {
  const Rheology r = make_rheology(c.lambda);
  const Geometry g = parse_geometry(c.geometry);
  IntegrationOptions io;
  io.tol = c.tol;
  io.x0 = c.x0;
  io.record_trace = true;
  if (c.x_max > 0.0) io.x_max = c.x_max;
  const ShotOutcome o = integrate_to_event(g, c.gamma, r, c.delta, io);

  ColumnWriter trace({"x", "z", "dz", "curv"});
  for (const auto& s : o.trace) trace.row({s.x, s.z, s.dz, s.curv});
  trace.save(out / "trace.dat");

  Record rec;
  rec.set("lambda", c.lambda).set("geometry", c.geometry).set("gamma", c.gamma);
  rec.set("delta", c.delta).set("outcome", o.name());
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, InterfaceHit>) {
          rec.set("y", k.y).set("slope", k.slope);
        } else if constexpr (std::is_same_v<K, MinimumTurn>) {
          rec.set("x_min", k.x_min).set("z_min", k.z_min);
        } else if constexpr (std::is_same_v<K, BoundExceeded>) {
          rec.set("x_stop", k.x_stop);
        } else {
          rec.set("x_stop", k.x_stop).set("z_stop", k.z_stop);
        }
      },
      o.kind);
  rec.set("steps", static_cast<long long>(o.steps));
  save_records(out / "outcome.rec", {rec});
  std::cout << rec.line() << "\n";
}

// ---------------------------------------------------------------------------

struct ShootCfg {
  double lambda = 2.0;
  std::string geometry = "planar";
  std::string theta = "0";
  int last_index = 16;
  double gamma_tol = 1e-10;
  double ode_tol = 1e-10;
  int threads = 4;
  int samples = 401;

  void bind(CLI::App* c) {
    c->add_option("--lambda", lambda)->capture_default_str();
    c->add_option("--geometry", geometry)->capture_default_str();
    c->add_option("--theta", theta, "comma-separated contact-angle fractions in [0, 1]")
        ->capture_default_str();
    c->add_option("--last-index", last_index, "schedule delta_j = 10^(-2-j/2), j <= this")
        ->capture_default_str();
    c->add_option("--gamma-tol", gamma_tol)->capture_default_str();
    c->add_option("--ode-tol", ode_tol)->capture_default_str();
    c->add_option("--threads", threads, "worker threads (output does not depend on it)")
        ->capture_default_str();
    c->add_option("--samples", samples, "profile samples per theta")->capture_default_str();
  }
  Pairs pairs() const {
    return {{"lambda", format_number(lambda)},
            {"geometry", geometry},
            {"theta", join(parse_list(theta))},
            {"last-index", std::to_string(last_index)},
            {"gamma-tol", format_number(gamma_tol)},
            {"ode-tol", format_number(ode_tol)},
            {"samples", std::to_string(samples)}};
  }
};

void run_shoot(const ShootCfg& c, const fs::path& out) {
  const Rheology r = make_rheology(c.lambda);
  const Geometry g = parse_geometry(c.geometry);
  const std::vector<double> thetas = parse_list(c.theta);
  if (thetas.empty()) throw DomainError("no theta values given");
  if (c.samples < 2) throw DomainError("need at least 2 profile samples");
  const auto schedule = default_schedule(c.last_index);
  ShootOptions so;
  so.gamma_tol = c.gamma_tol;
  so.ode_tol = c.ode_tol;

  // Solves fan out; the collector below walks them in input order.
  std::vector<std::future<ShootingResult>> jobs;
  std::vector<ShootingResult> results;
  const std::size_t width = static_cast<std::size_t>(std::max(1, c.threads));
  for (std::size_t start = 0; start < thetas.size(); start += width) {
    jobs.clear();
    for (std::size_t i = start; i < std::min(thetas.size(), start + width); ++i) {
      jobs.push_back(std::async(std::launch::async, [&, th = thetas[i]] {
        return continue_to_zero_delta(g, r, th, schedule, so);
      }));
    }
    for (auto& j : jobs) results.push_back(j.get());
  }

  std::vector<Record> recs;
  for (const auto& res : results) {
    const std::string tag = "theta_" + format_number(res.theta);
    Record rec;
    rec.set("lambda", c.lambda).set("geometry", c.geometry).set("theta", res.theta);
    rec.set("interface_exists", res.interface_exists).set("gamma", res.gamma_theta);
    rec.set("y", res.y_theta).set("slope", res.slope).set("kappa", res.kappa);
    rec.set("gamma_error", res.extrapolation_error_estimate).set("y_error", res.y_error_estimate);
    rec.set("rate", res.rate_gamma).set("levels", static_cast<long long>(res.levels.size()));

    ColumnWriter lv({"delta", "gamma", "y", "slope", "iterations"});
    for (const auto& l : res.levels) {
      lv.row({l.delta, l.gamma, l.y, l.slope, static_cast<double>(l.iterations)});
    }
    lv.save(out / ("levels_" + tag + ".dat"));

    if (res.interface_exists) {
      const PhysicalProfile p = to_physical(res, r, g, 1.0, so);
      rec.set("eta_front", p.eta_front).set("mass", p.mass).set("amp", p.amp);
      ColumnWriter pw({"eta", "U"});
      for (const auto& [eta, U] : p.samples(static_cast<std::size_t>(c.samples))) pw.row({eta, U});
      pw.save(out / ("profile_" + tag + ".dat"));
    }
    std::cout << rec.line() << "\n";
    recs.push_back(std::move(rec));
  }
  save_records(out / "results.rec", recs);
}

// ---------------------------------------------------------------------------

struct TwCfg {
  double lambda = 2.0;
  double span = 1e6;
  int grid = 5;
  double radius = 0.5;
  double xi_lo = 0.1;
  double xi_hi = 10.0;

  void bind(CLI::App* c) {
    c->add_option("--lambda", lambda)->capture_default_str();
    c->add_option("--span", span, "cap on |y| and |z|")->capture_default_str();
    c->add_option("--grid", grid, "seeds per axis for the classification table")
        ->capture_default_str();
    c->add_option("--radius", radius, "seed grid half width around P")->capture_default_str();
    c->add_option("--xi-lo", xi_lo, "equilibrium front output window")->capture_default_str();
    c->add_option("--xi-hi", xi_hi)->capture_default_str();
  }
  Pairs pairs() const {
    return {{"lambda", format_number(lambda)}, {"span", format_number(span)},
            {"grid", std::to_string(grid)},    {"radius", format_number(radius)},
            {"xi-lo", format_number(xi_lo)},   {"xi-hi", format_number(xi_hi)}};
  }
};

void write_front(const fs::path& path, const std::vector<FrontSample>& fs_) {
  ColumnWriter w({"xi", "f", "df"});
  for (const auto& s : fs_) w.row({s.xi, s.f, s.df});
  w.save(path);
}

void run_tw(const TwCfg& c, const fs::path& out) {
  const Rheology r = make_rheology(c.lambda);
  const Equilibrium eq = equilibrium_analysis(r);
  const double C = equilibrium_front_coefficient(r);
  Record er;
  er.set("lambda", c.lambda).set("y_P", eq.y_P).set("z_P", eq.z_P).set("residual", eq.residual);
  er.set("det", eq.det).set("trace", eq.trace);
  er.set("eig_unstable", eq.eigenvalues[0]).set("eig_stable", eq.eigenvalues[1]);
  er.set("C", C).set("p", r.p_front);
  save_records(out / "equilibrium.rec", {er});
  std::cout << er.line() << "\n";

  std::vector<Record> tails;
  const std::pair<Separatrix, const char*> seps[] = {{Separatrix::Gamma1, "gamma1"},
                                                     {Separatrix::Gamma2, "gamma2"},
                                                     {Separatrix::Gamma3, "gamma3"},
                                                     {Separatrix::Gamma4, "gamma4"}};
  for (const auto& [which, name] : seps) {
    const TWTrajectory t = integrate_separatrix(which, r, c.span);
    ColumnWriter w({"xi1", "y", "z", "log_x", "xi"});
    for (const auto& s : t.samples) w.row({s.xi1, s.y, s.z, s.log_x, s.xi});
    w.save(out / (std::string("separatrix_") + name + ".dat"));
    write_front(out / (std::string("front_") + name + ".dat"), reconstruct_front(t, r));
    const bool back = which == Separatrix::Gamma1 || which == Separatrix::Gamma2;
    const TailFit& f = back ? t.cls.backward_fit : t.cls.forward_fit;
    Record rec;
    rec.set("separatrix", std::string(name)).set("label", to_string(t.cls.label));
    rec.set("behavior", behavior_string(t.cls.behavior));
    rec.set("ratio", f.ratio).set("ratio_decade_earlier", f.ratio_earlier);
    rec.set("expected", f.expected).set("relative_error", std::abs(f.ratio / f.expected - 1.0));
    rec.set("K", f.K);
    tails.push_back(rec);
  }
  save_records(out / "tails.rec", tails);

  const TWTrajectory eo = trace_orbit({1.0, eq.y_P, eq.z_P, 0.0}, r);
  std::vector<FrontSample> window;
  for (const auto& s : reconstruct_front(eo, r)) {
    if (s.xi >= c.xi_lo && s.xi <= c.xi_hi) window.push_back(s);
  }
  write_front(out / "front_equilibrium.dat", window);

  std::vector<Record> table;
  const int n = std::max(1, c.grid);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double sy = n == 1 ? 0.0 : c.radius * (2.0 * i / (n - 1) - 1.0);
      const double sz = n == 1 ? 0.0 : c.radius * (2.0 * j / (n - 1) - 1.0);
      Record rec;
      rec.set("seed_y", eq.y_P + sy).set("seed_z", eq.z_P + sz);
      try {
        const TrajectoryClass cls = classify_trajectory({1.0, eq.y_P + sy, eq.z_P + sz, 0.0}, r);
        rec.set("label", to_string(cls.label)).set("backward", to_string(cls.backward_end));
        rec.set("forward", to_string(cls.forward_end)).set("behavior", behavior_string(cls.behavior));
        rec.set("K_backward", cls.backward_fit.K).set("K_forward", cls.forward_fit.K);
      } catch (const SolverError& e) {
        rec.set("label", std::string("Unclassified"));
        rec.set("reason", std::string("\"") + e.what() + "\"");
      }
      table.push_back(rec);
    }
  }
  save_records(out / "classification.rec", table);
}

// ---------------------------------------------------------------------------

struct EvolveCfg {
  double lambda = 2.0;
  std::string shape = "rectangle";
  int nodes = 801;
  double x_lo = -4.5;
  double x_hi = 4.5;
  double mass = 0.0;        // 0: mass of the similarity solution
  double half_width = 0.0;  // 0: similarity front at t0
  double t0 = 1.0;
  double t_end = 1e6;
  std::string scheme = "implicit";
  std::string mobility = "upwind";
  double dt0 = 0.0;
  double dt_rel_max = 0.02;
  double front_level = 1e-3;
  std::string snapshots;

  void bind(CLI::App* c) {
    c->add_option("--lambda", lambda)->capture_default_str();
    c->add_option("--shape", shape, "rectangle, parabola or snapshot")->capture_default_str();
    c->add_option("--nodes", nodes)->capture_default_str();
    c->add_option("--x-lo", x_lo)->capture_default_str();
    c->add_option("--x-hi", x_hi)->capture_default_str();
    c->add_option("--mass", mass, "0: similarity mass")->capture_default_str();
    c->add_option("--half-width", half_width, "support half width (0: similarity front)")
        ->capture_default_str();
    c->add_option("--t0", t0, "initial time")->capture_default_str();
    c->add_option("--t-end", t_end)->capture_default_str();
    c->add_option("--scheme", scheme, "implicit or explicit")->capture_default_str();
    c->add_option("--mobility", mobility, "upwind, arithmetic or min")->capture_default_str();
    c->add_option("--dt0", dt0, "first step (0: explicit estimate)")->capture_default_str();
    c->add_option("--dt-rel-max", dt_rel_max, "implicit: dt <= this * t")->capture_default_str();
    c->add_option("--front-level", front_level)->capture_default_str();
    c->add_option("--snapshots", snapshots, "comma-separated snapshot times");
  }
  Pairs pairs() const {
    return {{"lambda", format_number(lambda)},
            {"shape", shape},
            {"nodes", std::to_string(nodes)},
            {"x-lo", format_number(x_lo)},
            {"x-hi", format_number(x_hi)},
            {"mass", format_number(mass)},
            {"half-width", format_number(half_width)},
            {"t0", format_number(t0)},
            {"t-end", format_number(t_end)},
            {"scheme", scheme},
            {"mobility", mobility},
            {"dt0", format_number(dt0)},
            {"dt-rel-max", format_number(dt_rel_max)},
            {"front-level", format_number(front_level)},
            {"snapshots", join(parse_list(snapshots))}};
  }
};

void write_field(const fs::path& path, const Field1D& f) {
  ColumnWriter w({"x", "u"});
  for (std::size_t i = 0; i < f.u.size(); ++i) w.row({f.grid.node(i), f.u[i]});
  w.save(path);
}

void run_evolve(const EvolveCfg& c, const fs::path& out) {
  const Rheology r = make_rheology(c.lambda);
  if (c.nodes < 5) throw DomainError("need at least 5 nodes");
  const Grid grid = make_grid(c.x_lo, c.x_hi, static_cast<std::size_t>(c.nodes));
  const DropShape shape = parse_drop_shape(c.shape);
  PdeOptions po;
  po.mobility = parse_mobility(c.mobility);
  EvolveOptions eo;
  eo.scheme = parse_scheme(c.scheme);
  eo.t_end = c.t_end;
  eo.dt_initial = c.dt0;
  eo.dt_rel_max = c.dt_rel_max;
  eo.front_level = c.front_level;
  eo.snapshot_times = parse_list(c.snapshots);

  // The similarity solution supplies defaults and the final comparison;
  // it exists only for shear-thinning fluids.
  std::optional<PhysicalProfile> sim;
  if (r.shear_thinning()) {
    const auto res = continue_to_zero_delta(Geometry::Planar, r, 0.0, default_schedule());
    sim = to_physical(res, r, Geometry::Planar);
  }
  const double stretch0 = std::pow(c.t0, r.beta_planar);
  double mass = c.mass, half = c.half_width;
  if (mass <= 0.0 || half <= 0.0 || shape == DropShape::SelfSimilarSnapshot) {
    if (!sim) {
      throw DomainError("lambda <= 1 has no similarity solution; give --mass and --half-width");
    }
    if (mass <= 0.0) mass = sim->amp * sim->mass;
    if (half <= 0.0) half = sim->eta_front * stretch0;
  }
  Field1D f = shape == DropShape::SelfSimilarSnapshot
                  ? init_drop(shape, std::nullopt, {-half, half}, grid, &*sim, c.t0)
                  : init_drop(shape, mass, {-half, half}, grid);
  f.t = c.t0;
  write_field(out / "initial.dat", f);

  const EvolveReport rep = evolve(f, r, eo, po);
  for (std::size_t k = 0; k < rep.snapshots.size(); ++k) {
    write_field(out / ("snapshot_" + std::to_string(k) + ".dat"), rep.snapshots[k]);
  }
  write_field(out / "final.dat", rep.field);
  ColumnWriter fw({"t", "left", "right", "half_width", "detected"});
  for (const auto& fr : rep.fronts) {
    fw.row({fr.t, fr.front.left, fr.front.right, fr.front.half_width(),
            fr.front.detected ? 1.0 : 0.0});
  }
  fw.save(out / "fronts.dat");

  Record rec;
  rec.set("lambda", c.lambda).set("scheme", c.scheme).set("mobility", c.mobility);
  rec.set("t_end", rep.field.t).set("steps", static_cast<long long>(rep.field.steps));
  rec.set("rejected", static_cast<long long>(rep.rejected));
  rec.set("mass0", rep.mass0).set("mass", rep.field.mass).set("clipped", rep.field.clipped);
  rec.set("mass_drift", rep.mass_drift()).set("clip_fraction", rep.field.clipped / rep.mass0);
  try {
    rec.set("front_exponent", front_exponent_fit(rep.fronts, 0.1 * rep.field.t, rep.field.t));
  } catch (const DomainError&) {
    rec.set("front_exponent", std::string("nan"));
  }
  rec.set("expected_exponent", r.beta_planar);
  if (sim) {
    const SimilarityReport s = rescale_compare(rep.field, r, *sim, c.front_level);
    rec.set("linf", s.linf).set("l1", s.l1).set("front_detected", s.front_detected);
    rec.set("front_scaled", s.front_scaled).set("eta_front", s.eta_front);
  }
  save_records(out / "evolve.rec", {rec});
  std::cout << rec.line() << "\n";
}

// ---------------------------------------------------------------------------

// Moves `--config FILE` (anywhere after the subcommand) into `--key value`
// pairs placed right after the subcommand, so explicit flags override it.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  for (std::size_t i = 1; i + 1 < args.size(); ++i) {
    if (args[i] != "--config") continue;
    const auto kv = read_key_values(args[i + 1]);
    args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
    std::vector<std::string> ins;
    for (const auto& [k, v] : kv) {
      if (k == "command" || k == "version") continue;
      if (v.empty()) continue;
      ins.push_back("--" + k);
      ins.push_back(v);
    }
    args.insert(args.begin() + 1, ins.begin(), ins.end());
    break;
  }
  return args;
}

fs::path resolve_out(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("PLSPREAD_OUT"); env && *env) return env;
  return "plspread_out";
}

int run(std::vector<std::string> args);

int replay(const std::string& manifest, const std::string& out) {
  std::string command;
  for (const auto& [k, v] : read_key_values(manifest)) {
    if (k == "command") command = v;
    if (k == "version" && v != PLSPREAD_VERSION) {
      std::cerr << "warning: manifest written by version " << v << ", running " PLSPREAD_VERSION
                << "\n";
    }
  }
  if (command.empty() || command == "replay") throw DomainError("manifest has no command");
  std::vector<std::string> args{command, "--config", manifest};
  if (!out.empty()) {
    args.push_back("--out");
    args.push_back(out);
  }
  return run(args);
}

int run(std::vector<std::string> args) {
  CLI::App app{"Self-similar spreading of power-law thin films"};
  app.require_subcommand(1);
  app.set_version_flag("--version", PLSPREAD_VERSION);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  std::string out_flag;
  ProfileCfg pc;
  ShootCfg sc;
  TwCfg tc;
  EvolveCfg ec;
  std::string manifest;

  auto* cp = app.add_subcommand("profile", "integrate one shot at fixed gamma");
  auto* cs = app.add_subcommand("shoot", "shoot for gamma over a theta list");
  auto* ct = app.add_subcommand("tw", "traveling-wave phase portrait and classification");
  auto* ce = app.add_subcommand("evolve", "evolve a drop with the PDE solver");
  auto* cr = app.add_subcommand("replay", "re-run a manifest");
  pc.bind(cp);
  sc.bind(cs);
  tc.bind(ct);
  ec.bind(ce);
  cr->add_option("manifest", manifest, "manifest.txt of an earlier run")->required();
  for (auto* c : {cp, cs, ct, ce, cr}) c->add_option("--out", out_flag, "output directory");

  try {
    args = expand_config(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadConfig;
  }

  if (cr->parsed()) return replay(manifest, out_flag);
  const fs::path out = resolve_out(out_flag);
  fs::create_directories(out);
  if (cp->parsed()) {
    write_manifest(out, "profile", pc.pairs());
    run_profile(pc, out);
  } else if (cs->parsed()) {
    write_manifest(out, "shoot", sc.pairs());
    run_shoot(sc, out);
  } else if (ct->parsed()) {
    write_manifest(out, "tw", tc.pairs());
    run_tw(tc, out);
  } else {
    write_manifest(out, "evolve", ec.pairs());
    run_evolve(ec, out);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(std::vector<std::string>(argv + 1, argv + argc));
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n" << e.trace();
    return kNoConvergence;
  } catch (const SolverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNoConvergence;
  } catch (const DomainError& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kBadConfig;
  } catch (const UnsupportedRegime& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kBadConfig;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumeric;
  }
}
