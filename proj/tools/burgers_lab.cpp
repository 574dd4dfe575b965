#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "burgers/experiments.hpp"
#include "burgers/initial_data.hpp"
#include "burgers/io.hpp"
#include "burgers/line_shock.hpp"
#include "burgers/maximizer.hpp"
#include "burgers/periodic_solver.hpp"
#include "burgers/selfsimilar.hpp"

using namespace burgers;
using json = nlohmann::json;

namespace {

void print_json(const json& j) { std::cout << j.dump(2) << '\n'; }

void write_json(const std::string& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw ValidationError("cannot open " + path + " for writing");
  os << j.dump(2) << '\n';
}

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

json peak_json(const PeakResult& p) {
  return {{"t_star", p.t_star}, {"E_star", p.e_star}, {"K_star", p.k_star},
          {"K_drop", p.k_drop}, {"E0", p.e0},         {"K0", p.k0},
          {"R0", p.r0}};
}

DataFamily make_family(double k, double l, bool instant) {
  return instant ? DataFamily::instant(k) : DataFamily::general(k, l > 0.0 ? l : k);
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  double k = 0.0, l = 0.0, t_end = 0.02, cfl = 0.5;
  int n = 1024;
  bool instant = false;
  std::string out = "trajectory.csv";
  std::string summary;
  std::vector<double> snapshots;
  std::string snapshot_prefix = "snapshot";
};

void run_simulate(const SimulateArgs& a) {
  const auto u0 = sample(make_family(a.k, a.l, a.instant), PeriodicGrid(a.n));
  SolverConfig cfg;
  cfg.n_modes = a.n;
  cfg.t_end = a.t_end;
  cfg.cfl_coefficient = a.cfl;
  cfg.snapshot_times = a.snapshots;
  cfg.validate();
  const auto tr = integrate(u0, cfg);
  {
    auto os = io::open_out(a.out);
    write_trajectory_csv(os, tr);
  }
  for (std::size_t i = 0; i < a.snapshots.size() && i < tr.snapshots.size(); ++i) {
    auto os = io::open_out(a.snapshot_prefix + "_" + std::to_string(i) + ".csv");
    write_snapshot_csv(os, tr.snapshots[i].field);
  }
  json j;
  j["trajectory"] = a.out;
  j["steps"] = tr.steps;
  j["outputs"] = tr.times.size();
  const auto peak = find_enstrophy_peak(u0, cfg);
  j["peak"] = peak_json(peak);
  if (!a.summary.empty()) write_json(a.summary, j);
  print_json(j);
}

// ---------------------------------------------------------------- oracle

struct OracleArgs {
  double k = 0.0, l = 0.0, t = 0.0;
  int n = 1024;
  bool instant = false, compare = false;
  std::string out = "oracle.csv";
};

void run_oracle(const OracleArgs& a) {
  const auto u0 = sample(make_family(a.k, a.l, a.instant), PeriodicGrid(a.n));
  const auto u = cole_hopf_periodic(u0, a.t, a.n);
  {
    auto os = io::open_out(a.out);
    write_snapshot_csv(os, u);
  }
  const auto d = diagnose(u, a.t);
  json j{{"t", a.t}, {"K", d.energy_K}, {"E", d.enstrophy_E}, {"R", d.rate_R}, {"field", a.out}};
  if (a.compare && a.t > 0.0) {
    SolverConfig cfg;
    cfg.n_modes = a.n;
    cfg.t_end = a.t;
    const auto tr = integrate(u0, cfg);
    j["sup_discrepancy"] = sup_distance(tr.snapshots.back().field, u);
  }
  print_json(j);
}

// ---------------------------------------------------------------- maximize

struct MaximizeArgs {
  double E = 0.0;
  int n = 0;
  std::string out = "maximizer.csv";
};

void run_maximize(const MaximizeArgs& a) {
  const auto s = solve_maximizer(a.E);
  const int n = a.n > 0 ? a.n : detail::diagnostic_grid_size(s.k);
  const PeriodicGrid g(n);
  const auto [u, v] = s.sample(g);
  io::write_csv(a.out, {"x", "u", "v"}, {g.points(), u.values(), v.values()});
  const auto ex = check_expansions(s);
  print_json({{"target_E", s.target_E},
              {"k", s.k},
              {"lambda", s.lambda},
              {"a_plus", s.a_plus},
              {"a_minus", s.a_minus},
              {"c", s.orbit.c},
              {"K", s.K},
              {"E", s.E},
              {"R", s.R},
              {"R_over_E53", s.R / std::pow(s.E, 5.0 / 3.0)},
              {"K_over_E23", s.K / std::pow(s.E, 2.0 / 3.0)},
              {"sup_distance_asymptotic", sup_distance(u, asymptotic_profile(s.k, g))},
              {"bracket_sign_changes", s.bracket_sign_changes},
              {"expansion_residuals",
               {{"K", ex.K_residual}, {"E", ex.E_residual}, {"R", ex.R_residual},
                {"z_sup", ex.z_sup_error}}},
              {"profile", a.out}});
}

// ---------------------------------------------------------------- family

struct FamilyArgs {
  double k = 0.0, l = 0.0;
  int n = 4096;
  bool instant = false;
  std::string out = "family.csv";
};

void run_family(const FamilyArgs& a) {
  const auto f = make_family(a.k, a.l, a.instant);
  const PeriodicGrid g(a.n);
  const auto u = sample(f, g);
  io::write_csv(a.out, {"x", "u0"}, {g.points(), u.values()});
  const auto ke = closed_form_KE(f.k, f.l);
  const auto c = check_closed_forms(f.k, f.l, g);
  const auto d = diagnose(u);
  print_json({{"k", f.k},
              {"l", f.l},
              {"closed_form", {{"K0", ke.K0}, {"E0", ke.E0}, {"R0", closed_form_R(f.k, f.l)}}},
              {"grid", {{"K0", d.energy_K}, {"E0", d.enstrophy_E}, {"R0", d.rate_R}}},
              {"relative_difference", {{"K", c.K_rel}, {"E", c.E_rel}, {"R", c.R_rel}}},
              {"formula_discrepancy", c.formula_discrepancy},
              {"profile", a.out}});
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
  std::string policy = "l_equals_k";
  double delta = 3.0, l_value = 5.0, n_per_k = 64.0, t_end = 0.05, cfl = 0.5, c0 = 0.5;
  int n_min = 256, jobs = 1;
  std::vector<double> k_list{8, 16, 32};
  std::string out = "sweep.csv";
};

LPolicy policy_from(const SweepArgs& a) {
  if (a.policy == "l_log") return LPolicy::log(a.delta);
  if (a.policy == "l_fixed") return LPolicy::fixed(a.l_value);
  return LPolicy::equals_k();
}

void run_sweep_cmd(const SweepArgs& a) {
  SweepSpec spec;
  spec.policy = policy_from(a);
  spec.k_list = a.k_list;
  spec.n_per_k = a.n_per_k;
  spec.jobs = a.jobs;
  spec.c0 = a.c0;
  spec.output_path = a.out;
  spec.solver.n_modes = a.n_min;
  spec.solver.t_end = a.t_end;
  spec.solver.cfl_coefficient = a.cfl;
  const auto recs = run_sweep(spec);
  json rows = json::array();
  bool all_ok = true;
  for (const auto& r : recs) {
    json row{{"k", r.k}, {"l", r.l}, {"n", r.n}};
    if (r.ok()) {
      row["E0"] = r.E0;
      row["T_star"] = r.T_star;
      row["E_star"] = r.E_star;
      row["K_star"] = r.K_star;
      row["audit"] = {{"poincare", r.audit.poincare_margin},
                      {"rate", r.audit.rate_margin},
                      {"nonlocal", r.audit.nonlocal_margin},
                      {"cap", r.audit.cap_margin},
                      {"ok", r.audit.ok()}};
    } else {
      row["error"] = r.error;
      all_ok = false;
    }
    rows.push_back(row);
  }
  print_json({{"policy", spec.policy.name()}, {"records", rows}, {"csv", a.out}});
  if (!all_ok) throw NumericError("sweep: some records failed");
}

// ---------------------------------------------------------------- fit

struct FitArgs {
  std::string in = "sweep.csv", x = "E0", y = "Estar", out;
  bool log_correction = false;
};

std::map<std::string, std::vector<double>> read_columns(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ValidationError("cannot open " + path);
  std::string line;
  if (!std::getline(is, line)) throw ValidationError(path + " is empty");
  std::vector<std::string> names;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) names.push_back(cell);
  }
  std::map<std::string, std::vector<double>> cols;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (!std::getline(ss, cell, ',')) throw ValidationError(path + ": short row");
      cols[names[i]].push_back(std::stod(cell));
    }
  }
  return cols;
}

void run_fit(const FitArgs& a) {
  auto cols = read_columns(a.in);
  if (!cols.count(a.x) || !cols.count(a.y))
    throw ValidationError("fit: columns '" + a.x + "' and '" + a.y + "' must exist in " + a.in);
  const auto f = fit_power_law(cols[a.x], cols[a.y], a.log_correction);
  json j{{"exponent", f.exponent},
         {"log_exponent", f.log_exponent},
         {"prefactor", f.prefactor},
         {"rms_residual", f.rms_residual}};
  if (!a.out.empty()) write_json(a.out, j);
  print_json(j);
}

// ---------------------------------------------------------------- constants

void run_constants() {
  const auto F = maximize_F();
  auto line = [](const char* name, double v) { std::printf("%-28s %.8f\n", name, v); };
  line("F(l0)", F.F0);
  line("l0", F.l0);
  line("1/(4 pi^2)", kPoincareConstant);
  line("N", constant_N());
  line("3^(5/3)/(5 2^(1/3))", kSharpRateConstant);
  line("6^(-1/3)", kSharpEnergyConstant);
}

// ---------------------------------------------------------------- figures

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

void emit(const std::string& dir, const std::string& stem, const std::string& title,
          const std::string& xlabel, const std::string& ylabel,
          const std::vector<std::string>& header, const std::vector<std::vector<double>>& cols,
          std::vector<io::Series> series, std::vector<std::string>& written) {
  io::write_csv(join(dir, stem + ".csv"), header, cols);
  io::write_svg(join(dir, stem + ".svg"), title, xlabel, ylabel, series);
  written.push_back(stem + ".csv");
  written.push_back(stem + ".svg");
}

void figure1(const std::string& dir, std::vector<std::string>& written) {
  const PeriodicGrid g(1024);
  const auto inst = sample(DataFamily::instant(20), g);
  const auto gen = sample(DataFamily::general(20, 5), g);
  emit(dir, "fig1_initial_data", "Initial data, k = 20", "x", "u0", {"x", "instant", "general_l5"},
       {g.points(), inst.values(), gen.values()},
       {{"l = k", g.points(), inst.values(), true}, {"l = 5", g.points(), gen.values(), false}},
       written);
}

void shock_figure(const std::string& dir, const std::string& prefix, const LineShockSolution& sol,
                  const std::vector<double>& taus, double tau_max, bool with_rate,
                  std::vector<std::string>& written) {
  const auto xi = linspace(-20, 20, 401);
  std::vector<std::string> header{"xi"};
  std::vector<std::vector<double>> cols{xi};
  std::vector<io::Series> series;
  for (double tau : taus) {
    std::vector<double> w;
    for (double x : xi) w.push_back(sol.w(x, tau));
    std::ostringstream name;
    name << "w_tau" << tau;
    header.push_back(name.str());
    cols.push_back(w);
    series.push_back({"tau = " + name.str().substr(5), xi, w, false});
  }
  std::vector<double> inf;
  for (double x : xi) inf.push_back(std::tanh(x));
  header.push_back("w_inf");
  cols.push_back(inf);
  series.push_back({"tau = inf", xi, inf, true});
  emit(dir, prefix + "_profiles", "Line shock profiles", "xi", "w", header, cols, series, written);

  const auto tau = linspace(0, tau_max, 81);
  std::vector<double> E, R;
  for (double t : tau) {
    const auto d = halfline_diagnostics(sol, t);
    E.push_back(d.E);
    R.push_back(d.R);
  }
  const std::vector<double> einf(tau.size(), 2.0 / 3.0);
  emit(dir, prefix + "_enstrophy", "Enstrophy E(tau)", "tau", "E", {"tau", "E"}, {tau, E},
       {{"E", tau, E, false}, {"E at tanh", tau, einf, true}}, written);
  if (with_rate)
    emit(dir, prefix + "_rate", "Rate R(tau)", "tau", "R", {"tau", "R"}, {tau, R},
         {{"R", tau, R, false}}, written);
}

void f_scan(const std::string& dir, std::vector<std::string>& written) {
  const auto l = linspace(0.5, 10, 191);
  std::vector<double> F;
  for (double v : l) F.push_back(poincare_ratio_F(v));
  const std::vector<double> bound(l.size(), kPoincareConstant);
  emit(dir, "Fscan", "F(l) = K~(l) / E~(l)", "l", "F", {"l", "F"}, {l, F},
       {{"F", l, F, false}, {"1/(4 pi^2)", l, bound, true}}, written);

  const auto lr = linspace(1, 40, 157);
  std::vector<std::string> header{"l"};
  std::vector<std::vector<double>> cols{lr};
  std::vector<io::Series> series;
  for (double k : {10.0, 20.0, 40.0}) {
    std::vector<double> R;
    for (double v : lr) R.push_back(closed_form_R(k, v));
    std::ostringstream name;
    name << "R_k" << k;
    header.push_back(name.str());
    cols.push_back(R);
    series.push_back({"k = " + name.str().substr(3), lr, R, false});
  }
  emit(dir, "Rscan", "R(u0) versus l", "l", "R", header, cols, series, written);
}

void run_figures(const std::string& which, const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> written;
  const bool all = which == "all";
  if (all || which == "fig1") figure1(dir, written);
  if (all || which == "fig2")
    shock_figure(dir, "fig2", LineShockSolution::closed_a4(), {0, 1, 2, 4, 8}, 20, true, written);
  if (all || which == "fig3")
    shock_figure(dir, "fig3", LineShockSolution::general({10.0, 1e-10}), {0, 5, 20, 80}, 100,
                 false, written);
  if (all || which == "F-scan") f_scan(dir, written);
  print_json({{"directory", dir}, {"files", written}});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical laboratory for enstrophy growth in the viscous Burgers equation"};
  app.set_config("--config", "", "INI configuration file with one section per subcommand (flags take precedence)");
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Integrate the periodic problem for a data family");
  c_sim->add_option("--k", sim.k, "Amplitude parameter")->required()->check(CLI::PositiveNumber);
  c_sim->add_option("--l", sim.l, "Shock width parameter (default: k)")->check(CLI::NonNegativeNumber);
  c_sim->add_flag("--instant", sim.instant, "Use the l = k family");
  c_sim->add_option("--n", sim.n, "Grid size (power of two)")->capture_default_str();
  c_sim->add_option("--t-end", sim.t_end, "Final time")->check(CLI::PositiveNumber)->capture_default_str();
  c_sim->add_option("--cfl", sim.cfl, "CFL coefficient")->capture_default_str();
  c_sim->add_option("--out", sim.out, "Trajectory CSV")->capture_default_str();
  c_sim->add_option("--summary", sim.summary, "Also write the JSON summary here");
  c_sim->add_option("--snapshots", sim.snapshots, "Snapshot times")->delimiter(',');
  c_sim->add_option("--snapshot-prefix", sim.snapshot_prefix, "Snapshot CSV prefix")->capture_default_str();

  OracleArgs ora;
  auto* c_ora = app.add_subcommand("oracle", "Cole-Hopf solution of the periodic problem");
  c_ora->add_option("--k", ora.k, "Amplitude parameter")->required()->check(CLI::PositiveNumber);
  c_ora->add_option("--l", ora.l, "Shock width parameter (default: k)")->check(CLI::NonNegativeNumber);
  c_ora->add_flag("--instant", ora.instant, "Use the l = k family");
  c_ora->add_option("--n", ora.n, "Grid size (power of two)")->capture_default_str();
  c_ora->add_option("--t", ora.t, "Time")->required()->check(CLI::NonNegativeNumber);
  c_ora->add_flag("--compare", ora.compare, "Also run the solver and report the sup discrepancy");
  c_ora->add_option("--out", ora.out, "Field CSV")->capture_default_str();

  MaximizeArgs mx;
  auto* c_mx = app.add_subcommand("maximize", "Maximizer of R at fixed enstrophy");
  c_mx->add_option("--E", mx.E, "Target enstrophy")->required()->check(CLI::PositiveNumber);
  c_mx->add_option("--n", mx.n, "Export grid size (default: 64 k rounded up)");
  c_mx->add_option("--out", mx.out, "Profile CSV")->capture_default_str();

  FamilyArgs fam;
  auto* c_fam = app.add_subcommand("family", "Sample a data family and check its closed forms");
  c_fam->add_option("--k", fam.k, "Amplitude parameter")->required()->check(CLI::PositiveNumber);
  c_fam->add_option("--l", fam.l, "Shock width parameter (default: k)")->check(CLI::NonNegativeNumber);
  c_fam->add_flag("--instant", fam.instant, "Use the l = k family");
  c_fam->add_option("--n", fam.n, "Grid size (power of two)")->capture_default_str();
  c_fam->add_option("--out", fam.out, "Profile CSV")->capture_default_str();

  SweepArgs sw;
  auto* c_sw = app.add_subcommand("sweep", "Peak-enstrophy sweep over k");
  c_sw->add_option("--policy", sw.policy, "l policy")
      ->check(CLI::IsMember({"l_equals_k", "l_log", "l_fixed"}))
      ->capture_default_str();
  c_sw->add_option("--delta", sw.delta, "Delta for l_log")->check(CLI::PositiveNumber)->capture_default_str();
  c_sw->add_option("--l-value", sw.l_value, "l for l_fixed")->check(CLI::PositiveNumber)->capture_default_str();
  c_sw->add_option("--k-list", sw.k_list, "Increasing k values")->delimiter(',')->check(CLI::PositiveNumber);
  c_sw->add_option("--c0", sw.c0, "Time fraction checked under l_log")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  c_sw->add_option("--n-per-k", sw.n_per_k, "Grid points per unit k")->capture_default_str();
  c_sw->add_option("--n-min", sw.n_min, "Smallest grid size")->capture_default_str();
  c_sw->add_option("--t-end", sw.t_end, "Initial search horizon")->check(CLI::PositiveNumber)->capture_default_str();
  c_sw->add_option("--cfl", sw.cfl, "CFL coefficient")->capture_default_str();
  c_sw->add_option("--jobs", sw.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  c_sw->add_option("--out", sw.out, "Sweep CSV")->capture_default_str();

  FitArgs fit;
  auto* c_fit = app.add_subcommand("fit", "Power-law fit between two sweep columns");
  c_fit->add_option("--in", fit.in, "Sweep CSV")->capture_default_str();
  c_fit->add_option("--x", fit.x, "Abscissa column")->capture_default_str();
  c_fit->add_option("--y", fit.y, "Ordinate column")->capture_default_str();
  c_fit->add_flag("--log-correction", fit.log_correction, "Include a log log x term");
  c_fit->add_option("--out", fit.out, "Also write the JSON result here");

  auto* c_const = app.add_subcommand("constants", "Print the scalar constants");

  std::string which = "all", dir = "figures";
  auto* c_fig = app.add_subcommand("figures", "Emit figure data (CSV) and plots (SVG)");
  c_fig->add_option("--which", which, "Figure id")
      ->check(CLI::IsMember({"fig1", "fig2", "fig3", "F-scan", "all"}))
      ->capture_default_str();
  c_fig->add_option("--out-dir", dir, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (c_sim->parsed()) run_simulate(sim);
    else if (c_ora->parsed()) run_oracle(ora);
    else if (c_mx->parsed()) run_maximize(mx);
    else if (c_fam->parsed()) run_family(fam);
    else if (c_sw->parsed()) run_sweep_cmd(sw);
    else if (c_fit->parsed()) run_fit(fit);
    else if (c_const->parsed()) run_constants();
    else if (c_fig->parsed()) run_figures(which, dir);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
  return 0;
}
