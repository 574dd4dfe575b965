// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "burgers/experiments.hpp"
#include "burgers/initial_data.hpp"
#include "burgers/line_shock.hpp"
#include "burgers/maximizer.hpp"
#include "burgers/periodic_solver.hpp"
#include "burgers/selfsimilar.hpp"

using namespace burgers;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double time_limit, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = dt < time_limit;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::printf("criterion %2d: %s  %s | %s | %.2f s (limit %.0f s)\n", id, pass ? "PASS" : "FAIL",
              name, o.detail.c_str(), dt, time_limit);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// Non-uniform three-point derivative at the middle node.
double central(double t0, double t1, double t2, double f0, double f1, double f2) {
  const double h1 = t1 - t0, h2 = t2 - t1;
  return -h2 / (h1 * (h1 + h2)) * f0 + (h2 - h1) / (h1 * h2) * f1 + h1 / (h2 * (h1 + h2)) * f2;
}

SolverConfig oracle_config() {
  SolverConfig c;
  c.n_modes = 1024;
  c.t_end = 0.05;
  c.cfl_coefficient = 0.125;
  for (int i = 1; i <= 10; ++i) c.snapshot_times.push_back(0.005 * i);
  return c;
}

std::vector<SweepRecord> sweep(const LPolicy& policy) {
  SweepSpec s;
  s.policy = policy;
  s.k_list = {8, 16, 32};
  s.n_per_k = 64;
  s.solver.n_modes = 1024;
  s.solver.t_end = 0.05;
  s.jobs = 3;
  return run_sweep(s);
}

std::vector<SweepRecord> sweep_log, sweep_lk;

}  // namespace

int main() {
  const auto u0_55 = sample(DataFamily::general(5, 5), PeriodicGrid(1024));
  Trajectory tr55;

  criterion(1, "solver vs Cole-Hopf oracle, (k,l)=(5,5), n=1024, t in [0,0.05]", 10, [&] {
    tr55 = integrate(u0_55, oracle_config());
    double worst = 0.0;
    for (const auto& s : tr55.snapshots)
      worst = std::max(worst, sup_distance(s.field, cole_hopf_periodic(u0_55, s.t, 1024)));
    return Outcome{worst <= 1e-7 && tr55.snapshots.size() >= 10,
                   fmt("sup discrepancy %.3e (tol 1e-7)", worst)};
  });

  criterion(2, "enstrophy and energy balance along the same trajectory", 10, [&] {
    if (tr55.diagnostics.empty()) tr55 = integrate(u0_55, oracle_config());
    const auto& d = tr55.diagnostics;
    const auto& t = tr55.times;
    double rmax = 0.0;
    for (const auto& x : d) rmax = std::max(rmax, std::abs(x.rate_R));
    double eE = 0.0, eK = 0.0;
    for (std::size_t i = 1; i + 1 < d.size(); ++i) {
      const double dE = central(t[i - 1], t[i], t[i + 1], d[i - 1].enstrophy_E, d[i].enstrophy_E,
                                d[i + 1].enstrophy_E);
      const double dK = central(t[i - 1], t[i], t[i + 1], d[i - 1].energy_K, d[i].energy_K,
                                d[i + 1].energy_K);
      eE = std::max(eE, std::abs(dE - d[i].rate_R) / rmax);
      eK = std::max(eK, std::abs(dK + 2 * d[i].enstrophy_E) / (2 * d[i].enstrophy_E));
    }
    return Outcome{eE <= 1e-4 && eK <= 1e-4,
                   fmt("dE/dt vs R %.3e", eE) + fmt(", dK/dt vs -2E %.3e (tol 1e-4)", eK)};
  });

  criterion(3, "a=4 half-line shock: E -> 2/3, R -> 0, decay ratio e^-3", 5, [] {
    const auto sol = LineShockSolution::closed_a4();
    bool monotone = true;
    double prev = -1.0;
    HalfLineDiagnostics last;
    for (double tau = 0.0; tau <= 20.0 + 1e-12; tau += 0.5) {
      last = halfline_diagnostics(sol, tau);
      if (!(last.E > prev)) monotone = false;
      prev = last.E;
    }
    auto sup_dev = [&](double tau) {
      double m = 0.0;
      for (double xi = 0.0; xi <= 40.0; xi += 0.01)
        m = std::max(m, std::abs(sol.w(xi, tau) - std::tanh(xi)));
      return m;
    };
    const double ratio = sup_dev(12.0) / sup_dev(8.0);
    const double rel = std::abs(ratio / std::exp(-3.0) - 1.0);
    const bool ok = monotone && std::abs(last.E - 2.0 / 3.0) <= 1e-6 && std::abs(last.R) <= 1e-6 &&
                    rel <= 0.1;
    return Outcome{ok, std::string(monotone ? "monotone" : "NOT monotone") +
                           fmt(", |E(20)-2/3| %.2e", std::abs(last.E - 2.0 / 3.0)) +
                           fmt(", |R(20)| %.2e", std::abs(last.R)) +
                           fmt(", ratio/e^-3 - 1 = %.3f", ratio / std::exp(-3.0) - 1.0)};
  });

  criterion(4, "initial half-line enstrophy 2/(3a), a in {4,10,40}", 60, [] {
    double worst = 0.0;
    for (double a : {4.0, 10.0, 40.0})
      worst = std::max(worst, std::abs(halfline_diagnostics(LineShockSolution::general({a, 1e-10}), 0.0).E -
                                       2.0 / (3.0 * a)));
    return Outcome{worst <= 1e-8, fmt("max |E0 - 2/(3a)| %.3e (tol 1e-8)", worst)};
  });

  criterion(5, "maximizer asymptotics, E in {1e3,1e4,1e5}", 30, [] {
    std::string detail;
    bool ok = true;
    double prev_r = INFINITY, prev_k = INFINITY;
    MaximizerSolution last;
    for (double E : {1e3, 1e4, 1e5}) {
      last = solve_maximizer(E);
      const double dr = std::abs(last.R / std::pow(E, 5.0 / 3.0) - kSharpRateConstant);
      const double dk = std::abs(last.K / std::pow(E, 2.0 / 3.0) - kSharpEnergyConstant);
      ok = ok && dr <= 0.05 && dk <= 0.05 && dr < prev_r && dk < prev_k;
      prev_r = dr;
      prev_k = dk;
      detail += fmt("E=%.0e:", E) + fmt(" k=%.3f", last.k) +
                fmt(" |R/E^(5/3)-0.990578|=%.4f", dr) + fmt(" |K/E^(2/3)-0.550321|=%.4f; ", dk);
    }
    const PeriodicGrid g(detail::diagnostic_grid_size(last.k));
    const double sup = sup_distance(last.u_field(g), asymptotic_profile(last.k, g));
    ok = ok && sup <= 1e-5;
    detail += fmt("sup|u*-4k(2x-tanh kx)| at 1e5 = %.2e", sup);
    return Outcome{ok, detail};
  });

  criterion(6, "Poincare-ratio maximum", 2, [] {
    const auto m = maximize_F();
    const bool ok = std::abs(m.l0 - 3.0) <= 0.1 && std::abs(m.F0 - 0.025297) <= 5e-6 &&
                    m.F0 < kPoincareConstant;
    return Outcome{ok, fmt("l0 = %.6f", m.l0) + fmt(", F0 = %.8f", m.F0) +
                           fmt(" < 1/(4pi^2) = %.8f", kPoincareConstant)};
  });

  criterion(7, "constant N", 1, [] {
    const double N = constant_N();
    return Outcome{std::abs(N - 5.5189) <= 5e-4, fmt("N = %.8f (target 5.5189 +- 5e-4)", N)};
  });

  criterion(8, "scaling sweep l = k, k in {8,16,32}", 600, [] {
    sweep_lk = sweep(LPolicy::equals_k());
    std::vector<double> a, b, c;
    std::string detail;
    for (const auto& r : sweep_lk) {
      if (!r.ok()) return Outcome{false, "record k=" + std::to_string(r.k) + " failed: " + r.error};
      const double E = r.E0, L = std::log(E);
      a.push_back(r.T_star * std::pow(E, 2.0 / 3.0) / L);
      b.push_back(r.E_star / E);
      c.push_back(r.K_star * std::pow(E, -2.0 / 3.0));
      detail += fmt("k=%.0f:", r.k) + fmt(" T*=%.4e", r.T_star) + fmt(" E*/E=%.3f; ", r.E_star / E);
    }
    const double sa = spread(a), sb = spread(b), sc = spread(c);
    detail += fmt("spreads T*E^(2/3)/logE %.3f", sa) + fmt(", E*/E %.3f", sb) +
              fmt(", K*E^(-2/3) %.3f (tol 3)", sc);
    return Outcome{sa <= 3 && sb <= 3 && sc <= 3, detail};
  });

  criterion(9, "scaling sweep l = 4 log k, k in {8,16,32}", 600, [] {
    sweep_log = sweep(LPolicy::log(3.0));
    std::vector<double> a, b, x, y;
    std::string detail;
    for (const auto& r : sweep_log) {
      if (!r.ok()) return Outcome{false, "record k=" + std::to_string(r.k) + " failed: " + r.error};
      const double E = r.E0, L = std::log(E);
      a.push_back(r.T_star * std::sqrt(E / L));
      b.push_back(r.E_star * std::pow(E, -1.5) * std::pow(L, 1.5));
      x.push_back(E);
      y.push_back(r.E_star);
    }
    const double sa = spread(a), sb = spread(b);
    const auto f = fit_power_law(x, y, true);
    detail += fmt("spreads T*E^(1/2)/log^(1/2)E %.3f", sa) +
              fmt(", E*E^(-3/2)log^(3/2)E %.3f (tol 3)", sb) +
              fmt("; log-corrected fit exponent %.3f", f.exponent) +
              fmt(" log exponent %.3f (target 1.5 +- 0.2)", f.log_exponent);
    return Outcome{sa <= 3 && sb <= 3 && std::abs(f.exponent - 1.5) <= 0.2, detail};
  });

  criterion(10, "bound audits along every sweep trajectory", 600, [] {
    if (sweep_lk.empty()) sweep_lk = sweep(LPolicy::equals_k());
    if (sweep_log.empty()) sweep_log = sweep(LPolicy::log(3.0));
    TrajectoryAudit worst;
    bool ok = true;
    for (const auto* set : {&sweep_lk, &sweep_log})
      for (const auto& r : *set) {
        if (!r.ok()) {
          ok = false;
          continue;
        }
        ok = ok && r.audit.ok();
        worst.poincare_margin = std::min(worst.poincare_margin, r.audit.poincare_margin);
        worst.rate_margin = std::min(worst.rate_margin, r.audit.rate_margin);
        worst.nonlocal_margin = std::min(worst.nonlocal_margin, r.audit.nonlocal_margin);
        worst.cap_margin = std::min(worst.cap_margin, r.audit.cap_margin);
      }
    return Outcome{ok, fmt("min margins: Poincare %.3f", worst.poincare_margin) +
                           fmt(", R bound %.3f", worst.rate_margin) +
                           fmt(", nonlocal %.3f", worst.nonlocal_margin) +
                           fmt(", cap %.3f", worst.cap_margin)};
  });

  criterion(11, "property suite", 120, [] {
    // Oddness along a trajectory.
    const auto u0 = sample(DataFamily::general(8, 8), PeriodicGrid(1024));
    SolverConfig c;
    c.n_modes = 1024;
    c.t_end = 0.02;
    c.snapshot_times = {0.002, 0.005, 0.01, 0.015};
    double odd = 0.0;
    for (const auto& s : integrate(u0, c).snapshots) odd = std::max(odd, s.field.odd_defect());

    // Closed forms against direct quadrature of the profile.
    double closed = 0.0;
    for (auto [k, l] : {std::pair{10.0, 3.0}, {20.0, 5.0}, {40.0, 8.0}}) {
      const double t = std::tanh(0.5 * l);
      auto ux = [&](double x) { const double ch = std::cosh(l * x); return 4 * k * (2 - l / (ch * ch) / t); };
      auto u = [&](double x) { return 4 * k * (2 * x - std::tanh(l * x) / t); };
      auto uxx = [&](double x) { const double ch = std::cosh(l * x); return 8 * k * l * l * std::tanh(l * x) / (ch * ch) / t; };
      QuadOptions o;
      o.abs_tol = 0.0;
      o.rel_tol = 1e-13;
      const std::vector<double> pts{-0.5, -0.25, 0.0, 0.25, 0.5};
      const double K = 0.5 * integrate_breakpoints<double>([&](double x) { return u(x) * u(x); }, pts, o).value;
      const double E = 0.5 * integrate_breakpoints<double>([&](double x) { return ux(x) * ux(x); }, pts, o).value;
      const double R = -integrate_breakpoints<double>(
          [&](double x) { const double a = ux(x), b = uxx(x); return b * b + a * a * a; }, pts, o).value;
      const auto ke = closed_form_KE(k, l);
      closed = std::max({closed, std::abs(ke.K0 / K - 1), std::abs(ke.E0 / E - 1),
                         std::abs(closed_form_R(k, l) / R - 1)});
    }

    // Euler-Lagrange residual of the maximizer.
    const auto s = solve_maximizer(5e3);
    CnoidalTable tab(s.orbit, 1000, 10);
    double el = 0.0, scale = 6 * s.E;
    const double k = s.k;
    for (int i = 0; i <= tab.cells(); ++i) {
      const double y = tab.y_node(i);
      const double v = s.a_plus - 4 * k * k * y;
      const double vxx = -4 * std::pow(k, 4) * (4 * y - 6 * y * y);
      scale = std::max(scale, 3 * v * v);
      el = std::max(el, std::abs(2 * vxx - 3 * v * v - 2 * s.lambda * v + 6 * s.E));
    }
    el /= scale;

    // Map round trip.
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ux(-0.5, 0.5), ut(0.0, 0.2), uk(1.0, 50.0);
    double trip = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double kk = uk(rng), x = ux(rng), t = ut(rng);
      const auto f = map_forward(kk, x, t);
      const auto b = map_inverse(kk, f.xi, f.tau);
      trip = std::max({trip, std::abs(b.x - x), std::abs(b.t - t)});
    }

    // Fit recovery.
    std::vector<double> xs{3, 10, 30, 100, 1000}, ys;
    for (double x : xs) ys.push_back(2.0 * std::pow(x, 1.5) * std::pow(std::log(x), -1.5));
    const auto fr = fit_power_law(xs, ys, true);
    const double fit = std::max({std::abs(fr.exponent - 1.5), std::abs(fr.log_exponent + 1.5),
                                 std::abs(fr.prefactor - 2.0)});

    const bool ok = odd <= 1e-9 && closed <= 1e-6 && el <= 1e-7 && trip <= 1e-12 && fit <= 1e-10;
    return Outcome{ok, fmt("oddness %.2e", odd) + fmt(", closed forms %.2e", closed) +
                           fmt(", Euler-Lagrange %.2e", el) + fmt(", round trip %.2e", trip) +
                           fmt(", fit %.2e", fit)};
  });

  std::printf("acceptance: %d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
