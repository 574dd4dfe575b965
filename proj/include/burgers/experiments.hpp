#pragma once

// Scaling sweeps over the initial-data families, power-law fits, the constant N
// and the integral-bound audits along trajectories.

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "errors.hpp"
#include "field.hpp"
#include "initial_data.hpp"
#include "line_shock.hpp"
#include "periodic_solver.hpp"
#include "quadrature.hpp"
#include "selfsimilar.hpp"

namespace burgers {

struct TrajectoryAudit {
  // Margins are relative slacks; positive means the bound holds strictly.
  double poincare_margin = std::numeric_limits<double>::infinity();
  double rate_margin = std::numeric_limits<double>::infinity();
  double nonlocal_margin = std::numeric_limits<double>::infinity();
  double cap_margin = std::numeric_limits<double>::infinity();
  std::size_t samples = 0;
  bool ok() const {
    return poincare_margin > 0.0 && rate_margin > 0.0 && nonlocal_margin > 0.0 &&
           cap_margin > 0.0;
  }
};

/// Poincare and R <= (3/2) E^{5/3} at each output, and for t > 0
/// E^{1/3}(t) - E^{1/3}(0) <= (K(0) - K(t)) / 4 and E(t) <= (E0^{1/3} + E0 / (16 pi^2))^3.
inline TrajectoryAudit audit_integral_bound(const Trajectory& tr) {
  TrajectoryAudit a;
  if (tr.diagnostics.empty()) return a;
  const auto& d0 = tr.diagnostics.front();
  const double E0 = d0.enstrophy_E, K0 = d0.energy_K;
  const double cap = std::pow(std::cbrt(E0) + E0 / (16.0 * kPi * kPi), 3);
  for (std::size_t i = 0; i < tr.diagnostics.size(); ++i) {
    const auto& d = tr.diagnostics[i];
    if (d.enstrophy_E <= 0.0) continue;
    ++a.samples;
    a.poincare_margin = std::min(a.poincare_margin, 1.0 - d.energy_K / (kPoincareConstant * d.enstrophy_E));
    a.rate_margin = std::min(
        a.rate_margin, 1.0 - d.rate_R / (kRateBoundConstant * std::pow(d.enstrophy_E, 5.0 / 3.0)));
    if (i == 0) continue;
    const double lhs = std::cbrt(d.enstrophy_E) - std::cbrt(E0);
    const double rhs = 0.25 * (K0 - d.energy_K);
    a.nonlocal_margin = std::min(a.nonlocal_margin, (rhs - lhs) / std::max(rhs, 1e-300));
    a.cap_margin = std::min(a.cap_margin, 1.0 - d.enstrophy_E / cap);
  }
  return a;
}

struct SweepSpec {
  LPolicy policy = LPolicy::equals_k();
  std::vector<double> k_list;
  SolverConfig solver;
  double n_per_k = 64.0;
  std::string output_path;  // empty: no persistence
  int jobs = 1;
  // Time fraction C0 checked against c0_star(k, shock_a, shock_delta) under l_log.
  double c0 = 0.5;
  double shock_a = 16.0;
  double shock_delta = 0.5;

  void validate() const {
    if (k_list.empty()) throw ValidationError("SweepSpec: k_list is empty");
    for (std::size_t i = 0; i < k_list.size(); ++i) {
      if (!(k_list[i] > 1.0)) throw ValidationError("SweepSpec: k values must exceed 1");
      if (i > 0 && !(k_list[i] > k_list[i - 1]))
        throw ValidationError("SweepSpec: k_list must be increasing");
    }
    if (!(n_per_k > 0.0)) throw ValidationError("SweepSpec: n_per_k must be positive");
    if (jobs < 1) throw ValidationError("SweepSpec: jobs must be >= 1");
    if (!(c0 > 0.0 && c0 < 1.0)) throw ValidationError("SweepSpec: c0 must lie in (0, 1)");
    if (!(shock_a > 1.0)) throw ValidationError("SweepSpec: shock_a must exceed 1");
    if (!(shock_delta > 0.0)) throw ValidationError("SweepSpec: shock_delta must be positive");
    solver.validate();
  }
};

struct SweepRecord {
  double k = 0.0, l = 0.0;
  double E0 = 0.0, K0 = 0.0;
  double T_star = 0.0, E_star = 0.0, K_star = 0.0, K_drop = 0.0;
  double wall_time = 0.0;
  int n = 0;
  double c0_bound = std::numeric_limits<double>::quiet_NaN();  // set under l_log only
  TrajectoryAudit audit;
  std::string error;
  bool ok() const { return error.empty(); }
};

inline const char* kSweepHeader = "k,l,E0,K0,Tstar,Estar,Kstar,Kdrop,wall_time";

inline void write_sweep_row(std::ostream& os, const SweepRecord& r) {
  os << std::setprecision(17) << r.k << ',' << r.l << ',' << r.E0 << ',' << r.K0 << ','
     << r.T_star << ',' << r.E_star << ',' << r.K_star << ',' << r.K_drop << ',' << r.wall_time
     << '\n';
}

inline int sweep_grid_size(double k, double l, double n_per_k, int floor_n) {
  int n = std::max(64, floor_n);
  while (n < n_per_k * k || n < 32.0 * l) n *= 2;
  return n;
}

/// One record: peak search followed by an audited trajectory over [0, 2 T*].
inline SweepRecord run_sweep_record(double k, const SweepSpec& spec) {
  const auto start = std::chrono::steady_clock::now();
  SweepRecord r;
  r.k = k;
  r.l = spec.policy.l_of(k);
  if (spec.policy.kind == LPolicyKind::l_log) {
    r.c0_bound = c0_star(k, spec.shock_a, spec.shock_delta);
    if (spec.c0 > r.c0_bound)
      warn("sweep record k = " + sci(k) + ": C0 = " + sci(spec.c0) + " exceeds C0* = " +
           sci(r.c0_bound));
  }
  try {
    r.n = sweep_grid_size(k, r.l, spec.n_per_k, spec.solver.n_modes);
    PeriodicGrid g(r.n);
    const auto u0 = sample(DataFamily::general(k, r.l), g);
    SolverConfig cfg = spec.solver;
    cfg.n_modes = r.n;
    cfg.snapshot_times.clear();
    PeakResult peak;
    for (int attempt = 0;; ++attempt) {
      try {
        peak = find_enstrophy_peak(u0, cfg);
        break;
      } catch (const NumericError& e) {
        if (attempt >= 5 || std::string(e.what()).find("boundary") == std::string::npos) throw;
        cfg.t_end *= 2.0;
      }
    }
    r.E0 = peak.e0;
    r.K0 = peak.k0;
    r.T_star = peak.t_star;
    r.E_star = peak.e_star;
    r.K_star = peak.k_star;
    r.K_drop = peak.k_drop;
    SolverConfig audit_cfg = cfg;
    audit_cfg.t_end = peak.t_star > 0.0 ? 2.0 * peak.t_star : cfg.t_end;
    r.audit = audit_integral_bound(integrate(u0, audit_cfg));
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline std::vector<SweepRecord> run_sweep(const SweepSpec& spec) {
  spec.validate();
  const std::size_t count = spec.k_list.size();
  std::vector<SweepRecord> out(count);
  std::mutex io_mutex;
  std::ofstream file;
  if (!spec.output_path.empty()) {
    file.open(spec.output_path);
    if (!file) throw ValidationError("run_sweep: cannot open " + spec.output_path);
    file << kSweepHeader << '\n' << std::flush;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      out[i] = run_sweep_record(spec.k_list[i], spec);
      std::lock_guard<std::mutex> lock(io_mutex);
      if (!out[i].ok()) {
        warn("sweep record k = " + std::to_string(out[i].k) + " failed: " + out[i].error);
      } else if (file) {
        write_sweep_row(file, out[i]);
        file.flush();
      }
    }
  };
  const int jobs = std::min<int>(spec.jobs, static_cast<int>(count));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (file && jobs > 1) {
    // Rows were appended in completion order; rewrite them in k order.
    file.close();
    std::ofstream sorted(spec.output_path);
    sorted << kSweepHeader << '\n';
    for (const auto& r : out)
      if (r.ok()) write_sweep_row(sorted, r);
  }
  return out;
}

inline double record_field(const SweepRecord& r, const std::string& name) {
  if (name == "k") return r.k;
  if (name == "l") return r.l;
  if (name == "E0") return r.E0;
  if (name == "K0") return r.K0;
  if (name == "Tstar") return r.T_star;
  if (name == "Estar") return r.E_star;
  if (name == "Kstar") return r.K_star;
  if (name == "Kdrop") return r.K_drop;
  if (name == "wall_time") return r.wall_time;
  throw ValidationError("unknown record field '" + name + "'");
}

struct FitResult {
  double exponent = 0.0;
  double log_exponent = 0.0;
  double prefactor = 0.0;
  double rms_residual = 0.0;
};

/// Least squares on log y = p log x [+ q log log x] + c.
inline FitResult fit_power_law(const std::vector<double>& x, const std::vector<double>& y,
                               bool with_log_correction) {
  if (x.size() != y.size()) throw ValidationError("fit_power_law: x and y differ in length");
  const std::size_t m = x.size();
  const std::size_t cols = with_log_correction ? 3 : 2;
  if (m < 3) throw ValidationError("fit_power_law: need at least 3 points");
  Eigen::MatrixXd A(m, cols);
  Eigen::VectorXd b(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw ValidationError("fit_power_law: data must be positive");
    if (with_log_correction && !(x[i] > 1.0))
      throw ValidationError("fit_power_law: log correction needs x > 1");
    A(i, 0) = std::log(x[i]);
    if (with_log_correction) A(i, 1) = std::log(std::log(x[i]));
    A(i, cols - 1) = 1.0;
    b(i) = std::log(y[i]);
  }
  const Eigen::VectorXd sol = A.colPivHouseholderQr().solve(b);
  FitResult f;
  f.exponent = sol(0);
  f.log_exponent = with_log_correction ? sol(1) : 0.0;
  f.prefactor = std::exp(sol(cols - 1));
  f.rms_residual = std::sqrt((A * sol - b).squaredNorm() / m);
  return f;
}

inline FitResult fit_power_law(const std::vector<SweepRecord>& records, const std::string& x_field,
                               const std::string& y_field, bool with_log_correction) {
  std::vector<double> x, y;
  for (const auto& r : records) {
    if (!r.ok()) continue;
    x.push_back(record_field(r, x_field));
    y.push_back(record_field(r, y_field));
  }
  return fit_power_law(x, y, with_log_correction);
}

/// max / min of positive values.
inline double spread(const std::vector<double>& v) {
  if (v.empty()) throw ValidationError("spread: empty input");
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  if (!(*lo > 0.0)) throw ValidationError("spread: values must be positive");
  return *hi / *lo;
}

namespace detail {

inline double n_integrand(double xi) {
  const double s = 1.0 / std::cosh(xi);
  const double s2 = s * s;
  const double first = std::cosh(0.5 * xi) * s * s2 * (-28.0 + 139.0 * s2 - 120.0 * s2 * s2);
  // sinh(xi/2) sinh(xi) sech^4 written as sinh(xi/2) tanh(xi) sech^3 to stay finite.
  const double second =
      std::sinh(0.5 * xi) * std::tanh(xi) * s * s2 * (26.0 - 30.0 * s2);
  return first + second;
}

}  // namespace detail

/// The two displayed integrals taken over [0, inf).
inline double constant_N_halfline() {
  QuadOptions opt;
  opt.abs_tol = 1e-12;
  opt.rel_tol = 1e-12;
  std::vector<double> pts{0.0, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 80.0};
  return integrate_breakpoints<double>(detail::n_integrand, pts, opt).value;
}

/// N ~ 5.5189: the integrands are even, and this value is their integral over the whole line.
inline double constant_N() { return 2.0 * constant_N_halfline(); }

}  // namespace burgers
