#pragma once

// Pseudo-spectral integrating-factor RK4 solver for u_t + 2 u u_x = u_xx on the
// unit circle, the exact periodic Cole-Hopf oracle, and the enstrophy-peak finder.

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "field.hpp"
#include "quadrature.hpp"

namespace burgers {

struct SolverConfig {
  int n_modes = 1024;
  double cfl_coefficient = 0.5;
  double t_end = 0.05;
  int output_stride = 1;
  bool dealias = true;
  // Times (ascending, within (0, t_end]) at which the solver lands exactly and stores
  // a snapshot. The final state is always stored.
  std::vector<double> snapshot_times;
  double dt_max = std::numeric_limits<double>::infinity();

  void validate() const {
    if (n_modes < 64 || !is_power_of_two(n_modes))
      throw ValidationError("SolverConfig: n_modes must be a power of two >= 64");
    if (!(cfl_coefficient > 0.0 && cfl_coefficient <= 1.0))
      throw ValidationError("SolverConfig: cfl_coefficient must lie in (0, 1]");
    if (!(t_end > 0.0) || !std::isfinite(t_end))
      throw ValidationError("SolverConfig: t_end must be positive");
    if (output_stride < 1) throw ValidationError("SolverConfig: output_stride must be >= 1");
    if (!(dt_max > 0.0)) throw ValidationError("SolverConfig: dt_max must be positive");
    for (std::size_t i = 0; i < snapshot_times.size(); ++i) {
      const double s = snapshot_times[i];
      if (!(s >= 0.0 && s <= t_end) || (i > 0 && !(s > snapshot_times[i - 1])))
        throw ValidationError("SolverConfig: snapshot_times must be increasing within [0, t_end]");
    }
  }
};

struct Snapshot {
  double t;
  PeriodicField field;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Diagnostics> diagnostics;
  std::vector<Snapshot> snapshots;
  std::size_t steps = 0;
};

struct PeakResult {
  double t_star = 0.0;
  double e_star = 0.0;
  double k_star = 0.0;
  double k_drop = 0.0;
  double e0 = 0.0;
  double k0 = 0.0;
  double r0 = 0.0;
  std::optional<PeriodicField> u_star;
};

class BurgersStepper {
 public:
  BurgersStepper(const PeriodicField& u0, const SolverConfig& cfg)
      : cfg_(cfg), n_(cfg.n_modes), fft_(&fft_for(cfg.n_modes)) {
    cfg_.validate();
    if (u0.size() > n_)
      throw ValidationError("BurgersStepper: initial field finer than n_modes");
    PeriodicField u = resample(u0, n_);
    hat_ = fft_->forward(u.values());
    hat_[0] = 0.0;
    const int nyq = n_ / 2;
    kappa_.resize(nyq + 1);
    for (int m = 0; m <= nyq; ++m) kappa_[m] = kTwoPi * m;
    band_ = cfg_.dealias ? n_ / 3 : nyq;
    u_.resize(n_);
    sq_.resize(n_);
    refresh_physical();
  }

  double time() const { return t_; }
  std::size_t steps() const { return steps_; }
  int size() const { return n_; }
  double max_abs() const { return max_abs_; }

  PeriodicField field() const { return PeriodicField(PeriodicGrid(n_), u_); }

  /// Tail fraction measured inside the retained band (top third of it).
  double tail_fraction() const {
    double total = 0.0, tail = 0.0;
    for (int m = 1; m <= band_; ++m) {
      const double e = std::norm(hat_[m]);
      total += e;
      if (3 * m > 2 * band_) tail += e;
    }
    return total > 0.0 ? tail / total : 0.0;
  }

  double cfl_dt() const {
    if (max_abs_ <= 0.0) return cfg_.dt_max;
    return std::min(cfg_.dt_max, cfg_.cfl_coefficient / (n_ * max_abs_));
  }

  /// One step, truncated so as not to pass t_target. Returns the step taken.
  double step(double t_target) {
    double dt = std::min(cfl_dt(), t_target - t_);
    if (!(dt > 0.0)) return 0.0;
    // Absorb a sliver left over by rounding into this step.
    if (t_target - (t_ + dt) < 1e-12 * std::max(1.0, t_target)) dt = t_target - t_;
    rk4(dt);
    t_ = (dt == t_target - t_) ? t_target : t_ + dt;
    ++steps_;
    return dt;
  }

  void advance_to(double t_target) {
    while (t_ < t_target) step(t_target);
  }

 private:
  void refresh_physical() {
    fft_->inverse(hat_, u_);
    max_abs_ = 0.0;
    for (double v : u_) {
      if (!std::isfinite(v)) throw NumericError("BurgersStepper: non-finite value at t = " + sci(t_));
      max_abs_ = std::max(max_abs_, std::abs(v));
    }
  }

  // N(v) = -d/dx (u^2), dealiased.
  void nonlinear(const std::vector<cplx>& v, std::vector<cplx>& out) {
    fft_->inverse(v, sq_);
    for (double& s : sq_) s *= s;
    fft_->forward(sq_, out);
    const int nyq = n_ / 2;
    for (int m = 0; m <= nyq; ++m) {
      if (m > band_ || m == nyq) {
        out[m] = 0.0;
      } else {
        out[m] *= cplx(0.0, -kappa_[m]);
      }
    }
  }

  void rk4(double dt) {
    const int nm = n_ / 2 + 1;
    if (e1_dt_ != dt) {
      e1_.resize(nm);
      for (int m = 0; m < nm; ++m) e1_[m] = std::exp(-kappa_[m] * kappa_[m] * dt * 0.5);
      e1_dt_ = dt;
    }
    k1_.resize(nm);
    k2_.resize(nm);
    k3_.resize(nm);
    k4_.resize(nm);
    tmp_.resize(nm);
    nonlinear(hat_, k1_);
    for (int m = 0; m < nm; ++m) tmp_[m] = e1_[m] * (hat_[m] + 0.5 * dt * k1_[m]);
    nonlinear(tmp_, k2_);
    for (int m = 0; m < nm; ++m) tmp_[m] = e1_[m] * hat_[m] + 0.5 * dt * k2_[m];
    nonlinear(tmp_, k3_);
    for (int m = 0; m < nm; ++m) {
      const double e2 = e1_[m] * e1_[m];
      tmp_[m] = e2 * hat_[m] + dt * e1_[m] * k3_[m];
    }
    nonlinear(tmp_, k4_);
    for (int m = 0; m < nm; ++m) {
      const double e1 = e1_[m];
      const double e2 = e1 * e1;
      hat_[m] = e2 * hat_[m] +
                dt / 6.0 * (e2 * k1_[m] + 2.0 * e1 * (k2_[m] + k3_[m]) + k4_[m]);
    }
    hat_[0] = 0.0;
    refresh_physical();
    const double tail = tail_fraction();
    if (tail > kResolutionFailTail)
      throw ResolutionError("BurgersStepper: spectral tail fraction " + sci(tail) +
                            " exceeds 1e-4 at t = " + sci(t_ + dt) +
                            "; increase n_modes");
  }

  SolverConfig cfg_;
  int n_;
  RealFft* fft_;
  int band_;
  double t_ = 0.0;
  std::size_t steps_ = 0;
  double max_abs_ = 0.0;
  std::vector<double> kappa_;
  std::vector<cplx> hat_;
  std::vector<double> u_, sq_;
  std::vector<double> e1_;
  double e1_dt_ = -1.0;
  std::vector<cplx> k1_, k2_, k3_, k4_, tmp_;
};

namespace detail {

inline PeriodicField prepare_initial(const PeriodicField& u0, const SolverConfig& cfg,
                                     const std::string& who) {
  cfg.validate();
  u0.require_mean_zero(who);
  if (u0.size() > cfg.n_modes)
    throw ValidationError(who + ": initial field finer than n_modes");
  PeriodicField u = resample(u0, cfg.n_modes);
  const double tail = spectral_tail_fraction(u0);
  if (tail > kResolutionWarnTail)
    throw ResolutionError(who + ": initial spectral tail fraction " + sci(tail) +
                          " exceeds 1e-8; refine the grid");
  return u;
}

}  // namespace detail

inline Trajectory integrate(const PeriodicField& u0, const SolverConfig& cfg) {
  PeriodicField u = detail::prepare_initial(u0, cfg, "integrate");
  Trajectory tr;
  tr.times.push_back(0.0);
  tr.diagnostics.push_back(diagnose(u, 0.0));
  std::size_t next_snap = 0;
  if (next_snap < cfg.snapshot_times.size() && cfg.snapshot_times[0] == 0.0) {
    tr.snapshots.push_back({0.0, u});
    ++next_snap;
  }
  BurgersStepper st(u, cfg);
  int since_output = 0;
  while (st.time() < cfg.t_end) {
    const double target =
        next_snap < cfg.snapshot_times.size() ? cfg.snapshot_times[next_snap] : cfg.t_end;
    st.step(target);
    ++since_output;
    const bool at_snap = next_snap < cfg.snapshot_times.size() && st.time() == target;
    const bool at_end = st.time() >= cfg.t_end;
    if (since_output >= cfg.output_stride || at_end) {
      PeriodicField f = st.field();
      tr.times.push_back(st.time());
      tr.diagnostics.push_back(diagnose(f, st.time()));
      since_output = 0;
    }
    if (at_snap) {
      tr.snapshots.push_back({st.time(), st.field()});
      ++next_snap;
    }
  }
  if (tr.snapshots.empty() || tr.snapshots.back().t != st.time())
    tr.snapshots.push_back({st.time(), st.field()});
  tr.steps = st.steps();
  return tr;
}

/// Exact solution through u = -(log phi)_x with phi solving the heat equation.
inline PeriodicField cole_hopf_periodic(const PeriodicField& u0, double t, int n_modes) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw ValidationError("cole_hopf_periodic: t must be >= 0");
  if (n_modes < 16 || !is_power_of_two(n_modes))
    throw ValidationError("cole_hopf_periodic: n_modes must be a power of two >= 16");
  u0.require_mean_zero("cole_hopf_periodic");
  if (u0.size() > n_modes)
    throw ValidationError("cole_hopf_periodic: n_modes smaller than the input grid");
  if (t == 0.0) return resample(u0, n_modes);

  const int n = n_modes;
  auto& fft = fft_for(n);
  PeriodicField u = resample(u0, n);
  auto c = fft.forward(u.values());
  std::vector<cplx> vhat(c.size(), 0.0);
  for (int m = 1; m < n / 2; ++m) vhat[m] = c[m] / cplx(0.0, kTwoPi * m);
  auto V = fft.inverse(vhat);
  const double vmin = *std::min_element(V.begin(), V.end());
  std::vector<double> phi(n);
  for (int j = 0; j < n; ++j) phi[j] = std::exp(-(V[j] - vmin));
  const double phi_min = *std::min_element(phi.begin(), phi.end());
  if (!(phi_min >= 1e-300))
    throw PreconditionError("cole_hopf_periodic: potential exp(-V) underflows; rescale the data");

  auto ph = fft.forward(phi);
  for (int m = 0; m <= n / 2; ++m) ph[m] *= std::exp(-kTwoPi * kTwoPi * m * m * t);
  auto phi_t = fft.inverse(ph);
  differentiate_spectrum(ph, n, 1);
  auto phi_x = fft.inverse(ph);
  std::vector<double> out(n);
  for (int j = 0; j < n; ++j) {
    if (!(phi_t[j] >= 1e-300))
      throw PreconditionError("cole_hopf_periodic: phi falls below 1e-300 at t = " +
                              sci(t));
    out[j] = -phi_x[j] / phi_t[j];
  }
  return PeriodicField(PeriodicGrid(n), std::move(out));
}

inline PeakResult find_enstrophy_peak(const PeriodicField& u0, const SolverConfig& cfg) {
  PeriodicField u = detail::prepare_initial(u0, cfg, "find_enstrophy_peak");
  PeakResult res;
  const auto d0 = diagnose(u, 0.0);
  res.e0 = d0.enstrophy_E;
  res.k0 = d0.energy_K;
  res.r0 = d0.rate_R;
  if (!(d0.rate_R > 0.0)) {
    res.t_star = 0.0;
    res.e_star = d0.enstrophy_E;
    res.k_star = d0.energy_K;
    res.k_drop = 0.0;
    res.u_star = u;
    return res;
  }

  // Coarse scan: keep the state one output before the running maximum.
  BurgersStepper st(u, cfg);
  BurgersStepper bracket_start = st;
  double t_prev = 0.0, e_best = d0.enstrophy_E, t_best = 0.0, t_lo = 0.0, t_hi = 0.0;
  bool found_drop = false;
  int since_output = 0;
  BurgersStepper last_output = st;
  while (st.time() < cfg.t_end) {
    st.step(cfg.t_end);
    if (++since_output < cfg.output_stride && st.time() < cfg.t_end) continue;
    since_output = 0;
    const double e = enstrophy(st.field());
    if (e > e_best) {
      e_best = e;
      t_best = st.time();
      t_lo = t_prev;
      bracket_start = last_output;
    } else if (t_best > 0.0) {
      t_hi = st.time();
      found_drop = true;
      break;
    }
    t_prev = st.time();
    last_output = st;
  }
  if (t_best == 0.0) throw NumericError("find_enstrophy_peak: no interior peak");
  if (!found_drop)
    throw NumericError("find_enstrophy_peak: peak at boundary (t_end = " +
                       sci(cfg.t_end) + " too small)");

  auto energy_at = [&](double t) {
    BurgersStepper s = bracket_start;
    s.advance_to(t);
    return enstrophy(s.field());
  };
  // Golden-section down to |dT| <= 1e-4 T*.
  const double tol = 1e-4 * t_best * 0.5;
  auto ext = golden_max(energy_at, t_lo, t_hi, tol);
  if (e_best > ext.value) ext = {t_best, e_best};
  BurgersStepper s = bracket_start;
  s.advance_to(ext.x);
  PeriodicField ustar = s.field();
  res.t_star = ext.x;
  res.e_star = enstrophy(ustar);
  res.k_star = energy(ustar);
  res.k_drop = res.k0 - res.k_star;
  res.u_star = std::move(ustar);
  return res;
}

inline void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
  os << "t,K,E,R\n" << std::setprecision(17);
  for (const auto& d : tr.diagnostics)
    os << d.t << ',' << d.energy_K << ',' << d.enstrophy_E << ',' << d.rate_R << '\n';
}

inline void write_snapshot_csv(std::ostream& os, const PeriodicField& f) {
  os << "x,u\n" << std::setprecision(17);
  for (int j = 0; j < f.size(); ++j) os << f.grid().point(j) << ',' << f[j] << '\n';
}

}  // namespace burgers
