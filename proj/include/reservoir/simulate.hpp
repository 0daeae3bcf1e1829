#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "reservoir/equilibrium.hpp"
#include "reservoir/loan.hpp"
#include "reservoir/params.hpp"

namespace reservoir {

// Four exogenous drivers, each a latent Gaussian AR(1) mapped into its level
// through a transform that respects the level's domain: log for the policy
// rate and the premium elasticity, logistic for the two fractions.
enum ShockIndex : int { SHOCK_R = 0, SHOCK_MU = 1, SHOCK_THETA = 2, SHOCK_XI = 3 };

inline const std::array<std::string, 4> shock_names = {"R", "mu", "theta", "xi"};

struct ShockSpec {
  std::array<double, 4> rho = {0.9, 0.9, 0.9, 0.9};
  std::array<double, 4> sigma = {0.01092, 0.0119, 0.0471, 0.0153};

  void validate() const {
    for (int j = 0; j < 4; ++j) {
      if (!(rho[j] >= 0.0 && rho[j] < 1.0))
        throw std::invalid_argument("ShockSpec: rho_" + shock_names[j] + " must lie in [0,1)");
      if (!(sigma[j] >= 0.0))
        throw std::invalid_argument("ShockSpec: sigma_" + shock_names[j] +
                                    " must be nonnegative");
    }
  }
};

struct ShockPanel {
  Eigen::MatrixXd latent;       // T x 4 AR(1) states
  Eigen::MatrixXd innovations;  // T x 4 Gaussian draws, row 0 is zero
  Eigen::MatrixXd levels;       // T x 4 transformed levels [R, mu, theta, xi]
  std::uint64_t seed = 0;
};

namespace detail {

inline double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }
inline double logit(double q) { return std::log(q / (1.0 - q)); }

inline double shock_level(int which, double x, const ModelParams& p) {
  switch (which) {
    case SHOCK_R:
      return p.R_bar * std::exp(x);
    case SHOCK_MU:
      return p.mu_bar > 0.0 ? logistic(logit(p.mu_bar) + x) : 0.0;
    case SHOCK_THETA:
      return p.theta_bar > 0.0 ? logistic(logit(p.theta_bar) + x) : 0.0;
    case SHOCK_XI:
      return std::min(p.xi_bar * std::exp(x), 1.0 - 1e-12);
    default:
      throw std::invalid_argument("shock_level: unknown shock index");
  }
}

}  // namespace detail

inline ShockPanel draw_shocks(const ShockSpec& spec, const ModelParams& p, int T,
                              std::uint64_t seed) {
  spec.validate();
  if (T < 1) throw std::invalid_argument("draw_shocks: T must be positive");
  ShockPanel panel;
  panel.seed = seed;
  panel.latent = Eigen::MatrixXd::Zero(T, 4);
  panel.innovations = Eigen::MatrixXd::Zero(T, 4);
  panel.levels.resize(T, 4);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N(0.0, 1.0);
  for (int t = 1; t < T; ++t)
    for (int j = 0; j < 4; ++j) {
      double eps = spec.sigma[j] * N(rng);
      panel.innovations(t, j) = eps;
      panel.latent(t, j) = spec.rho[j] * panel.latent(t - 1, j) + eps;
    }
  for (int t = 0; t < T; ++t)
    for (int j = 0; j < 4; ++j)
      panel.levels(t, j) = detail::shock_level(j, panel.latent(t, j), p);
  return panel;
}

// A single impulse of `magnitude` latent standard deviations at t = 0, no
// further innovations.
inline ShockPanel impulse_panel(const ShockSpec& spec, const ModelParams& p, int T, int which,
                                double magnitude) {
  spec.validate();
  if (T < 1) throw std::invalid_argument("impulse_panel: T must be positive");
  if (which < 0 || which > 3) throw std::invalid_argument("impulse_panel: unknown shock index");
  ShockPanel panel;
  panel.latent = Eigen::MatrixXd::Zero(T, 4);
  panel.innovations = Eigen::MatrixXd::Zero(T, 4);
  panel.levels.resize(T, 4);
  panel.innovations(0, which) = magnitude * spec.sigma[which];
  for (int t = 0; t < T; ++t)
    panel.latent(t, which) = std::pow(spec.rho[which], t) * magnitude * spec.sigma[which];
  for (int t = 0; t < T; ++t)
    for (int j = 0; j < 4; ++j)
      panel.levels(t, j) = detail::shock_level(j, panel.latent(t, j), p);
  return panel;
}

// One period of the economy under frozen continuation values: the household
// prices contracts off the current multiplier and rate, so every
// within-period condition holds in closed form and only the stock ledgers
// carry history.
inline EconomyState step_economy(const EconomyState& prev, double theta, double mu, double xi,
                                 double R, const ModelParams& p) {
  double denom = 1.0 - p.beta * (1.0 + R);
  if (!(denom < -1e-12))
    throw std::runtime_error("step_economy: policy rate leaves money demand unbounded");
  EconomyState s;
  s.theta = theta;
  s.mu = mu;
  s.xi = xi;
  s.R = R;
  s.chi = prev.chi;
  s.lambda = prev.chi / denom;
  s.C = std::pow(s.lambda, -1.0 / p.sigma);
  s.D = payment_factor(s.lambda, R, p.beta);

  auto hh = household_leverage_with_refi(theta, R, xi, mu);
  auto gov = government_leverage(R, xi);
  s.omega_h = hh.leverage;
  s.i_h = hh.rate;
  s.omega_G = gov.leverage;
  s.i_G = gov.rate;
  s.iP_h = producer_capital_rate(R, xi, p.phi_h);
  s.iP_f = producer_capital_rate(R, xi, p.phi_f);

  auto dem = demand_curves(s.lambda, R, s.omega_h, p);
  double v_h = dem.v_h, v_f = dem.v_f;

  s.K_h = p.phi_h * v_h / s.iP_h;
  s.K_f = p.phi_f * v_f / s.iP_f;
  s.I = s.K_h + s.K_f - (1.0 - p.delta_k) * (prev.K_h + prev.K_f);

  double PL = (p.psi_h * v_h + p.psi_f * v_f) / p.L_bar;
  s.PL_h = s.PL_f = PL;
  s.L_h = p.psi_h * v_h / PL;
  s.L_f = p.psi_f * v_f / PL;

  double c_h = (1.0 - p.phi_h - p.psi_h) * v_h, c_f = (1.0 - p.phi_f - p.psi_f) * v_f;
  double W = (c_h + c_f) / p.n_bar;
  s.W_h = s.W_f = W;
  s.n_h = c_h / W;
  s.n_f = c_f / W;
  s.nu = p.kappa - s.lambda * W;
  s.gamma = s.chi - s.lambda * (1.0 - p.beta * s.i_h);

  double capacity = PL * p.L_bar * (s.omega_G - annuity_factor(s.omega_G, s.i_G));
  s.G = p.gamma_d * capacity;
  s.G_cum = (1.0 - p.delta_k) * prev.G_cum + prev.G;

  double raw_h = production(1.0, s.K_h, s.L_h, s.n_h, p.phi_h, p.psi_h);
  double raw_f = production(1.0, s.K_f, s.L_f, s.n_f, p.phi_f, p.psi_f);
  s.Phi = (s.C + s.I + s.G) / (raw_h + raw_f);
  s.Y_h = s.Phi * raw_h;
  s.Y_f = s.Phi * raw_f;
  s.P_h = v_h / s.Y_h;
  s.P_f = v_f / s.Y_f;

  s.H = (1.0 - p.delta_k) * prev.H + v_h;
  s.B = mu * s.H;
  double wage_bill = W * p.n_bar;
  s.M = (s.C + v_h / (R * s.omega_h) + v_f + theta * v_h + (s.i_h - 1.0) * s.B - wage_bill) / R;
  s.deficit = (p.gamma_d - 1.0) * capacity - p.T_g * wage_bill - p.T_q * (v_h + v_f);
  s.GDP = s.C + s.I + s.G;
  return s;
}

struct SimPath {
  std::vector<EconomyState> states;
  Eigen::MatrixXd innovations;           // copy of the driving panel's draws
  std::vector<double> clearing_residual; // per period, max abs over gated rows
  std::vector<double> taylor_gap;        // realized deviation from the policy rule
};

// Certainty-equivalent simulation from a stationary start. Throws with the
// offending period when a draw leaves the feasible rate region.
inline SimPath simulate(const ModelParams& p, const SteadyState& start,
                        const ShockPanel& panel) {
  int T = static_cast<int>(panel.levels.rows());
  SimPath path;
  path.states.reserve(T);
  path.innovations = panel.innovations;
  path.clearing_residual.resize(T);
  path.taylor_gap.resize(T);
  const EconomyState* prev = &start.state;
  for (int t = 0; t < T; ++t) {
    EconomyState s;
    try {
      s = step_economy(*prev, panel.levels(t, SHOCK_THETA), panel.levels(t, SHOCK_MU),
                       panel.levels(t, SHOCK_XI), panel.levels(t, SHOCK_R), p);
    } catch (const std::exception& e) {
      throw std::runtime_error("simulate: period " + std::to_string(t) + ": " + e.what());
    }
    auto r = step_residuals(*prev, s, s, p);
    double worst = 0.0;
    for (size_t k = 0; k < r.size(); ++k)
      if (k != 29 && k != 30) worst = std::max(worst, std::abs(r[k]));
    path.clearing_residual[t] = worst;
    path.taylor_gap[t] = s.R - taylor_rate(prev->R, s.GDP, start.state.GDP, p);
    path.states.push_back(s);
    prev = &path.states.back();
  }
  return path;
}

// Observation matrix for the reduced-form stage: shock levels first, then the
// responding aggregates, everything in percent deviation from the stationary
// point. The deficit is scaled by the absolute stationary level since its
// sign is not fixed.
inline const std::vector<std::string> panel_columns = {
    "R", "mu", "theta", "xi", "C", "I", "GDP", "n_h", "P_h", "P_f", "omega_h", "Y_f", "deficit"};

inline Eigen::MatrixXd observation_panel(const SimPath& path, const SteadyState& ss,
                                         int discard = 0) {
  int T = static_cast<int>(path.states.size()) - discard;
  if (T <= 0) throw std::invalid_argument("observation_panel: nothing left after discard");
  const EconomyState& b = ss.state;
  Eigen::MatrixXd X(T, 13);
  auto pct = [](double x, double x0) { return 100.0 * (x / x0 - 1.0); };
  for (int t = 0; t < T; ++t) {
    const EconomyState& s = path.states[t + discard];
    X(t, 0) = pct(s.R, b.R);
    X(t, 1) = pct(s.mu, b.mu);
    X(t, 2) = pct(s.theta, b.theta);
    X(t, 3) = pct(s.xi, b.xi);
    X(t, 4) = pct(s.C, b.C);
    X(t, 5) = pct(s.I, b.I);
    X(t, 6) = pct(s.GDP, b.GDP);
    X(t, 7) = pct(s.n_h, b.n_h);
    X(t, 8) = pct(s.P_h, b.P_h);
    X(t, 9) = pct(s.P_f, b.P_f);
    X(t, 10) = pct(s.omega_h, b.omega_h);
    X(t, 11) = pct(s.Y_f, b.Y_f);
    X(t, 12) = 100.0 * (s.deficit - b.deficit) / std::abs(b.deficit);
  }
  return X;
}

// Model-true impulse responses in panel units: the deterministic path after a
// one-time latent impulse, relative to the stationary point.
inline Eigen::MatrixXd impulse_response_path(const ModelParams& p, const SteadyState& ss,
                                             const ShockSpec& spec, int which, double magnitude,
                                             int horizon) {
  ShockPanel panel = impulse_panel(spec, p, horizon, which, magnitude);
  SimPath path = simulate(p, ss, panel);
  return observation_panel(path, ss);
}

}  // namespace reservoir
