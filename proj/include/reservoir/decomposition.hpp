#pragma once

// First-order growth accounting over simulated paths. Each report splits the
// log growth of a target quantity into analytic contributions of the four
// contract drivers (theta, R, xi, mu) evaluated at the previous period, plus
// a second-order residual, and sets the published closed-form reconstruction
// of the same growth next to it with its gap. Reconstruction gaps are
// reported, never folded into the contributions.

#include <reservoir/equilibrium.hpp>
#include <reservoir/loan.hpp>
#include <reservoir/simulate.hpp>

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace reservoir {

// Exponent weights of the unit-price premium of the loan-financed sector over
// the ordinary sector: price ratio growth loads on leverage growth, base-rate
// growth, land-supply growth, and the discounted-payment-factor growth with
// these coefficients. The payment weight is the exact negative of the
// leverage weight, so it is computed as such.
struct PremiumWeights {
  double leverage;
  double rate;
  double land;
  double payment;
};

inline PremiumWeights premium_weights(const ModelParams& p, double xi) {
  if (!(xi < 1.0)) throw std::domain_error("premium_weights: xi must be below one");
  PremiumWeights w;
  w.leverage = 1.0 - p.phi_h - p.psi_h + p.psi_f - p.psi_h;
  w.rate = (p.phi_h - p.phi_f) / (1.0 - xi);
  w.land = p.psi_f - p.psi_h;
  w.payment = -w.leverage;
  return w;
}

inline PremiumWeights premium_weights(const ModelParams& p) {
  return premium_weights(p, p.xi_bar);
}

// Partial derivatives of ln omega_h with respect to the contract drivers.
struct LeverageGradient {
  double d_theta;
  double d_logR;
  double d_xi;
  double d_mu;
};

inline LeverageGradient leverage_log_gradient(double theta, double R, double xi, double mu) {
  detail::check_contract_domain(theta, R, xi, mu);
  LeverageGradient g;
  g.d_theta = 1.0 / ((1.0 - theta) * (1.0 + xi));
  g.d_logR = -1.0 / (1.0 + xi);
  g.d_xi = (std::log((1.0 - theta) * R) + 1.0 - std::log(1.0 - mu)) /
           ((1.0 + xi) * (1.0 + xi));
  g.d_mu = xi / ((1.0 + xi) * (1.0 - mu));
  return g;
}

// d ln lambda / d ln R implied by the stationary money condition
// lambda = chi / (1 - beta (1 + R)). The weight chi cancels.
inline double money_value_log_gradient(double R, double beta) {
  double den = 1.0 - beta * (1.0 + R);
  if (!(den < -1e-12))
    throw std::domain_error("money_value_log_gradient: rate leaves money demand unbounded");
  return beta * R / den;
}

// d ln D / d ln R for the discounted-payment factor D = lambda (1+R)/(1+R-beta).
inline double payment_factor_log_gradient(double R, double beta) {
  double gap = 1.0 + R - beta;
  if (!(gap > 1e-12))
    throw std::domain_error("payment_factor_log_gradient: series diverges");
  return money_value_log_gradient(R, beta) + R * (1.0 / (1.0 + R) - 1.0 / gap);
}

inline double producer_rate_log_gradient_R(double xi) {
  detail::require(xi > 0.0 && xi < 1.0, "producer_rate_log_gradient_R: xi must lie in (0,1)");
  return 1.0 / (1.0 - xi);
}

inline double producer_rate_gradient_xi(double R, double phi, double xi) {
  detail::require(std::isfinite(R) && R > 0.0, "producer_rate_gradient_xi: rate must be positive");
  detail::require(xi > 0.0 && xi < 1.0, "producer_rate_gradient_xi: xi must lie in (0,1)");
  detail::require(phi > 0.0 && phi < 1.0, "producer_rate_gradient_xi: share must lie in (0,1)");
  return std::log(R / phi) / ((1.0 - xi) * (1.0 - xi));
}

// Partial derivatives of the log fiscal capacity factor
// omega_G - annuity(omega_G, i_G) with respect to ln R and xi.
struct CapacityGradient {
  double d_logR;
  double d_xi;
};

inline CapacityGradient capacity_log_gradient(double R, double xi) {
  LoanTerms gov = government_leverage(R, xi);
  double w = gov.leverage, i = gov.rate;
  double cf = w - annuity_factor(w, i);
  detail::require(cf > 0.0, "capacity_log_gradient: capacity factor must be positive");
  double pw = std::pow(1.0 + i, -w);
  double a_w = pw * std::log1p(i) / i;                       // d annuity / d term
  double a_i = (w * pw / (1.0 + i) * i - (1.0 - pw)) / (i * i);  // d annuity / d rate
  double lnR1 = 1.0 + std::log(R);
  double dw_logR = -w / (1.0 + xi);
  double di_logR = i / (1.0 + xi);
  double dw_xi = w * lnR1 / ((1.0 + xi) * (1.0 + xi));
  double di_xi = -i * lnR1 / ((1.0 + xi) * (1.0 + xi));
  CapacityGradient out;
  out.d_logR = ((1.0 - a_w) * dw_logR - a_i * di_logR) / cf;
  out.d_xi = ((1.0 - a_w) * dw_xi - a_i * di_xi) / cf;
  return out;
}

// One growth observation: the target's log change between periods t-1 and t,
// factor weights evaluated at t-1, the factor movements, their products, the
// unexplained remainder, and the published reconstruction with its gap.
struct DecompositionRow {
  int t = 0;
  double observed = 0.0;
  Eigen::Vector4d weight = Eigen::Vector4d::Zero();
  Eigen::Vector4d delta = Eigen::Vector4d::Zero();
  Eigen::Vector4d contribution = Eigen::Vector4d::Zero();
  double residual = 0.0;
  double reconstruction = 0.0;
  double gap = 0.0;
};

struct DecompositionReport {
  std::string target;
  std::array<std::string, 4> factors;
  std::vector<DecompositionRow> rows;
  double reconstruction_slope = std::numeric_limits<double>::quiet_NaN();
  double mean_abs_residual = 0.0;
};

namespace detail {

inline const std::array<std::string, 4> driver_factors = {"theta", "R", "xi", "mu"};

inline Eigen::Vector4d driver_deltas(const EconomyState& prev, const EconomyState& cur) {
  Eigen::Vector4d d;
  d << cur.theta - prev.theta, std::log(cur.R / prev.R), cur.xi - prev.xi, cur.mu - prev.mu;
  return d;
}

inline void require_periods(const SimPath& path, std::size_t n, const char* who) {
  if (path.states.size() < n)
    throw std::invalid_argument(std::string(who) + ": path is too short");
}

inline void finish_report(DecompositionReport& rep) {
  double num = 0.0, den = 0.0, abs_sum = 0.0;
  std::size_t used = 0;
  for (const DecompositionRow& row : rep.rows) {
    if (!std::isfinite(row.observed) || !std::isfinite(row.reconstruction)) continue;
    num += row.observed * row.reconstruction;
    den += row.reconstruction * row.reconstruction;
    abs_sum += std::abs(row.residual);
    ++used;
  }
  rep.reconstruction_slope = den > 0.0 ? num / den : std::numeric_limits<double>::quiet_NaN();
  rep.mean_abs_residual = used ? abs_sum / static_cast<double>(used) : 0.0;
}

inline void close_row(DecompositionRow& row) {
  row.contribution = row.weight.cwiseProduct(row.delta);
  row.residual = row.observed - row.contribution.sum();
  row.gap = row.observed - row.reconstruction;
}

// Partials of ln(v_h / v_f): the loan-sector value moves with leverage and
// with the payment factor, the other sector's value is pinned by preferences.
inline Eigen::Vector4d value_ratio_weights(const EconomyState& prev, const ModelParams& p) {
  LeverageGradient g = leverage_log_gradient(prev.theta, prev.R, prev.xi, prev.mu);
  Eigen::Vector4d w;
  w << g.d_theta, g.d_logR - payment_factor_log_gradient(prev.R, p.beta), g.d_xi, g.d_mu;
  return w;
}

}  // namespace detail

// Growth of household contract leverage split across its four drivers. The
// reconstruction is the first-order synthesis itself, so gap == residual.
inline DecompositionReport leverage_growth_decomposition(const SimPath& path,
                                                         const ModelParams& p) {
  (void)p;
  detail::require_periods(path, 2, "leverage_growth_decomposition");
  DecompositionReport rep;
  rep.target = "omega_h";
  rep.factors = detail::driver_factors;
  for (std::size_t t = 1; t < path.states.size(); ++t) {
    const EconomyState& prev = path.states[t - 1];
    const EconomyState& cur = path.states[t];
    DecompositionRow row;
    row.t = static_cast<int>(t);
    row.observed = std::log(cur.omega_h / prev.omega_h);
    LeverageGradient g = leverage_log_gradient(prev.theta, prev.R, prev.xi, prev.mu);
    row.weight << g.d_theta, g.d_logR, g.d_xi, g.d_mu;
    row.delta = detail::driver_deltas(prev, cur);
    row.contribution = row.weight.cwiseProduct(row.delta);
    row.reconstruction = row.contribution.sum();
    detail::close_row(row);
    rep.rows.push_back(row);
  }
  detail::finish_report(rep);
  return rep;
}

// Growth of the sector market-value ratio P_h Y_h / (P_f Y_f) against the
// published reconstruction %(C^sigma omega_h (1+R)/R); the preference scale
// drops out of growth rates.
inline DecompositionReport market_value_ratio_growth(const SimPath& path,
                                                     const ModelParams& p) {
  detail::require_periods(path, 2, "market_value_ratio_growth");
  DecompositionReport rep;
  rep.target = "value_ratio";
  rep.factors = detail::driver_factors;
  for (std::size_t t = 1; t < path.states.size(); ++t) {
    const EconomyState& prev = path.states[t - 1];
    const EconomyState& cur = path.states[t];
    DecompositionRow row;
    row.t = static_cast<int>(t);
    row.observed = std::log((cur.P_h * cur.Y_h) / (cur.P_f * cur.Y_f)) -
                   std::log((prev.P_h * prev.Y_h) / (prev.P_f * prev.Y_f));
    row.weight = detail::value_ratio_weights(prev, p);
    row.delta = detail::driver_deltas(prev, cur);
    row.reconstruction = p.sigma * std::log(cur.C / prev.C) +
                         std::log(cur.omega_h / prev.omega_h) +
                         std::log((1.0 + cur.R) / cur.R) -
                         std::log((1.0 + prev.R) / prev.R);
    detail::close_row(row);
    rep.rows.push_back(row);
  }
  detail::finish_report(rep);
  return rep;
}

struct AllocationGrowth {
  DecompositionReport capital;  // K_h / K_f
  DecompositionReport land;     // L_h / L_f
  DecompositionReport labor;    // n_h / n_f
};

// Growth of the cross-sector factor allocation ratios. The published claim is
// that all three track leverage growth one for one when the base rate is
// fixed; the reconstruction column is leverage growth itself and the slope
// records the fit.
inline AllocationGrowth allocation_ratio_growth(const SimPath& path, const ModelParams& p) {
  detail::require_periods(path, 2, "allocation_ratio_growth");
  AllocationGrowth out;
  out.capital.target = "capital_ratio";
  out.land.target = "land_ratio";
  out.labor.target = "labor_ratio";
  out.capital.factors = out.land.factors = out.labor.factors = detail::driver_factors;
  for (std::size_t t = 1; t < path.states.size(); ++t) {
    const EconomyState& prev = path.states[t - 1];
    const EconomyState& cur = path.states[t];
    Eigen::Vector4d base = detail::value_ratio_weights(prev, p);
    Eigen::Vector4d delta = detail::driver_deltas(prev, cur);
    double leverage_growth = std::log(cur.omega_h / prev.omega_h);

    DecompositionRow row;
    row.t = static_cast<int>(t);
    row.delta = delta;
    row.reconstruction = leverage_growth;

    row.observed = std::log(cur.L_h / cur.L_f) - std::log(prev.L_h / prev.L_f);
    row.weight = base;
    detail::close_row(row);
    out.land.rows.push_back(row);

    row.observed = std::log(cur.n_h / cur.n_f) - std::log(prev.n_h / prev.n_f);
    row.weight = base;
    detail::close_row(row);
    out.labor.rows.push_back(row);

    // the producer-rate ratio adds a xi channel, iP_f/iP_h = (phi_h/phi_f)^(xi/(1-xi))
    row.observed = std::log(cur.K_h / cur.K_f) - std::log(prev.K_h / prev.K_f);
    row.weight = base;
    row.weight(2) += std::log(p.phi_h / p.phi_f) / ((1.0 - prev.xi) * (1.0 - prev.xi));
    detail::close_row(row);
    out.capital.rows.push_back(row);
  }
  detail::finish_report(out.capital);
  detail::finish_report(out.land);
  detail::finish_report(out.labor);
  return out;
}

struct CapitalFiscalGrowth {
  DecompositionReport capital_h;  // reconstruction: change of (1+xi^2)/(1-xi^2)
  DecompositionReport capital_f;  // reconstruction: -%R/(1-xi)
  DecompositionReport fiscal;     // reconstruction: %omega_h + %omega_G
  std::vector<int> invest_t;      // investment growth needs two prior periods
  std::vector<double> invest_observed;
  std::vector<double> invest_reconstruction;
  std::vector<double> invest_gap;
};

// Growth of borrowed capital by sector, public investment, and aggregate
// investment, each against its published reconstruction. Investment growth is
// left NaN when the level changes sign.
inline CapitalFiscalGrowth capital_and_fiscal_growth(const SimPath& path,
                                                     const ModelParams& p) {
  detail::require_periods(path, 3, "capital_and_fiscal_growth");
  auto bracket = [](double xi) { return (1.0 + xi * xi) / (1.0 - xi * xi); };
  CapitalFiscalGrowth out;
  out.capital_h.target = "capital_h";
  out.capital_f.target = "capital_f";
  out.fiscal.target = "public_investment";
  out.capital_h.factors = out.capital_f.factors = out.fiscal.factors = detail::driver_factors;
  for (std::size_t t = 1; t < path.states.size(); ++t) {
    const EconomyState& prev = path.states[t - 1];
    const EconomyState& cur = path.states[t];
    LeverageGradient g = leverage_log_gradient(prev.theta, prev.R, prev.xi, prev.mu);
    double d_pay = payment_factor_log_gradient(prev.R, p.beta);
    Eigen::Vector4d delta = detail::driver_deltas(prev, cur);

    DecompositionRow row;
    row.t = static_cast<int>(t);
    row.delta = delta;

    row.observed = std::log(cur.K_h / prev.K_h);
    row.weight << g.d_theta,
        g.d_logR - d_pay - producer_rate_log_gradient_R(prev.xi),
        g.d_xi - producer_rate_gradient_xi(prev.R, p.phi_h, prev.xi),
        g.d_mu;
    row.reconstruction = bracket(cur.xi) - bracket(prev.xi);
    detail::close_row(row);
    out.capital_h.rows.push_back(row);

    row.observed = std::log(cur.K_f / prev.K_f);
    row.weight << 0.0,
        -producer_rate_log_gradient_R(prev.xi),
        -producer_rate_gradient_xi(prev.R, p.phi_f, prev.xi),
        0.0;
    row.reconstruction = -std::log(cur.R / prev.R) / (1.0 - prev.xi);
    detail::close_row(row);
    out.capital_f.rows.push_back(row);

    double v_h = prev.P_h * prev.Y_h, v_f = prev.P_f * prev.Y_f;
    double land_share = p.psi_h * v_h / (p.psi_h * v_h + p.psi_f * v_f);
    CapacityGradient cap = capacity_log_gradient(prev.R, prev.xi);
    row.observed = std::log(cur.G / prev.G);
    row.weight << land_share * g.d_theta,
        land_share * (g.d_logR - d_pay) + cap.d_logR,
        land_share * g.d_xi + cap.d_xi,
        land_share * g.d_mu;
    row.reconstruction = std::log(cur.omega_h / prev.omega_h) +
                         std::log(cur.omega_G / prev.omega_G);
    detail::close_row(row);
    out.fiscal.rows.push_back(row);

    if (t >= 2) {
      const EconomyState& prev2 = path.states[t - 2];
      double obs = (cur.I > 0.0 && prev.I > 0.0)
                       ? std::log(cur.I / prev.I)
                       : std::numeric_limits<double>::quiet_NaN();
      double rec = (bracket(cur.xi) - bracket(prev.xi)) -
                   (bracket(prev.xi) - bracket(prev2.xi));
      out.invest_t.push_back(static_cast<int>(t));
      out.invest_observed.push_back(obs);
      out.invest_reconstruction.push_back(rec);
      out.invest_gap.push_back(obs - rec);
    }
  }
  detail::finish_report(out.capital_h);
  detail::finish_report(out.capital_f);
  detail::finish_report(out.fiscal);
  return out;
}

// Growth of the unit-price ratio P_h / P_f against the published premium
// weights: factors are leverage growth, base-rate growth, land-supply growth
// (zero under fixed supply), and payment-factor growth. The weighted sum is
// the reconstruction, so gap == residual.
inline DecompositionReport price_premium_growth(const SimPath& path, const ModelParams& p) {
  detail::require_periods(path, 2, "price_premium_growth");
  DecompositionReport rep;
  rep.target = "price_ratio";
  rep.factors = {"leverage", "rate", "land", "payment"};
  for (std::size_t t = 1; t < path.states.size(); ++t) {
    const EconomyState& prev = path.states[t - 1];
    const EconomyState& cur = path.states[t];
    PremiumWeights w = premium_weights(p, prev.xi);
    DecompositionRow row;
    row.t = static_cast<int>(t);
    row.observed = std::log(cur.P_h / cur.P_f) - std::log(prev.P_h / prev.P_f);
    row.weight << w.leverage, w.rate, w.land, w.payment;
    row.delta << std::log(cur.omega_h / prev.omega_h), std::log(cur.R / prev.R), 0.0,
        std::log(cur.D / prev.D);
    row.contribution = row.weight.cwiseProduct(row.delta);
    row.reconstruction = row.contribution.sum();
    detail::close_row(row);
    rep.rows.push_back(row);
  }
  detail::finish_report(rep);
  return rep;
}

// Premium-coefficient path that keeps the published investment-growth
// reconstruction constant at d_bar per period: the bracket (1+xi^2)/(1-xi^2)
// follows a fixed second difference from a flat start and xi is clamped at
// zero once the bracket reaches its floor. Diagnostic only.
inline std::vector<double> constant_investment_xi_path(double xi0, double d_bar, int T) {
  detail::require(xi0 >= 0.0 && xi0 < 1.0, "constant_investment_xi_path: xi0 must lie in [0,1)");
  detail::require(d_bar >= 0.0, "constant_investment_xi_path: d_bar must be nonnegative");
  if (T < 1) throw std::invalid_argument("constant_investment_xi_path: T must be positive");
  std::vector<double> xi(static_cast<std::size_t>(T), 0.0);
  double f0 = (1.0 + xi0 * xi0) / (1.0 - xi0 * xi0);
  double f_prev2 = f0, f_prev1 = f0;
  xi[0] = xi0;
  for (int t = 1; t < T; ++t) {
    double f = 2.0 * f_prev1 - f_prev2 - d_bar;
    if (f <= 1.0) break;  // remaining entries stay clamped at zero
    xi[static_cast<std::size_t>(t)] = std::sqrt((f - 1.0) / (f + 1.0));
    f_prev2 = f_prev1;
    f_prev1 = f;
  }
  return xi;
}

// Net public investment G_t - delta_k * sum of all earlier G. With positive
// depreciation the depletion term compounds, so the net path peaks early and
// eventually turns negative.
inline std::vector<double> net_fiscal_investment(const std::vector<double>& G_path,
                                                 double delta_k) {
  if (G_path.empty()) throw std::invalid_argument("net_fiscal_investment: empty path");
  detail::require(delta_k >= 0.0 && delta_k <= 1.0,
                  "net_fiscal_investment: delta_k must lie in [0,1]");
  std::vector<double> net(G_path.size());
  double cum = 0.0;
  for (std::size_t t = 0; t < G_path.size(); ++t) {
    net[t] = G_path[t] - delta_k * cum;
    cum += G_path[t];
  }
  return net;
}

}  // namespace reservoir
