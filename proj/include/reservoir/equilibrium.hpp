#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "reservoir/loan.hpp"
#include "reservoir/params.hpp"

namespace reservoir {

// One period of the two-sector economy. Sector h sells through installment
// contracts, sector f sells spot. Quantities are levels; multipliers chi,
// gamma, nu and the deficit may be negative, investment I may be negative out
// of the stationary point, everything else is positive in a valid state.
struct EconomyState {
  double theta = 0, mu = 0, xi = 0, R = 0;            // contract environment
  double omega_h = 0, omega_G = 0;                    // leverage, household and government
  double i_h = 0, i_G = 0, iP_h = 0, iP_f = 0;        // contracted rates
  double lambda = 0, chi = 0, gamma = 0, nu = 0;      // budget, money, credit, time multipliers
  double C = 0, D = 0;                                // consumption, payment factor
  double Y_h = 0, Y_f = 0, P_h = 0, P_f = 0;          // sector output and prices
  double K_h = 0, K_f = 0, L_h = 0, L_f = 0;          // capital and land by sector
  double n_h = 0, n_f = 0, W_h = 0, W_f = 0;          // labor and wages by sector
  double PL_h = 0, PL_f = 0;                          // land prices by sector
  double I = 0, Phi = 0;                              // investment, congestion externality
  double G = 0, G_cum = 0;                            // public investment flow and stock
  double H = 0, B = 0, M = 0;                         // housing stock, bonds, money
  double deficit = 0, GDP = 0;                        // fiscal balance, absorption
};

struct SteadyState {
  EconomyState state;
  double residual_norm = 0;  // infinity norm of the full residual stack
  int iterations = 0;
};

inline double marginal_utility(double C, double sigma) {
  if (!(C > 0.0)) throw std::domain_error("marginal_utility: consumption must be positive");
  return std::pow(C, -sigma);
}

// Geometric payment factor under a constant continuation: lambda (1+R) /
// (1+R-beta). Diverges as beta -> 1+R from below.
inline double payment_factor(double lambda, double R, double beta) {
  double gap = 1.0 + R - beta;
  if (!(gap > 1e-12))
    throw std::runtime_error("payment_factor: discounting does not dominate the rate, series diverges");
  return lambda * (1.0 + R) / gap;
}

// Discounted installment weight sum_k beta^k lambda_k / (1+R_k)^k along given
// paths, holding the last entries fixed beyond their end. Truncated when the
// running term drops below 1e-12 or after 400 terms.
inline double payment_factor_path(const std::vector<double>& lambda_path,
                                  const std::vector<double>& R_path, double beta) {
  if (lambda_path.empty() || R_path.empty())
    throw std::invalid_argument("payment_factor_path: paths must be non-empty");
  double sum = 0.0, weight = 1.0;
  for (int k = 0; k <= 400; ++k) {
    double lam = k < static_cast<int>(lambda_path.size()) ? lambda_path[k] : lambda_path.back();
    double R = k < static_cast<int>(R_path.size()) ? R_path[k] : R_path.back();
    if (!(1.0 + R > 0.0))
      throw std::domain_error("payment_factor_path: gross rate must be positive");
    double term = weight * lam;
    sum += term;
    if (std::abs(term) < 1e-12) return sum;
    double ratio = beta / (1.0 + R);
    if (k >= static_cast<int>(std::max(lambda_path.size(), R_path.size())) && ratio >= 1.0 &&
        std::abs(lam) > 0.0)
      throw std::runtime_error("payment_factor_path: series diverges beyond the given paths");
    weight *= ratio;
  }
  return sum;
}

// Marginal utility of money balances held against future installments. The
// stationary money condition chi = lambda (1 - beta (1+R)) makes chi negative
// whenever R exceeds the discount wedge, which the baseline does; a negative
// chi is a diagnostic, not an error.
inline double money_multiplier(double lambda, double R, double beta) {
  return lambda * (1.0 - beta * (1.0 + R));
}

struct DemandPair {
  double v_h;  // market value P_h Y_h
  double v_f;  // market value P_f Y_f
};

// Demand: the spot good absorbs a fixed expenditure j_f, the contract good an
// expenditure j_h scaled by leverage per unit of payment factor.
inline DemandPair demand_curves(double lambda, double R, double omega_h, const ModelParams& p) {
  double D = payment_factor(lambda, R, p.beta);
  if (!(D > 0.0)) throw std::domain_error("demand_curves: payment factor must be positive");
  return {p.j_h * omega_h / D, p.j_f};
}

inline double production(double Phi, double K, double L, double n, double phi, double psi) {
  if (!(K > 0.0 && L > 0.0 && n > 0.0))
    throw std::domain_error("production: factor inputs must be positive");
  return Phi * std::pow(K, phi) * std::pow(L, psi) * std::pow(n, 1.0 - phi - psi);
}

struct FactorPrices {
  double W;   // wage
  double PK;  // rental rate of capital
  double PL;  // land price
};

inline FactorPrices factor_prices(double v, double n, double K, double L, double phi, double psi) {
  if (!(n > 0.0 && K > 0.0 && L > 0.0))
    throw std::domain_error("factor_prices: factor inputs must be positive");
  return {(1.0 - phi - psi) * v / n, phi * v / K, psi * v / L};
}

// Congestion externality on production from net public investment.
inline double externality(double G, double G_cum, double lambda_P, double delta_k) {
  return std::exp(lambda_P * (G - delta_k * G_cum));
}

inline double implied_lambda_p(double Phi, double G, double G_cum, double delta_k) {
  double net = G - delta_k * G_cum;
  if (std::abs(net) < 1e-12)
    throw std::runtime_error("implied_lambda_p: net public investment is numerically zero");
  if (!(Phi > 0.0)) throw std::domain_error("implied_lambda_p: externality must be positive");
  return std::log(Phi) / net;
}

inline double taylor_rate(double R_prev, double gdp, double gdp_ref, const ModelParams& p) {
  if (!(R_prev > 0.0 && gdp > 0.0 && gdp_ref > 0.0))
    throw std::domain_error("taylor_rate: inputs must be positive");
  return std::pow(p.R_bar, 1.0 - p.rho_R) * std::pow(R_prev, p.rho_R) *
         std::pow(gdp / gdp_ref, p.rho_Y);
}

// Headroom left in the government budget: nonpositive when the financing rule
// is feasible. Spending equals gamma_d times the capacity term, so the check
// equals (gamma_d - 1) * capacity by construction.
inline double government_budget_check(const EconomyState& s, const ModelParams& p) {
  double land_value = s.PL_h * p.L_bar;
  return s.G + land_value * annuity_factor(s.omega_G, s.i_G) - land_value * s.omega_G;
}

inline constexpr std::array<const char*, 31> residual_names = {
    "budget_mu",      "labor_foc_h",   "labor_foc_f",   "money_foc",     "credit_foc",
    "demand_f",       "demand_h",      "payment_def",   "wage_h",        "land_h",
    "capital_h",      "wage_f",        "land_f",        "capital_f",     "production_h",
    "production_f",   "goods_clear",   "labor_clear",   "land_clear",    "capital_ledger",
    "public_ledger",  "leverage_h",    "leverage_G",    "rate_h",        "rate_G",
    "rate_prod_h",    "rate_prod_f",   "land_parity",   "fiscal_rule",   "taylor",
    "externality"};

// Full residual stack at (prev, cur, next). Expectation terms use next, stock
// ledgers use prev; with prev == cur == next the rows reduce to the
// stationary conditions. The externality row is evaluated at lambda_P, whose
// default 0 asserts Phi == 1; gdp_ref defaults to the current GDP, which
// reduces the policy row to its own fixed point.
inline std::vector<double> step_residuals(const EconomyState& prev, const EconomyState& cur,
                                          const EconomyState& next, const ModelParams& p,
                                          double lambda_P = 0.0, double gdp_ref = 0.0) {
  const double e = std::exp(1.0);
  double v_h = cur.P_h * cur.Y_h, v_f = cur.P_f * cur.Y_f;
  std::vector<double> r(31);
  r[0] = cur.lambda - marginal_utility(cur.C, p.sigma);
  r[1] = -p.kappa + cur.lambda * cur.W_h + cur.nu;
  r[2] = -p.kappa + cur.lambda * cur.W_f + cur.nu;
  r[3] = cur.chi - cur.lambda + p.beta * next.lambda * (1.0 + cur.R);
  r[4] = -cur.chi + cur.gamma + cur.lambda - p.beta * cur.i_h * next.lambda;
  r[5] = v_f - p.j_f;
  r[6] = v_h * cur.D - p.j_h * cur.omega_h;
  r[7] = cur.D - payment_factor(cur.lambda, cur.R, p.beta);
  r[8] = cur.W_h * cur.n_h - (1.0 - p.phi_h - p.psi_h) * v_h;
  r[9] = cur.PL_h * cur.L_h - p.psi_h * v_h;
  r[10] = cur.iP_h * cur.K_h - p.phi_h * v_h;
  r[11] = cur.W_f * cur.n_f - (1.0 - p.phi_f - p.psi_f) * v_f;
  r[12] = cur.PL_f * cur.L_f - p.psi_f * v_f;
  r[13] = cur.iP_f * cur.K_f - p.phi_f * v_f;
  r[14] = cur.Y_h - production(cur.Phi, cur.K_h, cur.L_h, cur.n_h, p.phi_h, p.psi_h);
  r[15] = cur.Y_f - production(cur.Phi, cur.K_f, cur.L_f, cur.n_f, p.phi_f, p.psi_f);
  r[16] = cur.Y_h + cur.Y_f - cur.C - cur.I - cur.G;
  r[17] = cur.n_h + cur.n_f - p.n_bar;
  r[18] = cur.L_h + cur.L_f - p.L_bar;
  r[19] = cur.K_h + cur.K_f - (1.0 - p.delta_k) * (prev.K_h + prev.K_f) - cur.I;
  r[20] = cur.G_cum - (1.0 - p.delta_k) * prev.G_cum - prev.G;
  r[21] = cur.omega_h - std::pow((1.0 - cur.theta) * e * cur.R, -1.0 / (1.0 + cur.xi)) *
                            std::pow(1.0 - cur.mu, -cur.xi / (1.0 + cur.xi));
  r[22] = cur.omega_G - std::pow(e * cur.R, -1.0 / (1.0 + cur.xi));
  r[23] = cur.i_h - cur.R * std::pow(cur.omega_h, cur.xi);
  r[24] = cur.i_G - std::pow(cur.R, 1.0 / (1.0 + cur.xi)) * std::pow(e, -cur.xi / (1.0 + cur.xi));
  r[25] = cur.iP_h - producer_capital_rate(cur.R, cur.xi, p.phi_h);
  r[26] = cur.iP_f - producer_capital_rate(cur.R, cur.xi, p.phi_f);
  r[27] = cur.PL_h - cur.PL_f;
  r[28] = cur.G - p.gamma_d * cur.PL_h * p.L_bar *
                      (cur.omega_G - annuity_factor(cur.omega_G, cur.i_G));
  r[29] = cur.R - taylor_rate(prev.R, cur.GDP, gdp_ref > 0.0 ? gdp_ref : cur.GDP, p);
  r[30] = cur.Phi - externality(cur.G, cur.G_cum, lambda_P, p.delta_k);
  return r;
}

namespace detail {

// Unknown layout for the stationary solve. All entries except the three
// multipliers live in logs.
enum StateIndex : int {
  ix_lambda, ix_C, ix_chi, ix_gamma, ix_nu,
  ix_W_h, ix_W_f, ix_n_h, ix_n_f,
  ix_Y_h, ix_Y_f, ix_P_h, ix_P_f,
  ix_K_h, ix_K_f, ix_L_h, ix_L_f,
  ix_I, ix_G, ix_G_cum, ix_Phi,
  ix_PL_h, ix_PL_f, ix_R,
  ix_omega_h, ix_omega_G, ix_i_h, ix_i_G, ix_iP_h, ix_iP_f, ix_D,
  ix_count
};

inline bool is_linear_unknown(int i) { return i == ix_chi || i == ix_gamma || i == ix_nu; }

inline EconomyState unpack(const Eigen::VectorXd& x, const ModelParams& p) {
  auto val = [&](int i) { return is_linear_unknown(i) ? x[i] : std::exp(x[i]); };
  EconomyState s;
  s.theta = p.theta_bar;
  s.mu = p.mu_bar;
  s.xi = p.xi_bar;
  s.lambda = val(ix_lambda);
  s.C = val(ix_C);
  s.chi = val(ix_chi);
  s.gamma = val(ix_gamma);
  s.nu = val(ix_nu);
  s.W_h = val(ix_W_h);
  s.W_f = val(ix_W_f);
  s.n_h = val(ix_n_h);
  s.n_f = val(ix_n_f);
  s.Y_h = val(ix_Y_h);
  s.Y_f = val(ix_Y_f);
  s.P_h = val(ix_P_h);
  s.P_f = val(ix_P_f);
  s.K_h = val(ix_K_h);
  s.K_f = val(ix_K_f);
  s.L_h = val(ix_L_h);
  s.L_f = val(ix_L_f);
  s.I = val(ix_I);
  s.G = val(ix_G);
  s.G_cum = val(ix_G_cum);
  s.Phi = val(ix_Phi);
  s.PL_h = val(ix_PL_h);
  s.PL_f = val(ix_PL_f);
  s.R = val(ix_R);
  s.omega_h = val(ix_omega_h);
  s.omega_G = val(ix_omega_G);
  s.i_h = val(ix_i_h);
  s.i_G = val(ix_i_G);
  s.iP_h = val(ix_iP_h);
  s.iP_f = val(ix_iP_f);
  s.D = val(ix_D);
  s.GDP = s.C + s.I + s.G;
  return s;
}

inline Eigen::VectorXd stationary_rows(const Eigen::VectorXd& x, const ModelParams& p) {
  EconomyState s = unpack(x, p);
  std::vector<double> r = step_residuals(s, s, s, p);
  r[29] = s.R - p.R_bar;  // the policy fixed point, without its flat power form
  return Eigen::Map<Eigen::VectorXd>(r.data(), static_cast<int>(r.size()));
}

// Closure quantities that do not feed back into the stationary system.
inline void attach_stocks(EconomyState& s, const ModelParams& p) {
  double v_h = s.P_h * s.Y_h, v_f = s.P_f * s.Y_f;
  double wage_bill = s.W_h * s.n_h + s.W_f * s.n_f;
  s.H = v_h / p.delta_k;
  s.B = s.mu * s.H;
  s.M = (s.C + v_h / (s.R * s.omega_h) + v_f + s.theta * v_h + (s.i_h - 1.0) * s.B -
         wage_bill) / s.R;
  double capacity = s.PL_h * p.L_bar * (s.omega_G - annuity_factor(s.omega_G, s.i_G));
  s.deficit = (p.gamma_d - 1.0) * capacity - p.T_g * wage_bill - p.T_q * (v_h + v_f);
  s.GDP = s.C + s.I + s.G;
}

}  // namespace detail

// Stationary point of the economy: damped Newton on the 31 residual rows in
// log coordinates, starting from a deliberately crude guess. Throws when the
// iteration stalls or fails to reach tolerance.
inline SteadyState solve_steady_state(const ModelParams& p, double tol = 1e-10,
                                      int max_iter = 500) {
  using namespace detail;
  p.validate();

  Eigen::VectorXd x(ix_count);
  {
    // Crude but deterministic start: unit prices, symmetric factor split,
    // contract block at its closed forms for the stationary policy rate.
    auto hh = household_leverage_with_refi(p.theta_bar, p.R_bar, p.xi_bar, p.mu_bar);
    auto gov = government_leverage(p.R_bar, p.xi_bar);
    double C0 = 0.5, lam0 = std::pow(C0, -p.sigma);
    double D0 = payment_factor(lam0, p.R_bar, p.beta);
    double vh0 = p.j_h * hh.leverage / D0, vf0 = p.j_f;
    double iPh0 = producer_capital_rate(p.R_bar, p.xi_bar, p.phi_h);
    double iPf0 = producer_capital_rate(p.R_bar, p.xi_bar, p.phi_f);
    double Kh0 = p.phi_h * vh0 / iPh0, Kf0 = p.phi_f * vf0 / iPf0;
    double PL0 = (p.psi_h * vh0 + p.psi_f * vf0) / p.L_bar;
    double G0 = p.gamma_d * PL0 * p.L_bar * (gov.leverage - annuity_factor(gov.leverage, gov.rate));
    double chi0 = money_multiplier(lam0, p.R_bar, p.beta);
    x[ix_lambda] = std::log(lam0);
    x[ix_C] = std::log(C0);
    x[ix_chi] = chi0;
    x[ix_gamma] = chi0 - lam0 * (1.0 - p.beta * hh.rate);
    x[ix_nu] = p.kappa - lam0;
    x[ix_W_h] = x[ix_W_f] = 0.0;
    x[ix_n_h] = x[ix_n_f] = std::log(0.5 * p.n_bar);
    x[ix_Y_h] = std::log(vh0);
    x[ix_Y_f] = std::log(vf0);
    x[ix_P_h] = x[ix_P_f] = 0.0;
    x[ix_K_h] = std::log(Kh0);
    x[ix_K_f] = std::log(Kf0);
    x[ix_L_h] = x[ix_L_f] = std::log(0.5 * p.L_bar);
    x[ix_I] = std::log(p.delta_k * (Kh0 + Kf0));
    x[ix_G] = std::log(G0);
    x[ix_G_cum] = std::log(G0 / p.delta_k);
    x[ix_Phi] = 0.0;
    x[ix_PL_h] = x[ix_PL_f] = std::log(PL0);
    x[ix_R] = std::log(p.R_bar);
    x[ix_omega_h] = std::log(hh.leverage);
    x[ix_omega_G] = std::log(gov.leverage);
    x[ix_i_h] = std::log(hh.rate);
    x[ix_i_G] = std::log(gov.rate);
    x[ix_iP_h] = std::log(iPh0);
    x[ix_iP_f] = std::log(iPf0);
    x[ix_D] = std::log(D0);
  }

  Eigen::VectorXd F = stationary_rows(x, p);
  double norm = F.lpNorm<Eigen::Infinity>();
  int it = 0;
  for (; it < max_iter && norm > tol; ++it) {
    // Central-difference Jacobian; the system is smooth and cheap.
    Eigen::MatrixXd J(ix_count, ix_count);
    for (int j = 0; j < ix_count; ++j) {
      double h = 1e-6 * std::max(1.0, std::abs(x[j]));
      Eigen::VectorXd xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      J.col(j) = (stationary_rows(xp, p) - stationary_rows(xm, p)) / (2.0 * h);
    }
    Eigen::VectorXd dx = J.colPivHouseholderQr().solve(-F);
    double step = 1.0;
    for (;; step *= 0.5) {
      Eigen::VectorXd xn = x + step * dx;
      Eigen::VectorXd Fn = stationary_rows(xn, p);
      double nn = Fn.lpNorm<Eigen::Infinity>();
      if (nn < norm) {
        x = xn;
        F = Fn;
        norm = nn;
        break;
      }
      if (step < std::pow(2.0, -20))
        throw std::runtime_error("solve_steady_state: Newton stalled, no descent step found");
    }
  }
  if (norm > tol)
    throw std::runtime_error("solve_steady_state: no convergence within the iteration budget");

  SteadyState out;
  out.state = detail::unpack(x, p);
  detail::attach_stocks(out.state, p);
  out.residual_norm = norm;
  out.iterations = it;
  return out;
}

inline std::vector<std::string> state_column_names() {
  return {"theta", "mu",   "xi",   "R",    "omega_h", "omega_G", "i_h",  "i_G",  "iP_h",
          "iP_f",  "lambda", "chi", "gamma", "nu",     "C",       "D",    "Y_h",  "Y_f",
          "P_h",   "P_f",  "K_h",  "K_f",  "L_h",     "L_f",     "n_h",  "n_f",  "W_h",
          "W_f",   "PL_h", "PL_f", "I",    "Phi",     "G",       "G_cum", "H",   "B",
          "M",     "deficit", "GDP"};
}

inline std::vector<double> state_to_row(const EconomyState& s) {
  return {s.theta, s.mu,   s.xi,   s.R,    s.omega_h, s.omega_G, s.i_h,  s.i_G,  s.iP_h,
          s.iP_f,  s.lambda, s.chi, s.gamma, s.nu,    s.C,       s.D,    s.Y_h,  s.Y_f,
          s.P_h,   s.P_f,  s.K_h,  s.K_f,  s.L_h,     s.L_f,     s.n_h,  s.n_f,  s.W_h,
          s.W_f,   s.PL_h, s.PL_f, s.I,    s.Phi,     s.G,       s.G_cum, s.H,   s.B,
          s.M,     s.deficit, s.GDP};
}

}  // namespace reservoir
