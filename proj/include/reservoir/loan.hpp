#pragma once

#include <cmath>
#include <stdexcept>

namespace reservoir {

// Installment-contract algebra. A buyer finances a fraction (1 - theta) of a
// purchase at a rate that carries a premium over the base rate R growing with
// leverage, i = R * omega^xi. Picking the contract length that maximizes the
// discounted contract value per installment gives T = 1/i and the closed
// forms below. All rates are per period.

struct LoanTerms {
  double leverage;  // contract value per unit of per-period outlay, omega
  double rate;      // contracted installment rate, i
  double term;      // value-maximizing contract length, 1/i
};

namespace detail {

inline void require(bool ok, const char* what) {
  if (!ok) throw std::domain_error(what);
}

inline void check_contract_domain(double theta, double R, double xi, double mu) {
  require(theta >= 0.0 && theta < 1.0, "loan: down payment theta must lie in [0,1)");
  require(std::isfinite(R) && R > 0.0, "loan: base rate R must be positive");
  require(xi > 0.0, "loan: premium elasticity xi must be positive");
  require(xi < 1.0, "loan: premium elasticity xi must be below one");
  require(mu >= 0.0 && mu < 1.0, "loan: refinanced fraction mu must lie in [0,1)");
}

}  // namespace detail

// Contract length maximizing T * exp(-i T), the discounted value of a T-period
// claim under continuous discounting at the contract rate.
inline double optimal_term(double i) {
  detail::require(std::isfinite(i) && i > 0.0, "optimal_term: rate must be positive");
  return 1.0 / i;
}

// Present value of a unit installment paid for omega periods at rate i,
// (1 - (1+i)^-omega) / i. Degrades to omega as i -> 0.
inline double annuity_factor(double omega, double i) {
  detail::require(omega >= 0.0, "annuity_factor: term must be nonnegative");
  detail::require(i > -1.0, "annuity_factor: rate must exceed -1");
  if (std::abs(i) < 1e-12) return omega;
  return (1.0 - std::pow(1.0 + i, -omega)) / i;
}

// Household contract with a fraction mu of the balance refinanced each
// period. Leverage rises with theta (a larger financed stake is serviced per
// unit of down payment) and with mu, and falls with R.
inline LoanTerms household_leverage_with_refi(double theta, double R, double xi, double mu) {
  detail::check_contract_domain(theta, R, xi, mu);
  const double e = std::exp(1.0);
  double omega = std::pow((1.0 - theta) * e * R, -1.0 / (1.0 + xi)) *
                 std::pow(1.0 - mu, -xi / (1.0 + xi));
  double i = R * std::pow(omega, xi);
  return {omega, i, 1.0 / i};
}

inline LoanTerms household_leverage(double theta, double R, double xi) {
  return household_leverage_with_refi(theta, R, xi, 0.0);
}

// Contracted rate in closed form, R^(1/(1+xi)) * ((1-theta) e)^(-xi/(1+xi)),
// identical to R * omega^xi at the optimal contract.
inline double loan_rate(double theta, double R, double xi) {
  detail::check_contract_domain(theta, R, xi, 0.0);
  const double e = std::exp(1.0);
  return std::pow(R, 1.0 / (1.0 + xi)) * std::pow((1.0 - theta) * e, -xi / (1.0 + xi));
}

// Government borrowing: a full-financing contract with no down payment and no
// refinancing, priced off the same premium schedule.
inline LoanTerms government_leverage(double R, double xi) {
  detail::check_contract_domain(0.0, R, xi, 0.0);
  const double e = std::exp(1.0);
  double omega = std::pow(e * R, -1.0 / (1.0 + xi));
  double i = std::pow(R, 1.0 / (1.0 + xi)) * std::pow(e, -xi / (1.0 + xi));
  return {omega, i, 1.0 / i};
}

// Rate producers pay on capital, the fixed point of x = R (x / phi)^xi where
// phi is the sector capital share. Closed form (R / phi^xi)^(1/(1-xi)).
inline double producer_capital_rate(double R, double xi, double phi) {
  detail::require(std::isfinite(R) && R > 0.0, "producer_capital_rate: rate must be positive");
  detail::require(xi > 0.0 && xi < 1.0, "producer_capital_rate: xi must lie in (0,1)");
  detail::require(phi > 0.0 && phi < 1.0, "producer_capital_rate: capital share must lie in (0,1)");
  return std::pow(R / std::pow(phi, xi), 1.0 / (1.0 - xi));
}

}  // namespace reservoir
