#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace reservoir {

// Deep parameters of the two-sector credit economy. Defaults reproduce the
// baseline calibration used throughout the test suite. Rates are per period,
// shares are dimensionless, and phi_s + psi_s is the capital-plus-land share
// of sector s.
struct ModelParams {
  double beta = 0.98;      // household discount factor
  double beta_G = 0.98;    // government discount factor
  double delta_k = 0.01;   // depreciation of private and public capital
  double sigma = 0.9;      // inverse elasticity of intertemporal substitution
  double j_h = 0.2;        // preference weight, credit (durable) good
  double j_f = 0.2;        // preference weight, spot good
  double kappa = 0.1;      // linear labor disutility
  double chi = std::numeric_limits<double>::quiet_NaN();  // money-utility weight, derived in the stationary solve
  double T_g = 0.05;       // wage tax rate
  double T_q = 0.05;       // sales tax rate
  double theta_bar = 0.2833;  // down payment fraction, stationary level
  double mu_bar = 0.0336;     // refinanced fraction, stationary level
  double xi_bar = 0.0357;     // loan rate premium elasticity, stationary level
  double R_bar = 0.032;       // policy rate, stationary level
  double phi_h = 0.4;      // capital share, credit sector
  double psi_h = 0.3;      // land share, credit sector
  double phi_f = 0.5;      // capital share, spot sector
  double psi_f = 0.2;      // land share, spot sector
  double rho_R = 0.9929;   // policy rate smoothing
  double rho_Y = 0.0071;   // policy response to output
  double W_G = 0.5;        // public wage scale (reporting only)
  double gamma_d = 0.5;    // fraction of debt capacity the government draws
  double L_bar = 1.0;      // land endowment
  double n_bar = 1.0;      // time endowment
  double eta = 0.01;       // research productivity (growth extension)

  void validate() const {
    auto in_unit = [](double v) { return v > 0.0 && v < 1.0; };
    if (!(beta > 0.0 && beta < 1.0)) fail("beta must lie in (0,1)");
    if (!(beta_G > 0.0 && beta_G < 1.0)) fail("beta_G must lie in (0,1)");
    if (!in_unit(delta_k)) fail("delta_k must lie in (0,1)");
    if (!(sigma > 0.0)) fail("sigma must be positive");
    if (!(j_h > 0.0) || !(j_f > 0.0)) fail("preference weights j_h, j_f must be positive");
    if (!(kappa > 0.0)) fail("kappa must be positive");
    if (!std::isnan(chi))
      fail("chi is derived from the stationary money condition and cannot be set");
    if (T_g < 0.0 || T_g >= 1.0) fail("T_g must lie in [0,1)");
    if (T_q < 0.0 || T_q >= 1.0) fail("T_q must lie in [0,1)");
    if (theta_bar < 0.0 || theta_bar >= 1.0) fail("theta_bar must lie in [0,1)");
    if (mu_bar < 0.0 || mu_bar >= 1.0) fail("mu_bar must lie in [0,1)");
    if (!(xi_bar > 0.0 && xi_bar < 1.0)) fail("xi_bar must lie in (0,1)");
    if (!(R_bar > 0.0)) fail("R_bar must be positive");
    if (!(R_bar > 1.0 / beta - 1.0))
      fail("R_bar must exceed 1/beta - 1, otherwise money demand is unbounded");
    if (!in_unit(phi_h) || !in_unit(psi_h) || !(phi_h + psi_h < 1.0))
      fail("credit sector factor shares must be positive with phi_h + psi_h < 1");
    if (!in_unit(phi_f) || !in_unit(psi_f) || !(phi_f + psi_f < 1.0))
      fail("spot sector factor shares must be positive with phi_f + psi_f < 1");
    if (rho_R < 0.0 || rho_R >= 1.0) fail("rho_R must lie in [0,1)");
    if (rho_Y < 0.0) fail("rho_Y must be nonnegative");
    if (!(W_G > 0.0)) fail("W_G must be positive");
    if (!(gamma_d > 0.0 && gamma_d <= 1.0)) fail("gamma_d must lie in (0,1]");
    if (!(L_bar > 0.0)) fail("L_bar must be positive");
    if (!(n_bar > 0.0)) fail("n_bar must be positive");
    if (!(eta >= 0.0)) fail("eta must be nonnegative");
  }

 private:
  [[noreturn]] static void fail(const std::string& what) {
    throw std::invalid_argument("ModelParams: " + what);
  }
};

}  // namespace reservoir
