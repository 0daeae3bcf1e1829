#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>

#include "reservoir/simulate.hpp"

using namespace reservoir;

namespace {

const ModelParams& params() {
  static ModelParams p;
  return p;
}

const SteadyState& steady() {
  static SteadyState ss = solve_steady_state(params());
  return ss;
}

}  // namespace

TEST_CASE("silent shocks keep the economy at its stationary point", "[sim]") {
  ShockSpec spec;
  spec.sigma = {0.0, 0.0, 0.0, 0.0};
  ShockPanel panel = draw_shocks(spec, params(), 1000, 7);
  SimPath path = simulate(params(), steady(), panel);
  const EconomyState& b = steady().state;
  for (int t = 0; t < 1000; t += 97) {
    const EconomyState& s = path.states[t];
    CHECK(std::abs(s.C - b.C) < 1e-8);
    CHECK(std::abs(s.omega_h - b.omega_h) < 1e-8);
    CHECK(std::abs(s.I - b.I) < 1e-8);
    CHECK(std::abs(s.G_cum - b.G_cum) < 1e-8);
    CHECK(std::abs(s.H - b.H) < 1e-8);
    CHECK(std::abs(s.M - b.M) < 1e-6);
  }
}

TEST_CASE("one step from the stationary point is a fixed point", "[sim]") {
  const ModelParams& p = params();
  const EconomyState& b = steady().state;
  EconomyState s = step_economy(b, p.theta_bar, p.mu_bar, p.xi_bar, p.R_bar, p);
  CHECK(s.lambda == Catch::Approx(b.lambda).epsilon(1e-10));
  CHECK(s.C == Catch::Approx(b.C).epsilon(1e-10));
  CHECK(s.I == Catch::Approx(b.I).epsilon(1e-8));
  CHECK(s.G == Catch::Approx(b.G).epsilon(1e-10));
  CHECK(s.G_cum == Catch::Approx(b.G_cum).epsilon(1e-10));
  CHECK(s.Phi == Catch::Approx(1.0).epsilon(1e-9));
  CHECK(s.n_h == Catch::Approx(b.n_h).epsilon(1e-10));
  CHECK(s.M == Catch::Approx(b.M).epsilon(1e-9));
  CHECK(s.deficit == Catch::Approx(b.deficit).epsilon(1e-9));
}

TEST_CASE("within-period conditions clear along stochastic paths", "[sim]") {
  ShockSpec spec;
  ShockPanel panel = draw_shocks(spec, params(), 2000, 42);
  SimPath path = simulate(params(), steady(), panel);
  double worst = 0.0;
  for (double r : path.clearing_residual) worst = std::max(worst, r);
  CHECK(worst < 1e-6);
  for (int t = 0; t < 2000; t += 211) {
    const EconomyState& s = path.states[t];
    CHECK(s.B == Catch::Approx(s.mu * s.H).epsilon(1e-12));
    CHECK(s.P_h * s.Y_h * s.D == Catch::Approx(params().j_h * s.omega_h).epsilon(1e-10));
    CHECK(std::isfinite(path.taylor_gap[t]));
  }
}

TEST_CASE("latent processes have the configured moments", "[sim]") {
  ShockSpec spec;
  spec.rho = {0.0, 0.0, 0.0, 0.0};
  int T = 1000000;
  ShockPanel panel = draw_shocks(spec, params(), T, 11);
  for (int j = 0; j < 4; ++j) {
    double mean = panel.latent.col(j).mean();
    double sd = std::sqrt((panel.latent.col(j).array() - mean).square().sum() / (T - 1));
    CHECK(std::abs(sd / spec.sigma[j] - 1.0) < 0.01);
    CHECK(std::abs(mean) < 3.0 * spec.sigma[j] / std::sqrt(static_cast<double>(T)) + 1e-6);
  }

  ShockSpec ar;
  ShockPanel p2 = draw_shocks(ar, params(), T, 12);
  for (int j = 0; j < 4; ++j) {
    auto x = p2.latent.col(j);
    double m = x.mean();
    double num = 0.0, den = 0.0;
    for (int t = 1; t < T; ++t) num += (x(t) - m) * (x(t - 1) - m);
    for (int t = 0; t < T; ++t) den += (x(t) - m) * (x(t) - m);
    CHECK(num / den == Catch::Approx(0.9).margin(0.01));
    double sd = std::sqrt(den / (T - 1));
    CHECK(std::abs(sd / (ar.sigma[j] / std::sqrt(1.0 - 0.81)) - 1.0) < 0.02);
  }
}

TEST_CASE("level transforms respect their domains and anchor at the baseline", "[sim]") {
  const ModelParams& p = params();
  ShockSpec spec;
  ShockPanel panel = draw_shocks(spec, p, 5000, 13);
  CHECK(panel.levels(0, SHOCK_R) == Catch::Approx(p.R_bar).epsilon(1e-14));
  CHECK(panel.levels(0, SHOCK_MU) == Catch::Approx(p.mu_bar).epsilon(1e-14));
  CHECK(panel.levels(0, SHOCK_THETA) == Catch::Approx(p.theta_bar).epsilon(1e-14));
  CHECK(panel.levels(0, SHOCK_XI) == Catch::Approx(p.xi_bar).epsilon(1e-14));
  for (int t = 0; t < 5000; ++t) {
    CHECK(panel.levels(t, SHOCK_R) > 0.0);
    CHECK(panel.levels(t, SHOCK_MU) > 0.0);
    CHECK(panel.levels(t, SHOCK_MU) < 1.0);
    CHECK(panel.levels(t, SHOCK_THETA) > 0.0);
    CHECK(panel.levels(t, SHOCK_THETA) < 1.0);
    CHECK(panel.levels(t, SHOCK_XI) > 0.0);
    CHECK(panel.levels(t, SHOCK_XI) < 1.0);
  }
  // The log transform is exact in the latent state.
  CHECK(panel.levels(17, SHOCK_R) ==
        Catch::Approx(p.R_bar * std::exp(panel.latent(17, SHOCK_R))).epsilon(1e-14));
}

TEST_CASE("identical seeds reproduce identical panels", "[sim]") {
  ShockSpec spec;
  ShockPanel a = draw_shocks(spec, params(), 500, 99);
  ShockPanel b = draw_shocks(spec, params(), 500, 99);
  CHECK((a.levels - b.levels).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.innovations - b.innovations).cwiseAbs().maxCoeff() == 0.0);
  ShockPanel c = draw_shocks(spec, params(), 500, 100);
  CHECK((a.levels - c.levels).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("a dear-money impulse lowers leverage and dominates output", "[sim]") {
  ShockSpec spec;
  Eigen::MatrixXd r_irf = impulse_response_path(params(), steady(), spec, SHOCK_R, 1.0, 40);
  CHECK(r_irf(0, 10) < 0.0);  // omega_h falls on impact
  CHECK(r_irf(0, 4) > 0.0);   // consumption rises with the money-demand wedge
  double gdp_r = std::abs(r_irf(0, 6));
  for (int which : {SHOCK_MU, SHOCK_THETA, SHOCK_XI}) {
    Eigen::MatrixXd other = impulse_response_path(params(), steady(), spec, which, 1.0, 40);
    CHECK(gdp_r > std::abs(other(0, 6)));
  }
  // Impulses decay back toward the stationary point.
  CHECK(std::abs(r_irf(39, 10)) < 0.05 * std::abs(r_irf(0, 10)));
}

TEST_CASE("down-payment relief raises leverage and credit-sector activity", "[sim]") {
  ShockSpec spec;
  Eigen::MatrixXd irf = impulse_response_path(params(), steady(), spec, SHOCK_THETA, 1.0, 20);
  CHECK(irf(0, 10) > 0.0);  // omega_h
  CHECK(irf(0, 8) + irf(0, 2) > 0.0);  // value of the credit good rises with theta
  CHECK(irf(0, 7) > 0.0);   // labor shifts into the credit sector
  Eigen::MatrixXd mu_irf = impulse_response_path(params(), steady(), spec, SHOCK_MU, 1.0, 20);
  CHECK(mu_irf(0, 10) > 0.0);
  CHECK(std::abs(mu_irf(0, 10)) < std::abs(irf(0, 10)));  // refinancing channel is weaker
}

TEST_CASE("observation panel centers the stationary path at zero", "[sim]") {
  ShockSpec spec;
  spec.sigma = {0.0, 0.0, 0.0, 0.0};
  ShockPanel panel = draw_shocks(spec, params(), 50, 1);
  SimPath path = simulate(params(), steady(), panel);
  Eigen::MatrixXd X = observation_panel(path, steady());
  REQUIRE(X.rows() == 50);
  REQUIRE(X.cols() == 13);
  REQUIRE(panel_columns.size() == 13);
  CHECK(X.cwiseAbs().maxCoeff() < 1e-6);
  Eigen::MatrixXd Xd = observation_panel(path, steady(), 20);
  CHECK(Xd.rows() == 30);
  CHECK_THROWS_AS(observation_panel(path, steady(), 50), std::invalid_argument);
}

TEST_CASE("infeasible policy rates fail loudly with the period index", "[sim]") {
  ShockSpec spec;
  ShockPanel panel = impulse_panel(spec, params(), 5, SHOCK_R, -45.0);
  REQUIRE(panel.levels(0, SHOCK_R) < 1.0 / params().beta - 1.0);
  try {
    simulate(params(), steady(), panel);
    FAIL("expected a feasibility error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("period 0") != std::string::npos);
  }
  CHECK_THROWS_AS(draw_shocks(ShockSpec{}, params(), 0, 1), std::invalid_argument);
  ShockSpec bad;
  bad.rho[2] = 1.0;
  CHECK_THROWS_AS(draw_shocks(bad, params(), 10, 1), std::invalid_argument);
}
