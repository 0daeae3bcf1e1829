#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "reservoir/growth.hpp"

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

// one constant wage bill discounted at one constant rate
GrowthEnv flat_env(double wb, double r) {
  GrowthEnv env;
  env.wage_bill = {wb};
  env.rate = {r};
  env.sigma_n = 0.0;
  return env;
}

double annuity_sum(double r, int H) { return (1.0 - std::pow(1.0 + r, -H)) / r; }

}  // namespace

TEST_CASE("the wage bill's demand form matches the factor payments", "[growth]") {
  const ModelParams& p = params();
  const EconomyState& s = steady().state;
  WageBillReport r = wage_bill(s, p);

  CHECK(r.direct == s.W_h * s.n_h + s.W_f * s.n_f);
  CHECK(r.model_form == Catch::Approx(r.direct).epsilon(1e-12));

  // the published form swaps the payment sum for (1+R)/R and lands far away
  double S = (1.0 + s.R) / (1.0 + s.R - p.beta);
  double jf_term = p.j_f * (1.0 - p.phi_f - p.psi_f);
  CHECK((r.perpetuity_form - jf_term) / (r.model_form - jf_term) ==
        Catch::Approx(S * (1.0 + s.R) / s.R).epsilon(1e-12));
  CHECK(r.perpetuity_form > 100.0 * r.direct);

  // both closed forms are linear in leverage
  EconomyState lifted = s;
  lifted.omega_h *= 1.5;
  WageBillReport r2 = wage_bill(lifted, p);
  CHECK(r2.model_form - jf_term == Catch::Approx(1.5 * (r.model_form - jf_term)).epsilon(1e-14));
  CHECK(r2.perpetuity_form - jf_term == Catch::Approx(1.5 * (r.perpetuity_form - jf_term)).epsilon(1e-14));
  CHECK(r2.model_form > r.model_form);

  ModelParams solo = p;
  solo.j_h = 0.0;
  CHECK(wage_bill(s, solo).model_form == jf_term);
}

TEST_CASE("research value vanishes at full production allocation", "[growth]") {
  GrowthEnv env = flat_env(0.15, 0.032);
  DiscountedValue v = rd_discounted_value(env, 1.0, 100, 50, 7);
  CHECK(v.value == 0.0);
  CHECK(v.std_error == 0.0);
  CHECK(v.tail_bound == 0.0);
  CHECK_FALSE(v.divergent);
  CHECK(v.draws == 50);
}

TEST_CASE("deterministic environments price the stream in closed form", "[growth]") {
  GrowthEnv env = flat_env(0.15, 0.032);
  env.eta = 0.01;
  env.n0 = 2.0;
  DiscountedValue v = rd_discounted_value(env, 0.5, 500, 16, 11);
  double closed = 0.01 * 0.5 * 2.0 * 0.15 * annuity_sum(0.032, 500);
  CHECK(v.value == Catch::Approx(closed).epsilon(1e-12));
  CHECK(v.std_error == Catch::Approx(0.0).margin(1e-12));
  CHECK_FALSE(v.divergent);
  CHECK(expected_wage_stream(env, 500) == Catch::Approx(0.15 * annuity_sum(0.032, 500)).epsilon(1e-12));
}

TEST_CASE("noisy population paths agree with the analytic mean", "[growth]") {
  GrowthEnv env = flat_env(0.15, 0.032);
  env.sigma_n = 0.01;
  env.n_g = 0.001;
  DiscountedValue v = rd_discounted_value(env, 0.3, 300, 40000, 17);
  double analytic = env.eta * 0.7 * env.n0 * expected_wage_stream(env, 300);
  CHECK(std::abs(v.value - analytic) < 5.0 * v.std_error);
  CHECK(std::abs(v.value / analytic - 1.0) < 0.01);
  CHECK(v.std_error > 0.0);

  // the research productivity scales the value exactly
  GrowthEnv doubled = env;
  doubled.eta = 2.0 * env.eta;
  DiscountedValue v2 = rd_discounted_value(doubled, 0.3, 300, 40000, 17);
  CHECK(v2.value == 2.0 * v.value);

  // quadrupling the draws roughly halves the error estimate
  DiscountedValue coarse = rd_discounted_value(env, 0.3, 300, 10000, 17);
  CHECK(coarse.std_error / v.std_error == Catch::Approx(2.0).margin(0.3));
}

TEST_CASE("a growing population can outrun discounting", "[growth]") {
  GrowthEnv fast = flat_env(0.15, 0.032);
  fast.sigma_n = 0.01;
  fast.n_g = 0.04;
  DiscountedValue v = rd_discounted_value(fast, 0.0, 50, 16, 3);
  CHECK(v.divergent);
  CHECK(std::isinf(v.tail_bound));

  GrowthEnv slow = flat_env(0.15, 0.032);
  slow.n_g = 0.01;
  DiscountedValue head = rd_discounted_value(slow, 0.0, 200, 4, 3);
  DiscountedValue more = rd_discounted_value(slow, 0.0, 400, 4, 3);
  CHECK_FALSE(head.divergent);
  CHECK(head.tail_bound > 0.0);
  // with constant rate and growth the geometric bound is the tail itself
  CHECK(more.value - head.value == Catch::Approx(head.tail_bound).epsilon(0.02));
  CHECK(more.value - head.value < head.tail_bound);
}

TEST_CASE("the equilibrium production share solves the indifference condition", "[growth]") {
  GrowthEnv env = flat_env(0.15, 0.032);
  double V = expected_wage_stream(env, env.horizon);
  CHECK(V == Catch::Approx(0.15 * annuity_sum(0.032, 2000)).epsilon(1e-12));

  AlphaOptions literal;
  literal.feedback = false;

  env.eta = 1.0 / V;
  AlphaResult at_zero = equilibrium_alpha(env, literal);
  CHECK(at_zero.alpha == Catch::Approx(0.0).margin(1e-14));
  CHECK_FALSE(at_zero.clamped);

  env.eta = 0.5 / V;
  AlphaResult under = equilibrium_alpha(env, literal);
  CHECK(under.alpha == 0.0);
  CHECK(under.clamped);

  env.eta = 2.0 / V;
  AlphaResult half = equilibrium_alpha(env, literal);
  CHECK(half.alpha == Catch::Approx(0.5).epsilon(1e-12));
  CHECK(half.stream == Catch::Approx(V).epsilon(1e-12));

  // with feedback the share solves alpha = 1 - 1/(c alpha), upper root
  for (double c : {4.2, 5.0, 8.0, 20.0, 42.0}) {
    env.eta = c / V;
    AlphaResult res = equilibrium_alpha(env);
    double root = 0.5 * (1.0 + std::sqrt(1.0 - 4.0 / c));
    CHECK_FALSE(res.clamped);
    CHECK(res.alpha == Catch::Approx(root).margin(1e-8));
    CHECK(res.alpha == Catch::Approx(1.0 - 1.0 / (c * res.alpha)).margin(1e-9));
    CHECK(res.stream == Catch::Approx(res.alpha * V).epsilon(1e-12));
    CHECK(res.iterations > 0);
  }

  env.eta = 3.9 / V;
  AlphaResult corner = equilibrium_alpha(env);
  CHECK(corner.alpha == 0.0);
  CHECK(corner.clamped);
  CHECK(corner.stream == 0.0);

  env.eta = 1e6 / V;
  CHECK(equilibrium_alpha(env).alpha > 0.999);

  // the share rises with the research productivity in both modes
  double last_fb = 0.0, last_lit = 0.0;
  for (double c : {4.5, 6.0, 9.0, 15.0, 30.0}) {
    env.eta = c / V;
    double fb = equilibrium_alpha(env).alpha;
    double lit = equilibrium_alpha(env, literal).alpha;
    CHECK(fb > last_fb);
    CHECK(lit > last_lit);
    last_fb = fb;
    last_lit = lit;
  }

  AlphaOptions bad;
  bad.damping = 0.0;
  CHECK_THROWS_AS(equilibrium_alpha(env, bad), std::invalid_argument);
}

TEST_CASE("technology compounds the research share", "[growth]") {
  GrowthEnv env = flat_env(0.15, 0.032);
  env.eta = 0.01;
  env.A0 = 2.5;

  std::vector<double> all_production(20, 1.0);
  for (double a : technology_path(env, all_production)) CHECK(a == 2.5);

  env.A0 = 1.0;
  std::vector<double> all_research(10, 0.0);
  std::vector<double> A = technology_path(env, all_research);
  REQUIRE(A.size() == 11);
  CHECK(A[10] == Catch::Approx(1.1046221254112045).epsilon(1e-14));

  // the level is the running product of the per-period factors
  env.n_g = 0.005;
  env.n0 = 1.3;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> alphas(50);
  for (double& a : alphas) a = u(rng);
  std::vector<double> path = technology_path(env, alphas);
  double prod = 1.0, n = env.n0, g = std::exp(env.n_g);
  for (double a : alphas) {
    prod *= 1.0 + env.eta * (1.0 - a) * n;
    n *= g;
  }
  CHECK(path.back() / path.front() == Catch::Approx(prod).epsilon(1e-12));

  // splitting the horizon reproduces the same terminal level exactly
  GrowthEnv tail_env = env;
  double n_mid = env.n0;
  for (int t = 0; t < 30; ++t) n_mid *= g;
  tail_env.n0 = n_mid;
  tail_env.A0 = path[30];
  std::vector<double> tail = technology_path(
      tail_env, std::vector<double>(alphas.begin() + 30, alphas.end()));
  CHECK(tail.back() == path.back());

  // shifting labor into research raises every later level
  std::vector<double> lower(alphas);
  for (double& a : lower) a *= 0.5;
  std::vector<double> faster = technology_path(env, lower);
  for (std::size_t t = 1; t < faster.size(); ++t) {
    CHECK(faster[t] > path[t]);
    CHECK(path[t] >= path[t - 1]);
  }

  CHECK_THROWS_AS(technology_path(env, {0.5, 1.2}), std::invalid_argument);
}

TEST_CASE("offsetting the discount rate restores the research share", "[growth]") {
  GrowthEnv env = flat_env(0.15, 0.032);
  double V = expected_wage_stream(env, env.horizon);
  env.eta = 9.375 / V;
  double alpha0 = equilibrium_alpha(env).alpha;
  CHECK(alpha0 == Catch::Approx(0.5 * (1.0 + std::sqrt(1.0 - 4.0 / 9.375))).margin(1e-8));

  // already at the target: no shift needed
  CHECK(std::abs(offsetting_rate(env, alpha0)) < 1e-8);

  // a richer wage stream pulls labor out of research; a higher rate offsets it
  GrowthEnv richer = env;
  for (double& w : richer.wage_bill) w *= 1.3;
  double up = offsetting_rate(richer, alpha0);
  CHECK(up > 0.0);
  GrowthEnv shifted = richer;
  for (double& r : shifted.rate) r += up;
  CHECK(equilibrium_alpha(shifted).alpha == Catch::Approx(alpha0).margin(1e-6));

  // a falling population devalues research claims; a lower rate offsets it
  GrowthEnv shrinking = env;
  shrinking.n_g = -0.01;
  double down = offsetting_rate(shrinking, alpha0);
  CHECK(down < 0.0);
  GrowthEnv eased = shrinking;
  for (double& r : eased.rate) r += down;
  CHECK(equilibrium_alpha(eased).alpha == Catch::Approx(alpha0).margin(1e-6));

  // the literal share responds to the shift as well
  AlphaOptions literal;
  literal.feedback = false;
  GrowthEnv lit_env = env;
  lit_env.eta = 1.0 / V;
  REQUIRE(equilibrium_alpha(lit_env, literal).alpha == Catch::Approx(0.0).margin(1e-12));
  double lit_shift = offsetting_rate(lit_env, 0.3, literal);
  CHECK(lit_shift < 0.0);
  GrowthEnv lit_shifted = lit_env;
  for (double& r : lit_shifted.rate) r += lit_shift;
  CHECK(equilibrium_alpha(lit_shifted, literal).alpha == Catch::Approx(0.3).margin(1e-6));

  // shares beyond the reachable band fail loudly
  CHECK_THROWS_AS(offsetting_rate(env, 0.99999), std::runtime_error);
  // the feedback share jumps from the interior to zero, never landing at 1e-4
  CHECK_THROWS_AS(offsetting_rate(env, 1e-4), std::runtime_error);
}

TEST_CASE("growth environments reject nonsense", "[growth]") {
  GrowthEnv env = flat_env(0.15, 0.032);
  CHECK_NOTHROW(env.validate());

  GrowthEnv bad = env;
  bad.eta = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = env;
  bad.wage_bill.clear();
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = env;
  bad.wage_bill = {0.15, -0.1};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = env;
  bad.rate = {0.0};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = env;
  bad.sigma_n = -0.01;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = env;
  bad.horizon = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = env;
  bad.A0 = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = env;
  bad.n0 = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  CHECK_THROWS_AS(expected_wage_stream(env, 0), std::invalid_argument);
  CHECK_THROWS_AS(rd_discounted_value(env, 1.5, 10, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(rd_discounted_value(env, 0.5, 10, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(offsetting_rate(env, 1.5), std::invalid_argument);
}
