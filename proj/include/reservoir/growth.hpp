#pragma once

// Labor split between current production and research. Workers weigh the
// discounted expected stream of production wages against the technology
// claims research would earn; the production share alpha equates the two.
// Population follows a lognormal random walk, technology compounds with the
// research share, and a uniform shift of the discount rate can hold the
// research share at a target.

#include <reservoir/equilibrium.hpp>
#include <reservoir/params.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace reservoir {

struct WageBillReport {
  double direct;      // W_h n_h + W_f n_f as simulated
  double model_form;  // C^sigma omega_h j_h (1-phi_h-psi_h) / S + j_f (1-phi_f-psi_f)
  double perpetuity_form;  // same with the payment sum replaced by (1+R)/R
};

// Total wage bill in three forms: the simulated factor payments, the demand
// closed form (identical by construction), and the published approximation
// whose payment factor drops the discounting wedge. The published form's gap
// is reported, not absorbed.
inline WageBillReport wage_bill(const EconomyState& s, const ModelParams& p) {
  WageBillReport r;
  r.direct = s.W_h * s.n_h + s.W_f * s.n_f;
  double S = payment_factor(1.0, s.R, p.beta);
  double scale = std::pow(s.C, p.sigma) * s.omega_h * p.j_h * (1.0 - p.phi_h - p.psi_h);
  r.model_form = scale / S + p.j_f * (1.0 - p.phi_f - p.psi_f);
  r.perpetuity_form = scale * (1.0 + s.R) / s.R + p.j_f * (1.0 - p.phi_f - p.psi_f);
  return r;
}

// Research-allocation environment: R&D productivity, a lognormal population
// path, and future wage-bill and discount-rate paths, both held at their last
// entry beyond the end.
struct GrowthEnv {
  double eta = 0.01;       // research productivity
  double n0 = 1.0;         // current labor supply
  double n_g = 0.0;        // mean log population growth
  double sigma_n = 0.01;   // std of log population growth
  std::vector<double> wage_bill;  // future total wage bill at the baseline population
  std::vector<double> rate;       // one-period discount rates
  int horizon = 2000;      // truncation for discounted streams
  double A0 = 1.0;         // current technology level

  void validate() const {
    if (!(std::isfinite(eta) && eta > 0.0))
      throw std::invalid_argument("GrowthEnv: eta must be positive");
    if (!(std::isfinite(n0) && n0 > 0.0))
      throw std::invalid_argument("GrowthEnv: n0 must be positive");
    if (!std::isfinite(n_g)) throw std::invalid_argument("GrowthEnv: n_g must be finite");
    if (!(std::isfinite(sigma_n) && sigma_n >= 0.0))
      throw std::invalid_argument("GrowthEnv: sigma_n must be nonnegative");
    if (wage_bill.empty()) throw std::invalid_argument("GrowthEnv: wage bill path is empty");
    for (double w : wage_bill)
      if (!(std::isfinite(w) && w > 0.0))
        throw std::invalid_argument("GrowthEnv: wage bill entries must be positive");
    if (rate.empty()) throw std::invalid_argument("GrowthEnv: rate path is empty");
    for (double r : rate)
      if (!(std::isfinite(r) && r > 0.0))
        throw std::invalid_argument("GrowthEnv: rate entries must be positive");
    if (horizon < 1) throw std::invalid_argument("GrowthEnv: horizon must be positive");
    if (!(std::isfinite(A0) && A0 > 0.0))
      throw std::invalid_argument("GrowthEnv: A0 must be positive");
  }
};

namespace detail {

inline double held_at(const std::vector<double>& v, int k) {
  return v[std::min<std::size_t>(static_cast<std::size_t>(k), v.size() - 1)];
}

}  // namespace detail

// Analytic expectation of the discounted wage stream over the lognormal
// population path: sum over k of wb_k * exp(k (n_g + sigma_n^2/2)) / prod(1+R).
inline double expected_wage_stream(const GrowthEnv& env, int horizon) {
  env.validate();
  if (horizon < 1) throw std::invalid_argument("expected_wage_stream: horizon must be positive");
  double growth = std::exp(env.n_g + 0.5 * env.sigma_n * env.sigma_n);
  double pop = 1.0, disc = 1.0, sum = 0.0;
  for (int k = 1; k <= horizon; ++k) {
    pop *= growth;
    disc /= 1.0 + detail::held_at(env.rate, k - 1);
    sum += detail::held_at(env.wage_bill, k - 1) * pop * disc;
  }
  return sum;
}

struct DiscountedValue {
  double value;       // eta (1-alpha) n0 times the Monte-Carlo stream mean
  double std_error;   // Monte-Carlo standard error of the value
  double tail_bound;  // geometric bound on the truncated remainder (mean path)
  bool divergent;     // the truncated tail does not contract
  int draws;
};

// Expected discounted value of research labor: eta (1-alpha) n0 times the
// discounted wage-bill stream, the expectation taken by Monte Carlo over the
// lognormal population path. Truncated at the horizon with the geometric tail
// bound of the mean path reported; a non-contracting tail is flagged.
inline DiscountedValue rd_discounted_value(const GrowthEnv& env, double alpha, int horizon,
                                           int draws = 10000, std::uint64_t seed = 1) {
  env.validate();
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("rd_discounted_value: alpha must lie in [0,1]");
  if (horizon < 1) throw std::invalid_argument("rd_discounted_value: horizon must be positive");
  if (draws < 2) throw std::invalid_argument("rd_discounted_value: needs at least two draws");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double sum = 0.0, sum_sq = 0.0;
  for (int d = 0; d < draws; ++d) {
    double logpop = 0.0, disc = 1.0, total = 0.0;
    for (int k = 1; k <= horizon; ++k) {
      logpop += env.n_g + env.sigma_n * gauss(rng);
      disc /= 1.0 + detail::held_at(env.rate, k - 1);
      total += detail::held_at(env.wage_bill, k - 1) * std::exp(logpop) * disc;
    }
    sum += total;
    sum_sq += total * total;
  }
  double scale = env.eta * (1.0 - alpha) * env.n0;
  double mean = sum / draws;
  double var = std::max(0.0, sum_sq / draws - mean * mean) / (draws - 1.0);

  double growth = std::exp(env.n_g + 0.5 * env.sigma_n * env.sigma_n);
  double pop = 1.0, disc = 1.0, last_term = 0.0;
  for (int k = 1; k <= horizon; ++k) {
    pop *= growth;
    disc /= 1.0 + detail::held_at(env.rate, k - 1);
    last_term = detail::held_at(env.wage_bill, k - 1) * pop * disc;
  }
  double q = growth / (1.0 + detail::held_at(env.rate, horizon));

  DiscountedValue out;
  out.value = scale * mean;
  out.std_error = scale * std::sqrt(var);
  out.divergent = q >= 1.0;
  out.tail_bound = out.divergent ? std::numeric_limits<double>::infinity()
                                 : scale * last_term * q / (1.0 - q);
  out.draws = draws;
  return out;
}

struct AlphaOptions {
  bool feedback = true;   // wage stream scales with the production share
  double tol = 1e-10;
  int max_iter = 10000;
  double damping = 0.5;
};

struct AlphaResult {
  double alpha = 0.0;
  bool clamped = false;  // the indifference condition forced the corner
  int iterations = 0;
  double stream = 0.0;   // discounted wage stream at the solution
};

// Production share leaving workers indifferent between sectors,
// alpha = 1 - 1/(eta * stream). With feedback the stream itself scales with
// alpha and the share solves a damped fixed-point iteration; without it the
// literal formula is evaluated on the full-allocation stream. Clamped at zero
// when research dominates at every interior share.
inline AlphaResult equilibrium_alpha(const GrowthEnv& env, const AlphaOptions& opt = {}) {
  if (!(opt.tol > 0.0) || opt.max_iter < 1 || !(opt.damping > 0.0 && opt.damping <= 1.0))
    throw std::invalid_argument("equilibrium_alpha: bad options");
  double V = expected_wage_stream(env, env.horizon);
  AlphaResult out;
  if (!opt.feedback) {
    double a = 1.0 - 1.0 / (env.eta * V);
    out.clamped = a < 0.0;
    out.alpha = std::max(0.0, a);
    out.stream = V;
    return out;
  }
  double c = env.eta * V;
  double a = 1.0;
  for (int it = 1; it <= opt.max_iter; ++it) {
    out.iterations = it;
    if (c * a <= 1.0) {  // the map turns nonpositive: corner solution
      out.alpha = 0.0;
      out.clamped = true;
      out.stream = 0.0;
      return out;
    }
    double next = (1.0 - opt.damping) * a + opt.damping * (1.0 - 1.0 / (c * a));
    if (next <= 0.0) {
      out.alpha = 0.0;
      out.clamped = true;
      out.stream = 0.0;
      return out;
    }
    if (std::abs(next - a) < opt.tol) {
      out.alpha = next;
      out.stream = next * V;
      return out;
    }
    a = next;
  }
  throw std::runtime_error("equilibrium_alpha: no convergence");
}

// Technology recursion A_{t+1} = A_t (1 + eta (1-alpha_t) n_t) along the mean
// population path, n growing stepwise by exp(n_g). Returns T+1 levels from A0.
inline std::vector<double> technology_path(const GrowthEnv& env,
                                           const std::vector<double>& alpha_path) {
  env.validate();
  for (double a : alpha_path)
    if (!(a >= 0.0 && a <= 1.0))
      throw std::invalid_argument("technology_path: alpha entries must lie in [0,1]");
  std::vector<double> A(alpha_path.size() + 1);
  A[0] = env.A0;
  double n = env.n0;
  double growth = std::exp(env.n_g);
  for (std::size_t t = 0; t < alpha_path.size(); ++t) {
    A[t + 1] = A[t] * (1.0 + env.eta * (1.0 - alpha_path[t]) * n);
    n *= growth;
  }
  return A;
}

// Uniform shift of the discount-rate path that moves the equilibrium
// production share to the target, found by bisection with the shifted rates
// kept inside [1e-4, 0.5].
inline double offsetting_rate(const GrowthEnv& env, double target_alpha,
                              const AlphaOptions& opt = {}) {
  env.validate();
  if (!(target_alpha > 0.0 && target_alpha < 1.0))
    throw std::invalid_argument("offsetting_rate: target must lie in (0,1)");
  double min_rate = *std::min_element(env.rate.begin(), env.rate.end());
  double max_rate = *std::max_element(env.rate.begin(), env.rate.end());
  double lo = 1e-4 - min_rate, hi = 0.5 - max_rate;
  if (!(lo < hi)) throw std::runtime_error("offsetting_rate: rate path leaves no room for a shift");
  auto alpha_at = [&](double shift) {
    GrowthEnv shifted = env;
    for (double& r : shifted.rate) r += shift;
    return equilibrium_alpha(shifted, opt).alpha;
  };
  if (alpha_at(lo) < target_alpha || alpha_at(hi) > target_alpha)
    throw std::runtime_error("offsetting_rate: target not attainable within rate bounds");
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (alpha_at(mid) >= target_alpha)
      lo = mid;
    else
      hi = mid;
  }
  double shift = 0.5 * (lo + hi);
  if (std::abs(alpha_at(shift) - target_alpha) > 1e-6)
    throw std::runtime_error("offsetting_rate: share is flat at the target level");
  return shift;
}

}  // namespace reservoir
